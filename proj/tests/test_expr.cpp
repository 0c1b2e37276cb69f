#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pshlab/parser.hpp"
#include "pshlab/poly.hpp"

#include "test_support.hpp"

using namespace pshlab;
using namespace pshlab::testing;

TEST_CASE("parser accepts the grammar") {
    const Expr e1 = parse_expr("z1*conj(z1)", 1);
    CHECK(structurally_equal(e1, Expr::var(1, 1) * Expr::conj_var(1, 1)));

    const Expr e2 = parse_expr("exp(0.5*z1*conj(z1))", 1);
    CHECK(e2.root()->kind == NodeKind::Exp);

    CHECK_THROWS_AS(parse_expr("z3", 2), std::out_of_range);
    CHECK_THROWS_AS(parse_expr("z1+", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("(z1", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("z1 z2", 2), ParseError);

    SUBCASE("error position is reported") {
        try {
            parse_expr("z1*@", 1);
            FAIL("expected ParseError");
        } catch (const ParseError& err) {
            CHECK(err.position() == 3);
        }
    }

    SUBCASE("numbers and complex literals") {
        CHECK(parse_complex("1+1i") == Cplx{1.0, 1.0});
        CHECK(parse_complex("(1.5-2i)") == Cplx{1.5, -2.0});
        CHECK(parse_complex("3") == Cplx{3.0, 0.0});
        CHECK(parse_complex("i") == Cplx{0.0, 1.0});
        CHECK(parse_complex("2*i") == Cplx{0.0, 2.0});
    }

    SUBCASE("powers bind to atoms") {
        const Expr e = parse_expr("z1^3", 1);
        CHECK(evaluate(e, {Cplx{2.0, 0.0}}) == Cplx{8.0, 0.0});
        const Expr g = parse_expr("(z1+1)^2", 1);
        CHECK(evaluate(g, {Cplx{1.0, 0.0}}) == Cplx{4.0, 0.0});
    }

    SUBCASE("sugar expands at parse time") {
        const CPoint w = {Cplx{3.0, 4.0}};
        CHECK(close_rel(evaluate(parse_expr("re(z1)", 1), w), Cplx{3.0, 0.0}, 1e-15));
        CHECK(close_rel(evaluate(parse_expr("im(z1)", 1), w), Cplx{4.0, 0.0}, 1e-15));
        CHECK(close_rel(evaluate(parse_expr("abs2(z1)", 1), w), Cplx{25.0, 0.0}, 1e-15));
    }
}

TEST_CASE("evaluate") {
    CHECK(evaluate(parse_expr("z1*conj(z1)", 1), {Cplx{1.0, 1.0}}) == Cplx{2.0, 0.0});
    CHECK(evaluate(parse_expr("exp(z1)", 1), {Cplx{0.0, 0.0}}) == Cplx{1.0, 0.0});
    CHECK(evaluate(parse_expr("z1+conj(z1)", 1), {Cplx{3.0, 4.0}}) == Cplx{6.0, 0.0});
    CHECK_THROWS_AS(evaluate(parse_expr("z1", 1), CPoint{}), DimensionMismatch);
}

TEST_CASE("wirtinger derivative examples") {
    const Expr zzbar = parse_expr("z1*conj(z1)", 1);
    CHECK(structurally_equal(wirtinger_dz(zzbar, 1), Expr::conj_var(1, 1)));
    CHECK(structurally_equal(wirtinger_dzbar(zzbar, 1), Expr::var(1, 1)));

    CHECK(structurally_equal(wirtinger_dzbar(parse_expr("z1^2", 1), 1),
                             Expr::constant(Cplx{0.0, 0.0}, 1)));
    CHECK(structurally_equal(wirtinger_dzbar(parse_expr("conj(z1)^3", 1), 1),
                             Cplx{3.0, 0.0} * pow_expr(Expr::conj_var(1, 1), 2)));

    const Expr chain = wirtinger_dz(parse_expr("exp(z1*conj(z1))", 1), 1);
    CHECK(structurally_equal(chain, Expr::conj_var(1, 1) * exp_expr(zzbar)));

    CHECK_THROWS_AS(wirtinger_dz(zzbar, 2), std::out_of_range);

    SUBCASE("conjugation symmetry for a real-valued expression") {
        const Expr e = parse_expr("z1*conj(z1)+z1+conj(z1)", 1);
        const Expr dbar = wirtinger_dzbar(e, 1);
        const Expr conj_d = conj_expr(wirtinger_dz(e, 1));
        for (const auto& w : random_points(1, 10))
            CHECK(close_rel(evaluate(dbar, w), evaluate(conj_d, w), 1e-12));
    }
}

TEST_CASE("finite-difference consistency of symbolic derivatives") {
    for (const int n : {1, 2}) {
        ExprGen gen(n, 42);
        for (int trial = 0; trial < 12; ++trial) {
            const Expr e = gen.next();
            for (const auto& w : random_points(n, 20, 11)) {
                for (int j = 1; j <= n; ++j) {
                    const Cplx sym = evaluate(wirtinger_dz(e, j), w);
                    const Cplx symb = evaluate(wirtinger_dzbar(e, j), w);
                    const Cplx num = fd_dz(e, w, j);
                    const Cplx numb = fd_dzbar(e, w, j);
                    const double scale =
                        std::max({1.0, std::abs(sym), std::abs(symb), std::abs(num)});
                    CHECK(std::abs(sym - num) <= 1e-6 * scale);
                    CHECK(std::abs(symb - numb) <= 1e-6 * scale);
                }
            }
        }
    }
}

TEST_CASE("mixed partials commute") {
    ExprGen gen(2, 5);
    for (int trial = 0; trial < 10; ++trial) {
        const Expr e = gen.next();
        const Expr a = wirtinger_dz(wirtinger_dzbar(e, 2), 1);
        const Expr b = wirtinger_dzbar(wirtinger_dz(e, 1), 2);
        for (const auto& w : random_points(2, 8))
            CHECK(close_rel(evaluate(a, w), evaluate(b, w), 1e-12));
    }
}

TEST_CASE("derivatives stay inside the node algebra") {
    ExprGen gen(2, 99);
    for (int trial = 0; trial < 20; ++trial) {
        const Expr e = gen.next();
        for (int j = 1; j <= 2; ++j) {
            // Expr construction re-validates indices and normalizes; reaching
            // here means the closure holds
            const Expr d1 = wirtinger_dz(e, j);
            const Expr d2 = wirtinger_dzbar(e, j);
            CHECK(d1.dim() == 2);
            CHECK(d2.dim() == 2);
        }
    }
}

TEST_CASE("normalize") {
    SUBCASE("conj pushes to leaves") {
        const NodePtr raw = Node::conj(Node::prod({Node::var(1), Node::constant(Cplx{0, 1})}));
        const Expr n = Expr(raw, 1);
        CHECK(structurally_equal(n, Cplx{0.0, -1.0} * Expr::conj_var(1, 1)));
    }
    SUBCASE("zero terms vanish") {
        const Expr n = Expr(Node::sum({Node::constant(Cplx{0, 0}), Node::var(1)}), 1);
        CHECK(structurally_equal(n, Expr::var(1, 1)));
    }
    SUBCASE("real-valued iff conj-invariant") {
        CHECK(is_real_valued(parse_expr("z1*conj(z1)", 1)));
        CHECK(is_real_valued(parse_expr("re(z1)^2", 1)));
        CHECK_FALSE(is_real_valued(parse_expr("z1", 1)));
        CHECK_FALSE(is_real_valued(parse_expr("i*z1*conj(z1)", 1)));
    }
    SUBCASE("idempotence on random expressions") {
        ExprGen gen(2, 1234);
        for (int trial = 0; trial < 30; ++trial) {
            const Expr e = gen.next();
            CHECK(structurally_equal(e, normalize(e)));
        }
    }
    SUBCASE("normalization preserves value") {
        ExprGen gen(2, 77);
        for (int trial = 0; trial < 20; ++trial) {
            const NodePtr raw = Node::conj(Node::sum({gen.next().root(), gen.next().root()}));
            const Expr lazy = Expr::raw(raw, 2);
            const Expr norm = Expr(raw, 2);
            for (const auto& w : random_points(2, 5))
                CHECK(close_rel(evaluate(lazy, w), evaluate(norm, w), 1e-12));
        }
    }
}

TEST_CASE("conj_expr") {
    const Expr e = parse_expr("i*z1", 1);
    CHECK(structurally_equal(conj_expr(e), Cplx{0.0, -1.0} * Expr::conj_var(1, 1)));
    ExprGen gen(2, 31);
    for (int trial = 0; trial < 15; ++trial) {
        const Expr f = gen.next();
        const Expr fc = conj_expr(f);
        for (const auto& w : random_points(2, 5))
            CHECK(close_rel(evaluate(fc, w), std::conj(evaluate(f, w)), 1e-12));
    }
}

TEST_CASE("polynomial conversion") {
    SUBCASE("binomial expansion") {
        const Poly p = to_polynomial(parse_expr("(z1+conj(z1))^2", 1));
        CHECK(p.terms().size() == 3);
        CHECK(p.terms().at({{2}, {0}}) == Cplx{1.0, 0.0});
        CHECK(p.terms().at({{1}, {1}}) == Cplx{2.0, 0.0});
        CHECK(p.terms().at({{0}, {2}}) == Cplx{1.0, 0.0});
    }
    SUBCASE("monomial") {
        const Poly p = to_polynomial(parse_expr("z1*conj(z1)", 1));
        CHECK(p.terms().size() == 1);
        CHECK(p.terms().at({{1}, {1}}) == Cplx{1.0, 0.0});
    }
    SUBCASE("exp rejected") {
        CHECK_THROWS_AS(to_polynomial(parse_expr("exp(z1)", 1)), NotPolynomial);
    }
    SUBCASE("round-trip reproduces the coefficient map") {
        ExprGen gen(2, 404);
        int converted = 0;
        for (int trial = 0; trial < 40 && converted < 15; ++trial) {
            const Expr e = gen.next();
            Poly p(2);
            try {
                p = to_polynomial(e);
            } catch (const NotPolynomial&) {
                continue;
            }
            ++converted;
            const Poly q = to_polynomial(p.to_expr());
            CHECK(Poly::max_coeff_delta(p, q) <= 1e-12);
            for (const auto& w : random_points(2, 5))
                CHECK(close_rel(p.evaluate(w), evaluate(e, w), 1e-10));
        }
        CHECK(converted >= 10);
    }
    SUBCASE("real-valued iff mirrored coefficients") {
        CHECK(to_polynomial(parse_expr("z1*conj(z1)+re(z1)", 1)).is_real_valued(0.0));
        CHECK_FALSE(to_polynomial(parse_expr("z1", 1)).is_real_valued(0.0));
    }
}

TEST_CASE("to_string reparses to the same normal form") {
    ExprGen gen(2, 2024);
    for (int trial = 0; trial < 25; ++trial) {
        const Expr e = gen.next();
        const Expr back = parse_expr(to_string(e), 2);
        CHECK(structurally_equal(e, back));
    }
    CHECK(to_string(parse_expr("z1*conj(z1)", 1)) == "z1*conj(z1)");
}

TEST_CASE("substitute_affine") {
    const Expr e = parse_expr("z1*conj(z1)", 1);
    const Expr shifted = substitute_affine(e, 0.5, {Cplx{1.0, 2.0}});
    const CPoint u = {Cplx{0.25, -0.5}};
    const Cplx w = Cplx{1.0, 2.0} + 0.5 * u[0];
    CHECK(close_rel(evaluate(shifted, u), w * std::conj(w), 1e-14));
}

TEST_CASE("structural degree bound") {
    CHECK(structural_degree(parse_expr("z1*conj(z1)", 1)) == 2);
    CHECK(structural_degree(parse_expr("(abs2(z1)+1)^3", 1)) == 6);
    CHECK(structural_degree(parse_expr("exp(z1)", 1)) == -1);
    CHECK(structural_degree(parse_expr("2", 1)) == 0);
}

TEST_CASE("imaginary part stays bounded for real-valued expressions") {
    const auto entries = {"z1*conj(z1)", "re(z1)^2", "exp(0.25*abs2(z1))", "abs2(z1^2+1)"};
    for (const auto* text : entries) {
        const Expr e = parse_expr(text, 1);
        for (const auto& w : random_points(1, 20)) {
            const Cplx v = evaluate(e, w);
            CHECK(std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v)));
        }
    }
}
