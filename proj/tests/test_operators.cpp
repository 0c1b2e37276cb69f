#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pshlab/operators.hpp"
#include "pshlab/parser.hpp"

#include "test_support.hpp"

using namespace pshlab;
using namespace pshlab::testing;

namespace {

// real-coordinate finite differences of the Ornstein-Uhlenbeck generator
// (1/4) Laplacian - (1/2)(x . grad_x + y . grad_y)
Cplx ou_fd(const Expr& e, const CPoint& w, double h = 1e-4) {
    const int n = e.dim();
    Cplx acc{0.0, 0.0};
    for (int j = 1; j <= n; ++j) {
        CPoint xp = w, xm = w, yp = w, ym = w;
        const auto sj = static_cast<std::size_t>(j - 1);
        xp[sj] += h;
        xm[sj] -= h;
        yp[sj] += Cplx{0.0, h};
        ym[sj] -= Cplx{0.0, h};
        const Cplx mid = evaluate(e, w);
        const Cplx dxx = (evaluate(e, xp) - 2.0 * mid + evaluate(e, xm)) / (h * h);
        const Cplx dyy = (evaluate(e, yp) - 2.0 * mid + evaluate(e, ym)) / (h * h);
        const Cplx dx = (evaluate(e, xp) - evaluate(e, xm)) / (2.0 * h);
        const Cplx dy = (evaluate(e, yp) - evaluate(e, ym)) / (2.0 * h);
        acc += 0.25 * (dxx + dyy) - 0.5 * (w[sj].real() * dx + w[sj].imag() * dy);
    }
    return acc;
}

// rotation generator sum_j (y_j d/dx_j - x_j d/dy_j) by finite differences
Cplx rotation_fd(const Expr& e, const CPoint& w, double h = 1e-5) {
    const int n = e.dim();
    Cplx acc{0.0, 0.0};
    for (int j = 1; j <= n; ++j) {
        acc += w[static_cast<std::size_t>(j - 1)].imag() * fd_real_dir(e, w, j, false, h) -
               w[static_cast<std::size_t>(j - 1)].real() * fd_real_dir(e, w, j, true, h);
    }
    return acc;
}

} // namespace

TEST_CASE("operator anchor values") {
    const Expr zzbar = parse_expr("z1*conj(z1)", 1);
    SUBCASE("L(z zbar) = 1 - z zbar, cross-checked by finite differences") {
        const Expr lf = apply_operator(OperatorKind::L, zzbar);
        const Expr want = Cplx{1.0, 0.0} + Cplx{-1.0, 0.0} * zzbar;
        CHECK(structurally_equal(lf, want));
        // L = OU + (i/2) R in real coordinates
        for (const auto& w : random_points(1, 10)) {
            const Cplx fd = ou_fd(zzbar, w) + Cplx{0.0, 0.5} * rotation_fd(zzbar, w);
            CHECK(std::abs(evaluate(lf, w) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
        }
    }
    SUBCASE("L(z) = 0 and OU(z) = -z/2") {
        const Expr z = parse_expr("z1", 1);
        CHECK(structurally_equal(apply_operator(OperatorKind::L, z),
                                 Expr::constant(Cplx{0.0, 0.0}, 1)));
        CHECK(structurally_equal(apply_operator(OperatorKind::OU, z), Cplx{-0.5, 0.0} * z));
        // R(z) = -iz: (y d/dx - x d/dy)(x + iy) = y - ix, and the relation
        // L = OU + (i/2) R then closes to 0
        const Expr rz = apply_operator(OperatorKind::R, z);
        CHECK(structurally_equal(rz, Cplx{0.0, -1.0} * z));
        const Expr lhs = apply_operator(OperatorKind::OU, z) + Cplx{0.0, 0.5} * rz;
        for (const auto& w : random_points(1, 5))
            CHECK(std::abs(evaluate(lhs, w)) <= 1e-12);
    }
    SUBCASE("constants are annihilated") {
        const Expr c = Expr::constant(Cplx{3.0, -2.0}, 2);
        for (const auto kind :
             {OperatorKind::OU, OperatorKind::L, OperatorKind::Lbar, OperatorKind::R})
            CHECK(structurally_equal(apply_operator(kind, c), Expr::constant(Cplx{0, 0}, 2)));
    }
}

TEST_CASE("OU is the mean of L and Lbar") {
    ExprGen gen(2, 808);
    const auto points = random_points(2, 6);
    for (int trial = 0; trial < 8; ++trial) {
        const Expr e = gen.next();
        const Expr mean = Cplx{0.5, 0.0} * (apply_operator(OperatorKind::L, e) +
                                            apply_operator(OperatorKind::Lbar, e));
        const Expr ou = apply_operator(OperatorKind::OU, e);
        for (const auto& w : points)
            CHECK(close_rel(evaluate(ou, w), evaluate(mean, w), 1e-12));
    }
}

TEST_CASE("operator relations hold pointwise for random expressions") {
    for (const int n : {1, 2}) {
        ExprGen gen(n, 55);
        const auto points = random_points(n, 6);
        for (int trial = 0; trial < 10; ++trial) {
            const Expr e = gen.next();
            const Expr lf = apply_operator(OperatorKind::L, e);
            const Expr lbarf = apply_operator(OperatorKind::Lbar, e);
            const Expr ouf = apply_operator(OperatorKind::OU, e);
            const Expr rf = apply_operator(OperatorKind::R, e);
            for (const auto& w : points) {
                const Cplx scale{std::max(1.0, std::abs(evaluate(lf, w))), 0.0};
                CHECK(std::abs(evaluate(lf, w) -
                               (evaluate(ouf, w) + Cplx{0, 0.5} * evaluate(rf, w))) <=
                      1e-10 * std::abs(scale));
                CHECK(std::abs(evaluate(lbarf, w) -
                               (evaluate(ouf, w) - Cplx{0, 0.5} * evaluate(rf, w))) <=
                      1e-10 * std::abs(scale));
            }
        }
    }
}

TEST_CASE("OU matches its real-coordinate finite-difference form") {
    ExprGen gen(2, 66);
    const auto points = random_points(2, 5);
    for (int trial = 0; trial < 8; ++trial) {
        const Expr e = gen.next();
        const Expr ouf = apply_operator(OperatorKind::OU, e);
        for (const auto& w : points) {
            const Cplx fd = ou_fd(e, w);
            CHECK(std::abs(evaluate(ouf, w) - fd) <= 1e-5 * (1.0 + std::abs(fd)));
        }
    }
}

TEST_CASE("divergence form of L") {
    const auto points = random_points(1, 20);
    SUBCASE("z zbar") {
        CHECK(check_divergence_form(parse_expr("z1*conj(z1)", 1), points) <= 1e-10);
    }
    SUBCASE("constant") {
        CHECK(check_divergence_form(Expr::constant(Cplx{5.0, 0.0}, 1), points) == 0.0);
    }
    SUBCASE("z^2 zbar") {
        CHECK(check_divergence_form(parse_expr("z1^2*conj(z1)", 1), points) <= 1e-10);
    }
    SUBCASE("two dimensions") {
        const auto pts2 = random_points(2, 10);
        CHECK(check_divergence_form(parse_expr("abs2(z1)*abs2(z2)+re(z2)", 2), pts2) <= 1e-9);
    }
    SUBCASE("rejected conjugation placement breaks the identity") {
        const Expr f = parse_expr("z1*conj(z1)", 1);
        const Expr variant = apply_rejected_variant(f);
        const Expr honest = apply_operator(OperatorKind::L, f);
        double dev = 0.0;
        for (const auto& w : points)
            dev = std::max(dev, std::abs(evaluate(variant, w) - evaluate(honest, w)));
        CHECK(dev > 0.1);
    }
}

TEST_CASE("complex hessian") {
    SUBCASE("norm squared gives the identity matrix") {
        const Expr e = parse_expr("abs2(z1)+abs2(z2)", 2);
        const auto h = hessian_at(e, {Cplx{1.0, 1.0}, Cplx{-0.5, 2.0}});
        CHECK(h.deviation <= 1e-12);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                CHECK(close_rel(h.matrix.at(j, k), j == k ? Cplx{1, 0} : Cplx{0, 0}, 1e-14));
    }
    SUBCASE("(re z)^2 has constant hessian 1/2") {
        const auto entries = complex_hessian(parse_expr("re(z1)^2", 1));
        CHECK(structurally_equal(entries[0][0], Expr::constant(Cplx{0.5, 0.0}, 1)));
    }
    SUBCASE("single mixed term") {
        const auto entries = complex_hessian(parse_expr("z1*conj(z2)", 2));
        CHECK(structurally_equal(entries[0][1], Expr::constant(Cplx{1.0, 0.0}, 2)));
        CHECK(structurally_equal(entries[1][0], Expr::constant(Cplx{0.0, 0.0}, 2)));
        CHECK(structurally_equal(entries[0][0], Expr::constant(Cplx{0.0, 0.0}, 2)));
        // the real-valued hermitian completion evaluates to ones off-diagonal
        const Expr sym = parse_expr("z1*conj(z2)+z2*conj(z1)", 2);
        const auto h = hessian_at(sym, {Cplx{0.3, 0.1}, Cplx{-1.0, 0.7}});
        CHECK(h.deviation <= 1e-14);
        CHECK(close_rel(h.matrix.at(0, 1), Cplx{1.0, 0.0}, 1e-14));
        CHECK(close_rel(h.matrix.at(1, 0), Cplx{1.0, 0.0}, 1e-14));
    }
    SUBCASE("hessian evaluator matches one-shot evaluation") {
        const Expr e = parse_expr("abs2(z1)^2+re(z1)^2", 1);
        const HessianEvaluator he(e);
        for (const auto& w : random_points(1, 5)) {
            const auto a = he.at(w);
            const auto b = hessian_at(e, w);
            CHECK(a.matrix.at(0, 0) == b.matrix.at(0, 0));
        }
    }
}

TEST_CASE("hermitian eigenvalues") {
    SUBCASE("identity") {
        HermitianMatrix h(2);
        h.at(0, 0) = h.at(1, 1) = Cplx{1.0, 0.0};
        CHECK(close_abs(min_eigenvalue(h), 1.0, 1e-12));
    }
    SUBCASE("indefinite diagonal") {
        HermitianMatrix h(2);
        h.at(0, 0) = Cplx{1.0, 0.0};
        h.at(1, 1) = Cplx{-1.0, 0.0};
        CHECK(close_abs(min_eigenvalue(h), -1.0, 1e-12));
    }
    SUBCASE("characteristic polynomial anchor") {
        // [[2, i], [-i, 2]]: (2 - lambda)^2 - 1 = 0, spectrum {1, 3}
        HermitianMatrix h(2);
        h.at(0, 0) = h.at(1, 1) = Cplx{2.0, 0.0};
        h.at(0, 1) = Cplx{0.0, 1.0};
        h.at(1, 0) = Cplx{0.0, -1.0};
        const auto ev = hermitian_eigenvalues(h);
        CHECK(close_abs(ev[0], 1.0, 1e-10));
        CHECK(close_abs(ev[1], 3.0, 1e-10));
    }
    SUBCASE("4x4 accuracy against a constructed spectrum") {
        // U diag(-1, 0, 2, 5) U^dagger for a unitary built from phases
        const int n = 4;
        const double target[4] = {-1.0, 0.0, 2.0, 5.0};
        std::vector<std::vector<Cplx>> u(4, std::vector<Cplx>(4));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                u[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    std::polar(0.5, 2.0 * M_PI * j * k / n); // DFT matrix / 2: unitary
        HermitianMatrix h(n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Cplx acc{0.0, 0.0};
                for (int l = 0; l < n; ++l)
                    acc += u[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] *
                           target[l] *
                           std::conj(u[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]);
                h.at(j, k) = acc;
            }
        const auto ev = hermitian_eigenvalues(h);
        for (int i = 0; i < n; ++i) CHECK(close_abs(ev[static_cast<std::size_t>(i)], target[i], 1e-10));
    }
    SUBCASE("non-hermitian input is rejected") {
        HermitianMatrix h(2);
        h.at(0, 1) = Cplx{1.0, 0.0};
        h.at(1, 0) = Cplx{0.5, 0.0};
        CHECK_THROWS_AS(min_eigenvalue(h, 1e-8), NotHermitian);
    }
}

TEST_CASE("mehler action on polynomials") {
    const Poly p = to_polynomial(parse_expr("z1*conj(z1)", 1));
    SUBCASE("t = ln 2 halves the quadratic part") {
        const Poly q = mehler_apply_poly(p, SemigroupParams::from_time(std::log(2.0)));
        CHECK(close_rel(q.terms().at({{1}, {1}}), Cplx{0.5, 0.0}, 1e-14));
        CHECK(close_rel(q.terms().at({{0}, {0}}), Cplx{0.5, 0.0}, 1e-14));
    }
    SUBCASE("t = 0 is the identity, exactly") {
        const Poly q = mehler_apply_poly(p, SemigroupParams::from_time(0.0));
        CHECK(Poly::max_coeff_delta(p, q) == 0.0);
    }
    SUBCASE("constants are conserved") {
        const Poly one = Poly::constant(1, Cplx{1.0, 0.0});
        const Poly q = mehler_apply_poly(one, SemigroupParams::from_time(3.7));
        CHECK(Poly::max_coeff_delta(one, q) == 0.0);
    }
    SUBCASE("semigroup law P_s P_t = P_{s+t}") {
        const Poly big = to_polynomial(parse_expr("(abs2(z1)+re(z1))^3", 1));
        for (const auto [s, t] : {std::pair{0.3, 0.9}, std::pair{1.5, 0.25}}) {
            const Poly two_step = mehler_apply_poly(
                mehler_apply_poly(big, SemigroupParams::from_time(t)),
                SemigroupParams::from_time(s));
            const Poly one_step = mehler_apply_poly(big, SemigroupParams::from_time(s + t));
            CHECK(Poly::max_coeff_delta(two_step, one_step) <= 1e-12);
        }
    }
    SUBCASE("mean invariance") {
        const Poly big = to_polynomial(parse_expr("(abs2(z1)+1)^2*abs2(z1)", 1));
        const Cplx before = integrate_poly(big);
        const Cplx after = integrate_poly(mehler_apply_poly(big, SemigroupParams::from_time(1.3)));
        CHECK(close_rel(before, after, 1e-12));
    }
    SUBCASE("hessian contracts by e^{-t} under the substitution") {
        const Expr e = parse_expr("(abs2(z1)+abs2(z2))^2", 2);
        const auto params = SemigroupParams::from_time(0.8);
        const auto h = complex_hessian(e);
        const Poly pt = mehler_apply_poly(to_polynomial(e), params);
        const auto h_pt = complex_hessian(pt.to_expr());
        const double contraction = std::exp(-params.t);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                Poly transported = mehler_apply_poly(
                    to_polynomial(h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]),
                    params);
                transported *= Cplx{contraction, 0.0};
                const Poly direct =
                    to_polynomial(h_pt[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
                CHECK(Poly::max_coeff_delta(transported, direct) <= 1e-12);
            }
    }
}

TEST_CASE("semigroup parameters") {
    for (const double t : {0.0, 0.1, 1.0, 20.0}) {
        const auto p = SemigroupParams::from_time(t);
        CHECK(close_abs(p.c * p.c + p.s * p.s, 1.0, 1e-15));
    }
    const auto zero = SemigroupParams::from_time(0.0);
    CHECK(zero.c == 1.0);
    CHECK(zero.s == 0.0);
    CHECK_THROWS_AS(SemigroupParams::from_time(-0.1), std::out_of_range);
}

TEST_CASE("mehler action by quadrature") {
    const auto rule = hermite_rule(32);
    SUBCASE("P_{ln 2}(z zbar) at w = 1 gives 1") {
        const Cplx v = mehler_apply_quadrature(parse_expr("z1*conj(z1)", 1),
                                               SemigroupParams::from_time(std::log(2.0)),
                                               {Cplx{1.0, 0.0}}, rule);
        CHECK(close_abs(v.real(), 1.0, 1e-10));
    }
    SUBCASE("t = 0 evaluates in place") {
        const Expr e = parse_expr("exp(re(z1))+abs2(z1)", 1);
        const CPoint w = {Cplx{0.3, -1.2}};
        const Cplx v = mehler_apply_quadrature(e, SemigroupParams::from_time(0.0), w, rule);
        CHECK(close_rel(v, evaluate(e, w), 1e-12));
    }
    SUBCASE("large t approaches the mean") {
        const Cplx v = mehler_apply_quadrature(parse_expr("exp(0.5*abs2(z1))", 1),
                                               SemigroupParams::from_time(20.0), {Cplx{1.0, 0.0}},
                                               hermite_rule(40));
        CHECK(close_abs(v.real(), 2.0, 1e-6));
    }
    SUBCASE("closed form and quadrature agree on gaussian profiles") {
        const Expr g = parse_expr("exp(0.25*abs2(z1))", 1);
        const auto params = SemigroupParams::from_time(0.7);
        const auto closed = mehler_apply_closed(g, params);
        REQUIRE(closed.has_value());
        const CPoint w = {Cplx{1.0, 0.5}};
        const Cplx via_quad = mehler_apply_quadrature(g, params, w, hermite_rule(40));
        CHECK(close_rel(evaluate(*closed, w), via_quad, 1e-10));
    }
    SUBCASE("no closed form for non-gaussian exponentials") {
        CHECK_FALSE(
            mehler_apply_closed(parse_expr("exp(re(z1))", 1), SemigroupParams::from_time(1.0))
                .has_value());
    }
}

TEST_CASE("semigroup hessian") {
    const auto rule = hermite_rule(32);
    const auto params = SemigroupParams::from_time(0.9);
    SUBCASE("closed and quadrature routes agree on a gaussian profile") {
        const Expr g = parse_expr("exp(0.25*abs2(z1))", 1);
        const CPoint w = {Cplx{0.8, -0.3}};
        const auto closed = mehler_apply_closed(g, params);
        REQUIRE(closed.has_value());
        const auto via_closed = hessian_at(*closed, w);
        // chain-rule route: c^2 * P_t applied to the hessian entries
        const auto entries = complex_hessian(g);
        const Cplx via_chain =
            params.c * params.c * mehler_apply_quadrature(entries[0][0], params, w, rule);
        CHECK(close_rel(via_closed.matrix.at(0, 0), via_chain, 1e-9));
        const auto direct = semigroup_hessian_at(g, params, w, rule);
        CHECK(close_rel(direct.matrix.at(0, 0), via_closed.matrix.at(0, 0), 1e-9));
    }
}

TEST_CASE("generator check") {
    const auto points = random_points(1, 10);
    SUBCASE("quadratic anchor: d/dt P_t(|z|^2) = -e^{-t}(|z|^2 - 1)") {
        CHECK(generator_check(parse_expr("z1*conj(z1)", 1), 0.5, points) <= 1e-6);
    }
    SUBCASE("constants") {
        CHECK(generator_check(Expr::constant(Cplx{2.0, 0.0}, 1), 1.0, points) <= 1e-12);
    }
    SUBCASE("quartic") {
        CHECK(generator_check(parse_expr("(z1*conj(z1))^2", 1), 1.0, points) <= 1e-6);
    }
    SUBCASE("t below the step is rejected") {
        CHECK_THROWS_AS(generator_check(parse_expr("z1*conj(z1)", 1), 0.00005, points),
                        std::out_of_range);
    }
}
