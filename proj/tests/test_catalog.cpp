#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "pshlab/catalog.hpp"
#include "pshlab/integrate.hpp"
#include "pshlab/operators.hpp"
#include "pshlab/parser.hpp"

#include "test_support.hpp"

using namespace pshlab;
using namespace pshlab::testing;

TEST_CASE("builtin catalog content") {
    for (const int n : {1, 2, 3, 4}) {
        const auto catalog = builtin_catalog(n);
        std::set<std::string> names;
        for (const auto& e : catalog) {
            CHECK(names.insert(e.name).second); // unique names
            CHECK(e.dim == n);
        }
        for (const auto* required :
             {"one", "norm2", "norm2_sq", "norm2_cube", "coord_powers", "herm_form",
              "gauss_quarter", "gauss_half", "shifted_abs2", "re_sq", "exp_re", "holo_sq",
              "neg_norm2", "re_z", "neg_re"})
            CHECK(names.count(required) == 1);
    }
    CHECK_THROWS_AS(builtin_catalog(0), std::out_of_range);
    CHECK_THROWS_AS(builtin_catalog(5), std::out_of_range);
}

TEST_CASE("catalog soundness: every claim is confirmed by its validator") {
    for (const int n : {1, 2, 3}) {
        for (const auto& entry : builtin_catalog(n)) {
            for (const auto& report : validate_entry(entry)) {
                INFO("entry ", entry.name, " check ", report.check, " worst ",
                     report.worst_value);
                CHECK(report.pass);
            }
        }
    }
}

TEST_CASE("check_psh") {
    const PshSampleSpec spec;
    SUBCASE("norm squared") {
        const auto r = check_psh(parse_expr("abs2(z1)+abs2(z2)", 2), spec);
        CHECK(r.pass);
        CHECK(close_abs(r.worst_value, 1.0, 1e-10)); // constant identity hessian
    }
    SUBCASE("(re z)^2 has constant hessian 1/2") {
        const auto r = check_psh(parse_expr("re(z1)^2", 1), spec);
        CHECK(r.pass);
        CHECK(close_abs(r.worst_value, 0.5, 1e-10));
    }
    SUBCASE("negative control fails with eigenvalue -1") {
        const auto r = check_psh(parse_expr("0-abs2(z1)", 1), spec);
        CHECK_FALSE(r.pass);
        CHECK(close_abs(r.worst_value, -1.0, 1e-10));
    }
}

TEST_CASE("check_circular_symmetry") {
    SUBCASE("powers of the norm pass") {
        CHECK(check_circular_symmetry(parse_expr("abs2(z1)^2", 1)).pass);
    }
    SUBCASE("re z fails (theta = pi negates it)") {
        const auto r = check_circular_symmetry(parse_expr("re(z1)", 1));
        CHECK_FALSE(r.pass);
        CHECK(r.worst_value > 0.1);
    }
    SUBCASE("mixed hermitian terms are invariant") {
        CHECK(check_circular_symmetry(parse_expr("z1*conj(z2)+z2*conj(z1)", 2)).pass);
    }
    SUBCASE("structural and numeric verdicts agree on polynomials") {
        for (const auto& entry : builtin_catalog(2)) {
            if (entry.growth.kind != GrowthKind::Polynomial) continue;
            const auto r = check_circular_symmetry(entry.expr);
            CHECK(r.pass == entry.claimed_circular);
        }
    }
}

TEST_CASE("check_growth") {
    SUBCASE("polynomial degree") {
        const auto g = check_growth(parse_expr("abs2(z1)^3", 1));
        CHECK(g.kind == GrowthKind::Polynomial);
        CHECK(g.degree == 6);
    }
    SUBCASE("subgaussian rate and the self-pairing rule") {
        const auto g = check_growth(parse_expr("exp(0.5*abs2(z1))", 1));
        CHECK(g.kind == GrowthKind::Subgaussian);
        CHECK(close_abs(g.rate, 0.5, 1e-14));
        CHECK_FALSE(can_pair(g, g)); // 1/2 + 1/2 = 1 is not < 1
        const auto q = check_growth(parse_expr("exp(0.25*abs2(z1))", 1));
        CHECK(can_pair(q, q));
        CHECK(can_pair(g, q));
    }
    SUBCASE("holomorphic square exponent is rejected") {
        CHECK_THROWS_AS(check_growth(parse_expr("exp(z1^2)", 1)), UnboundedGrowth);
    }
    SUBCASE("nested exponentials are rejected") {
        CHECK_THROWS_AS(check_growth(parse_expr("exp(exp(z1))", 1)), UnboundedGrowth);
    }
    SUBCASE("rate >= 1 is rejected") {
        CHECK_THROWS_AS(check_growth(parse_expr("exp(abs2(z1))", 1)), UnboundedGrowth);
        CHECK_THROWS_AS(check_growth(parse_expr("exp(0.5*abs2(z1))^2", 1)), UnboundedGrowth);
    }
    SUBCASE("linear exponents have rate zero") {
        const auto g = check_growth(parse_expr("exp(re(z1))", 1));
        CHECK(g.kind == GrowthKind::Subgaussian);
        CHECK(g.rate == 0.0);
    }
    SUBCASE("products add rates") {
        const auto g =
            check_growth(parse_expr("exp(0.25*abs2(z1))*exp(0.5*abs2(z1))*abs2(z1)", 1));
        CHECK(g.kind == GrowthKind::Subgaussian);
        CHECK(close_abs(g.rate, 0.75, 1e-14));
    }
}

TEST_CASE("scaling closure") {
    const GaussianStream stream(5150, 3);
    SUBCASE("nonnegative multiples of psh entries stay psh") {
        for (const auto& entry : builtin_catalog(1)) {
            if (!entry.claimed_psh) continue;
            for (const double lambda : {0.0, 0.5, 3.0}) {
                const auto r = check_psh(Cplx{lambda, 0.0} * entry.expr, PshSampleSpec{});
                INFO("entry ", entry.name, " lambda ", lambda);
                CHECK(r.pass);
            }
        }
    }
    SUBCASE("sums and products preserve circular symmetry") {
        const auto catalog = builtin_catalog(2);
        std::vector<const CatalogEntry*> circ;
        for (const auto& e : catalog)
            if (e.claimed_circular && e.growth.kind == GrowthKind::Polynomial)
                circ.push_back(&e);
        for (std::size_t i = 0; i < circ.size(); ++i) {
            for (std::size_t j = i; j < circ.size(); ++j) {
                CHECK(check_circular_symmetry(circ[i]->expr + circ[j]->expr).pass);
                CHECK(check_circular_symmetry(circ[i]->expr * circ[j]->expr).pass);
            }
        }
    }
}

TEST_CASE("find_entry") {
    const auto catalog = builtin_catalog(1);
    CHECK(find_entry(catalog, "norm2").name == "norm2");
    CHECK_THROWS_AS(find_entry(catalog, "nope"), std::out_of_range);
}

TEST_CASE("constant hessians are certified symbolically") {
    // entries whose complex Hessian is constant get an exact verdict: every
    // entry expression is a Const node, so one eigenvalue decomposition
    // settles plurisubharmonicity everywhere
    using namespace pshlab;
    for (const int n : {1, 2}) {
        for (const auto* name : {"norm2", "herm_form", "shifted_abs2", "re_sq", "re_z", "neg_re",
                                 "neg_norm2"}) {
            const auto& entry = find_entry(builtin_catalog(n), name);
            const auto h = complex_hessian(entry.expr);
            HermitianMatrix constant(n);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const auto& node =
                        *h[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].root();
                    REQUIRE(node.kind == NodeKind::Const);
                    constant.at(j, k) = node.value;
                }
            const double lambda = min_eigenvalue(constant);
            INFO("entry ", name, " dim ", n, " min eigenvalue ", lambda);
            CHECK((lambda >= -1e-12) == entry.claimed_psh);
        }
    }
}

TEST_CASE("oracle triangle on polynomial entries") {
    // three independent routes to the same integral must agree
    using namespace pshlab;
    const auto rule = hermite_rule(32);
    std::uint64_t stream = 500;
    for (const int n : {1, 2}) {
        for (const auto& entry : builtin_catalog(n)) {
            if (entry.growth.kind != GrowthKind::Polynomial) continue;
            const Cplx exact = integrate_poly(to_polynomial(entry.expr));
            const auto quad = integrate_quadrature(entry.expr, rule);
            CHECK(std::abs(quad.value - exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
            const auto mc = integrate_mc(entry.expr, MCConfig{200000, 17, stream++});
            CHECK(std::abs(mc.value - exact) <= 4.0 * std::max(mc.stderr_combined(), 1e-15));
        }
    }
}
