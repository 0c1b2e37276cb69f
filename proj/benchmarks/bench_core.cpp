#include <benchmark/benchmark.h>

#include <cmath>

#include "pshlab/checks.hpp"
#include "pshlab/parser.hpp"

using namespace pshlab;

namespace {

const Expr& hot_expr() {
    static const Expr e = parse_expr("(abs2(z1)+abs2(z2))^3+re(z1)^2*abs2(z2)", 2);
    return e;
}

void BM_EvaluateTree(benchmark::State& state) {
    const Expr& e = hot_expr();
    const CPoint w = {Cplx{0.7, -0.2}, Cplx{-1.1, 0.4}};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(e, w));
}
BENCHMARK(BM_EvaluateTree);

void BM_EvaluateCompiled(benchmark::State& state) {
    const CompiledExpr compiled(hot_expr());
    const CPoint w = {Cplx{0.7, -0.2}, Cplx{-1.1, 0.4}};
    for (auto _ : state) benchmark::DoNotOptimize(compiled(w));
}
BENCHMARK(BM_EvaluateCompiled);

void BM_WirtingerDerivative(benchmark::State& state) {
    const Expr& e = hot_expr();
    for (auto _ : state) benchmark::DoNotOptimize(wirtinger_dz(e, 1));
}
BENCHMARK(BM_WirtingerDerivative);

void BM_HermiteRule(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hermite_rule(m));
}
BENCHMARK(BM_HermiteRule)->Arg(8)->Arg(32)->Arg(128);

void BM_QuadratureRaw(benchmark::State& state) {
    // per-point path with no gaussian absorption
    const CompiledExpr compiled(parse_expr("exp(0.1*re(z1)*im(z1))", 1));
    const auto rule = hermite_rule(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto r = integrate_quadrature_fn(
            1, [&compiled](const CPoint& w) { return compiled(w); }, rule);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_QuadratureRaw)->Arg(16)->Arg(32);

void BM_QuadratureAbsorbed(benchmark::State& state) {
    const Expr e = parse_expr("abs2(z1)^2*exp(0.5*abs2(z1))", 1);
    const auto rule = hermite_rule(32);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_quadrature(e, rule).value);
}
BENCHMARK(BM_QuadratureAbsorbed);

void BM_MonteCarlo(benchmark::State& state) {
    const Expr e = parse_expr("abs2(z1)*abs2(z2)", 2);
    const MCConfig cfg{static_cast<std::int64_t>(state.range(0)), 42, 0};
    for (auto _ : state) benchmark::DoNotOptimize(integrate_mc(e, cfg).value);
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000);

void BM_MehlerPoly(benchmark::State& state) {
    const Poly p = to_polynomial(parse_expr("(abs2(z1)+abs2(z2))^3", 2));
    const auto params = SemigroupParams::from_time(0.7);
    for (auto _ : state) benchmark::DoNotOptimize(mehler_apply_poly(p, params));
}
BENCHMARK(BM_MehlerPoly);

void BM_HessianEigen(benchmark::State& state) {
    const Expr e = parse_expr("(abs2(z1)+abs2(z2)+abs2(z3)+abs2(z4))^2", 4);
    const HessianEvaluator hessian(e);
    const CPoint w = {Cplx{0.5, 0.1}, Cplx{-0.3, 0.9}, Cplx{1.2, -0.4}, Cplx{0.0, 0.8}};
    for (auto _ : state) benchmark::DoNotOptimize(min_eigenvalue(hessian.at(w).matrix));
}
BENCHMARK(BM_HessianEigen);

void BM_IbpFirstExact(benchmark::State& state) {
    const auto catalog = builtin_catalog(2);
    const auto& f = find_entry(catalog, "norm2_sq");
    const auto& g = find_entry(catalog, "holo_sq");
    CheckContext ctx;
    for (auto _ : state) benchmark::DoNotOptimize(check_ibp_first(f, g, Method::Exact, ctx));
}
BENCHMARK(BM_IbpFirstExact);

} // namespace

BENCHMARK_MAIN();
