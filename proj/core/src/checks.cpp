#include "pshlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pshlab {

std::vector<CPoint> CheckContext::sample_points(int n, int count, std::uint64_t stream) const {
    const GaussianStream gs(seed, stream);
    std::vector<CPoint> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) points.push_back(gs.point(static_cast<std::uint64_t>(k), n));
    return points;
}

bool can_pair_mc(const GrowthClass& f, const GrowthClass& g) {
    // the estimator needs a finite second moment: (fg)^2 has twice the rate
    return f.pairing_rate() + g.pairing_rate() < 0.5;
}

Method resolve_method(std::optional<Method> requested, const CatalogEntry& f,
                      const CatalogEntry& g, const CheckContext& ctx) {
    if (requested) return *requested;
    if (f.growth.kind == GrowthKind::Polynomial && g.growth.kind == GrowthKind::Polynomial)
        return Method::Exact;
    double grid = 1.0;
    for (int k = 0; k < 2 * f.dim; ++k) grid *= ctx.nodes;
    if (grid <= static_cast<double>(ctx.budget)) return Method::Quadrature;
    return Method::MonteCarlo;
}

IntegrationResult integrate_with(const Expr& e, Method method, CheckContext& ctx) {
    switch (method) {
        case Method::Exact: {
            IntegrationResult r;
            r.value = integrate_poly(to_polynomial(e));
            r.method = Method::Exact;
            return r;
        }
        case Method::Quadrature:
            return integrate_quadrature(e, ctx.rule(), ctx.budget);
        case Method::MonteCarlo:
            return integrate_mc(e, MCConfig{ctx.samples, ctx.seed, ctx.take_stream()});
    }
    throw std::out_of_range("unknown method");
}

namespace {

Method combine_methods(Method a, Method b) {
    if (a == Method::MonteCarlo || b == Method::MonteCarlo) return Method::MonteCarlo;
    if (a == Method::Quadrature || b == Method::Quadrature) return Method::Quadrature;
    return Method::Exact;
}

CheckResult make_equality(std::string suite, std::string identity, std::string fname,
                          std::string gname, int dim, const IntegrationResult& lhs,
                          const IntegrationResult& rhs, const CheckContext& ctx) {
    CheckResult r;
    r.suite = std::move(suite);
    r.identity = std::move(identity);
    r.f = std::move(fname);
    r.g = std::move(gname);
    r.dim = dim;
    r.method = combine_methods(lhs.method, rhs.method);
    r.lhs = lhs.value;
    r.rhs = rhs.value;
    r.abs_err = std::abs(lhs.value - rhs.value);
    const double denom = std::max(std::abs(lhs.value), std::abs(rhs.value));
    r.rel_err = denom > 0.0 ? r.abs_err / denom : 0.0;
    r.stderr_val = std::hypot(lhs.stderr_combined(), rhs.stderr_combined());
    r.nodes = std::max(lhs.nodes, rhs.nodes);
    r.samples = std::max(lhs.samples, rhs.samples);
    r.seed = ctx.seed;
    if (r.method == Method::MonteCarlo) {
        r.tol = 4.0 * r.stderr_val;
        r.pass = r.abs_err <= r.tol;
    } else {
        r.tol = ctx.tol_for(r.method);
        r.pass = r.abs_err <= r.tol || r.rel_err <= r.tol;
    }
    return r;
}

CheckResult make_lower_bound(std::string suite, std::string identity, std::string fname,
                             std::string gname, int dim, const IntegrationResult& value,
                             double bound, const CheckContext& ctx) {
    CheckResult r;
    r.suite = std::move(suite);
    r.identity = std::move(identity);
    r.f = std::move(fname);
    r.g = std::move(gname);
    r.dim = dim;
    r.method = value.method;
    r.lhs = value.value;
    r.rhs = Cplx{bound, 0.0};
    const double violation = std::max(0.0, bound - value.value.real());
    r.abs_err = violation;
    r.rel_err = violation / std::max(1.0, std::abs(value.value));
    r.stderr_val = value.stderr_combined();
    r.nodes = value.nodes;
    r.samples = value.samples;
    r.seed = ctx.seed;
    if (r.method == Method::MonteCarlo) {
        r.tol = 4.0 * r.stderr_val;
        r.pass = violation <= r.tol;
    } else {
        r.tol = ctx.tol_for(r.method);
        r.pass = violation <= r.tol;
    }
    return r;
}

CheckResult make_pointwise(std::string suite, std::string identity, std::string fname, int dim,
                           double worst, double tol, const CheckContext& ctx) {
    CheckResult r;
    r.suite = std::move(suite);
    r.identity = std::move(identity);
    r.f = std::move(fname);
    r.dim = dim;
    r.method = Method::Exact;
    r.lhs = Cplx{worst, 0.0};
    r.rhs = Cplx{0.0, 0.0};
    r.abs_err = worst;
    r.rel_err = worst;
    r.tol = tol;
    r.seed = ctx.seed;
    r.pass = worst <= tol;
    return r;
}

double max_pointwise_deviation(const Expr& a, const Expr& b, const std::vector<CPoint>& points) {
    double worst = 0.0;
    for (const auto& w : points) worst = std::max(worst, std::abs(evaluate(a, w) - evaluate(b, w)));
    return worst;
}

} // namespace

std::pair<CheckResult, CheckResult> check_ibp_first(const CatalogEntry& f, const CatalogEntry& g,
                                                    std::optional<Method> method,
                                                    CheckContext& ctx) {
    if (!can_pair(f.growth, g.growth))
        throw UnboundedGrowth("pairing " + f.name + " with " + g.name +
                              " is not certified integrable");
    const Method m = resolve_method(method, f, g, ctx);
    const int n = f.dim;

    const Expr left = apply_operator(OperatorKind::L, f.expr) * g.expr;
    Expr grad_pairing = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 1; j <= n; ++j)
        grad_pairing = grad_pairing + wirtinger_dzbar(f.expr, j) * wirtinger_dz(g.expr, j);
    const Expr middle = -grad_pairing;
    const Expr right = f.expr * apply_operator(OperatorKind::Lbar, g.expr);

    const auto r_left = integrate_with(left, m, ctx);
    const auto r_mid = integrate_with(middle, m, ctx);
    const auto r_right = integrate_with(right, m, ctx);

    return {make_equality("ibp1", "ibp1-left-mid", f.name, g.name, n, r_left, r_mid, ctx),
            make_equality("ibp1", "ibp1-mid-right", f.name, g.name, n, r_mid, r_right, ctx)};
}

CheckResult check_ibp_second(const CatalogEntry& f, const CatalogEntry& g,
                             std::optional<Method> method, CheckContext& ctx) {
    if (!f.claimed_circular)
        throw std::invalid_argument("ibp2 requires a circular-symmetric f; got " + f.name);
    if (!can_pair(f.growth, g.growth))
        throw UnboundedGrowth("pairing " + f.name + " with " + g.name +
                              " is not certified integrable");
    const Method m = resolve_method(method, f, g, ctx);
    const int n = f.dim;

    const Expr left =
        apply_operator(OperatorKind::OU, apply_operator(OperatorKind::OU, f.expr)) * g.expr;

    const auto hf = complex_hessian(f.expr);
    const auto hg = complex_hessian(g.expr);
    Expr pairing = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            pairing = pairing + hf[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                                    hg[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];

    const auto r_left = integrate_with(left, m, ctx);
    const auto r_right = integrate_with(pairing, m, ctx);
    return make_equality("ibp2", "ibp2", f.name, g.name, n, r_left, r_right, ctx);
}

CheckResult check_commutation(const CatalogEntry& f, const std::vector<CPoint>& points,
                              CheckContext& ctx) {
    const int n = f.dim;
    const Expr lf = apply_operator(OperatorKind::L, f.expr);
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const Expr a = wirtinger_dz(lf, j);
        const Expr b = apply_operator(OperatorKind::L, wirtinger_dz(f.expr, j));
        worst = std::max(worst, max_pointwise_deviation(a, b, points));
    }
    return make_pointwise("commute", "commute", f.name, n, worst, ctx.tol_pointwise, ctx);
}

CheckResult check_commutation_counter(int dim, const std::vector<CPoint>& points,
                                      CheckContext& ctx) {
    // [d/dz, OU] = (1/2) d/dz, so on z^2 the residual is |z| at |z| = 1
    const Expr f = pow_expr(Expr::var(1, dim), 2);
    const Expr ouf = apply_operator(OperatorKind::OU, f);
    const Expr a = wirtinger_dz(ouf, 1);
    const Expr b = apply_operator(OperatorKind::OU, wirtinger_dz(f, 1));
    const double worst = max_pointwise_deviation(a, b, points);

    CheckResult r = make_pointwise("commute", "commute-ou-counter", "z1^2", dim, worst, 0.1, ctx);
    r.rhs = Cplx{0.1, 0.0};
    r.abs_err = std::max(0.0, 0.1 - worst);
    r.rel_err = r.abs_err;
    r.pass = worst >= 0.1;
    return r;
}

std::vector<CheckResult> check_relations(const CatalogEntry& f, const std::vector<CPoint>& points,
                                         CheckContext& ctx) {
    const int n = f.dim;
    const Expr lf = apply_operator(OperatorKind::L, f.expr);
    const Expr lbarf = apply_operator(OperatorKind::Lbar, f.expr);
    const Expr ouf = apply_operator(OperatorKind::OU, f.expr);
    const Expr rf = apply_operator(OperatorKind::R, f.expr);

    std::vector<CheckResult> out;
    const Cplx half_i{0.0, 0.5};
    out.push_back(make_pointwise("relations", "relation-l", f.name, n,
                                 max_pointwise_deviation(lf, ouf + half_i * rf, points),
                                 ctx.tol_pointwise, ctx));
    out.push_back(make_pointwise("relations", "relation-lbar", f.name, n,
                                 max_pointwise_deviation(lbarf, ouf - half_i * rf, points),
                                 ctx.tol_pointwise, ctx));
    out.push_back(make_pointwise("relations", "divergence-form", f.name, n,
                                 check_divergence_form(f.expr, points), ctx.tol_pointwise, ctx));

    if (f.claimed_circular) {
        const Expr zero = Expr::constant(Cplx{0.0, 0.0}, n);
        out.push_back(make_pointwise("relations", "rotation-kill", f.name, n,
                                     max_pointwise_deviation(rf, zero, points), ctx.tol_pointwise,
                                     ctx));
        const double collapse = std::max(max_pointwise_deviation(ouf, lf, points),
                                         max_pointwise_deviation(ouf, lbarf, points));
        out.push_back(make_pointwise("relations", "symmetric-collapse", f.name, n, collapse,
                                     ctx.tol_pointwise, ctx));
    }
    return out;
}

CheckResult check_rejected_variant(int dim, CheckContext& ctx) {
    // with the conjugation placed on d/dz the first IBP identity fails by
    // a residual of 2 on f = g = |z_1|^2
    const Expr f = Expr::var(1, dim) * Expr::conj_var(1, dim);
    const Expr left = apply_rejected_variant(f) * f;
    Expr grad_pairing = Expr::constant(Cplx{0.0, 0.0}, dim);
    for (int j = 1; j <= dim; ++j)
        grad_pairing = grad_pairing + wirtinger_dzbar(f, j) * wirtinger_dz(f, j);

    const Cplx lhs = integrate_poly(to_polynomial(left));
    const Cplx mid = integrate_poly(to_polynomial(-grad_pairing));
    const double residual = std::abs(lhs - mid);

    CheckResult r;
    r.suite = "relations";
    r.identity = "ibp1-rejected-variant";
    r.f = "abs2(z1)";
    r.g = "abs2(z1)";
    r.dim = dim;
    r.method = Method::Exact;
    r.lhs = lhs;
    r.rhs = mid;
    r.abs_err = residual;
    r.rel_err = residual / std::max(std::abs(lhs), std::abs(mid));
    r.tol = 0.5;
    r.seed = ctx.seed;
    r.pass = residual >= 0.5;
    return r;
}

CheckResult check_dirichlet_expr(const std::string& name, const Expr& f,
                                 std::optional<Method> method, CheckContext& ctx) {
    const int n = f.dim();
    CatalogEntry pseudo;
    pseudo.name = name;
    pseudo.dim = n;
    pseudo.expr = f;
    pseudo.growth = check_growth(f);
    if (!can_pair(pseudo.growth, pseudo.growth))
        throw UnboundedGrowth("self-pairing of " + name + " is not certified integrable");
    const Method m = resolve_method(method, pseudo, pseudo, ctx);

    const Expr left = -(apply_operator(OperatorKind::L, f) * conj_expr(f));
    Expr right = Expr::constant(Cplx{0.0, 0.0}, n);
    for (int j = 1; j <= n; ++j) {
        const Expr d = wirtinger_dzbar(f, j);
        right = right + d * conj_expr(d);
    }

    const auto r_left = integrate_with(left, m, ctx);
    const auto r_right = integrate_with(right, m, ctx);
    CheckResult r = make_equality("dirichlet", "dirichlet", name, name, n, r_left, r_right, ctx);
    // the right-hand side is a Dirichlet energy; nonnegativity is part of the check
    if (r_right.value.real() < -r.tol) r.pass = false;
    return r;
}

CheckResult check_dirichlet(const CatalogEntry& f, std::optional<Method> method,
                            CheckContext& ctx) {
    return check_dirichlet_expr(f.name, f.expr, method, ctx);
}

namespace {

struct McCovariance {
    double cov = 0.0;
    double stderr_val = 0.0;
};

// joint-sample covariance with a deterministic two-pass estimator; the
// counter-based stream makes the second pass free of stored samples
McCovariance mc_covariance(const Expr& f, const Expr& g, std::int64_t samples,
                           std::uint64_t seed, std::uint64_t stream) {
    const CompiledExpr cf(f);
    const CompiledExpr cg(g);
    const GaussianStream gs(seed, stream);
    const int n = cf.dim();

    double sum_f = 0.0;
    double sum_g = 0.0;
    for (std::int64_t k = 0; k < samples; ++k) {
        const CPoint w = gs.point(static_cast<std::uint64_t>(k), n);
        const Cplx vf = cf(w);
        const Cplx vg = cg(w);
        if (!std::isfinite(vf.real()) || !std::isfinite(vg.real()))
            throw NonFiniteSample("non-finite sample in covariance estimate");
        sum_f += vf.real();
        sum_g += vg.real();
    }
    const double mean_f = sum_f / static_cast<double>(samples);
    const double mean_g = sum_g / static_cast<double>(samples);

    double sum_h = 0.0;
    double sumsq_h = 0.0;
    for (std::int64_t k = 0; k < samples; ++k) {
        const CPoint w = gs.point(static_cast<std::uint64_t>(k), n);
        const double h = (cf(w).real() - mean_f) * (cg(w).real() - mean_g);
        sum_h += h;
        sumsq_h += h * h;
    }
    const auto num = static_cast<double>(samples);
    McCovariance out;
    out.cov = sum_h / (num - 1.0);
    const double var_h = std::max(0.0, (sumsq_h - sum_h * sum_h / num) / (num - 1.0));
    out.stderr_val = std::sqrt(var_h / num);
    return out;
}

} // namespace

CheckResult check_correlation(const CatalogEntry& f, const CatalogEntry& g,
                              std::optional<Method> method, CheckContext& ctx,
                              std::optional<double> expected) {
    if (!can_pair(f.growth, g.growth))
        throw UnboundedGrowth("pairing " + f.name + " with " + g.name +
                              " is not certified integrable");
    const Method m = resolve_method(method, f, g, ctx);
    const int n = f.dim;

    IntegrationResult cov_result;
    if (m == Method::MonteCarlo) {
        if (!can_pair_mc(f.growth, g.growth))
            throw UnboundedGrowth("pairing " + f.name + " with " + g.name +
                                  " has no Monte Carlo variance certificate");
        const auto mc = mc_covariance(f.expr, g.expr, ctx.samples, ctx.seed, ctx.take_stream());
        cov_result.value = Cplx{mc.cov, 0.0};
        cov_result.stderr_re = mc.stderr_val;
        cov_result.samples = ctx.samples;
        cov_result.method = Method::MonteCarlo;
    } else {
        const auto r_fg = integrate_with(f.expr * g.expr, m, ctx);
        const auto r_f = integrate_with(f.expr, m, ctx);
        const auto r_g = integrate_with(g.expr, m, ctx);
        cov_result.value = r_fg.value - r_f.value * r_g.value;
        cov_result.nodes = r_fg.nodes;
        cov_result.method = m;
    }

    if (expected) {
        IntegrationResult want;
        want.value = Cplx{*expected, 0.0};
        want.method = cov_result.method;
        CheckResult r =
            make_equality("correlation", "correlation-control", f.name, g.name, n, cov_result,
                          want, ctx);
        return r;
    }
    return make_lower_bound("correlation", "correlation", f.name, g.name, n, cov_result, 0.0, ctx);
}

CheckResult check_trace_nonneg(const CatalogEntry& f, const CatalogEntry& g, double t,
                               const std::vector<CPoint>& points, CheckContext& ctx) {
    const auto params = SemigroupParams::from_time(t);
    const int n = f.dim;
    const auto closed = mehler_apply_closed(f.expr, params);
    const std::optional<HessianEvaluator> hess_pt_f =
        closed ? std::optional<HessianEvaluator>(HessianEvaluator(*closed)) : std::nullopt;
    const HessianEvaluator hess_g(g.expr);

    double worst = std::numeric_limits<double>::infinity();
    for (const auto& w : points) {
        const auto a = hess_pt_f ? hess_pt_f->at(w)
                                 : semigroup_hessian_at(f.expr, params, w, ctx.rule(), ctx.budget);
        const auto b = hess_g.at(w);
        Cplx trace{0.0, 0.0};
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) trace += a.matrix.at(j, k) * b.matrix.at(k, j);
        worst = std::min(worst, trace.real());
    }

    CheckResult r = make_pointwise("alpha", "trace-nonneg", f.name, n, 0.0, ctx.tol_pointwise, ctx);
    r.g = g.name;
    r.lhs = Cplx{worst, 0.0};
    r.abs_err = std::max(0.0, -worst);
    r.rel_err = r.abs_err;
    r.pass = worst >= -ctx.tol_pointwise;
    return r;
}

CheckResult check_psh_preservation(const CatalogEntry& f, const std::vector<double>& ts,
                                   const std::vector<CPoint>& points, CheckContext& ctx) {
    double worst = std::numeric_limits<double>::infinity();
    for (const double t : ts) {
        const auto params = SemigroupParams::from_time(t);
        const auto closed = mehler_apply_closed(f.expr, params);
        if (closed) {
            const HessianEvaluator hessian(*closed);
            for (const auto& w : points)
                worst = std::min(worst, min_eigenvalue(hessian.at(w).matrix));
        } else {
            for (const auto& w : points) {
                const auto h = semigroup_hessian_at(f.expr, params, w, ctx.rule(), ctx.budget);
                worst = std::min(worst, min_eigenvalue(h.matrix));
            }
        }
    }

    CheckResult r =
        make_pointwise("alpha", "psh-preservation", f.name, f.dim, 0.0, ctx.tol_pointwise, ctx);
    r.lhs = Cplx{worst, 0.0};
    r.abs_err = std::max(0.0, -worst);
    r.rel_err = r.abs_err;
    r.pass = worst >= -ctx.tol_pointwise;
    return r;
}

std::vector<double> AlphaGrid::points() const {
    std::vector<double> out;
    const double eps = 1e-9 * std::max(1.0, std::abs(stop));
    for (double v = start; v <= stop + eps; v += step) out.push_back(v);
    if (proxy > 0.0 && (out.empty() || proxy > out.back() + eps)) out.push_back(proxy);
    return out;
}

double AlphaStudy::worst_convexity() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const double v : d2alpha_trace) worst = std::min(worst, v);
    return worst;
}

double AlphaStudy::worst_monotonicity() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < alpha.size(); ++i)
        worst = std::max(worst, alpha[i + 1] - alpha[i]);
    return worst;
}

double AlphaStudy::endpoint_gap() const { return alpha.front() - alpha_inf; }

double AlphaStudy::proxy_gap() const {
    if (regular_count >= static_cast<int>(t.size())) return 0.0;
    return std::abs(alpha.back() - alpha_inf);
}

double AlphaStudy::fd_trace_excess() const {
    double worst = 0.0;
    for (int i = 1; i + 1 < regular_count; ++i) {
        const auto si = static_cast<std::size_t>(i);
        const double diff = std::abs(d2alpha_fd[si] - d2alpha_trace[si]);
        const double allowed = std::max(1e-6, 1e-3 * std::abs(d2alpha_trace[si]));
        worst = std::max(worst, diff / allowed);
    }
    return worst;
}

AlphaStudy alpha_study(const CatalogEntry& f, const CatalogEntry& g, const AlphaGrid& grid,
                       std::optional<Method> method, CheckContext& ctx) {
    if (!f.claimed_psh || !f.claimed_circular)
        throw std::invalid_argument("alpha study requires psh circular-symmetric f; got " +
                                    f.name);
    if (!g.claimed_psh)
        throw std::invalid_argument("alpha study requires psh g; got " + g.name);
    if (!can_pair(f.growth, g.growth))
        throw UnboundedGrowth("pairing " + f.name + " with " + g.name +
                              " is not certified integrable");

    Method m = method.value_or(Method::Exact);
    if (!method) {
        m = (f.growth.kind == GrowthKind::Polynomial && g.growth.kind == GrowthKind::Polynomial)
                ? Method::Exact
                : Method::Quadrature;
    }
    if (m == Method::MonteCarlo)
        throw std::invalid_argument(
            "alpha studies use deterministic backends; Monte Carlo noise would drown the "
            "finite-difference derivatives");

    AlphaStudy study;
    study.f = f.name;
    study.g = g.name;
    study.dim = f.dim;
    study.method = m;
    study.t = grid.points();
    const auto size = study.t.size();
    study.alpha.resize(size);
    study.d2alpha_trace.resize(size);
    study.dalpha_fd.assign(size, std::numeric_limits<double>::quiet_NaN());
    study.d2alpha_fd.assign(size, std::numeric_limits<double>::quiet_NaN());

    study.regular_count = static_cast<int>(size);
    if (grid.proxy > 0.0 && size >= 2 && study.t.back() == grid.proxy &&
        study.t.back() - study.t[size - 2] > 1.5 * grid.step)
        study.regular_count = static_cast<int>(size) - 1;

    const int n = f.dim;
    if (m == Method::Exact) {
        const Poly fp = to_polynomial(f.expr);
        const Poly gp = to_polynomial(g.expr);
        const auto hf = complex_hessian(f.expr);
        const auto hg = complex_hessian(g.expr);
        std::vector<Poly> hf_poly;
        std::vector<Poly> hg_poly;
        hf_poly.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        hg_poly.reserve(hf_poly.capacity());
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                hf_poly.push_back(
                    to_polynomial(hf[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]));
                hg_poly.push_back(
                    to_polynomial(hg[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]));
            }

        study.alpha_inf =
            integrate_poly(fp).real() * integrate_poly(gp).real();

        for (std::size_t i = 0; i < size; ++i) {
            const auto params = SemigroupParams::from_time(study.t[i]);
            study.alpha[i] = integrate_poly(mehler_apply_poly(fp, params) * gp).real();

            // chain rule: D^2 (P_t f) = e^{-t} P_t (D^2 f), entrywise
            const double contraction = params.c * params.c;
            Cplx trace{0.0, 0.0};
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const auto idx_a = static_cast<std::size_t>(j * n + k);
                    const auto idx_b = static_cast<std::size_t>(k * n + j);
                    trace += integrate_poly(mehler_apply_poly(hf_poly[idx_a], params) *
                                            hg_poly[idx_b]);
                }
            study.d2alpha_trace[i] = contraction * trace.real();
        }
    } else {
        const auto hg = complex_hessian(g.expr);
        study.alpha_inf = integrate_quadrature(f.expr, ctx.rule(), ctx.budget).value.real() *
                          integrate_quadrature(g.expr, ctx.rule(), ctx.budget).value.real();

        for (std::size_t i = 0; i < size; ++i) {
            const auto params = SemigroupParams::from_time(study.t[i]);
            const auto pt_f = mehler_apply_closed(f.expr, params);
            if (!pt_f)
                throw std::invalid_argument("no symbolic semigroup route for entry " + f.name);
            study.alpha[i] =
                integrate_quadrature(*pt_f * g.expr, ctx.rule(), ctx.budget).value.real();

            const auto ha = complex_hessian(*pt_f);
            Expr pairing = Expr::constant(Cplx{0.0, 0.0}, n);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    pairing = pairing +
                              ha[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                                  hg[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            study.d2alpha_trace[i] =
                integrate_quadrature(pairing, ctx.rule(), ctx.budget).value.real();
        }
    }

    const double h = grid.step;
    for (int i = 1; i + 1 < study.regular_count; ++i) {
        const auto si = static_cast<std::size_t>(i);
        study.dalpha_fd[si] = (study.alpha[si + 1] - study.alpha[si - 1]) / (2.0 * h);
        study.d2alpha_fd[si] =
            (study.alpha[si + 1] - 2.0 * study.alpha[si] + study.alpha[si - 1]) / (h * h);
    }
    return study;
}

std::vector<CheckResult> alpha_study_checks(const AlphaStudy& study, CheckContext& ctx) {
    std::vector<CheckResult> out;

    auto base = [&](std::string identity) {
        CheckResult r;
        r.suite = "alpha";
        r.identity = std::move(identity);
        r.f = study.f;
        r.g = study.g;
        r.dim = study.dim;
        r.method = study.method;
        r.seed = ctx.seed;
        return r;
    };

    {
        CheckResult r = base("alpha-fd-trace");
        const double excess = study.fd_trace_excess();
        r.lhs = Cplx{excess, 0.0};
        r.rhs = Cplx{1.0, 0.0};
        r.abs_err = std::max(0.0, excess - 1.0);
        r.rel_err = r.abs_err;
        r.tol = 1.0; // excess is already scaled by max(1e-6, 1e-3 |alpha''|)
        r.pass = excess <= 1.0;
        out.push_back(r);
    }
    {
        CheckResult r = base("alpha-convexity");
        const double worst = study.worst_convexity();
        r.lhs = Cplx{worst, 0.0};
        r.tol = 1e-8;
        r.abs_err = std::max(0.0, -worst);
        r.rel_err = r.abs_err;
        r.pass = worst >= -r.tol;
        out.push_back(r);
    }
    {
        CheckResult r = base("alpha-monotonic");
        const double worst = study.worst_monotonicity();
        r.lhs = Cplx{worst, 0.0};
        r.tol = 1e-8;
        r.abs_err = std::max(0.0, worst);
        r.rel_err = r.abs_err;
        r.pass = worst <= r.tol;
        out.push_back(r);
    }
    {
        CheckResult r = base("alpha-endpoint");
        const double gap = study.endpoint_gap();
        r.lhs = Cplx{gap, 0.0};
        r.tol = 1e-8;
        r.abs_err = std::max(0.0, -gap);
        r.rel_err = r.abs_err;
        r.pass = gap >= -r.tol;
        out.push_back(r);
    }
    if (study.regular_count < static_cast<int>(study.t.size())) {
        CheckResult r = base("alpha-proxy");
        const double gap = study.proxy_gap();
        r.lhs = Cplx{gap, 0.0};
        // scaled by the interpolation range: pairs with large degree-2 chaos
        // energy still sit at ~|alpha(0)-alpha(inf)| * e^{-proxy} at the proxy
        r.tol = std::max(1e-6, 1e-6 * std::abs(study.endpoint_gap()));
        r.abs_err = gap;
        r.rel_err = gap / std::max(1.0, std::abs(study.endpoint_gap()));
        r.pass = gap <= r.tol;
        out.push_back(r);
    }
    return out;
}

} // namespace pshlab
