#include "pshlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pshlab/version.hpp"

namespace pshlab {

std::vector<std::pair<const CatalogEntry*, const CatalogEntry*>>
select_pairs(const std::vector<CatalogEntry>& catalog, const std::string& spec) {
    std::vector<std::pair<const CatalogEntry*, const CatalogEntry*>> pairs;
    if (spec.empty()) return pairs; // empty selection: nothing to run
    if (spec == "all") {
        for (const auto& f : catalog)
            for (const auto& g : catalog) pairs.push_back({&f, &g});
        return pairs;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t comma = spec.find(',', start);
        if (comma == std::string::npos) comma = spec.size();
        const std::string item = spec.substr(start, comma - start);
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("pair selector '" + item + "' is not of the form f:g");
        const auto& f = find_entry(catalog, item.substr(0, colon));
        const auto& g = find_entry(catalog, item.substr(colon + 1));
        pairs.push_back({&f, &g});
        start = comma + 1;
        if (comma == spec.size()) break;
    }
    return pairs;
}

std::optional<Method> parse_method(const std::string& name) {
    if (name == "auto") return std::nullopt;
    if (name == "exact") return Method::Exact;
    if (name == "quad") return Method::Quadrature;
    if (name == "mc") return Method::MonteCarlo;
    throw std::invalid_argument("unknown method '" + name + "' (expected exact|quad|mc|auto)");
}

namespace {

std::vector<const CatalogEntry*>
distinct_entries(const std::vector<std::pair<const CatalogEntry*, const CatalogEntry*>>& pairs) {
    std::vector<const CatalogEntry*> out;
    std::set<const CatalogEntry*> seen;
    for (const auto& [f, g] : pairs) {
        if (seen.insert(f).second) out.push_back(f);
        if (seen.insert(g).second) out.push_back(g);
    }
    return out;
}

bool hypothesis_pair(const CatalogEntry& f, const CatalogEntry& g) {
    return f.claimed_psh && f.claimed_circular && g.claimed_psh && can_pair(f.growth, g.growth);
}

// non-polynomial alpha studies run full tensor quadrature per grid point; at
// n >= 2 that is restricted to a representative subset to bound runtime
bool alpha_quadrature_selected(const CatalogEntry& f, const CatalogEntry& g) {
    if (f.dim <= 1) return true;
    return f.name == "gauss_quarter" && (g.name == "norm2" || g.name == "re_sq");
}

CheckResult catalog_check(const ValidationReport& report, const CatalogEntry& entry,
                          const CheckContext& ctx) {
    CheckResult r;
    r.suite = "catalog";
    r.identity = "catalog-" + report.check;
    r.f = entry.name;
    r.dim = entry.dim;
    r.method = Method::Exact;
    r.lhs = Cplx{report.worst_value, 0.0};
    r.tol = report.tol;
    r.seed = ctx.seed;
    r.pass = report.pass;
    return r;
}

} // namespace

Report run_suite(const RunConfig& config) {
    if (config.dim < 1 || config.dim > 4)
        throw std::invalid_argument("dimension must lie in [1, 4]");
    if (config.t_step <= 0.0) throw std::invalid_argument("t-grid step must be positive");
    if (config.nodes < 1 || config.nodes > 200)
        throw std::invalid_argument("quadrature node count must lie in [1, 200]");
    if (config.samples < 1) throw std::invalid_argument("sample count must be positive");

    static const std::set<std::string> known_suites = {
        "ibp1", "ibp2", "commute", "relations", "dirichlet", "alpha", "correlation", "catalog",
        "all"};
    if (known_suites.find(config.suite) == known_suites.end())
        throw std::invalid_argument("unknown suite '" + config.suite + "'");

    const std::optional<Method> method = parse_method(config.method);

    CheckContext ctx;
    ctx.set_nodes(config.nodes);
    ctx.samples = config.samples;
    ctx.seed = config.seed;
    ctx.budget = config.budget;
    if (config.tol > 0.0) {
        ctx.tol_exact = config.tol;
        ctx.tol_quadrature = config.tol;
        ctx.tol_pointwise = config.tol;
    }

    const auto catalog = builtin_catalog(config.dim);
    const auto pairs = select_pairs(catalog, config.pairs);
    const auto entries = distinct_entries(pairs);
    const auto points = ctx.sample_points(config.dim, 20);

    Report report;
    report.version = kVersion;
    report.timestamp = current_timestamp();
    report.config = config;

    const auto want = [&](const char* name) {
        return config.suite == "all" || config.suite == name;
    };

    if (want("catalog")) {
        for (const auto* entry : entries)
            for (const auto& vr : validate_entry(*entry))
                report.checks.push_back(catalog_check(vr, *entry, ctx));
    }

    const auto mc_blocked = [&](const CatalogEntry& f, const CatalogEntry& g) {
        return resolve_method(method, f, g, ctx) == Method::MonteCarlo &&
               !can_pair_mc(f.growth, g.growth);
    };

    if (want("ibp1")) {
        for (const auto& [f, g] : pairs) {
            if (!can_pair(f->growth, g->growth) || mc_blocked(*f, *g)) continue;
            auto [left, right] = check_ibp_first(*f, *g, method, ctx);
            report.checks.push_back(std::move(left));
            report.checks.push_back(std::move(right));
        }
    }

    if (want("ibp2")) {
        for (const auto& [f, g] : pairs) {
            if (!f->claimed_circular || !can_pair(f->growth, g->growth)) continue;
            if (mc_blocked(*f, *g)) continue;
            report.checks.push_back(check_ibp_second(*f, *g, method, ctx));
        }
    }

    if (want("commute")) {
        for (const auto* entry : entries)
            report.checks.push_back(check_commutation(*entry, points, ctx));
        if (!entries.empty())
            report.checks.push_back(check_commutation_counter(config.dim, points, ctx));
    }

    if (want("relations")) {
        for (const auto* entry : entries) {
            auto results = check_relations(*entry, points, ctx);
            report.checks.insert(report.checks.end(), results.begin(), results.end());
        }
        if (!entries.empty()) report.checks.push_back(check_rejected_variant(config.dim, ctx));
    }

    if (want("dirichlet")) {
        for (const auto* entry : entries) {
            if (!can_pair(entry->growth, entry->growth)) continue;
            if (mc_blocked(*entry, *entry)) continue;
            report.checks.push_back(check_dirichlet(*entry, method, ctx));
        }
        if (!entries.empty()) {
            // complex-valued probes; the identity holds for C-valued functions
            const int n = config.dim;
            const Expr z = Expr::var(1, n);
            const Expr zbar = Expr::conj_var(1, n);
            report.checks.push_back(check_dirichlet_expr("probe:conj(z1)", zbar, method, ctx));
            report.checks.push_back(check_dirichlet_expr("probe:z1", z, method, ctx));
            report.checks.push_back(
                check_dirichlet_expr("probe:z1^2", pow_expr(z, 2), method, ctx));
            report.checks.push_back(
                check_dirichlet_expr("probe:z1^2*conj(z1)", pow_expr(z, 2) * zbar, method, ctx));
        }
    }

    if (want("alpha")) {
        const AlphaGrid grid{config.t_start, config.t_stop, config.t_step, config.t_proxy};
        for (const auto& [f, g] : pairs) {
            if (!hypothesis_pair(*f, *g)) continue;
            const bool poly_pair = f->growth.kind == GrowthKind::Polynomial &&
                                   g->growth.kind == GrowthKind::Polynomial;
            if (!poly_pair) {
                double grid_size = 1.0;
                for (int k = 0; k < 2 * config.dim; ++k) grid_size *= config.nodes;
                if (grid_size > static_cast<double>(config.budget)) continue;
                if (!alpha_quadrature_selected(*f, *g)) continue;
                if (method && *method == Method::Exact) continue;
            }
            const std::optional<Method> study_method =
                method && *method == Method::MonteCarlo ? std::nullopt : method;

            const AlphaStudy study = alpha_study(*f, *g, grid, study_method, ctx);
            auto results = alpha_study_checks(study, ctx);
            report.checks.insert(report.checks.end(), results.begin(), results.end());

            // alpha(0) - alpha(inf) must reproduce the covariance
            CheckResult cov = check_correlation(*f, *g, study.method, ctx);
            CheckResult consistency;
            consistency.suite = "alpha";
            consistency.identity = "alpha-covariance";
            consistency.f = f->name;
            consistency.g = g->name;
            consistency.dim = config.dim;
            consistency.method = study.method;
            consistency.lhs = Cplx{study.endpoint_gap(), 0.0};
            consistency.rhs = cov.lhs;
            consistency.abs_err = std::abs(consistency.lhs - consistency.rhs);
            consistency.rel_err = consistency.abs_err;
            consistency.tol = 1e-8;
            consistency.seed = ctx.seed;
            consistency.pass = consistency.abs_err <= consistency.tol;
            report.checks.push_back(consistency);

            report.checks.push_back(check_trace_nonneg(*f, *g, 1.0, points, ctx));
        }

        // plurisubharmonicity survives the semigroup
        const auto ts = grid.points();
        for (const auto* entry : entries) {
            if (!entry->claimed_psh || !entry->claimed_circular) continue;
            report.checks.push_back(check_psh_preservation(*entry, ts, points, ctx));
        }
    }

    if (want("correlation")) {
        for (const auto& [f, g] : pairs) {
            if (!hypothesis_pair(*f, *g) || mc_blocked(*f, *g)) continue;
            report.checks.push_back(check_correlation(*f, *g, method, ctx));
        }
        // negative controls: drop either hypothesis and the covariance turns negative
        if (config.pairs == "all") {
            const auto& re_z = find_entry(catalog, "re_z");
            const auto& neg_re = find_entry(catalog, "neg_re");
            const auto& norm2 = find_entry(catalog, "norm2");
            const auto& neg_norm2 = find_entry(catalog, "neg_norm2");
            report.checks.push_back(check_correlation(re_z, neg_re, method, ctx, -0.5));
            report.checks.push_back(
                check_correlation(norm2, neg_norm2, method, ctx, -double(config.dim)));
        }
    }

    return report;
}

} // namespace pshlab
