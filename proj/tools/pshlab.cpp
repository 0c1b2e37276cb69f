#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pshlab/parser.hpp"
#include "pshlab/suites.hpp"
#include "pshlab/version.hpp"

namespace {

using namespace pshlab;

struct TGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
};

TGrid parse_t_grid(const std::string& spec) {
    TGrid g;
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("t-grid must be start:stop:step, got '" + spec + "'");
    g.start = std::stod(spec.substr(0, c1));
    g.stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    g.step = std::stod(spec.substr(c2 + 1));
    if (g.step <= 0.0 || g.stop < g.start)
        throw std::invalid_argument("t-grid must satisfy stop >= start and step > 0");
    return g;
}

int run_command(const RunConfig& cfg) {
    const Report report = run_suite(cfg);

    std::map<std::string, std::pair<int, int>> by_suite; // suite -> (passed, total)
    for (const auto& c : report.checks) {
        auto& [passed, total] = by_suite[c.suite];
        ++total;
        if (c.pass) ++passed;
    }
    for (const auto& [suite, counts] : by_suite)
        std::printf("suite %-12s %d/%d passed\n", suite.c_str(), counts.first, counts.second);
    for (const auto& c : report.checks) {
        if (c.pass) continue;
        std::printf("FAIL %s/%s f=%s g=%s method=%s lhs=%s rhs=%s abs_err=%.3e tol=%.3e\n",
                    c.suite.c_str(), c.identity.c_str(), c.f.c_str(), c.g.c_str(),
                    method_name(c.method).c_str(), format_complex(c.lhs, 9).c_str(),
                    format_complex(c.rhs, 9).c_str(), c.abs_err, c.tol);
    }
    const auto s = report.summary();
    std::printf("total: %d checks, %d passed, %d failed\n", s.total, s.passed, s.failed);

    if (!cfg.report_path.empty()) {
        write_file(cfg.report_path, cfg.format == "csv" ? report.to_csv() : report.to_json());
        std::printf("report written to %s\n", cfg.report_path.c_str());
    }
    return s.failed == 0 ? 0 : 1;
}

CatalogEntry resolve_function(const std::string& text, int dim,
                              const std::vector<CatalogEntry>& catalog) {
    for (const auto& entry : catalog)
        if (entry.name == text) return entry;

    CatalogEntry entry;
    entry.name = text;
    entry.dim = dim;
    entry.expr = parse_expr(text, dim);
    entry.growth = check_growth(entry.expr);
    entry.claimed_psh = check_psh(entry.expr, PshSampleSpec{}).pass;
    entry.claimed_circular = check_circular_symmetry(entry.expr).pass;
    return entry;
}

int alpha_command(const std::string& f_text, const std::string& g_text, const RunConfig& cfg) {
    const auto catalog = builtin_catalog(cfg.dim);
    const CatalogEntry f = resolve_function(f_text, cfg.dim, catalog);
    const CatalogEntry g = resolve_function(g_text, cfg.dim, catalog);

    CheckContext ctx;
    ctx.set_nodes(cfg.nodes);
    ctx.samples = cfg.samples;
    ctx.seed = cfg.seed;
    ctx.budget = cfg.budget;

    const AlphaGrid grid{cfg.t_start, cfg.t_stop, cfg.t_step, cfg.t_proxy};
    const AlphaStudy study = alpha_study(f, g, grid, parse_method(cfg.method), ctx);

    char line[256];
    std::snprintf(line, sizeof(line),
                  "# t alpha dalpha_fd d2alpha_fd d2alpha_trace  [alpha_inf=%.12g]\n",
                  study.alpha_inf);
    std::string out = line;
    for (std::size_t i = 0; i < study.t.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.12g %.12g %.12g %.12g %.12g\n", study.t[i],
                      study.alpha[i], study.dalpha_fd[i], study.d2alpha_fd[i],
                      study.d2alpha_trace[i]);
        out += line;
    }

    if (cfg.report_path.empty())
        std::fputs(out.c_str(), stdout);
    else {
        write_file(cfg.report_path, out);
        std::printf("alpha data written to %s\n", cfg.report_path.c_str());
    }
    return 0;
}

int catalog_command(int dim) {
    const auto catalog = builtin_catalog(dim);
    bool all_ok = true;
    std::printf("%-14s %-4s %-5s %-6s %-16s %s\n", "name", "dim", "psh", "circ", "growth",
                "validation");
    for (const auto& entry : catalog) {
        bool ok = true;
        for (const auto& vr : validate_entry(entry)) ok = ok && vr.pass;
        all_ok = all_ok && ok;
        std::printf("%-14s %-4d %-5s %-6s %-16s %s\n", entry.name.c_str(), entry.dim,
                    entry.claimed_psh ? "yes" : "no", entry.claimed_circular ? "yes" : "no",
                    entry.growth.str().c_str(), ok ? "ok" : "CLAIM MISMATCH");
    }
    return all_ok ? 0 : 1;
}

int eval_command(const std::string& expr_text, int dim, const std::string& at,
                 const std::vector<int>& dz, const std::vector<int>& dzbar) {
    Expr e = parse_expr(expr_text, dim);
    for (const int j : dz) e = wirtinger_dz(e, j);
    for (const int j : dzbar) e = wirtinger_dzbar(e, j);
    if (at.empty()) {
        std::printf("%s\n", to_string(e).c_str());
        return 0;
    }
    const CPoint w = parse_point(at, dim);
    std::printf("%s\n", format_complex(evaluate(e, w)).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for Gaussian analysis identities over C^n"};
    app.set_version_flag("--version", std::string(pshlab::kVersion));
    app.require_subcommand(1);

    RunConfig cfg;
    std::string t_grid_run = "0:2.5:0.02";
    std::string t_grid_alpha = "0:5:0.25";
    std::string f_text;
    std::string g_text;
    std::string expr_text;
    std::string at_text;
    std::vector<int> dz;
    std::vector<int> dzbar;

    auto add_common = [&](CLI::App* cmd, std::string& t_grid) {
        cmd->add_option("--dim", cfg.dim, "ambient dimension n (1..4)");
        cmd->add_option("--method", cfg.method, "integration backend: exact|quad|mc|auto");
        cmd->add_option("--nodes", cfg.nodes, "Gauss-Hermite nodes per axis");
        cmd->add_option("--samples", cfg.samples, "Monte Carlo sample count");
        cmd->add_option("--seed", cfg.seed, "RNG seed");
        cmd->add_option("--t-grid", t_grid, "semigroup time grid start:stop:step");
        cmd->add_option("--t-proxy", cfg.t_proxy, "large-t proxy for alpha(inf)");
        cmd->add_option("--budget", cfg.budget, "tensor-grid point budget");
        cmd->add_option("--report", cfg.report_path, "output file path");
    };

    CLI::App* run = app.add_subcommand("run", "run verification suites and write a report");
    add_common(run, t_grid_run);
    run->add_option("--suite", cfg.suite,
                    "ibp1|ibp2|commute|relations|dirichlet|alpha|correlation|catalog|all");
    run->add_option("--pairs", cfg.pairs, "catalog pair selector: all or f:g,f:g,...");
    run->add_option("--tol", cfg.tol, "override the deterministic tolerance ladder");
    run->add_option("--format", cfg.format, "report format: json|csv");

    CLI::App* alpha = app.add_subcommand("alpha", "semigroup interpolation study for one pair");
    add_common(alpha, t_grid_alpha);
    alpha->add_option("--f", f_text, "catalog entry name or expression (psh, circular-symmetric)")
        ->required();
    alpha->add_option("--g", g_text, "catalog entry name or expression (psh)")->required();

    CLI::App* eval = app.add_subcommand("eval", "parse, differentiate and evaluate an expression");
    eval->add_option("--expr", expr_text, "expression over z1..zn")->required();
    eval->add_option("--dim", cfg.dim, "ambient dimension n");
    eval->add_option("--at", at_text, "evaluation point, e.g. \"1+1i,0.5\"");
    eval->add_option("--dz", dz, "apply d/dz_j before evaluating (repeatable)");
    eval->add_option("--dzbar", dzbar, "apply d/dzbar_j before evaluating (repeatable)");

    CLI::App* cat = app.add_subcommand("catalog", "list catalog entries and validation status");
    cat->add_option("--dim", cfg.dim, "ambient dimension n (1..4)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit 0, usage errors exit 2
    }

    try {
        if (run->parsed()) {
            const TGrid g = parse_t_grid(t_grid_run);
            cfg.t_start = g.start;
            cfg.t_stop = g.stop;
            cfg.t_step = g.step;
            RunConfig final_cfg = cfg;
            if (final_cfg.report_path.empty()) final_cfg.report_path = "report.json";
            return run_command(final_cfg);
        }
        if (alpha->parsed()) {
            const TGrid g = parse_t_grid(t_grid_alpha);
            cfg.t_start = g.start;
            cfg.t_stop = g.stop;
            cfg.t_step = g.step;
            return alpha_command(f_text, g_text, cfg);
        }
        if (eval->parsed()) return eval_command(expr_text, cfg.dim, at_text, dz, dzbar);
        if (cat->parsed()) return catalog_command(cfg.dim);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
