#include "pshlab/report.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "pshlab/version.hpp"

namespace pshlab {

ReportSummary Report::summary() const {
    ReportSummary s;
    s.total = static_cast<int>(checks.size());
    for (const auto& c : checks) (c.pass ? s.passed : s.failed)++;
    return s;
}

namespace {

nlohmann::json complex_json(Cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json j;
    j["dim"] = c.dim;
    j["suite"] = c.suite;
    j["pairs"] = c.pairs;
    j["method"] = c.method;
    j["nodes"] = c.nodes;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["t_grid"] = {{"start", c.t_start}, {"stop", c.t_stop}, {"step", c.t_step}};
    j["t_proxy"] = c.t_proxy;
    j["tol"] = c.tol;
    j["budget"] = c.budget;
    // the output path is where the report lives, not part of the run's
    // numeric configuration; leaving it out keeps replay diffs clean
    j["format"] = c.format;
    return j;
}

} // namespace

std::string Report::to_json() const {
    nlohmann::json j;
    j["version"] = version.empty() ? kVersion : version;
    j["timestamp"] = timestamp;
    j["config"] = config_json(config);

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json row;
        row["suite"] = c.suite;
        row["identity"] = c.identity;
        row["f"] = c.f;
        row["g"] = c.g;
        row["dim"] = c.dim;
        row["method"] = method_name(c.method);
        row["lhs"] = complex_json(c.lhs);
        row["rhs"] = complex_json(c.rhs);
        row["abs_err"] = c.abs_err;
        row["rel_err"] = c.rel_err;
        row["tol"] = c.tol;
        row["stderr"] = c.stderr_val;
        row["nodes"] = c.nodes;
        row["samples"] = c.samples;
        row["seed"] = c.seed;
        row["pass"] = c.pass;
        rows.push_back(std::move(row));
    }
    j["checks"] = std::move(rows);

    const ReportSummary s = summary();
    j["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}};
    return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
    std::string out =
        "suite,identity,f,g,dim,method,lhs,rhs,abs_err,rel_err,tol,stderr,nodes,samples,seed,"
        "pass\n";
    for (const auto& c : checks) {
        out += c.suite + ',' + c.identity + ',' + c.f + ',' + c.g + ',' + std::to_string(c.dim) +
               ',' + method_name(c.method) + ',' + format_complex(c.lhs, 17) + ',' +
               format_complex(c.rhs, 17) + ',' + format_double(c.abs_err) + ',' +
               format_double(c.rel_err) + ',' + format_double(c.tol) + ',' +
               format_double(c.stderr_val) + ',' + std::to_string(c.nodes) + ',' +
               std::to_string(c.samples) + ',' + std::to_string(c.seed) + ',' +
               (c.pass ? "true" : "false") + '\n';
    }
    return out;
}

std::string current_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace pshlab
