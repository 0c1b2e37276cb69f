#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pshlab/checks.hpp"

namespace pshlab {

/// One run's configuration; serialized verbatim into the report so results
/// are replayable from the file alone.
struct RunConfig {
    int dim = 1;
    std::string suite = "all";
    std::string pairs = "all";
    std::string method = "auto"; // exact | quad | mc | auto
    int nodes = 32;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 12345;
    // t grid for the interpolation suite; proxy is the large-t consistency point
    double t_start = 0.0;
    double t_stop = 2.5;
    double t_step = 0.02;
    double t_proxy = 20.0;
    double tol = 0.0; // 0 keeps the per-method defaults
    std::int64_t budget = kDefaultQuadratureBudget;
    std::string report_path;
    std::string format = "json"; // json | csv
};

struct ReportSummary {
    int total = 0;
    int passed = 0;
    int failed = 0;
};

struct Report {
    std::string version;
    std::string timestamp;
    RunConfig config;
    std::vector<CheckResult> checks;

    ReportSummary summary() const;

    /// Stable-order JSON per the report schema; the timestamp is the only
    /// field that varies between identical runs.
    std::string to_json() const;

    /// One row per check; complex values rendered as "re+imi".
    std::string to_csv() const;
};

std::string current_timestamp();

void write_file(const std::string& path, const std::string& contents);

} // namespace pshlab
