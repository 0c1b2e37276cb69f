#pragma once

#include "pshlab/report.hpp"

namespace pshlab {

/// Ordered catalog pairs selected by a spec string: "all" or a comma list of
/// "fname:gname". Throws std::out_of_range for unknown names.
std::vector<std::pair<const CatalogEntry*, const CatalogEntry*>>
select_pairs(const std::vector<CatalogEntry>& catalog, const std::string& spec);

/// Parses the method flag value: exact | quad | mc | auto.
std::optional<Method> parse_method(const std::string& name);

/// Executes the selected suites over the selected catalog pairs and collects
/// every check result. Deterministic for a fixed config (including seed).
Report run_suite(const RunConfig& config);

} // namespace pshlab
