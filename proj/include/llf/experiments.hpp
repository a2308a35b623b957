#pragma once

#include <functional>

#include "llf/config.hpp"
#include "llf/report.hpp"

namespace llf {

/// Executes one configured experiment, writing its artifacts (CSV/JSON) under
/// the configured output directory. The returned report's pass state drives
/// the process exit code.
RunReport run_experiment(const ExperimentConfig& cfg, bool quiet);

/// Canonical names of the acceptance checks, in run order. The registry test
/// asserts that a selftest report contains each exactly once.
const std::vector<std::string>& acceptance_check_names();

/// Runs the full acceptance/property suite. `progress` (optional) is invoked
/// once per finished check.
std::vector<CheckResult> run_acceptance_checks(
    std::uint64_t seed, const std::function<void(const CheckResult&)>& progress = {});

/// selftest entry point: runs the suite and assembles a report.
RunReport run_selftest(std::uint64_t seed, bool quiet);

}  // namespace llf
