#pragma once

#include <string>
#include <vector>

namespace llf {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool higher_is_better = false;
    bool pass = false;
    bool asserted = true;  // reported-only checks never fail a run
    std::string note;

    static CheckResult le(std::string name, double measured, double threshold,
                          std::string note = "");
    static CheckResult ge(std::string name, double measured, double threshold,
                          std::string note = "");
    static CheckResult reported(std::string name, double measured, std::string note = "");
};

struct RunReport {
    std::string kind;
    std::uint64_t seed = 0;
    std::string config_echo;
    std::vector<CheckResult> checks;
    double wall_clock_s = 0.0;

    bool all_pass() const;
    /// Full report, including the environment fingerprint and wall clock.
    std::string to_json() const;
    /// Deterministic check table: name, measured, threshold, direction, pass.
    std::string checks_csv() const;
    /// Human-readable table.
    std::string to_table() const;
};

std::string environment_fingerprint_json();

}  // namespace llf
