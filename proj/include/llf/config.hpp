#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llf/field.hpp"
#include "llf/flow.hpp"
#include "llf/profiles.hpp"

namespace llf {

enum class ExperimentKind { evolve, compat, linearized, galerkin, convergence, eps_sweep };

/// Raised for malformed configuration input (maps to exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ExperimentKind parse_kind(const std::string& s);
const char* to_string(ExperimentKind k);

/// Flat dotted-key view of a config file. The native encoding is a key-value
/// text format with [section] headers; JSON files with the same nested keys
/// are accepted as an alternative encoding.
class ExperimentConfig {
public:
    static ExperimentConfig from_file(const std::filesystem::path& path);
    static ExperimentConfig from_text(const std::string& text);
    static ExperimentConfig from_json_text(const std::string& text);

    ExperimentKind kind() const;
    std::uint64_t seed() const { return static_cast<std::uint64_t>(get_int("seed", 1)); }
    std::string output_dir() const { return get_string("out", "out"); }

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    double require_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma separated

    Grid make_grid_from_config() const;
    SphereField make_initial(const Grid& g) const;
    FlowConfig make_flow_config() const;

    const std::map<std::string, std::string>& values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    /// Canonical echo of the configuration (sorted dotted keys).
    std::string echo() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace llf
