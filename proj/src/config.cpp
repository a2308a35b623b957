#include "llf/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "llf/io.hpp"

namespace llf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& what) {
    throw ConfigError("config: " + what);
}

}  // namespace

ExperimentKind parse_kind(const std::string& s) {
    if (s == "evolve") return ExperimentKind::evolve;
    if (s == "compat") return ExperimentKind::compat;
    if (s == "linearized") return ExperimentKind::linearized;
    if (s == "galerkin") return ExperimentKind::galerkin;
    if (s == "convergence") return ExperimentKind::convergence;
    if (s == "eps_sweep" || s == "sweep") return ExperimentKind::eps_sweep;
    config_error("unknown kind '" + s + "'");
}

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::evolve: return "evolve";
        case ExperimentKind::compat: return "compat";
        case ExperimentKind::linearized: return "linearized";
        case ExperimentKind::galerkin: return "galerkin";
        case ExperimentKind::convergence: return "convergence";
        case ExperimentKind::eps_sweep: return "eps_sweep";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) config_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    if (path.extension() == ".json") return from_json_text(text);
    return from_text(text);
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                config_error("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            config_error("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) config_error("line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        cfg.values_[key] = value;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    std::function<void(const nlohmann::json&, const std::string&)> flatten =
        [&](const nlohmann::json& node, const std::string& prefix) {
            if (node.is_object()) {
                for (auto it = node.begin(); it != node.end(); ++it)
                    flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
                return;
            }
            if (node.is_array()) {
                std::string list;
                for (const auto& e : node) {
                    if (!list.empty()) list += ", ";
                    list += e.dump();
                }
                cfg.values_[prefix] = list;
                return;
            }
            cfg.values_[prefix] = node.is_string() ? node.get<std::string>() : node.dump();
        };
    flatten(j, "");
    return cfg;
}

ExperimentKind ExperimentConfig::kind() const {
    if (!has("kind")) config_error("missing required key 'kind'");
    return parse_kind(get_string("kind"));
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        config_error("key '" + key + "': cannot parse '" + it->second + "' as a number");
    }
}

double ExperimentConfig::require_double(const std::string& key) const {
    if (!has(key)) config_error("missing required key '" + key + "'");
    return get_double(key, 0.0);
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
    return static_cast<std::int64_t>(get_double(key, static_cast<double>(fallback)));
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    config_error("key '" + key + "': expected true/false");
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return {};
    std::vector<double> out;
    std::istringstream is(it->second);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            config_error("key '" + key + "': cannot parse list entry '" + item + "'");
        }
    }
    return out;
}

Grid ExperimentConfig::make_grid_from_config() const {
    const int dim = static_cast<int>(get_int("grid.dim", 1));
    std::vector<double> extents = get_list("grid.extents");
    if (extents.empty()) extents.assign(dim, get_double("grid.extent", 1.0));
    std::vector<double> pts_list = get_list("grid.points");
    std::vector<int> points;
    if (pts_list.size() > 1) {
        for (double p : pts_list) points.push_back(static_cast<int>(p));
    } else {
        points.assign(dim, static_cast<int>(get_int("grid.points", 64)));
    }
    const std::string mode = get_string("grid.boundary", "neumann_mirror");
    BoundaryMode bm;
    if (mode == "neumann_mirror") {
        bm = BoundaryMode::neumann_mirror;
    } else if (mode == "periodic") {
        bm = BoundaryMode::periodic;
    } else {
        config_error("grid.boundary must be neumann_mirror or periodic, got '" + mode + "'");
    }
    return make_grid(dim, extents, points, bm);
}

SphereField ExperimentConfig::make_initial(const Grid& g) const {
    if (has("initial.file")) {
        const std::string file = get_string("initial.file");
        if (!std::filesystem::exists(file)) config_error("initial.file does not exist: " + file);
        Vec3Field f = read_field(file);
        if (!f.grid().same_layout(g))
            config_error("initial.file grid does not match the configured grid");
        return SphereField(std::move(f));
    }
    const std::string profile = get_string("initial.profile", "constant");
    ProfileParams params;
    const std::string prefix = "initial.";
    for (const auto& [key, value] : values_) {
        if (key.rfind(prefix, 0) != 0 || key == "initial.profile" || key == "initial.file")
            continue;
        params[key.substr(prefix.size())] = get_double(key, 0.0);
    }
    return named_profile(profile, params, g);
}

FlowConfig ExperimentConfig::make_flow_config() const {
    FlowConfig cfg;
    cfg.epsilon = get_double("flow.epsilon", 0.0);
    cfg.dt = get_double("flow.dt", 1e-4);
    cfg.t_end = get_double("flow.t_end", 0.1);
    const std::string scheme = get_string("flow.scheme", "rk4_project");
    if (scheme == "rk4_project") {
        cfg.scheme = Scheme::rk4_project;
    } else if (scheme == "heun_project") {
        cfg.scheme = Scheme::heun_project;
    } else {
        config_error("flow.scheme must be rk4_project or heun_project");
    }
    cfg.renormalize = get_bool("flow.renormalize", true);
    cfg.record_every = static_cast<int>(get_int("flow.record_every", 1));
    for (double k : get_list("flow.sobolev_orders"))
        cfg.sobolev_orders.push_back(static_cast<int>(k));
    return cfg;
}

std::string ExperimentConfig::echo() const {
    std::ostringstream os;
    for (const auto& [key, value] : values_) os << key << " = " << value << "\n";
    return os.str();
}

}  // namespace llf
