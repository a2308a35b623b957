#include "llf/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace llf {

CheckResult CheckResult::le(std::string name, double measured, double threshold,
                            std::string note) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.higher_is_better = false;
    r.pass = std::isfinite(measured) && measured <= threshold;
    r.note = std::move(note);
    return r;
}

CheckResult CheckResult::ge(std::string name, double measured, double threshold,
                            std::string note) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = threshold;
    r.higher_is_better = true;
    r.pass = std::isfinite(measured) && measured >= threshold;
    r.note = std::move(note);
    return r;
}

CheckResult CheckResult::reported(std::string name, double measured, std::string note) {
    CheckResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.threshold = std::nan("");
    r.pass = true;
    r.asserted = false;
    r.note = std::move(note);
    return r;
}

bool RunReport::all_pass() const {
    for (const CheckResult& c : checks)
        if (c.asserted && !c.pass) return false;
    return true;
}

std::string environment_fingerprint_json() {
    nlohmann::json j;
    j["compiler"] = __VERSION__;
    j["cplusplus"] = static_cast<long>(__cplusplus);
#ifdef _OPENMP
    j["openmp"] = static_cast<long>(_OPENMP);
#else
    j["openmp"] = 0;
#endif
    j["pointer_bits"] = static_cast<int>(8 * sizeof(void*));
    return j.dump();
}

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["seed"] = seed;
    j["config"] = config_echo;
    j["environment"] = nlohmann::json::parse(environment_fingerprint_json());
    j["wall_clock_s"] = wall_clock_s;
    j["all_pass"] = all_pass();
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        nlohmann::json e;
        e["name"] = c.name;
        e["measured"] = c.measured;
        if (std::isfinite(c.threshold)) e["threshold"] = c.threshold;
        e["direction"] = c.higher_is_better ? ">=" : "<=";
        e["pass"] = c.pass;
        e["asserted"] = c.asserted;
        if (!c.note.empty()) e["note"] = c.note;
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::string RunReport::checks_csv() const {
    std::ostringstream os;
    os << "name,measured,threshold,direction,pass,asserted\n";
    char buf[40];
    for (const CheckResult& c : checks) {
        os << c.name << ',';
        std::snprintf(buf, sizeof buf, "%.17g", c.measured);
        os << buf << ',';
        if (std::isfinite(c.threshold)) {
            std::snprintf(buf, sizeof buf, "%.17g", c.threshold);
            os << buf;
        }
        os << ',' << (c.higher_is_better ? ">=" : "<=") << ',' << (c.pass ? 1 : 0) << ','
           << (c.asserted ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string RunReport::to_table() const {
    std::ostringstream os;
    char line[256];
    for (const CheckResult& c : checks) {
        std::snprintf(line, sizeof line, "[%s] %-34s %12.5g %s %-10.5g %s\n",
                      c.pass ? "PASS" : (c.asserted ? "FAIL" : "info"), c.name.c_str(),
                      c.measured, c.higher_is_better ? ">=" : "<=", c.threshold,
                      c.note.c_str());
        os << line;
    }
    return os.str();
}

}  // namespace llf
