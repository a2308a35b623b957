#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "llf/config.hpp"
#include "llf/experiments.hpp"
#include "llf/io.hpp"
#include "llf/profiles.hpp"
#include "llf/rng.hpp"

using namespace llf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("llf_test_" + tag);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("config: key-value text with sections") {
    const std::string text = R"(
kind = evolve           # trailing comment
seed = 42

[grid]
dim = 1
extent = 2.5
points = 64

[flow]
epsilon = 0.1
dt = 1e-4
renormalize = false
)";
    ExperimentConfig cfg = ExperimentConfig::from_text(text);
    CHECK(cfg.kind() == ExperimentKind::evolve);
    CHECK(cfg.seed() == 42);
    CHECK(cfg.get_double("grid.extent", 0.0) == 2.5);
    CHECK(cfg.get_int("grid.points", 0) == 64);
    CHECK(cfg.get_bool("flow.renormalize", true) == false);
    Grid g = cfg.make_grid_from_config();
    CHECK(g.points(0) == 64);
    FlowConfig fc = cfg.make_flow_config();
    CHECK(fc.epsilon == 0.1);
}

TEST_CASE("config: parse errors carry location and map to ConfigError") {
    CHECK_THROWS_AS(ExperimentConfig::from_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_text("kind = bogus\n").kind(), ConfigError);
    ExperimentConfig bad = ExperimentConfig::from_text("x = notanumber\n");
    CHECK_THROWS_AS(bad.get_double("x", 0.0), ConfigError);
    ExperimentConfig nok = ExperimentConfig::from_text("a = 1\n");
    CHECK_THROWS_AS(nok.kind(), ConfigError);
}

TEST_CASE("config: JSON encoding is equivalent") {
    const std::string js = R"({
      "kind": "compat",
      "grid": {"dim": 1, "extent": 1.0, "points": 65},
      "initial": {"profile": "equatorial_cos", "a": 0.4, "m": 1},
      "compat": {"order": 2},
      "sweep": {"eps": [0.2, 0.1]}
    })";
    ExperimentConfig cfg = ExperimentConfig::from_json_text(js);
    CHECK(cfg.kind() == ExperimentKind::compat);
    CHECK(cfg.get_double("initial.a", 0.0) == 0.4);
    CHECK(cfg.get_list("sweep.eps") == std::vector<double>{0.2, 0.1});
}

TEST_CASE("named profiles: determinism and verdict labels") {
    Grid g = make_grid(1, 1.0, 65, BoundaryMode::neumann_mirror);
    CHECK_THROWS(named_profile("nope", {}, g));

    SphereField c = named_profile("constant", {{"axis", 2.0}}, g);
    CHECK(c.node(0)[2] == 1.0);

    SphereField a = named_profile("random_smooth", {{"seed", 5}, {"band", 2}}, g);
    SphereField b = named_profile("random_smooth", {{"seed", 5}, {"band", 2}}, g);
    CHECK(a.field().data() == b.field().data());  // bit-identical
    SphereField d = named_profile("random_smooth", {{"seed", 6}, {"band", 2}}, g);
    CHECK(a.field().l2_distance(d.field()) > 1e-3);

    // The canned list has 12 entries with both verdicts represented.
    const auto& canned = canned_profiles();
    REQUIRE(canned.size() == 12);
    int compatible = 0;
    for (const auto& p : canned) compatible += p.compatible ? 1 : 0;
    CHECK(compatible == 8);
}

TEST_CASE("field container round-trip") {
    Grid g = make_grid(2, {1.0, 2.0}, {8, 12}, BoundaryMode::neumann_mirror);
    Rng rng(3);
    Vec3Field f = rng.field(g);
    const fs::path p = temp_dir("io") / "field.llfb";
    write_field(p, f);
    Vec3Field back = read_field(p);
    CHECK(back.grid().same_layout(g));
    CHECK(back.data() == f.data());  // bit-exact payload

    const std::string csv = field_to_csv(f);
    CHECK(csv.rfind("x,y,c0,c1,c2\n", 0) == 0);
}

TEST_CASE("run_experiment: evolve kind writes artifacts and passes") {
    const fs::path out = temp_dir("evolve");
    ExperimentConfig cfg = ExperimentConfig::from_text(R"(
kind = evolve
out = )" + out.string() + R"(
[grid]
dim = 1
extent = 6.0
points = 64
[initial]
profile = equatorial_cos
a = 0.5
m = 2
[flow]
epsilon = 0.1
dt = 4e-4
t_end = 0.01
record_every = 5
)");
    RunReport rep = run_experiment(cfg, true);
    CHECK(rep.all_pass());
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "final.llfb"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "checks.csv"));
    // Initial data can come from a written container file.
    ExperimentConfig cfg2 = ExperimentConfig::from_text(R"(
kind = evolve
out = )" + (out / "again").string() + R"(
[grid]
dim = 1
extent = 6.0
points = 64
[initial]
file = )" + (out / "final.llfb").string() + R"(
[flow]
epsilon = 0.1
dt = 4e-4
t_end = 0.005
)");
    RunReport rep2 = run_experiment(cfg2, true);
    CHECK(rep2.all_pass());
}

TEST_CASE("run_experiment: compat verdict drives the pass state") {
    const fs::path out = temp_dir("compat");
    auto make = [&](const std::string& profile, const std::string& extra) {
        return ExperimentConfig::from_text("kind = compat\nout = " + out.string() +
                                           "\n[grid]\ndim = 1\nextent = 1.0\npoints = 65\n"
                                           "[initial]\nprofile = " +
                                           profile + "\n" + extra + "[compat]\norder = 2\n");
    };
    CHECK(run_experiment(make("equatorial_cos", "a = 0.4\nm = 1\n"), true).all_pass());
    CHECK_FALSE(run_experiment(make("equatorial_linear", "a = 0.3\n"), true).all_pass());
}

TEST_CASE("run_experiment: determinism of artifacts for a fixed config") {
    const fs::path out_a = temp_dir("det_a");
    const fs::path out_b = temp_dir("det_b");
    auto config_for = [](const fs::path& out) {
        return ExperimentConfig::from_text(R"(
kind = evolve
seed = 9
out = )" + out.string() + R"(
[grid]
dim = 1
extent = 6.0
points = 64
[initial]
profile = random_smooth
band = 3
amplitude = 0.4
seed = 9
[flow]
epsilon = 0.05
dt = 4e-4
t_end = 0.01
record_every = 5
)");
    };
    run_experiment(config_for(out_a), true);
    run_experiment(config_for(out_b), true);
    CHECK(slurp(out_a / "trace.csv") == slurp(out_b / "trace.csv"));
    CHECK(slurp(out_a / "final.csv") == slurp(out_b / "final.csv"));
    CHECK(slurp(out_a / "checks.csv") == slurp(out_b / "checks.csv"));
}

TEST_CASE("report: checks table and pass logic") {
    RunReport rep;
    rep.kind = "demo";
    rep.checks.push_back(CheckResult::le("small", 1e-12, 1e-10));
    rep.checks.push_back(CheckResult::ge("order", 2.0, 1.9));
    rep.checks.push_back(CheckResult::reported("info_only", 3.14));
    CHECK(rep.all_pass());
    rep.checks.push_back(CheckResult::le("fails", 1.0, 0.5));
    CHECK_FALSE(rep.all_pass());
    const std::string csv = rep.checks_csv();
    CHECK(csv.rfind("name,measured,threshold,direction,pass,asserted\n", 0) == 0);
    CHECK(csv.find("fails,1,0.5,<=,0,1") != std::string::npos);
    CHECK(rep.to_json().find("\"all_pass\"") != std::string::npos);
}

TEST_CASE("config echo is self-contained (re-parseable)") {
    ExperimentConfig cfg = ExperimentConfig::from_text(
        "kind = evolve\n[grid]\ndim = 1\nextent = 2.0\npoints = 48\n[flow]\ndt = 1e-4\n");
    ExperimentConfig back = ExperimentConfig::from_text(cfg.echo());
    CHECK(back.values() == cfg.values());
}

TEST_CASE("acceptance registry names are unique") {
    const auto& names = acceptance_check_names();
    std::set<std::string> unique(names.begin(), names.end());
    CHECK(unique.size() == names.size());
}

#ifdef LLFLOW_BIN
TEST_CASE("CLI: subcommands, exit codes, env overrides") {
    const std::string bin = LLFLOW_BIN;
    const fs::path out = temp_dir("cli");
    const fs::path cfgdir = fs::path(LLFLOW_CONFIG_DIR);

    auto run = [&](const std::string& args) {
        const std::string cmd = bin + " " + args + " > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };

    CHECK(run("compat --config " + (cfgdir / "compat.cfg").string() + " --out " +
              (out / "compat").string() + " --quiet") == 0);
    CHECK(run("evolve --config " + (cfgdir / "evolve.json").string() + " --out " +
              (out / "evolve_json").string() + " --quiet") == 0);
    // Usage error: missing subcommand / unknown flag.
    CHECK(run("") == 2);
    CHECK(run("evolve --config /does/not/exist.cfg") == 2);
    // Check failure maps to exit 1 (incompatible profile under compat).
    const fs::path bad = out / "bad.cfg";
    write_text(bad,
               "kind = compat\n[grid]\ndim = 1\nextent = 1.0\npoints = 65\n"
               "[initial]\nprofile = equatorial_linear\na = 0.3\n[compat]\norder = 1\n");
    CHECK(run("compat --config " + bad.string() + " --out " + (out / "bad").string() +
              " --quiet") == 1);
    // Output-dir environment override.
    const fs::path env_out = out / "env_override";
    const std::string cmd = "LLFLOW_OUT=" + env_out.string() + " " + bin +
                            " compat --config " + (cfgdir / "compat.cfg").string() +
                            " --quiet > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(env_out / "compat.json"));
}

TEST_CASE("CLI: remaining experiment kinds run end to end") {
    const std::string bin = LLFLOW_BIN;
    const fs::path out = temp_dir("cli_kinds");
    const fs::path cfgdir = fs::path(LLFLOW_CONFIG_DIR);
    auto run = [&](const std::string& sub, const std::string& cfg, const std::string& dir) {
        const std::string cmd = bin + " " + sub + " --config " + (cfgdir / cfg).string() +
                                " --out " + (out / dir).string() + " --quiet > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    CHECK(run("converge", "converge_temporal.cfg", "temporal") == 0);
    CHECK(fs::exists(out / "temporal" / "convergence.csv"));
    CHECK(run("linearized", "linearized.cfg", "lin") == 0);
    CHECK(fs::exists(out / "lin" / "diagnostics.csv"));
    CHECK(run("galerkin", "galerkin.cfg", "gal") == 0);
    CHECK(fs::exists(out / "gal" / "coefficients.csv"));
}
#endif
