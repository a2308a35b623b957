// Command-line driver: experiment runners plus the selftest property suite.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "llf/experiments.hpp"
#include "llf/io.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config) {
    if (needs_config)
        cmd->add_option("--config", opts.config_path, "experiment configuration file")
            ->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", opts.seed, "seed for randomized suites (overrides config)");
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

int finish(const llf::RunReport& rep, bool quiet) {
    if (!quiet) std::fputs(rep.to_table().c_str(), stdout);
    return rep.all_pass() ? 0 : 1;
}

int run_config_command(const CommonOpts& opts, const char* kind) {
    llf::ExperimentConfig cfg = llf::ExperimentConfig::from_file(opts.config_path);
    cfg.set("kind", kind);
    if (!opts.out_dir.empty()) cfg.set("out", opts.out_dir);
    if (opts.seed >= 0) cfg.set("seed", std::to_string(opts.seed));
    if (const char* env_out = std::getenv("LLFLOW_OUT"); env_out && opts.out_dir.empty())
        cfg.set("out", env_out);
    llf::RunReport rep = llf::run_experiment(cfg, opts.quiet);
    return finish(rep, opts.quiet);
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("LLFLOW_THREADS")) {
#ifdef _OPENMP
        omp_set_num_threads(std::max(1, std::atoi(threads)));
#endif
    }

    CLI::App app{"Landau-Lifshitz / Schrodinger flow solver with Neumann boundary audits"};
    app.require_subcommand(1);

    CommonOpts evolve_o, compat_o, lin_o, gal_o, conv_o, sweep_o, self_o;
    add_common(app.add_subcommand("evolve", "integrate the flow"), evolve_o, true);
    add_common(app.add_subcommand("compat", "audit boundary compatibility conditions"),
               compat_o, true);
    add_common(app.add_subcommand("linearized", "solve the omega ~ v_k evolution"), lin_o,
               true);
    add_common(app.add_subcommand("galerkin", "solve the spectral Galerkin system"), gal_o,
               true);
    add_common(app.add_subcommand("converge", "manufactured-solution convergence study"),
               conv_o, true);
    add_common(app.add_subcommand("sweep", "eps -> 0 trajectory sweep"), sweep_o, true);
    add_common(app.add_subcommand("selftest", "run the full property suite"), self_o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("evolve")) return run_config_command(evolve_o, "evolve");
        if (app.got_subcommand("compat")) return run_config_command(compat_o, "compat");
        if (app.got_subcommand("linearized")) return run_config_command(lin_o, "linearized");
        if (app.got_subcommand("galerkin")) return run_config_command(gal_o, "galerkin");
        if (app.got_subcommand("converge")) return run_config_command(conv_o, "convergence");
        if (app.got_subcommand("sweep")) return run_config_command(sweep_o, "eps_sweep");
        if (app.got_subcommand("selftest")) {
            const std::uint64_t seed =
                self_o.seed >= 0 ? static_cast<std::uint64_t>(self_o.seed) : 1;
            llf::RunReport rep = llf::run_selftest(seed, self_o.quiet);
            std::string out = self_o.out_dir;
            if (out.empty()) {
                if (const char* env_out = std::getenv("LLFLOW_OUT")) out = env_out;
            }
            if (out.empty()) out = "selftest_out";
            std::filesystem::create_directories(out);
            llf::write_text(std::filesystem::path(out) / "report.json", rep.to_json());
            llf::write_text(std::filesystem::path(out) / "checks.csv", rep.checks_csv());
            return finish(rep, self_o.quiet);
        }
    } catch (const llf::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
