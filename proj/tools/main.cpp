// Command-line surface: run a scenario file, list the bundled scenarios,
// or compare two completed run directories.
//
// Exit codes: 0 success, 1 a check failed (report still written),
// 2 configuration error, 3 solver failure.

#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "kirchlab/experiment.hpp"
#include "kirchlab/ode.hpp"

#ifndef KIRCHLAB_SCENARIO_DIR
#define KIRCHLAB_SCENARIO_DIR "scenarios"
#endif

int main(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for weakly dissipated Kirchhoff equations"};
    app.require_subcommand(1);

    std::string config_path, out_dir, dir_a, dir_b;
    std::string scenario_dir = KIRCHLAB_SCENARIO_DIR;
    int threads = 0;
    double tol = 0, horizon = 0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output root (default: $KIRCHLAB_OUT or ./runs)");
    run->add_option("--threads", threads, "worker threads (default: hardware)");
    run->add_option("--tol", tol, "override solver rel_tol");
    run->add_option("--horizon", horizon, "override horizon T");

    CLI::App* list = app.add_subcommand("list", "list bundled scenarios");
    list->add_option("--scenarios", scenario_dir, "scenario directory");

    CLI::App* cmp = app.add_subcommand("compare", "diff two run directories");
    cmp->add_option("a", dir_a, "first run directory")->required();
    cmp->add_option("b", dir_b, "second run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            const kirchlab::ScenarioConfig cfg = kirchlab::load_scenario(config_path);
            kirchlab::RunOptions opt;
            opt.out_dir = out_dir;
            opt.threads = threads;
            opt.rel_tol_override = tol;
            opt.horizon_override = horizon;
            const kirchlab::RunOutcome out = kirchlab::run_scenario(cfg, opt);
            std::printf("%s: %s (report: %s/report.json)\n", cfg.name.c_str(),
                        out.report["status"].get<std::string>().c_str(),
                        out.run_dir.c_str());
            return out.exit_code;
        }
        if (list->parsed()) {
            for (const auto& s : kirchlab::list_scenarios(scenario_dir))
                std::printf("%-28s %-24s %s\n", s.file.c_str(), s.name.c_str(),
                            s.description.c_str());
            return 0;
        }
        const kirchlab::CompareOutcome out = kirchlab::compare_runs(dir_a, dir_b);
        std::printf("%s\n", out.diff.dump(2).c_str());
        return out.exit_code;
    } catch (const kirchlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const kirchlab::SolverError& e) {
        std::fprintf(stderr, "solver failure at t=%g: %s\n", e.time(), e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
