#pragma once

// Scenario ingestion, sweep orchestration, artifact persistence and run
// comparison — everything behind the command-line surface.
//
// Scenario files are JSON with a versioned schema:
//   {
//     "schema_version": 1,
//     "name": "...", "description": "...",
//     "operator": {"eigenvalues": [..]}
//               | {"geometric": {"count": n, "lambda_min": x, "ratio": r},
//                  "zero_modes": k},
//     "nonlinearity": {"family": "constant", "mu": x}
//                   | {"family": "affine", "a": x, "b": y}
//                   | {"family": "table", "knots": [..], "values": [..]},
//     "p": 1.0,
//     "initial": {"u0": [..], "u1": [..]} | {"seed": n, "scale": s},
//     "eps": [0.04, "eps0/4", ...],      // strings scale the computed eps0
//     "solver": {"rel_tol": 1e-10, "T": 1e3},
//     "checks": ["hamiltonian", ...],
//     "fit_window": [100, 1000]          // optional, default [T/10, T]
//   }

#include <string>
#include <vector>

#include <json.hpp>

#include "kirchlab/analysis.hpp"
#include "kirchlab/corrector.hpp"

namespace kirchlab {

// configuration problems carry exit code 2
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

extern const std::vector<std::string> kKnownChecks;

struct ScenarioConfig {
    nlohmann::json raw;   // canonical form after validation + overrides
    std::string name;
    std::string description;
    OperatorSpec op;
    Nonlinearity m;
    double p = 1.0;
    SpectralVector u0, u1;
    std::vector<nlohmann::json> eps_entries;  // numbers or "eps0/x" strings
    SolverConfig solver;
    std::vector<std::string> checks;
    double fit_lo = 0, fit_hi = 0;  // 0,0: default window [T/10, T]
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const nlohmann::json& j);

// eps list with "eps0/x" entries resolved against the scenario's eps0
std::vector<double> resolve_eps(const ScenarioConfig& cfg);

ProblemSetup make_setup(const ScenarioConfig& cfg, double eps);

// 64-bit FNV-1a of the canonical config serialization
std::uint64_t config_hash(const nlohmann::json& canonical);

// 17-significant-digit decimal, round-trip exact for doubles
std::string format_double(double x);

// first column must be named "t" and be ascending
void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<std::vector<double>>& columns);
void read_csv(const std::string& path, std::vector<std::string>& names,
              std::vector<std::vector<double>>& columns);

struct RunOptions {
    std::string out_dir;       // empty: env root or ./runs
    int threads = 0;           // 0: hardware concurrency
    double rel_tol_override = 0;
    double horizon_override = 0;
};

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 1 a check failed (report still written)
    std::string run_dir;
    nlohmann::json report;
};

// executes the scenario's eps cells (worker pool), runs the requested
// checks, writes trajectory/energy/plot CSVs and report.json
RunOutcome run_scenario(const ScenarioConfig& cfg, const RunOptions& opt);

std::string default_output_root();

struct ScenarioListing { std::string file, name, description; };
std::vector<ScenarioListing> list_scenarios(const std::string& dir);

// diff of fitted exponents/orders/constants between two run directories
struct CompareOutcome {
    int exit_code = 0;  // 2 on mismatched scenarios
    nlohmann::json diff;
};
CompareOutcome compare_runs(const std::string& dir_a, const std::string& dir_b);

}  // namespace kirchlab
