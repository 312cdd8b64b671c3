// End-to-end acceptance gate.  Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "kirchlab/experiment.hpp"
#include "kirchlab/parabolic.hpp"

using namespace kirchlab;
using nlohmann::json;

#ifndef KIRCHLAB_SCENARIO_DIR
#define KIRCHLAB_SCENARIO_DIR "scenarios"
#endif

namespace {

int failures = 0;

void report(int num, const std::string& label, bool pass,
            const std::string& detail) {
    std::printf("criterion %2d [%s]: %s  (%s)\n", num, label.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string scenario_path(const std::string& file) {
    return std::string(KIRCHLAB_SCENARIO_DIR) + "/" + file;
}

struct StandardRun {
    std::string name;
    ProblemSetup setup;
    DerivedConstants dc;
    Trajectory traj;
};

// the six standard setups forced to critical dissipation, solved at
// eps0/4 and eps0/16 each, T = 1e3, rel_tol = 1e-10
std::vector<StandardRun> standard_runs() {
    const std::vector<std::string> files{
        "critical_p1.json",        "critical_noncoercive.json",
        "constant_dissipation_p0.json", "subcritical_p05.json",
        "supercritical_p2.json",   "linear_oracle.json"};
    std::vector<StandardRun> runs;
    for (const auto& file : files) {
        const ScenarioConfig cfg = load_scenario(scenario_path(file));
        const ProblemSetup probe(1e-3, cfg.op, cfg.m, Dissipation(1.0), cfg.u0,
                                 cfg.u1);
        const double eps0 = compute_eps0(probe);
        for (double div : {4.0, 16.0}) {
            ProblemSetup setup(eps0 / div, cfg.op, cfg.m, Dissipation(1.0),
                               cfg.u0, cfg.u1);
            DerivedConstants dc = derived_constants(setup);
            SolverConfig solver;
            solver.T = 1000.0;
            Trajectory traj = solve_hyperbolic(setup, solver);
            runs.push_back({cfg.name + "/eps0_over_" + std::to_string(int(div)),
                            std::move(setup), std::move(dc), std::move(traj)});
        }
    }
    return runs;
}

void criterion_1_2_9(const std::vector<StandardRun>& runs) {
    bool c1 = true, c2 = true, c9 = true;
    double worst_gap = 0, worst_slack = 0, worst_margin = 1e300;
    std::string worst1, worst2, worst9;
    for (const auto& r : runs) {
        const double gap = hamiltonian_identity_gap(r.setup, r.traj);
        if (gap > worst_gap) { worst_gap = gap; worst1 = r.name; }
        c1 = c1 && gap <= 1e-6;

        const BoundSuiteReport bs = bound_suite(r.setup, r.traj, r.dc);
        const double slack = std::max(
            std::max(bs.lhs_decay_E / bs.bound_decay_E,
                     bs.lhs_D0_final / bs.bound_D0_final),
            std::max(bs.lhs_F / bs.bound_F, bs.lhs_D1_final / bs.bound_D1_final));
        if (slack > worst_slack) { worst_slack = slack; worst2 = r.name; }
        c2 = c2 && bs.pass;

        const SConditionReport sc = s_condition_margin(r.setup, r.traj);
        if (sc.margin < worst_margin) { worst_margin = sc.margin; worst9 = r.name; }
        c9 = c9 && sc.margin > 0.0;
    }
    report(1, "hamiltonian identity", c1,
           "max gap " + format_double(worst_gap) + " at " + worst1 +
               ", tolerance 1e-6");
    report(2, "explicit-constant bound suite", c2,
           "max lhs/bound ratio " + format_double(worst_slack) + " at " + worst2 +
               ", slack 1+1e-6");
    report(9, "damping-rate condition", c9,
           "min margin " + format_double(worst_margin) + " at " + worst9);
}

void criterion_3() {
    const ScenarioConfig cfg = load_scenario(scenario_path("critical_p1.json"));
    // run above the smallness threshold so the window [100, 1000] is still
    // within representable range; the criterion constrains rates only
    const ProblemSetup setup(0.04, cfg.op, cfg.m, Dissipation(1.0), cfg.u0,
                             cfg.u1);
    SolverConfig solver;
    solver.T = 1000.0;
    const Trajectory traj = solve_hyperbolic(setup, solver);
    std::vector<double> grad(traj.times.size()), vel(traj.times.size()),
        curv(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        grad[i] = norm_power_sq(setup.op, 0.5, traj.u_samples[i]);
        vel[i] = norm_power_sq(setup.op, 0.0, traj.v_samples[i]);
        curv[i] = norm_power_sq(setup.op, 1.0, traj.u_samples[i]);
    }
    const DecayFit fg = fit_decay_rate(traj.times, grad, 100.0, 1000.0);
    const DecayFit fv = fit_decay_rate(traj.times, vel, 100.0, 1000.0);
    const DecayFit fc = fit_decay_rate(traj.times, curv, 100.0, 1000.0);
    const bool pass = fg.ok && fv.ok && fc.ok && -fg.rate <= -2.0 + 0.2 &&
                      -fv.rate <= -2.0 + 0.2 && -fc.rate <= -4.0 + 0.3;
    report(3, "critical decay rates", pass,
           "exponents: gradient " + format_double(-fg.rate) + ", velocity " +
               format_double(-fv.rate) + ", curvature " + format_double(-fc.rate));
}

json run_sweep(const ScenarioConfig& cfg, const std::string& out,
               double rel_tol) {
    RunOptions opt;
    opt.out_dir = out;
    opt.rel_tol_override = rel_tol;
    return run_scenario(cfg, opt).report;
}

void criterion_4_10() {
    namespace fs = std::filesystem;
    const ScenarioConfig cfg = load_scenario(scenario_path("critical_p1.json"));

    const json a = run_sweep(cfg, "acceptance_runs/a", 1e-10);
    const json b = run_sweep(cfg, "acceptance_runs/b", 1e-10);
    const json c = run_sweep(cfg, "acceptance_runs/c", 5e-11);

    const json& ed = a["error_decay"];
    const double o_rho = ed["rho_order"]["order"].get<double>();
    const double o_grad = ed["grad_rho_order"]["order"].get<double>();
    const double o_rp = ed["r_prime_order"]["order"].get<double>();
    const double o_i1 = ed["int_grad_order"]["order"].get<double>();
    const double o_i2 = ed["int_r_prime_order"]["order"].get<double>();
    const bool c4 = std::fabs(o_rho - 1.0) <= 0.15 &&
                    std::fabs(o_grad - 1.0) <= 0.15 && o_rp >= 0.5 - 0.1 &&
                    std::fabs(o_i1 - 2.0) <= 0.3 && std::fabs(o_i2 - 2.0) <= 0.3;
    report(4, "singular-limit eps orders", c4,
           "orders: rho " + format_double(o_rho) + ", grad rho " +
               format_double(o_grad) + ", r' " + format_double(o_rp) +
               ", integrals " + format_double(o_i1) + "/" + format_double(o_i2));

    const bool identical = a.dump() == b.dump();
    double max_shift = 0;
    for (const char* key : {"rho_order", "grad_rho_order", "r_prime_order",
                            "int_grad_order", "int_r_prime_order"}) {
        const double da = a["error_decay"][key]["order"].get<double>();
        const double dc = c["error_decay"][key]["order"].get<double>();
        max_shift = std::max(max_shift, std::fabs(da - dc));
    }
    report(10, "determinism and tolerance robustness", identical && max_shift <= 0.02,
           std::string("reports ") + (identical ? "bit-identical" : "DIFFER") +
               ", max order shift under tol halving " + format_double(max_shift));
    fs::remove_all("acceptance_runs");
}

void criterion_5() {
    const ScenarioConfig cfg = load_scenario(scenario_path("supercritical_p2.json"));
    SolverConfig solver;
    solver.T = 1000.0;
    const ProblemSetup sup(0.1, cfg.op, cfg.m, Dissipation(2.0), cfg.u0, cfg.u1);
    const Trajectory sup_traj = solve_hyperbolic(sup, solver);
    const SupercriticalReport rep = verify_supercritical(sup, sup_traj);

    const ProblemSetup crit(0.1, cfg.op, cfg.m, Dissipation(1.0), cfg.u0, cfg.u1);
    const Trajectory crit_traj = solve_hyperbolic(crit, solver);
    const double H0 = hamiltonian_initial(crit);
    double tail = 1e300;
    for (std::size_t i = 0; i < crit_traj.times.size(); ++i)
        if (crit_traj.times[i] >= 500.0)
            tail = std::min(tail, hamiltonian(crit, crit_traj.u_samples[i],
                                              crit_traj.v_samples[i]));
    const bool pass = rep.pointwise_ok && rep.tail_ok && tail < 1e-4 * H0;
    report(5, "supercritical dichotomy", pass,
           "p=2 tail inf / floor " +
               format_double(rep.tail_infimum / rep.floor) +
               ", p=1 tail / H0 " + format_double(tail / H0));
}

void criterion_6() {
    OperatorSpec op({1.0});
    const ProblemSetup setup(0.05, op, Nonlinearity::constant(1.0),
                             Dissipation(1.0), {1.0}, {0.0});
    SolverConfig solver;
    solver.T = 50.0;
    solver.rel_tol = 1e-12;
    const Trajectory traj = solve_parabolic(setup, solver);
    double worst = 0;
    bool small_ok = true;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double exact = std::exp(-((1.0 + t) * (1.0 + t) - 1.0) / 2.0);
        if (exact > 1e-250)
            worst = std::max(worst,
                             std::fabs(traj.u_samples[i][0] - exact) / exact);
        else
            small_ok = small_ok && std::fabs(traj.u_samples[i][0]) < 1e-200;
    }
    // exact weighted integral of |A^(1/2)u|^2 with weight (1+s): 1/2
    auto f = [](double s) { return std::exp(-((1.0 + s) * (1.0 + s) - 1.0)); };
    const WeightedIntegral w = weighted_integral(traj.times, f, 1.0, 50.0, true);
    const double integral = w.value + w.tail;
    const bool pass = worst <= 1e-8 && small_ok &&
                      std::fabs(integral - 0.5) <= 1e-4;
    report(6, "parabolic closed-form oracle", pass,
           "max rel error " + format_double(worst) + ", weighted integral " +
               format_double(integral));
}

void criterion_7() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> U(0.05, 3.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const double c1 = U(rng), c2 = U(rng), y0 = U(rng), omega = U(rng);
        const double bound = lemma_sqrt_bound(y0, c1, c2);
        double y = y0;
        for (double t = 0.0; t < 15.0; t += 5e-5) {
            const double psi = 0.5 + std::sin(omega * t) * std::sin(omega * t);
            y += 5e-5 * psi * (-c1 * y + c2 * std::sqrt(std::max(y, 0.0)));
            if (y > bound * (1.0 + 1e-6)) { ++violations; break; }
        }
    }
    for (int trial = 0; trial < 200; ++trial) {
        const double a1 = U(rng), a2 = U(rng), a3 = U(rng);
        double y = 0.0, G1 = 0.0, G2 = 0.0, G3 = 0.0;
        for (double t = 0.0; t < 3.0; t += 5e-5) {
            const double g1 = a1 * (1.0 + std::cos(t) * std::cos(t));
            const double g2 = a2 * std::exp(-t);
            const double g3 = a3 * (2.0 + std::sin(3.0 * t));
            y += 5e-5 * (-g1 + g2 * y + g3);
            G1 += 5e-5 * g1;
            G2 += 5e-5 * g2;
            G3 += 5e-5 * g3;
            if (y + G1 > std::exp(G2) * G3 * (1.0 + 1e-6)) { ++violations; break; }
        }
    }
    report(7, "comparison-lemma property suites", violations == 0,
           std::to_string(violations) + " violations in 400 randomized instances");
}

void criterion_8() {
    std::vector<double> times;
    for (int i = 0; i <= 400; ++i)
        times.push_back(std::expm1(std::log1p(1000.0) * i / 400.0));
    double worst = 0;
    const SpectralVector w0{1.3, -0.4};
    const double scale = std::sqrt(1.3 * 1.3 + 0.4 * 0.4);
    for (double eps : {0.5, 0.1, 0.01})
        worst = std::max(worst, verify_corrector_ode(eps, w0, times) / scale);

    const ScenarioConfig cfg = load_scenario(scenario_path("zero_mode_layer.json"));
    const ProblemSetup setup(0.1, cfg.op, cfg.m, Dissipation(1.0), cfg.u0, cfg.u1);
    SolverConfig solver;
    solver.T = 1000.0;
    const Trajectory hyp = solve_hyperbolic(setup, solver);
    const Trajectory par = solve_parabolic(setup, solver);
    const ErrorDecomposition d =
        assemble(hyp, par, setup.eps, corrector_initial_velocity(setup));
    double worst_r = 0;
    for (std::size_t i = 0; i < d.times.size(); ++i)
        worst_r = std::max(worst_r, std::fabs(d.r[i][0]));
    const bool pass = worst <= 1e-12 && worst_r <= 1e-10;
    report(8, "corrector exactness", pass,
           "layer-equation residual " + format_double(worst) +
               ", kernel-mode |r| " + format_double(worst_r));
}

}  // namespace

int main() {
    const std::vector<StandardRun> runs = standard_runs();
    criterion_1_2_9(runs);
    criterion_3();
    criterion_4_10();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("%s\n", failures == 0 ? "all criteria passed"
                                      : "some criteria FAILED");
    return failures == 0 ? 0 : 1;
}
