#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kirchlab/analysis.hpp"
#include "kirchlab/hyperbolic.hpp"

using namespace kirchlab;

namespace {

std::vector<double> log_grid(double T, int n) {
    std::vector<double> g;
    for (int i = 0; i <= n; ++i)
        g.push_back(std::expm1(std::log1p(T) * i / n));
    return g;
}

}  // namespace

TEST_CASE("exact power law recovered to tight accuracy") {
    const std::vector<double> t = log_grid(1000.0, 500);
    std::vector<double> q;
    for (double s : t) q.push_back(4.0 * std::pow(1.0 + s, -2.0));
    const DecayFit fit = fit_decay_rate(t, q, 1.0, 1000.0);
    CHECK(fit.ok);
    CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.intercept == doctest::Approx(std::log(4.0)).epsilon(1e-9));
    CHECK(fit.residual < 1e-9);
}

TEST_CASE("oscillatory modulation stays within the advertised slack") {
    const std::vector<double> t = log_grid(1000.0, 800);
    std::vector<double> q;
    for (double s : t)
        q.push_back(std::pow(1.0 + s, -2.0) * (2.0 + std::sin(std::log1p(s))));
    const DecayFit fit = fit_decay_rate(t, q, 1.0, 1000.0);
    CHECK(fit.ok);
    CHECK(std::fabs(fit.rate - 2.0) <= 0.2);
}

TEST_CASE("fit rejections: nonpositive values and short windows") {
    const std::vector<double> t = log_grid(1000.0, 300);
    std::vector<double> q(t.size(), 1.0);
    q[150] = 0.0;
    CHECK(!fit_decay_rate(t, q, 1.0, 1000.0).ok);
    std::vector<double> ok_q;
    for (double s : t) ok_q.push_back(std::pow(1.0 + s, -1.0));
    CHECK(!fit_decay_rate(t, ok_q, 100.0, 200.0).ok);  // well under a decade
}

TEST_CASE("super-polynomial decay drifts with the window") {
    // Gaussian-in-t series: the fitted exponent must steepen as the window
    // moves right, which is the drift the fit reports through its residual
    const std::vector<double> t = log_grid(100.0, 600);
    std::vector<double> q;
    for (double s : t)
        q.push_back(std::exp(-((1.0 + s) * (1.0 + s) - 1.0) / 50.0));
    const DecayFit early = fit_decay_rate(t, q, 1.0, 20.0);
    const DecayFit late = fit_decay_rate(t, q, 9.0, 100.0);
    CHECK(early.ok);
    CHECK(late.ok);
    CHECK(late.rate > early.rate + 1.0);
}

TEST_CASE("order fit on synthetic sweeps") {
    const std::vector<double> eps{1e-3, 5e-4, 2.5e-4, 1.25e-4};
    std::vector<double> y;
    for (double e : eps) y.push_back(3.0 * e);
    const OrderFit lin = fit_order(eps, y);
    CHECK(lin.ok);
    CHECK(lin.order == doctest::Approx(1.0).epsilon(1e-10));
    y.clear();
    for (double e : eps) y.push_back(0.7 * e * e);
    CHECK(fit_order(eps, y).order == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(!fit_order({1e-3, 1e-4}, {1.0, 1.0}).ok);   // too few points
    CHECK(!fit_order(eps, {1.0, 1.0, 0.0, 1.0}).ok);  // nonpositive value
}

TEST_CASE("zero data: every sup vanishes") {
    OperatorSpec op({1.0, 4.0});
    const ProblemSetup setup(0.1, op, Nonlinearity::constant(1.0),
                             Dissipation(1.0), {0.0, 0.0}, {0.0, 0.0});
    SolverConfig cfg;
    cfg.T = 10.0;
    const Trajectory traj = solve_hyperbolic(setup, cfg);
    const HyperbolicDecayReport rep = verify_hyperbolic_decay(setup, traj, 1.0, 10.0);
    CHECK(rep.sup_weighted_energy == 0.0);
}

TEST_CASE("kernel mode: displacement bounded, gradient unaffected") {
    OperatorSpec op({0.0, 1.0, 4.0});
    const ProblemSetup setup(0.05, op, Nonlinearity::affine(1.0, 0.25),
                             Dissipation(1.0), {0.5, 0.3, -0.2},
                             {0.2, -0.1, 0.1});
    SolverConfig cfg;
    cfg.T = 1000.0;
    const Trajectory traj = solve_hyperbolic(setup, cfg);
    const HyperbolicDecayReport rep =
        verify_hyperbolic_decay(setup, traj, 100.0, 1000.0);
    CHECK(!rep.coercive);
    CHECK(rep.bounded);
    // the kernel component converges but does not decay
    const double u_end = traj.u_samples.back()[0];
    CHECK(std::fabs(u_end) > 0.1);
}

TEST_CASE("supercritical floor and the critical contrast") {
    OperatorSpec op({1.0});
    Nonlinearity m = Nonlinearity::constant(1.0);
    SolverConfig cfg;
    cfg.T = 1000.0;

    const ProblemSetup sup_setup(0.1, op, m, Dissipation(2.0), {1.0}, {0.5});
    const Trajectory sup_traj = solve_hyperbolic(sup_setup, cfg);
    const SupercriticalReport rep = verify_supercritical(sup_setup, sup_traj);
    const double H0 = hamiltonian_initial(sup_setup);
    CHECK(rep.floor == doctest::Approx(H0 * std::exp(-20.0)));
    CHECK(rep.pointwise_ok);
    CHECK(rep.tail_ok);

    const ProblemSetup crit_setup(0.1, op, m, Dissipation(1.0), {1.0}, {0.5});
    const Trajectory crit_traj = solve_hyperbolic(crit_setup, cfg);
    double tail = 1e300;
    for (std::size_t i = 0; i < crit_traj.times.size(); ++i)
        if (crit_traj.times[i] >= 500.0)
            tail = std::min(tail, hamiltonian(crit_setup, crit_traj.u_samples[i],
                                              crit_traj.v_samples[i]));
    CHECK(tail < 1e-4 * hamiltonian_initial(crit_setup));

    CHECK_THROWS_AS(verify_supercritical(crit_setup, crit_traj),
                    std::invalid_argument);
}
