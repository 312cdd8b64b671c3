#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kirchlab/parabolic.hpp"

using namespace kirchlab;

namespace {

// constant stiffness mu: modes decouple and
//   u_i(t) = u0_i exp(-mu lambda_i ((1+t)^(p+1) - 1)/(p+1))
double exact_mode(double mu, double lambda, double u0, double p, double t) {
    const double tau = (std::pow(1.0 + t, p + 1.0) - 1.0) / (p + 1.0);
    return u0 * std::exp(-mu * lambda * tau);
}

}  // namespace

TEST_CASE("constant-stiffness closed form, critical damping") {
    OperatorSpec op({1.0, 3.0});
    const ProblemSetup setup(0.05, op, Nonlinearity::constant(1.0),
                             Dissipation(1.0), {1.0, -0.5}, {0.0, 0.0});
    SolverConfig cfg;
    cfg.T = 50.0;
    cfg.rel_tol = 1e-12;
    const Trajectory traj = solve_parabolic(setup, cfg);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        for (std::size_t k = 0; k < 2; ++k) {
            const double exact =
                exact_mode(1.0, op.lambda(k), setup.u0[k], 1.0, t);
            if (std::fabs(exact) > 1e-250) {
                // Approx degrades to an absolute check for tiny values;
                // compare the relative error directly.
                const double rel =
                    std::fabs(traj.u_samples[i][k] - exact) / std::fabs(exact);
                CHECK(rel < 1e-8);
            } else {
                CHECK(std::fabs(traj.u_samples[i][k]) < 1e-200);
            }
        }
    }
}

TEST_CASE("closed form for subcritical and constant damping") {
    for (double p : {0.0, 0.5}) {
        OperatorSpec op({2.0});
        const ProblemSetup setup(0.05, op, Nonlinearity::constant(0.7),
                                 Dissipation(p), {0.8}, {0.0});
        SolverConfig cfg;
        cfg.T = 5.0;
        const Trajectory traj = solve_parabolic(setup, cfg);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double exact =
                exact_mode(0.7, 2.0, 0.8, p, traj.times[i]);
            CHECK(traj.u_samples[i][0] == doctest::Approx(exact).epsilon(1e-8));
        }
    }
}

TEST_CASE("velocity samples equal the right-hand side exactly") {
    OperatorSpec op({1.0, 2.0});
    const ProblemSetup setup(0.05, op, Nonlinearity::affine(1.0, 0.5),
                             Dissipation(1.0), {0.5, -0.3}, {0.0, 0.0});
    SolverConfig cfg;
    cfg.T = 20.0;
    const Trajectory traj = solve_parabolic(setup, cfg);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double tp = std::pow(1.0 + t, 1.0);
        const double c = setup.stiffness(traj.u_samples[i]);
        for (std::size_t k = 0; k < 2; ++k) {
            const double expect = -(tp * (c * (op.lambda(k) * traj.u_samples[i][k])));
            CHECK(traj.v_samples[i][k] == expect);  // bitwise
        }
    }
}

TEST_CASE("second derivative: spectral formula vs finite differences") {
    OperatorSpec op({1.0, 2.0});
    const ProblemSetup setup(0.05, op, Nonlinearity::affine(1.0, 0.5),
                             Dissipation(1.0), {0.5, -0.3}, {0.0, 0.0});
    SolverConfig cfg;
    cfg.T = 10.0;
    const Trajectory traj = solve_parabolic(setup, cfg);
    for (double t : {0.5, 2.0, 7.0}) {
        const SpectralVector acc = parabolic_second_derivative(setup, traj, t);
        // centered difference of the dense velocity
        const double h = 1e-5;
        const SpectralVector vp = traj.eval_v(t + h), vm = traj.eval_v(t - h);
        for (std::size_t k = 0; k < 2; ++k) {
            const double fd = (vp[k] - vm[k]) / (2.0 * h);
            CHECK(acc[k] == doctest::Approx(fd).epsilon(1e-4));
        }
    }
    CHECK_THROWS(parabolic_second_derivative(setup, traj, 0.0));
}

TEST_CASE("weighted decay report on the closed form") {
    OperatorSpec op({1.0});
    const ProblemSetup setup(0.05, op, Nonlinearity::constant(1.0),
                             Dissipation(1.0), {1.0}, {0.0});
    SolverConfig cfg;
    cfg.T = 50.0;
    const Trajectory traj = solve_parabolic(setup, cfg);
    const ParabolicDecayReport rep = check_parabolic_decay(setup, traj, 0);
    CHECK(!rep.growth_flag);
    CHECK(rep.sup_ratio > 0.0);
    CHECK(rep.integral_ratio > 0.0);
    // |u|^2 starts at its maximum |u0|^2 = 1, normalizer |u0|^2 + |u0|^2 = 2
    CHECK(rep.sup_ratio == doctest::Approx(0.5).epsilon(1e-9));
}
