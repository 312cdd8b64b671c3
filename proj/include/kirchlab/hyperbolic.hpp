#pragma once

// Integrates eps u'' + b(t) u' + m(|A^(1/2)u|^2) A u = 0 from (u0, u1) with
// boundary-layer-resolving adaptive steps.  Besides (u, u') the integrator
// carries quadrature states for the dissipation integral and the four
// weighted integrals used by the explicit-constant bound suite, so those
// are available at integrator accuracy on the output grid:
//   diss = 2 int_0^t b |u'|^2
//   w1_du = int (1+s) |u'|^2          w1_au = int (1+s) |A^(1/2)u|^2
//   w3_du = int (1+s)^3 |A^(1/2)u'|^2 w3_au = int (1+s)^3 |Au|^2

#include "kirchlab/model.hpp"
#include "kirchlab/ode.hpp"
#include "kirchlab/trajectory.hpp"

namespace kirchlab {

struct SolverConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-290;
    double T = 1e3;
    std::int64_t max_steps = 50'000'000;
    int log_points = 400;
    int layer_points = 100;

    void validate() const {
        if (!(rel_tol >= 1e-12 && rel_tol <= 1e-4))
            throw std::invalid_argument("SolverConfig: rel_tol outside [1e-12, 1e-4]");
        if (!(T > 0.0)) throw std::invalid_argument("SolverConfig: T must be > 0");
    }
};

Trajectory solve_hyperbolic(const ProblemSetup& setup, const SolverConfig& cfg);

// defect |eps u'' + b u' + c A u| of the dense interpolant at time t
double residual(const ProblemSetup& setup, const Trajectory& traj, double t);

// H(t) = eps |u'|^2 + M(|A^(1/2)u|^2) evaluated at a trajectory sample
double hamiltonian(const ProblemSetup& setup, const SpectralVector& u,
                   const SpectralVector& v);

// max over output times of |H(t) + 2 int_0^t b |u'|^2 - H(0)|, relative to H(0)
double hamiltonian_identity_gap(const ProblemSetup& setup, const Trajectory& traj);

}  // namespace kirchlab
