#pragma once

// Integrates the reduced problem b(t) u' + m(|A^(1/2)u|^2) A u = 0.  The
// substitution tau = ((1+t)^(p+1) - 1)/(p+1) turns the system into
// du/dtau = -c Lambda u, which removes the (1+t)^p growth from the
// right-hand side; u' is reconstructed from the right-hand side exactly.

#include "kirchlab/hyperbolic.hpp"
#include "kirchlab/model.hpp"
#include "kirchlab/trajectory.hpp"

namespace kirchlab {

Trajectory solve_parabolic(const ProblemSetup& setup, const SolverConfig& cfg);

// u''(t); for p = 1 the explicit spectral formula
//   u'' = -c A u + (1+t)^2 c^2 A^2 u + 2 (1+t)^2 c m'(|A^(1/2)u|^2) |Au|^2 A u,
// otherwise centered finite differences of u' with adaptive h.
SpectralVector parabolic_second_derivative(const ProblemSetup& setup,
                                           const Trajectory& traj, double t);

struct ParabolicDecayReport {
    int k = 0;
    double sup_weighted = 0.0;       // sup_t (1+t)^(2k) |A^(k/2) u|^2
    double integral_weighted = 0.0;  // int_0^T (1+s)^(2k+1) |A^((k+1)/2) u|^2
    double normalizer = 0.0;         // |u0|^2 + |A^(k/2) u0|^2
    double sup_ratio = 0.0;
    double integral_ratio = 0.0;
    bool growth_flag = false;
};

ParabolicDecayReport check_parabolic_decay(const ProblemSetup& setup,
                                           const Trajectory& traj, int k);

}  // namespace kirchlab
