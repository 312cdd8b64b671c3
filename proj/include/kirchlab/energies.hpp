#pragma once

// Energy functionals of the proofs, the weighted integrals of the theorem
// statements, the S-condition margin, the explicit-constant bound suite and
// the two ODE comparison lemmas.

#include <functional>
#include <optional>

#include "kirchlab/corrector.hpp"
#include "kirchlab/model.hpp"
#include "kirchlab/trajectory.hpp"

namespace kirchlab {

struct EnergySample {
    double t = 0;
    double H = 0;        // eps|u'|^2 + M(|A^(1/2)u|^2)
    double D_eps0 = 0;   // (1-eps)/2 |u|^2 + eps(1+t)<u',u>
    double D_eps1 = 0;   // (1-3eps)/2 (1+t)^2 |A^(1/2)u|^2 + eps(1+t)^3 <u',Au>
    double F_eps = 0;    // eps |A^(1/2)u'|^2 / c + |Au|^2
    double G_eps = 0;    // (1+t)^2 |u'|^2
    double c_eps = 0;
    double c_eps_prime = 0;  // chain rule: m'(.) 2 <A^(1/2)u', A^(1/2)u>
    // error-side energies, present when a decomposition sample is supplied
    std::optional<double> cal_D;  // (1-eps)/2 |rho|^2 + eps(1+t)<rho',rho>
    std::optional<double> cal_E;  // eps |r'|^2 / c + |A^(1/2)rho|^2
    std::optional<double> cal_D_k, cal_E_k, cal_G_k;  // order-k family
};

EnergySample eval_energies(const ProblemSetup& setup, const Trajectory& traj,
                           std::size_t time_index,
                           const ErrorDecomposition* decomp = nullptr,
                           std::size_t decomp_index = 0, int k = 0);

struct WeightedIntegral {
    double weight = 0;       // exponent w of (1+s)^w
    double value = 0;        // over [0, T] (plus tail extrapolation if asked)
    double refine_error = 0; // |trapezoid - refined| / 3
    double tail = 0;
    bool converged = true;   // refine_error <= 1% of value
};

// integrand(s) already contains the squared quantity; trapezoid on the grid,
// midpoint-refined once and Richardson-combined; optional geometric tail
// extrapolation past T
WeightedIntegral weighted_integral(const std::vector<double>& grid,
                                   const std::function<double(double)>& integrand,
                                   double weight, double T,
                                   bool tail_extrapolation = false);

struct SConditionReport {
    double margin = 0;  // min over t of 1/(2(1+t)) - eps |c'|/c
    double argmin = 0;
};

SConditionReport s_condition_margin(const ProblemSetup& setup,
                                    const Trajectory& traj);

// Lemma bound for y' <= psi (-c1 y + c2 sqrt(y)):  max{y(0), (c2/c1)^2}
double lemma_sqrt_bound(double y0, double c1, double c2);

// Lemma bound for y' <= -g1 + g2 y + g3, y(0) = 0:  y(t) <= e^G2 G3 - G1
double lemma_lin_bound(double G1, double G2, double G3);

// Explicit-constant bound suite on a hyperbolic trajectory (p = 1,
// eps <= eps0).  Left sides use the integrator's quadrature states.
struct BoundSuiteReport {
    double lhs_decay_E = 0, bound_decay_E = 0;    // <= k1
    double lhs_D0_final = 0, bound_D0_final = 0;  // <= k2
    double lhs_F = 0, bound_F = 0;                // <= k4
    double lhs_D1_final = 0, bound_D1_final = 0;  // <= (k4+k3)/mu1
    double slack = 1e-6;
    bool pass = false;
};

BoundSuiteReport bound_suite(const ProblemSetup& setup, const Trajectory& traj,
                             const DerivedConstants& dc, double slack = 1e-6);

}  // namespace kirchlab
