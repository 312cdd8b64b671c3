#pragma once

// The boundary-layer corrector theta_eps and the error functions
// rho_eps = u_eps - u and r_eps = rho_eps - theta_eps.

#include "kirchlab/model.hpp"
#include "kirchlab/trajectory.hpp"

namespace kirchlab {

// theta_eps(t) = (eps/(1-eps)) (1 - (1+t)^(1 - 1/eps)) w0,
// theta_eps'(t) = w0 (1+t)^(-1/eps).
// Scalar shape factors; powers go through exp(a ln(1+t)) and clamp to 0
// below 1e-300 (the true value is then outside representable range and all
// downstream uses are additive).
struct ThetaShape {
    double value;       // coefficient of w0 in theta
    double derivative;  // coefficient of w0 in theta'
};
ThetaShape theta_shape(double eps, double t);

std::pair<SpectralVector, SpectralVector> theta(double eps,
                                                const SpectralVector& w0,
                                                double t);

// max over the samples of |eps theta'' + (1+t)^(-1) theta'|, exact algebraic
// cancellation up to rounding (p = 1)
double verify_corrector_ode(double eps, const SpectralVector& w0,
                            const std::vector<double>& times);

struct ErrorDecomposition {
    std::vector<double> times;             // union evaluation grid
    std::vector<SpectralVector> rho;       // u_eps - u
    std::vector<SpectralVector> theta;     // corrector
    std::vector<SpectralVector> r;         // rho - theta
    std::vector<SpectralVector> r_prime;   // u_eps' - u' - theta'
    std::vector<SpectralVector> rho_prime; // u_eps' - u'
};

ErrorDecomposition assemble(const Trajectory& hyp, const Trajectory& par,
                            double eps, const SpectralVector& w0);

}  // namespace kirchlab
