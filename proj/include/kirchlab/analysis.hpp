#pragma once

// Rate extraction and the four headline verdicts: hyperbolic decay rates,
// decay-error rates in eps, the supercritical non-decay floor, and the
// higher-order error families.

#include <string>

#include "kirchlab/energies.hpp"
#include "kirchlab/parabolic.hpp"

namespace kirchlab {

// least-squares slope of ln q against ln(1+t) on a window
struct DecayFit {
    double rate = 0;       // q(t) ~ C (1+t)^(-rate)
    double intercept = 0;  // ln C
    double residual = 0;   // RMS of ln-residuals
    double window_lo = 0, window_hi = 0;
    bool ok = false;
    std::string note;      // set when the fit is rejected
};

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& values,
                        double window_lo, double window_hi);

// least-squares slope of ln y against ln eps
struct OrderFit {
    double order = 0;   // y(eps) ~ C eps^order
    double residual = 0;
    bool ok = false;
    std::string note;
};

OrderFit fit_order(const std::vector<double>& eps_values,
                   const std::vector<double>& y_values);

// critical-dissipation decay of the hyperbolic solution itself:
//   (1+t)^2 (eps|u'|^2 + |A^(1/2)u|^2) bounded, and in the coercive case
//   |A^(1/2)u|^2 decays with fitted rate ~ 2
struct HyperbolicDecayReport {
    double sup_weighted_energy = 0;   // sup (1+t)^2 (eps|u'|^2+|A^(1/2)u|^2)
    DecayFit gradient_fit;            // on |A^(1/2)u|^2, coercive case
    bool coercive = false;
    bool bounded = false;             // weighted sup attained away from the end
};

HyperbolicDecayReport verify_hyperbolic_decay(const ProblemSetup& setup,
                                              const Trajectory& traj,
                                              double window_lo, double window_hi);

// eps-sweep of the decomposition against the five decay-error estimates:
//   sup |rho| = O(eps)            sup (1+t)|A^(1/2)rho| = O(eps)
//   sup (1+t)|r'| = O(sqrt(eps))  int (1+s)|A^(1/2)rho|^2 = O(eps^2)
//   int (1+s)|r'|^2 = O(eps^2)
// Inputs are the raw norm series per eps; weights applied here.
struct ErrorDecayReport {
    std::vector<double> eps_values;
    std::vector<double> sup_rho, sup_grad_rho, sup_r_prime;
    std::vector<double> int_grad_rho, int_r_prime;
    OrderFit rho_order;        // expected 1
    OrderFit grad_rho_order;   // expected 1
    OrderFit r_prime_order;    // expected >= 1/2
    OrderFit int_grad_order;   // expected 2
    OrderFit int_r_prime_order;  // expected 2
    bool monotone = true;  // sup values nonincreasing in eps order (flag only)
};

ErrorDecayReport verify_error_decay(
    const std::vector<double>& eps_values,
    const std::vector<std::vector<double>>& times,
    const std::vector<std::vector<double>>& rho_norm,
    const std::vector<std::vector<double>>& grad_rho_norm,
    const std::vector<std::vector<double>>& r_prime_norm);

// supercritical non-decay: H(t) >= H(0) exp(-(2/eps) B(t)) pointwise and the
// tail infimum stays above half of the limiting floor H(0) exp(-(2/eps) B(inf))
struct SupercriticalReport {
    double floor = 0;          // H(0) exp(-(2/eps) B(inf))
    double min_pointwise_ratio = 0;  // min H(t) / (H(0) e^{-(2/eps)B(t)})
    double tail_infimum = 0;   // inf of H over the last decade
    bool pointwise_ok = false;
    bool tail_ok = false;
};

SupercriticalReport verify_supercritical(const ProblemSetup& setup,
                                         const Trajectory& traj);

// order-k error energies stay bounded on the horizon for k >= 2
struct HigherOrderReport {
    int k = 0;
    double sup_cal_D = 0, sup_cal_E = 0, sup_cal_G = 0;
    bool bounded = false;
};

HigherOrderReport verify_higher_order(const ProblemSetup& setup,
                                      const Trajectory& hyp,
                                      const ErrorDecomposition& decomp, int k);

}  // namespace kirchlab
