#pragma once

// Problem data: the Kirchhoff nonlinearity m, the power-law dissipation b,
// the full setup, and the explicit constants mu1, mu2, L, H(0), w0,
// k1..k4, eps0.

#include <functional>
#include <memory>
#include <vector>

#include "kirchlab/spectral.hpp"

namespace kirchlab {

// m : [0, inf) -> (0, inf) of class C^1 with inf m = mu1 > 0.
// Three families: constant mu, affine a + b*sigma (a > 0, b >= 0), and a
// tabulated C^1 spline extended constantly beyond its last knot.
class Nonlinearity {
public:
    enum class Family { Constant, Affine, Table };

    static Nonlinearity constant(double mu);
    static Nonlinearity affine(double a, double b);
    // knots must start at 0 and be strictly increasing; values > 0
    static Nonlinearity table(std::vector<double> sigma, std::vector<double> values);

    Family family() const { return family_; }

    double eval(double sigma) const;
    double deriv(double sigma) const;
    // M(sigma) = int_0^sigma m(s) ds. Closed form for constant/affine,
    // adaptive Simpson to 1e-12 absolute for the table family.
    double antiderivative(double sigma) const;

    // inf_{sigma >= 0} m(sigma)
    double mu1() const;
    // max of m on [0, hi]
    double max_on(double hi) const;
    // max of |m'| on [0, hi]
    double max_abs_deriv_on(double hi) const;

    // family parameters (for serialization)
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

private:
    Nonlinearity() = default;

    Family family_ = Family::Constant;
    double a_ = 1.0;  // constant: mu; affine: a
    double b_ = 0.0;  // affine: slope
    // table family: cubic Hermite with finite-difference slopes
    std::vector<double> knots_, values_, slopes_;

    void table_segment(double sigma, std::size_t& seg, double& s, double& h) const;
};

// b(t) = (1+t)^(-p), p >= 0.  p = 0 constant, p = 1 critical, p > 1
// supercritical.
struct Dissipation {
    double p = 1.0;

    explicit Dissipation(double p_) : p(p_) {
        if (!(p >= 0.0)) throw std::invalid_argument("Dissipation: p must be >= 0");
    }
    double b(double t) const { return std::pow(1.0 + t, -p); }
    double b_deriv(double t) const { return -p * std::pow(1.0 + t, -p - 1.0); }
    // B(t) = int_0^t b(s) ds
    double b_integral(double t) const {
        if (p == 1.0) return std::log1p(t);
        return (std::pow(1.0 + t, 1.0 - p) - 1.0) / (1.0 - p);
    }
};

struct ProblemSetup {
    double eps;
    OperatorSpec op;
    Nonlinearity m;
    Dissipation b;
    SpectralVector u0;
    SpectralVector u1;

    ProblemSetup(double eps_, OperatorSpec op_, Nonlinearity m_, Dissipation b_,
                 SpectralVector u0_, SpectralVector u1_)
        : eps(eps_), op(std::move(op_)), m(std::move(m_)), b(b_),
          u0(std::move(u0_)), u1(std::move(u1_)) {
        if (!(eps > 0.0)) throw std::invalid_argument("ProblemSetup: eps must be > 0");
        check_paired(op, u0, "ProblemSetup u0");
        check_paired(op, u1, "ProblemSetup u1");
    }

    // c = m(|A^(1/2) u|^2); the single entry point so that every module
    // computes the stiffness coefficient bit-identically
    double stiffness(const SpectralVector& u) const {
        return m.eval(norm_power_sq(op, 0.5, u));
    }
};

struct DerivedConstants {
    double mu1 = 0, mu2 = 0, L = 0, H0 = 0;
    double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
    double eps0 = 0;
    SpectralVector w0;
};

// H(0) = eps |u1|^2 + M(|A^(1/2) u0|^2)
double hamiltonian_initial(const ProblemSetup& setup);

// mu2 = max { m(sigma) : 0 <= sigma <= H(0)/mu1 }
double compute_mu2(const ProblemSetup& setup);

// L = max { |m'(sigma)| : 0 <= sigma <= H(0)/mu1 }
double compute_L(const ProblemSetup& setup);

struct KConstants { double k1, k2, k3, k4; };
KConstants compute_k_constants(const ProblemSetup& setup);

// Largest eps0 satisfying
//   eps0 <= min{ 1/8, mu1/(8 mu2), mu1/(128 mu2) },
//   (2 L |<u1, A u0>| / mu1) eps0 < 1/2   (taken with a 0.999 factor),
//   sqrt(eps0) <= mu1 / (2 L (k1 + k4)).
// Conditions with a vanishing denominator are unconstraining.
double compute_eps0(const ProblemSetup& setup);

// w0 = u1 + (1/b(0)) m(|A^(1/2) u0|^2) A u0;  b(0) = 1 for power laws
SpectralVector corrector_initial_velocity(const ProblemSetup& setup);

DerivedConstants derived_constants(const ProblemSetup& setup);

}  // namespace kirchlab
