#pragma once

// Spectral representation of a selfadjoint nonnegative operator: the
// operator is a finite list of eigenvalues, vectors are mode coefficients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kirchlab {

using SpectralVector = std::vector<double>;

class OperatorSpec {
public:
    // Eigenvalues are sorted ascending; zero modes (lambda = 0) are allowed
    // and end up first, which keeps the noncoercive case explicit.
    explicit OperatorSpec(std::vector<double> eigenvalues)
        : lambda_(std::move(eigenvalues)) {
        if (lambda_.empty())
            throw std::invalid_argument("OperatorSpec: need at least one eigenvalue");
        for (double l : lambda_) {
            if (!(l >= 0.0))
                throw std::invalid_argument("OperatorSpec: eigenvalues must be >= 0");
        }
        std::sort(lambda_.begin(), lambda_.end());
    }

    std::size_t size() const { return lambda_.size(); }
    const std::vector<double>& eigenvalues() const { return lambda_; }
    double lambda(std::size_t i) const { return lambda_[i]; }
    double lambda_max() const { return lambda_.back(); }
    std::size_t zero_modes() const {
        std::size_t n = 0;
        while (n < lambda_.size() && lambda_[n] == 0.0) ++n;
        return n;
    }

private:
    std::vector<double> lambda_;
};

inline void check_paired(const OperatorSpec& op, const SpectralVector& x,
                         const char* where) {
    if (x.size() != op.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

// lambda^alpha with the 0^0 = 1 convention, so alpha = 0 is the identity
// including on the kernel.
inline double eigen_power(double lambda, double alpha) {
    if (alpha == 0.0) return 1.0;
    return std::pow(lambda, alpha);
}

inline SpectralVector apply_power(const OperatorSpec& op, double alpha,
                                  const SpectralVector& x) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("apply_power: alpha must be >= 0");
    check_paired(op, x, "apply_power");
    SpectralVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = eigen_power(op.lambda(i), alpha) * x[i];
    return r;
}

// |A^alpha x| = sqrt(sum lambda_i^(2 alpha) x_i^2)
inline double norm_power(const OperatorSpec& op, double alpha,
                         const SpectralVector& x) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("norm_power: alpha must be >= 0");
    check_paired(op, x, "norm_power");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double w = eigen_power(op.lambda(i), alpha) * x[i];
        s += w * w;
    }
    return std::sqrt(s);
}

// sum lambda_i^(2 alpha) x_i^2, avoids the sqrt/square round trip
inline double norm_power_sq(const OperatorSpec& op, double alpha,
                            const SpectralVector& x) {
    if (!(alpha >= 0.0))
        throw std::invalid_argument("norm_power_sq: alpha must be >= 0");
    check_paired(op, x, "norm_power_sq");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double w = eigen_power(op.lambda(i), alpha) * x[i];
        s += w * w;
    }
    return s;
}

inline double inner(const SpectralVector& x, const SpectralVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("inner: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const SpectralVector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace kirchlab
