#include "kirchlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kirchlab {

namespace {

// adaptive Simpson with absolute tolerance
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb, double whole, double tol,
               int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// golden-section refinement of a maximum of g around [lo, hi]
double golden_max(const std::function<double(double)>& g, double lo, double hi,
                  double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double g1 = g(x1), g2 = g(x2);
    while (b - a > tol) {
        if (g1 < g2) {
            a = x1; x1 = x2; g1 = g2;
            x2 = a + gr * (b - a); g2 = g(x2);
        } else {
            b = x2; x2 = x1; g2 = g1;
            x1 = b - gr * (b - a); g1 = g(x1);
        }
    }
    return std::max(g(a), std::max(g1, std::max(g2, g(b))));
}

// grid scan followed by golden-section refinement around the best cell
double scan_max(const std::function<double(double)>& g, double hi, double tol) {
    if (hi <= 0.0) return g(0.0);
    const int n = 2048;
    double best = -std::numeric_limits<double>::infinity();
    int besti = 0;
    for (int i = 0; i <= n; ++i) {
        double x = hi * static_cast<double>(i) / n;
        double v = g(x);
        if (v > best) { best = v; besti = i; }
    }
    double lo = hi * static_cast<double>(std::max(0, besti - 1)) / n;
    double up = hi * static_cast<double>(std::min(n, besti + 1)) / n;
    return std::max(best, golden_max(g, lo, up, tol));
}

}  // namespace

Nonlinearity Nonlinearity::constant(double mu) {
    if (!(mu > 0.0))
        throw std::invalid_argument("Nonlinearity::constant: mu must be > 0");
    Nonlinearity m;
    m.family_ = Family::Constant;
    m.a_ = mu;
    return m;
}

Nonlinearity Nonlinearity::affine(double a, double b) {
    if (!(a > 0.0))
        throw std::invalid_argument("Nonlinearity::affine: a must be > 0");
    if (!(b >= 0.0))
        throw std::invalid_argument("Nonlinearity::affine: slope must be >= 0");
    Nonlinearity m;
    m.family_ = Family::Affine;
    m.a_ = a;
    m.b_ = b;
    return m;
}

Nonlinearity Nonlinearity::table(std::vector<double> sigma,
                                 std::vector<double> values) {
    if (sigma.size() < 2 || sigma.size() != values.size())
        throw std::invalid_argument("Nonlinearity::table: need >= 2 paired knots");
    if (sigma.front() != 0.0)
        throw std::invalid_argument("Nonlinearity::table: first knot must be 0");
    for (std::size_t i = 1; i < sigma.size(); ++i)
        if (!(sigma[i] > sigma[i - 1]))
            throw std::invalid_argument("Nonlinearity::table: knots must increase");
    for (double v : values)
        if (!(v > 0.0))
            throw std::invalid_argument("Nonlinearity::table: values must be > 0");

    Nonlinearity m;
    m.family_ = Family::Table;
    m.knots_ = std::move(sigma);
    m.values_ = std::move(values);

    // C^1 cubic Hermite: centered finite-difference slopes, one-sided at the
    // ends; slope 0 at the last knot so the constant extrapolation is C^1
    std::size_t n = m.knots_.size();
    m.slopes_.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        m.slopes_[i] = (m.values_[i + 1] - m.values_[i - 1]) /
                       (m.knots_[i + 1] - m.knots_[i - 1]);
    m.slopes_[0] = (m.values_[1] - m.values_[0]) / (m.knots_[1] - m.knots_[0]);
    m.slopes_[n - 1] = 0.0;
    return m;
}

void Nonlinearity::table_segment(double sigma, std::size_t& seg, double& s,
                                 double& h) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), sigma);
    seg = static_cast<std::size_t>(it - knots_.begin());
    if (seg > 0) --seg;
    if (seg + 1 >= knots_.size()) seg = knots_.size() - 2;
    h = knots_[seg + 1] - knots_[seg];
    s = (sigma - knots_[seg]) / h;
}

double Nonlinearity::eval(double sigma) const {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("Nonlinearity::eval: sigma must be >= 0");
    switch (family_) {
        case Family::Constant: return a_;
        case Family::Affine: return a_ + b_ * sigma;
        case Family::Table: break;
    }
    if (sigma >= knots_.back()) return values_.back();
    std::size_t seg; double s, h;
    table_segment(sigma, seg, s, h);
    double y0 = values_[seg], y1 = values_[seg + 1];
    double d0 = slopes_[seg] * h, d1 = slopes_[seg + 1] * h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d1;
}

double Nonlinearity::deriv(double sigma) const {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("Nonlinearity::deriv: sigma must be >= 0");
    switch (family_) {
        case Family::Constant: return 0.0;
        case Family::Affine: return b_;
        case Family::Table: break;
    }
    if (sigma >= knots_.back()) return 0.0;
    std::size_t seg; double s, h;
    table_segment(sigma, seg, s, h);
    double y0 = values_[seg], y1 = values_[seg + 1];
    double d0 = slopes_[seg] * h, d1 = slopes_[seg + 1] * h;
    double s2 = s * s;
    return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * d0 +
            (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * d1) / h;
}

double Nonlinearity::antiderivative(double sigma) const {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("Nonlinearity::antiderivative: sigma >= 0");
    switch (family_) {
        case Family::Constant: return a_ * sigma;
        case Family::Affine: return a_ * sigma + 0.5 * b_ * sigma * sigma;
        case Family::Table: break;
    }
    return adaptive_simpson([this](double s) { return eval(s); }, 0.0, sigma,
                            1e-12);
}

double Nonlinearity::mu1() const {
    switch (family_) {
        case Family::Constant: return a_;
        case Family::Affine: return a_;  // slope >= 0, inf at sigma = 0
        case Family::Table: break;
    }
    // the Hermite interpolant can undershoot the knot values between knots:
    // minimize each cubic segment exactly via the roots of its derivative
    double best = values_.back();  // constant extrapolation value
    for (std::size_t seg = 0; seg + 1 < knots_.size(); ++seg) {
        double h = knots_[seg + 1] - knots_[seg];
        double y0 = values_[seg], y1 = values_[seg + 1];
        double d0 = slopes_[seg] * h, d1 = slopes_[seg + 1] * h;
        best = std::min(best, std::min(y0, y1));
        // derivative in s: (6s^2-6s) y0 + (3s^2-4s+1) d0 + (-6s^2+6s) y1 + (3s^2-2s) d1
        double A = 6 * (y0 - y1) + 3 * (d0 + d1);
        double B = -6 * (y0 - y1) - 4 * d0 - 2 * d1;
        double C = d0;
        auto val = [&](double s) {
            double s2 = s * s, s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 +
                   (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d1;
        };
        if (A == 0.0) {
            if (B != 0.0) {
                double s = -C / B;
                if (s > 0.0 && s < 1.0) best = std::min(best, val(s));
            }
        } else {
            double disc = B * B - 4 * A * C;
            if (disc >= 0.0) {
                double sq = std::sqrt(disc);
                for (double s : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)})
                    if (s > 0.0 && s < 1.0) best = std::min(best, val(s));
            }
        }
    }
    return best;
}

double Nonlinearity::max_on(double hi) const {
    switch (family_) {
        case Family::Constant: return a_;
        case Family::Affine: return a_ + b_ * hi;  // monotone, right endpoint
        case Family::Table: break;
    }
    return scan_max([this](double s) { return eval(s); }, hi, 1e-10);
}

double Nonlinearity::max_abs_deriv_on(double hi) const {
    switch (family_) {
        case Family::Constant: return 0.0;
        case Family::Affine: return b_;
        case Family::Table: break;
    }
    return scan_max([this](double s) { return std::abs(deriv(s)); }, hi, 1e-10);
}

double hamiltonian_initial(const ProblemSetup& setup) {
    double sigma0 = norm_power_sq(setup.op, 0.5, setup.u0);
    double u1sq = inner(setup.u1, setup.u1);
    return setup.eps * u1sq + setup.m.antiderivative(sigma0);
}

double compute_mu2(const ProblemSetup& setup) {
    double mu1 = setup.m.mu1();
    double hi = hamiltonian_initial(setup) / mu1;
    return setup.m.max_on(hi);
}

double compute_L(const ProblemSetup& setup) {
    double mu1 = setup.m.mu1();
    double hi = hamiltonian_initial(setup) / mu1;
    return setup.m.max_abs_deriv_on(hi);
}

KConstants compute_k_constants(const ProblemSetup& setup) {
    double mu1 = setup.m.mu1();
    double mu2 = compute_mu2(setup);
    double u0sq = inner(setup.u0, setup.u0);
    double u1sq = inner(setup.u1, setup.u1);
    double au0sq = norm_power_sq(setup.op, 0.5, setup.u0);   // |A^(1/2) u0|^2
    double au1sq = norm_power_sq(setup.op, 0.5, setup.u1);   // |A^(1/2) u1|^2
    double a1u0sq = norm_power_sq(setup.op, 1.0, setup.u0);  // |A u0|^2

    KConstants k;
    k.k1 = std::max(2.0, 1.0 / mu1) *
           (mu2 / mu1 * (u1sq + u0sq) + u1sq + mu2 * au0sq);
    k.k2 = std::max(8.0, 1.0 / mu1) * (k.k1 + u1sq + u0sq);
    k.k3 = k.k2 + 0.5 * (au0sq + au1sq);
    k.k4 = std::max(1.0, 2.0 * mu2) *
           (au1sq / mu1 + a1u0sq + 4.0 / mu1 * k.k3);
    return k;
}

double compute_eps0(const ProblemSetup& setup) {
    double mu1 = setup.m.mu1();
    double mu2 = compute_mu2(setup);
    double L = compute_L(setup);
    KConstants k = compute_k_constants(setup);

    double eps0 = std::min(1.0 / 8.0, mu1 / (8.0 * mu2));
    eps0 = std::min(eps0, mu1 / (128.0 * mu2));

    SpectralVector au0 = apply_power(setup.op, 1.0, setup.u0);
    double pairing = std::abs(inner(setup.u1, au0));
    if (L * pairing > 0.0)
        eps0 = std::min(eps0, 0.999 * mu1 / (4.0 * L * pairing));

    double lk = L * (k.k1 + k.k4);
    if (lk > 0.0) {
        double cap = mu1 / (2.0 * lk);
        eps0 = std::min(eps0, cap * cap);
    }
    return eps0;
}

SpectralVector corrector_initial_velocity(const ProblemSetup& setup) {
    double c0 = setup.stiffness(setup.u0);
    double inv_b0 = 1.0 / setup.b.b(0.0);
    SpectralVector w0(setup.op.size());
    for (std::size_t i = 0; i < w0.size(); ++i)
        w0[i] = setup.u1[i] + inv_b0 * (c0 * (setup.op.lambda(i) * setup.u0[i]));
    return w0;
}

DerivedConstants derived_constants(const ProblemSetup& setup) {
    DerivedConstants d;
    d.mu1 = setup.m.mu1();
    d.mu2 = compute_mu2(setup);
    d.L = compute_L(setup);
    d.H0 = hamiltonian_initial(setup);
    KConstants k = compute_k_constants(setup);
    d.k1 = k.k1; d.k2 = k.k2; d.k3 = k.k3; d.k4 = k.k4;
    d.eps0 = compute_eps0(setup);
    d.w0 = corrector_initial_velocity(setup);
    return d;
}

}  // namespace kirchlab
