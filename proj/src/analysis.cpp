#include "kirchlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kirchlab/hyperbolic.hpp"

namespace kirchlab {

namespace {

// slope/intercept of least squares y = a + b x
void lsq(const std::vector<double>& x, const std::vector<double>& y,
         double& a, double& b, double& rms) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    b = (n * sxy - sx * sy) / det;
    a = (sy - b * sx) / n;
    double acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (a + b * x[i]);
        acc += r * r;
    }
    rms = std::sqrt(acc / n);
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(
        std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& values,
                        double window_lo, double window_hi) {
    DecayFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay_rate: length mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < window_lo || times[i] > window_hi) continue;
        if (!(values[i] > 1e-290)) {
            fit.note = "nonpositive or underflowed value inside the window";
            return fit;
        }
        x.push_back(std::log1p(times[i]));
        y.push_back(std::log(values[i]));
    }
    if (x.size() < 8) {
        fit.note = "fewer than 8 usable points in the window";
        return fit;
    }
    const double decades = (x.back() - x.front()) / std::log(10.0);
    if (decades < 0.95) {
        fit.note = "window spans less than one decade of 1+t";
        return fit;
    }
    double a, b, rms;
    lsq(x, y, a, b, rms);
    fit.rate = -b;
    fit.intercept = a;
    fit.residual = rms;
    fit.ok = true;
    return fit;
}

OrderFit fit_order(const std::vector<double>& eps_values,
                   const std::vector<double>& y_values) {
    OrderFit fit;
    if (eps_values.size() != y_values.size())
        throw std::invalid_argument("fit_order: length mismatch");
    if (eps_values.size() < 3) {
        fit.note = "need at least 3 sweep points";
        return fit;
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < eps_values.size(); ++i) {
        if (!(eps_values[i] > 0.0) || !(y_values[i] > 0.0)) {
            fit.note = "nonpositive sweep value";
            return fit;
        }
        x.push_back(std::log(eps_values[i]));
        y.push_back(std::log(y_values[i]));
    }
    double a, b, rms;
    lsq(x, y, a, b, rms);
    fit.order = b;
    fit.residual = rms;
    fit.ok = true;
    return fit;
}

HyperbolicDecayReport verify_hyperbolic_decay(const ProblemSetup& setup,
                                              const Trajectory& traj,
                                              double window_lo, double window_hi) {
    HyperbolicDecayReport rep;
    rep.coercive = setup.op.eigenvalues().front() > 0.0;
    std::vector<double> weighted(traj.times.size()), grad(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double w = 1.0 + traj.times[i];
        grad[i] = norm_power_sq(setup.op, 0.5, traj.u_samples[i]);
        weighted[i] = w * w * (setup.eps * norm_power_sq(setup.op, 0.0, traj.v_samples[i])
                               + grad[i]);
    }
    const std::size_t peak = argmax(weighted);
    rep.sup_weighted_energy = weighted[peak];
    rep.bounded = peak + 1 < traj.times.size();
    if (rep.coercive)
        rep.gradient_fit = fit_decay_rate(traj.times, grad, window_lo, window_hi);
    return rep;
}

ErrorDecayReport verify_error_decay(
    const std::vector<double>& eps_values,
    const std::vector<std::vector<double>>& times,
    const std::vector<std::vector<double>>& rho_norm,
    const std::vector<std::vector<double>>& grad_rho_norm,
    const std::vector<std::vector<double>>& r_prime_norm) {
    const std::size_t n = eps_values.size();
    if (times.size() != n || rho_norm.size() != n || grad_rho_norm.size() != n
        || r_prime_norm.size() != n)
        throw std::invalid_argument("verify_error_decay: sweep length mismatch");
    ErrorDecayReport rep;
    rep.eps_values = eps_values;
    for (std::size_t j = 0; j < n; ++j) {
        const std::vector<double>& t = times[j];
        double s_rho = 0, s_grad = 0, s_rp = 0, i_grad = 0, i_rp = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double w = 1.0 + t[i];
            s_rho = std::max(s_rho, rho_norm[j][i]);
            s_grad = std::max(s_grad, w * grad_rho_norm[j][i]);
            s_rp = std::max(s_rp, w * r_prime_norm[j][i]);
            if (i + 1 < t.size()) {
                const double wn = 1.0 + t[i + 1];
                const double h = t[i + 1] - t[i];
                i_grad += 0.5 * h * (w * grad_rho_norm[j][i] * grad_rho_norm[j][i] +
                                     wn * grad_rho_norm[j][i + 1] * grad_rho_norm[j][i + 1]);
                i_rp += 0.5 * h * (w * r_prime_norm[j][i] * r_prime_norm[j][i] +
                                   wn * r_prime_norm[j][i + 1] * r_prime_norm[j][i + 1]);
            }
        }
        rep.sup_rho.push_back(s_rho);
        rep.sup_grad_rho.push_back(s_grad);
        rep.sup_r_prime.push_back(s_rp);
        rep.int_grad_rho.push_back(i_grad);
        rep.int_r_prime.push_back(i_rp);
    }
    // eps_values are expected largest-first; non-monotone sups are flagged
    for (std::size_t j = 1; j < n; ++j)
        if (rep.sup_rho[j] > rep.sup_rho[j - 1] * (1.0 + 1e-9)) rep.monotone = false;
    rep.rho_order = fit_order(eps_values, rep.sup_rho);
    rep.grad_rho_order = fit_order(eps_values, rep.sup_grad_rho);
    rep.r_prime_order = fit_order(eps_values, rep.sup_r_prime);
    rep.int_grad_order = fit_order(eps_values, rep.int_grad_rho);
    rep.int_r_prime_order = fit_order(eps_values, rep.int_r_prime);
    return rep;
}

SupercriticalReport verify_supercritical(const ProblemSetup& setup,
                                         const Trajectory& traj) {
    if (!(setup.b.p > 1.0))
        throw std::invalid_argument("verify_supercritical: needs p > 1");
    SupercriticalReport rep;
    const double H0 = hamiltonian_initial(setup);
    const double b_total = 1.0 / (setup.b.p - 1.0);  // int_0^inf (1+s)^(-p)
    rep.floor = H0 * std::exp(-(2.0 / setup.eps) * b_total);

    rep.min_pointwise_ratio = std::numeric_limits<double>::infinity();
    rep.tail_infimum = std::numeric_limits<double>::infinity();
    const double tail_start = (1.0 + traj.horizon()) / 10.0 - 1.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double H = hamiltonian(setup, traj.u_samples[i], traj.v_samples[i]);
        const double lower = H0 * std::exp(-(2.0 / setup.eps) * setup.b.b_integral(t));
        rep.min_pointwise_ratio = std::min(rep.min_pointwise_ratio, H / lower);
        if (t >= tail_start) rep.tail_infimum = std::min(rep.tail_infimum, H);
    }
    rep.pointwise_ok = rep.min_pointwise_ratio >= 1.0 - 1e-6;
    rep.tail_ok = rep.tail_infimum >= 0.5 * rep.floor;
    return rep;
}

HigherOrderReport verify_higher_order(const ProblemSetup& setup,
                                      const Trajectory& hyp,
                                      const ErrorDecomposition& decomp, int k) {
    if (k < 2) throw std::invalid_argument("verify_higher_order: needs k >= 2");
    HigherOrderReport rep;
    rep.k = k;
    const double eps = setup.eps;
    const OperatorSpec& op = setup.op;
    const double hk = static_cast<double>(k - 1) / 2.0;
    std::vector<double> d(decomp.times.size()), e(decomp.times.size()),
        g(decomp.times.size());
    for (std::size_t i = 0; i < decomp.times.size(); ++i) {
        const double t = decomp.times[i];
        const double w = 1.0 + t;
        const double wk = std::pow(w, 2.0 * (k - 1));
        const double c = setup.stiffness(hyp.eval_u(t));
        const SpectralVector& rho = decomp.rho[i];
        const SpectralVector& rhop = decomp.rho_prime[i];
        const SpectralVector& rp = decomp.r_prime[i];
        d[i] = 0.5 * (1.0 - eps) * wk * norm_power_sq(op, hk, rho)
             + eps * wk * w * inner(apply_power(op, hk, rhop),
                                    apply_power(op, hk, rho));
        e[i] = eps * wk * norm_power_sq(op, hk, rp) / c
             + wk * norm_power_sq(op, k / 2.0, rho);
        g[i] = wk * norm_power_sq(op, (k - 2.0) / 2.0, rp);
    }
    const std::size_t id = argmax(d), ie = argmax(e), ig = argmax(g);
    rep.sup_cal_D = d[id];
    rep.sup_cal_E = e[ie];
    rep.sup_cal_G = g[ig];
    const std::size_t last = decomp.times.size() - 1;
    rep.bounded = std::isfinite(rep.sup_cal_D) && std::isfinite(rep.sup_cal_E)
               && std::isfinite(rep.sup_cal_G)
               && id != last && ie != last && ig != last;
    return rep;
}

}  // namespace kirchlab
