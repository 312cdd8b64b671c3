#include "kirchlab/corrector.hpp"

#include <algorithm>
#include <cmath>

namespace kirchlab {

namespace {

double safe_power(double base_log, double exponent) {
    // exp(exponent * base_log) with underflow clamped to 0
    double e = exponent * base_log;
    if (e < -700.0) return 0.0;
    return std::exp(e);
}

}  // namespace

ThetaShape theta_shape(double eps, double t) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("theta_shape: need 0 < eps < 1");
    if (!(t >= 0.0)) throw std::invalid_argument("theta_shape: need t >= 0");
    double lg = std::log1p(t);
    ThetaShape s;
    s.value = eps / (1.0 - eps) * (1.0 - safe_power(lg, 1.0 - 1.0 / eps));
    s.derivative = safe_power(lg, -1.0 / eps);
    return s;
}

std::pair<SpectralVector, SpectralVector> theta(double eps,
                                                const SpectralVector& w0,
                                                double t) {
    ThetaShape s = theta_shape(eps, t);
    SpectralVector val(w0.size()), der(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) {
        val[i] = s.value * w0[i];
        der[i] = s.derivative * w0[i];
    }
    return {std::move(val), std::move(der)};
}

double verify_corrector_ode(double eps, const SpectralVector& w0,
                            const std::vector<double>& times) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("verify_corrector_ode: need 0 < eps < 1");
    double w0n = norm(w0);
    double worst = 0.0;
    for (double t : times) {
        double lg = std::log1p(t);
        // theta'' = -(1/eps) w0 (1+t)^(-1/eps - 1)
        double tdd = -(1.0 / eps) * safe_power(lg, -1.0 / eps - 1.0);
        double td = safe_power(lg, -1.0 / eps);
        double res = std::abs(eps * tdd + td / (1.0 + t)) * w0n;
        worst = std::max(worst, res);
    }
    return worst;
}

ErrorDecomposition assemble(const Trajectory& hyp, const Trajectory& par,
                            double eps, const SpectralVector& w0) {
    if (hyp.u_samples.empty() || par.u_samples.empty())
        throw std::invalid_argument("assemble: empty trajectory");
    if (hyp.u_samples[0].size() != par.u_samples[0].size() ||
        w0.size() != hyp.u_samples[0].size())
        throw std::invalid_argument("assemble: setup mismatch");

    double T = std::min(hyp.horizon(), par.horizon());
    std::vector<double> grid;
    grid.reserve(hyp.times.size() + par.times.size());
    for (double t : hyp.times)
        if (t <= T) grid.push_back(t);
    for (double t : par.times)
        if (t <= T) grid.push_back(t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const std::size_t n = w0.size();
    ErrorDecomposition d;
    d.times = std::move(grid);
    d.rho.resize(d.times.size());
    d.theta.resize(d.times.size());
    d.r.resize(d.times.size());
    d.r_prime.resize(d.times.size());
    d.rho_prime.resize(d.times.size());

    SpectralVector ue, ve, u, v;
    for (std::size_t j = 0; j < d.times.size(); ++j) {
        double t = d.times[j];
        // exact grid samples where available, dense interpolation otherwise
        if (t == 0.0) {
            ue = hyp.u_samples[0];
            ve = hyp.v_samples[0];
            u = par.u_samples[0];
            v = par.v_samples[0];
        } else {
            hyp.eval(t, ue, ve);
            par.eval(t, u, v);
        }
        ThetaShape s = theta_shape(eps, t);
        auto& rho = d.rho[j];
        auto& th = d.theta[j];
        auto& r = d.r[j];
        auto& rp = d.r_prime[j];
        auto& rhop = d.rho_prime[j];
        rho.resize(n); th.resize(n); r.resize(n); rp.resize(n); rhop.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            rho[i] = ue[i] - u[i];
            th[i] = s.value * w0[i];
            r[i] = rho[i] - th[i];
            rhop[i] = ve[i] - v[i];
            rp[i] = rhop[i] - s.derivative * w0[i];
        }
    }
    return d;
}

}  // namespace kirchlab
