#include "kirchlab/energies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kirchlab {

EnergySample eval_energies(const ProblemSetup& setup, const Trajectory& traj,
                           std::size_t time_index,
                           const ErrorDecomposition* decomp,
                           std::size_t decomp_index, int k) {
    if (time_index >= traj.times.size())
        throw std::out_of_range("eval_energies: time index");
    const double t = traj.times[time_index];
    const double w = 1.0 + t;
    const double eps = setup.eps;
    const SpectralVector& u = traj.u_samples[time_index];
    const SpectralVector& v = traj.v_samples[time_index];
    const OperatorSpec& op = setup.op;

    EnergySample s;
    s.t = t;
    const double au_half_sq = norm_power_sq(op, 0.5, u);
    s.c_eps = setup.stiffness(u);
    s.c_eps_prime = setup.m.deriv(au_half_sq) * 2.0 * inner(apply_power(op, 0.5, v), apply_power(op, 0.5, u));
    s.H = eps * norm_power_sq(op, 0.0, v) + setup.m.antiderivative(au_half_sq);
    s.D_eps0 = 0.5 * (1.0 - eps) * norm_power_sq(op, 0.0, u) + eps * w * inner(v, u);
    s.D_eps1 = 0.5 * (1.0 - 3.0 * eps) * w * w * au_half_sq
             + eps * w * w * w * inner(v, apply_power(op, 1.0, u));
    s.F_eps = eps * norm_power_sq(op, 0.5, v) / s.c_eps + norm_power_sq(op, 1.0, u);
    s.G_eps = w * w * norm_power_sq(op, 0.0, v);

    if (decomp) {
        if (decomp_index >= decomp->times.size())
            throw std::out_of_range("eval_energies: decomposition index");
        const SpectralVector& rho = decomp->rho[decomp_index];
        const SpectralVector& rhop = decomp->rho_prime[decomp_index];
        const SpectralVector& r = decomp->r[decomp_index];
        const SpectralVector& rp = decomp->r_prime[decomp_index];
        (void)r;
        s.cal_D = 0.5 * (1.0 - eps) * norm_power_sq(op, 0.0, rho)
                + eps * w * inner(rhop, rho);
        s.cal_E = eps * norm_power_sq(op, 0.0, rp) / s.c_eps
                + norm_power_sq(op, 0.5, rho);
        if (k >= 1) {
            const double hk = static_cast<double>(k - 1) / 2.0;
            const double wk = std::pow(w, 2.0 * (k - 1));
            s.cal_D_k = 0.5 * (1.0 - eps) * wk * norm_power_sq(op, hk, rho)
                      + eps * wk * w * inner(apply_power(op, hk, rhop),
                                             apply_power(op, hk, rho));
            s.cal_E_k = eps * std::pow(w, 2.0 * k - 2.0)
                          * norm_power_sq(op, (k - 1.0) / 2.0, rp) / s.c_eps
                      + std::pow(w, 2.0 * k - 2.0) * norm_power_sq(op, k / 2.0, rho);
            s.cal_G_k = std::pow(w, 2.0 * k - 2.0)
                      * norm_power_sq(op, (k - 2.0) / 2.0, rp);
        }
    }
    return s;
}

namespace {

// composite trapezoid of f(s) (1+s)^w on the given nodes
double trapezoid(const std::vector<double>& grid,
                 const std::function<double(double)>& f, double w) {
    double acc = 0.0;
    double prev = f(grid.front()) * std::pow(1.0 + grid.front(), w);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = f(grid[i]) * std::pow(1.0 + grid[i], w);
        acc += 0.5 * (grid[i] - grid[i - 1]) * (prev + cur);
        prev = cur;
    }
    return acc;
}

}  // namespace

WeightedIntegral weighted_integral(const std::vector<double>& grid,
                                   const std::function<double(double)>& integrand,
                                   double weight, double T,
                                   bool tail_extrapolation) {
    if (grid.size() < 2) throw std::invalid_argument("weighted_integral: grid too small");
    const double coarse = trapezoid(grid, integrand, weight);

    // midpoint refinement: split every cell once
    std::vector<double> fine;
    fine.reserve(2 * grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        fine.push_back(grid[i]);
        fine.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    fine.push_back(grid.back());
    const double refined = trapezoid(fine, integrand, weight);

    WeightedIntegral out;
    out.weight = weight;
    // Richardson: trapezoid error drops by 4 under halving
    out.value = refined + (refined - coarse) / 3.0;
    out.refine_error = std::fabs(refined - coarse) / 3.0;
    out.converged = out.refine_error <= 0.01 * std::max(std::fabs(out.value), 1e-300);

    if (tail_extrapolation && grid.back() >= T) {
        // fit f(s)(1+s)^w ~ C (1+s)^(-q) on the last decade and integrate
        // analytically past T when q > 1
        const double tb = grid.back();
        const double ta = std::max(grid.front(), (1.0 + tb) / 10.0 - 1.0);
        const double ga = integrand(ta) * std::pow(1.0 + ta, weight);
        const double gb = integrand(tb) * std::pow(1.0 + tb, weight);
        if (ga > 0.0 && gb > 0.0 && ta < tb) {
            const double q = -(std::log(gb) - std::log(ga))
                           / (std::log1p(tb) - std::log1p(ta));
            if (q > 1.0) out.tail = gb * (1.0 + tb) / (q - 1.0);
        }
    }
    return out;
}

SConditionReport s_condition_margin(const ProblemSetup& setup,
                                    const Trajectory& traj) {
    SConditionReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const EnergySample s = eval_energies(setup, traj, i);
        const double lhs = setup.eps * std::fabs(s.c_eps_prime) / s.c_eps;
        const double margin = 1.0 / (2.0 * (1.0 + s.t)) - lhs;
        if (margin < rep.margin) {
            rep.margin = margin;
            rep.argmin = s.t;
        }
    }
    return rep;
}

double lemma_sqrt_bound(double y0, double c1, double c2) {
    if (!(c1 > 0.0)) throw std::invalid_argument("lemma_sqrt_bound: c1 must be > 0");
    const double ratio = c2 / c1;
    return std::max(y0, ratio * ratio);
}

double lemma_lin_bound(double G1, double G2, double G3) {
    return std::exp(G2) * G3 - G1;
}

BoundSuiteReport bound_suite(const ProblemSetup& setup, const Trajectory& traj,
                             const DerivedConstants& dc, double slack) {
    BoundSuiteReport rep;
    rep.slack = slack;
    const double eps = setup.eps;
    const OperatorSpec& op = setup.op;
    const std::vector<double>& w1_du = traj.aux_series("w1_du");
    const std::vector<double>& w1_au = traj.aux_series("w1_au");
    const std::vector<double>& w3_du = traj.aux_series("w3_du");
    const std::vector<double>& w3_au = traj.aux_series("w3_au");

    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double w = 1.0 + traj.times[i];
        const SpectralVector& u = traj.u_samples[i];
        const SpectralVector& v = traj.v_samples[i];
        const double e_lhs = w * w * (eps * norm_power_sq(op, 0.0, v)
                                      + norm_power_sq(op, 0.5, u))
                           + w1_du[i];
        rep.lhs_decay_E = std::max(rep.lhs_decay_E, e_lhs);
        rep.lhs_D0_final = std::max(rep.lhs_D0_final,
                                    norm_power_sq(op, 0.0, u) + w1_au[i]);
        const double f_lhs = std::pow(w, 4) * (eps * norm_power_sq(op, 0.5, v)
                                               + norm_power_sq(op, 1.0, u))
                           + w3_du[i];
        rep.lhs_F = std::max(rep.lhs_F, f_lhs);
        rep.lhs_D1_final = std::max(rep.lhs_D1_final, w3_au[i]);
    }
    rep.bound_decay_E = dc.k1;
    rep.bound_D0_final = dc.k2;
    rep.bound_F = dc.k4;
    rep.bound_D1_final = (dc.k4 + dc.k3) / dc.mu1;
    const double g = 1.0 + slack;
    rep.pass = rep.lhs_decay_E <= g * rep.bound_decay_E
            && rep.lhs_D0_final <= g * rep.bound_D0_final
            && rep.lhs_F <= g * rep.bound_F
            && rep.lhs_D1_final <= g * rep.bound_D1_final;
    return rep;
}

}  // namespace kirchlab
