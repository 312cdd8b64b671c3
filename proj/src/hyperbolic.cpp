#include "kirchlab/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

namespace kirchlab {

namespace {

constexpr double kBlowupThreshold = 1e12;

// state layout: [u(0..N), v(N..2N), diss, w1_du, w1_au, w3_du, w3_au]
class HyperbolicSystem final : public OdeSystem {
public:
    explicit HyperbolicSystem(const ProblemSetup& s)
        : setup_(s), n_(s.op.size()) {}

    static constexpr std::size_t kAux = 5;
    std::size_t size() const override { return 2 * n_ + kAux; }

    void rhs(double t, const std::vector<double>& y,
             std::vector<double>& f) const override {
        f.resize(size());
        const auto& lam = setup_.op.eigenvalues();
        double sigma = 0.0, vsq = 0.0, lvsq = 0.0, l2usq = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double lu = lam[i] * y[i] * y[i];
            sigma += lu;
            vsq += y[n_ + i] * y[n_ + i];
            lvsq += lam[i] * y[n_ + i] * y[n_ + i];
            l2usq += lam[i] * lam[i] * y[i] * y[i];
        }
        double c = setup_.m.eval(sigma);
        double b = setup_.b.b(t);
        for (std::size_t i = 0; i < n_; ++i) {
            f[i] = y[n_ + i];
            f[n_ + i] = -(b * y[n_ + i] + c * (lam[i] * y[i])) / setup_.eps;
        }
        double w1 = 1.0 + t;
        double w3 = w1 * w1 * w1;
        f[2 * n_ + 0] = 2.0 * b * vsq;
        f[2 * n_ + 1] = w1 * vsq;
        f[2 * n_ + 2] = w1 * sigma;
        f[2 * n_ + 3] = w3 * lvsq;
        f[2 * n_ + 4] = w3 * l2usq;
    }

    void dfdt(double t, const std::vector<double>& y,
              std::vector<double>& ft) const override {
        ft.assign(size(), 0.0);
        const auto& lam = setup_.op.eigenvalues();
        double bp = setup_.b.b_deriv(t);
        double sigma = 0.0, vsq = 0.0, lvsq = 0.0, l2usq = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            sigma += lam[i] * y[i] * y[i];
            vsq += y[n_ + i] * y[n_ + i];
            lvsq += lam[i] * y[n_ + i] * y[n_ + i];
            l2usq += lam[i] * lam[i] * y[i] * y[i];
        }
        for (std::size_t i = 0; i < n_; ++i)
            ft[n_ + i] = -bp * y[n_ + i] / setup_.eps;
        double w1 = 1.0 + t;
        double w2 = 3.0 * w1 * w1;
        ft[2 * n_ + 0] = 2.0 * bp * vsq;
        ft[2 * n_ + 1] = vsq;
        ft[2 * n_ + 2] = sigma;
        ft[2 * n_ + 3] = w2 * lvsq;
        ft[2 * n_ + 4] = w2 * l2usq;
    }

    // (alpha I - J) with the mode-coupled block reduced to
    //   M = alpha (alpha + b/eps) I + (1/eps)(c Lambda + 2 m' w w^T),
    // diagonal plus symmetric rank one, solved by Sherman-Morrison.
    bool factor(double alpha, double t, const std::vector<double>& y) override {
        const auto& lam = setup_.op.eigenvalues();
        alpha_ = alpha;
        t_ = t;
        u_.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_));
        v_.assign(y.begin() + static_cast<std::ptrdiff_t>(n_),
                  y.begin() + static_cast<std::ptrdiff_t>(2 * n_));
        double sigma = 0.0;
        for (std::size_t i = 0; i < n_; ++i) sigma += lam[i] * u_[i] * u_[i];
        c_ = setup_.m.eval(sigma);
        b_ = setup_.b.b(t);
        double mp = setup_.m.deriv(sigma);
        double beta = 2.0 * mp / setup_.eps;

        dinv_.resize(n_);
        w_.resize(n_);
        dinvw_.resize(n_);
        double wdw = 0.0;
        double diag0 = alpha * (alpha + b_ / setup_.eps);
        for (std::size_t i = 0; i < n_; ++i) {
            w_[i] = lam[i] * u_[i];
            double d = diag0 + c_ * lam[i] / setup_.eps;
            if (!(d != 0.0) || !std::isfinite(d)) return false;
            dinv_[i] = 1.0 / d;
            dinvw_[i] = dinv_[i] * w_[i];
            wdw += w_[i] * dinvw_[i];
        }
        denom_ = 1.0 + beta * wdw;
        beta_ = beta;
        if (!(std::abs(denom_) > 1e-12) || !std::isfinite(denom_)) return false;
        return true;
    }

    void solve(std::vector<double>& x) const override {
        double gb = alpha_ + b_ / setup_.eps;
        // main block
        rhs_u_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            rhs_u_[i] = x[n_ + i] + gb * x[i];
        double wr = 0.0;
        for (std::size_t i = 0; i < n_; ++i) wr += w_[i] * dinv_[i] * rhs_u_[i];
        double corr = beta_ * wr / denom_;
        for (std::size_t i = 0; i < n_; ++i) {
            double xu = dinv_[i] * rhs_u_[i] - corr * dinvw_[i];
            double xv = alpha_ * xu - x[i];
            x[i] = xu;
            x[n_ + i] = xv;
        }
        // quadrature rows back-substitute against the main block
        const auto& lam = setup_.op.eigenvalues();
        double w1 = 1.0 + t_;
        double w3 = w1 * w1 * w1;
        double sv = 0.0, s1v = 0.0, s1u = 0.0, s3v = 0.0, s3u = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            sv += v_[i] * x[n_ + i];
            s1v += v_[i] * x[n_ + i];
            s1u += lam[i] * u_[i] * x[i];
            s3v += lam[i] * v_[i] * x[n_ + i];
            s3u += lam[i] * lam[i] * u_[i] * x[i];
        }
        x[2 * n_ + 0] = (x[2 * n_ + 0] + 4.0 * b_ * sv) / alpha_;
        x[2 * n_ + 1] = (x[2 * n_ + 1] + 2.0 * w1 * s1v) / alpha_;
        x[2 * n_ + 2] = (x[2 * n_ + 2] + 2.0 * w1 * s1u) / alpha_;
        x[2 * n_ + 3] = (x[2 * n_ + 3] + 2.0 * w3 * s3v) / alpha_;
        x[2 * n_ + 4] = (x[2 * n_ + 4] + 2.0 * w3 * s3u) / alpha_;
    }

    bool blown_up(const std::vector<double>& y) const override {
        const auto& lam = setup_.op.eigenvalues();
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            s += lam[i] * y[n_ + i] * y[n_ + i] +
                 lam[i] * lam[i] * y[i] * y[i];
        return s > kBlowupThreshold;
    }

private:
    const ProblemSetup& setup_;
    std::size_t n_;
    // factorization workspace
    double alpha_ = 0, t_ = 0, b_ = 0, c_ = 0, beta_ = 0, denom_ = 1;
    std::vector<double> u_, v_, w_, dinv_, dinvw_;
    mutable std::vector<double> rhs_u_;
};

const char* const kAuxNames[HyperbolicSystem::kAux] = {
    "diss", "w1_du", "w1_au", "w3_du", "w3_au"};

}  // namespace

Trajectory solve_hyperbolic(const ProblemSetup& setup, const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t n = setup.op.size();
    HyperbolicSystem sys(setup);

    Trajectory traj;
    traj.times = output_grid(cfg.T, cfg.log_points, cfg.layer_points,
                             10.0 * setup.eps);
    traj.u_samples.resize(traj.times.size());
    traj.v_samples.resize(traj.times.size());
    traj.aux_names.assign(kAuxNames, kAuxNames + HyperbolicSystem::kAux);
    traj.aux.assign(HyperbolicSystem::kAux,
                    std::vector<double>(traj.times.size(), 0.0));
    traj.meta.rel_tol = cfg.rel_tol;
    traj.meta.abs_tol = cfg.abs_tol;
    traj.meta.horizon = cfg.T;

    std::vector<double> y(sys.size(), 0.0);
    std::copy(setup.u0.begin(), setup.u0.end(), y.begin());
    std::copy(setup.u1.begin(), setup.u1.end(),
              y.begin() + static_cast<std::ptrdiff_t>(n));

    // initial data recorded exactly
    traj.u_samples[0] = setup.u0;
    traj.v_samples[0] = setup.u1;
    std::size_t next_out = 1;

    StepperOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_steps = cfg.max_steps;
    opt.h_init = std::min({1e-6, setup.eps * 1e-2, cfg.T});

    auto slice = [n](const std::vector<double>& y_, std::size_t off) {
        return SpectralVector(y_.begin() + static_cast<std::ptrdiff_t>(off),
                              y_.begin() + static_cast<std::ptrdiff_t>(off + n));
    };

    {
        std::vector<double> f0(sys.size());
        sys.rhs(0.0, y, f0);
        traj.nodes.push_back(
            {0.0, slice(y, 0), slice(y, n), slice(f0, n)});
    }

    auto on_step = [&](const StepRecord& rec) {
        traj.nodes.push_back(
            {rec.t1, slice(rec.y1, 0), slice(rec.y1, n), slice(rec.f1, n)});
        while (next_out < traj.times.size() &&
               traj.times[next_out] <= rec.t1 * (1.0 + 1e-15)) {
            double t = traj.times[next_out];
            SpectralVector& u = traj.u_samples[next_out];
            SpectralVector& v = traj.v_samples[next_out];
            u.resize(n);
            v.resize(n);
            if (t >= rec.t1) {
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = rec.y1[i];
                    v[i] = rec.y1[n + i];
                }
                for (std::size_t k = 0; k < HyperbolicSystem::kAux; ++k)
                    traj.aux[k][next_out] = rec.y1[2 * n + k];
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = hermite_value(t, rec.t0, rec.t1, rec.y0[i], rec.y1[i],
                                         rec.y0[n + i], rec.y1[n + i]);
                    v[i] = hermite_value(t, rec.t0, rec.t1, rec.y0[n + i],
                                         rec.y1[n + i], rec.f0[n + i],
                                         rec.f1[n + i]);
                }
                for (std::size_t k = 0; k < HyperbolicSystem::kAux; ++k)
                    traj.aux[k][next_out] = hermite_value(
                        t, rec.t0, rec.t1, rec.y0[2 * n + k], rec.y1[2 * n + k],
                        rec.f0[2 * n + k], rec.f1[2 * n + k]);
            }
            ++next_out;
        }
    };

    StepperStats stats = integrate(sys, 0.0, cfg.T, y, opt, on_step);
    traj.meta.accepted_steps = stats.accepted;
    traj.meta.rejected_steps = stats.rejected;
    return traj;
}

double residual(const ProblemSetup& setup, const Trajectory& traj, double t) {
    SpectralVector u, v;
    traj.eval(t, u, v);
    SpectralVector a = traj.eval_vdot(t);
    double c = setup.stiffness(u);
    double b = setup.b.b(t);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double r = setup.eps * a[i] + b * v[i] + c * setup.op.lambda(i) * u[i];
        s += r * r;
    }
    return std::sqrt(s);
}

double hamiltonian(const ProblemSetup& setup, const SpectralVector& u,
                   const SpectralVector& v) {
    double sigma = norm_power_sq(setup.op, 0.5, u);
    return setup.eps * inner(v, v) + setup.m.antiderivative(sigma);
}

double hamiltonian_identity_gap(const ProblemSetup& setup,
                                const Trajectory& traj) {
    double H0 = hamiltonian(setup, traj.u_samples[0], traj.v_samples[0]);
    const std::vector<double>& diss = traj.aux_series("diss");
    double gap = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double H = hamiltonian(setup, traj.u_samples[i], traj.v_samples[i]);
        gap = std::max(gap, std::abs(H + diss[i] - H0));
    }
    return gap / std::max(H0, 1e-300);
}

}  // namespace kirchlab
