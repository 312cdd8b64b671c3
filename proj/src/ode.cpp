#include "kirchlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kirchlab {

namespace {

// Kaps-Rentrop coefficients, Shampine parametrization
constexpr double GAM = 0.5;
constexpr double A21 = 2.0;
constexpr double A31 = 48.0 / 25.0;
constexpr double A32 = 6.0 / 25.0;
constexpr double C21 = -8.0;
constexpr double C31 = 372.0 / 25.0;
constexpr double C32 = 12.0 / 5.0;
constexpr double C41 = -112.0 / 125.0;
constexpr double C42 = -54.0 / 125.0;
constexpr double C43 = -2.0 / 5.0;
constexpr double B1 = 19.0 / 9.0;
constexpr double B2 = 1.0 / 2.0;
constexpr double B3 = 25.0 / 108.0;
constexpr double B4 = 125.0 / 108.0;
constexpr double E1 = 17.0 / 54.0;
constexpr double E2 = 7.0 / 36.0;
constexpr double E3 = 0.0;
constexpr double E4 = 125.0 / 108.0;
constexpr double C1X = 1.0 / 2.0;
constexpr double C2X = -3.0 / 2.0;
constexpr double C3X = 121.0 / 50.0;
constexpr double C4X = 29.0 / 250.0;
constexpr double A2X = 1.0;
constexpr double A3X = 3.0 / 5.0;

constexpr double SAFETY = 0.9;
constexpr double GROW_LIMIT = 6.0;
constexpr double SHRINK_LIMIT = 0.1;

}  // namespace

StepperStats integrate(OdeSystem& sys, double t0, double t1,
                       std::vector<double>& y, const StepperOptions& opt,
                       const std::function<void(const StepRecord&)>& on_step) {
    const std::size_t n = sys.size();
    if (y.size() != n) throw std::invalid_argument("integrate: bad state size");
    if (!(t1 > t0)) throw std::invalid_argument("integrate: need t1 > t0");

    StepperStats stats;
    std::vector<double> f0(n), ft(n), g1(n), g2(n), g3(n), g4(n);
    std::vector<double> ytmp(n), ynew(n), fnew(n), err(n), yprev(n);

    double t = t0;
    double h = std::min(opt.h_init, t1 - t0);
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);

    sys.rhs(t, y, f0);

    while (t < t1) {
        if (stats.accepted + stats.rejected >= opt.max_steps)
            throw SolverError(SolverError::Kind::MaxSteps, t,
                              "integrate: max_steps exceeded at t=" + std::to_string(t));
        bool final_step = false;
        if (t + 1.02 * h >= t1) {
            h = t1 - t;
            final_step = true;
        }
        const double tnew = final_step ? t1 : t + h;

        sys.dfdt(t, y, ft);
        bool ok = sys.factor(1.0 / (GAM * h), t, y);
        if (ok) {
            // stage 1
            for (std::size_t i = 0; i < n; ++i) g1[i] = f0[i] + h * C1X * ft[i];
            sys.solve(g1);
            // stage 2
            for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + A21 * g1[i];
            sys.rhs(t + A2X * h, ytmp, fnew);
            for (std::size_t i = 0; i < n; ++i)
                g2[i] = fnew[i] + h * C2X * ft[i] + C21 * g1[i] / h;
            sys.solve(g2);
            // stage 3
            for (std::size_t i = 0; i < n; ++i)
                ytmp[i] = y[i] + A31 * g1[i] + A32 * g2[i];
            sys.rhs(t + A3X * h, ytmp, fnew);
            for (std::size_t i = 0; i < n; ++i)
                g3[i] = fnew[i] + h * C3X * ft[i] + (C31 * g1[i] + C32 * g2[i]) / h;
            sys.solve(g3);
            // stage 4 reuses the stage-3 argument
            for (std::size_t i = 0; i < n; ++i)
                g4[i] = fnew[i] + h * C4X * ft[i] +
                        (C41 * g1[i] + C42 * g2[i] + C43 * g3[i]) / h;
            sys.solve(g4);

            for (std::size_t i = 0; i < n; ++i) {
                ynew[i] = y[i] + B1 * g1[i] + B2 * g2[i] + B3 * g3[i] + B4 * g4[i];
                err[i] = E1 * g1[i] + E2 * g2[i] + E3 * g3[i] + E4 * g4[i];
            }
        }

        double errnorm = std::numeric_limits<double>::infinity();
        if (ok) {
            double s = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(ynew[i])) { finite = false; break; }
                double scale = opt.abs_tol +
                               opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                double r = err[i] / scale;
                s += r * r;
            }
            errnorm = finite ? std::sqrt(s / static_cast<double>(n))
                             : std::numeric_limits<double>::infinity();
        }

        if (errnorm <= 1.0) {
            sys.rhs(tnew, ynew, fnew);
            yprev.swap(y);
            y = ynew;
            StepRecord rec{t, tnew, yprev, f0, y, fnew};
            if (on_step) on_step(rec);
            t = tnew;
            f0.swap(fnew);
            ++stats.accepted;
            if (sys.blown_up(y))
                throw SolverError(SolverError::Kind::BlowUp, t,
                                  "integrate: divergence guard tripped at t=" +
                                      std::to_string(t));
            double factor = (errnorm > 1e-30)
                                ? SAFETY * std::pow(errnorm, -0.25)
                                : GROW_LIMIT;
            h *= std::clamp(factor, 1.0, GROW_LIMIT);
            if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
        } else {
            ++stats.rejected;
            double factor = std::isfinite(errnorm)
                                ? SAFETY * std::pow(errnorm, -1.0 / 3.0)
                                : SHRINK_LIMIT;
            h *= std::clamp(factor, SHRINK_LIMIT, 0.9);
            if (!(h > std::abs(t) * 1e-15 + 1e-300) || !(t + h > t))
                throw SolverError(SolverError::Kind::StepUnderflow, t,
                                  "integrate: step size underflow at t=" +
                                      std::to_string(t));
        }
    }
    return stats;
}

}  // namespace kirchlab
