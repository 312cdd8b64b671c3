#pragma once

// Adaptive linearly implicit (Rosenbrock) integrator.  Kaps-Rentrop 4(3)
// with Shampine's parameter set; each system supplies its right-hand side,
// d f / d t, and a structured solve with (I/(gamma h) - J), so the mode
// coupling (diagonal plus rank one) costs O(N) per stage.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kirchlab {

class SolverError : public std::runtime_error {
public:
    enum class Kind { StepUnderflow, MaxSteps, BlowUp };

    SolverError(Kind kind, double time, const std::string& what)
        : std::runtime_error(what), kind_(kind), time_(time) {}

    Kind kind() const { return kind_; }
    double time() const { return time_; }

private:
    Kind kind_;
    double time_;
};

class OdeSystem {
public:
    virtual ~OdeSystem() = default;
    virtual std::size_t size() const = 0;
    virtual void rhs(double t, const std::vector<double>& y,
                     std::vector<double>& f) const = 0;
    virtual void dfdt(double t, const std::vector<double>& y,
                      std::vector<double>& ft) const = 0;
    // prepare (I/(gamma h) - J) at (t, y); return false if the structured
    // factorization degenerates (the step is then rejected)
    virtual bool factor(double inv_gh, double t,
                        const std::vector<double>& y) = 0;
    // solve the prepared system in place
    virtual void solve(std::vector<double>& x) const = 0;
    // optional divergence guard, checked on accepted steps
    virtual bool blown_up(const std::vector<double>& y) const { (void)y; return false; }
};

struct StepperOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-290;
    double h_init = 1e-6;
    double h_max = 0.0;  // 0: no cap
    std::int64_t max_steps = 50'000'000;
};

struct StepperStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
};

// Integrates y from t0 to t1.  on_step(t_prev, y_prev, f_prev, t_new, y_new,
// f_new, vdot...) is invoked after every accepted step; callers interpolate
// their own output samples from it.
struct StepRecord {
    double t0, t1;
    const std::vector<double>& y0;
    const std::vector<double>& f0;
    const std::vector<double>& y1;
    const std::vector<double>& f1;
};

StepperStats integrate(OdeSystem& sys, double t0, double t1,
                       std::vector<double>& y, const StepperOptions& opt,
                       const std::function<void(const StepRecord&)>& on_step);

}  // namespace kirchlab
