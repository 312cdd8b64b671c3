#pragma once

// Time-stamped (u, u') samples on the output grid plus the accepted-step
// history, which provides dense evaluation by local cubic Hermite
// interpolation (the solution class is C^2 in time, see the solvers).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kirchlab/spectral.hpp"

namespace kirchlab {

struct TrajectoryMeta {
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    double horizon = 0.0;
    std::int64_t accepted_steps = 0;
    std::int64_t rejected_steps = 0;
};

// One node of the dense-output skeleton: state, velocity and acceleration
// at an accepted integrator step.
struct StepNode {
    double t;
    SpectralVector u;
    SpectralVector v;      // u'
    SpectralVector vdot;   // u''
};

class Trajectory {
public:
    std::vector<double> times;                 // output grid, times[0] = 0
    std::vector<SpectralVector> u_samples;     // per output time
    std::vector<SpectralVector> v_samples;
    // auxiliary scalar series on the output grid (quadrature states etc.)
    std::vector<std::string> aux_names;
    std::vector<std::vector<double>> aux;      // aux[k][i], per name k, time i
    std::vector<StepNode> nodes;               // accepted-step skeleton
    TrajectoryMeta meta;

    double horizon() const { return meta.horizon; }

    // dense evaluation at any t in [0, T]
    void eval(double t, SpectralVector& u, SpectralVector& v) const;
    SpectralVector eval_u(double t) const;
    SpectralVector eval_v(double t) const;
    // u'' from the Hermite interpolant of u'
    SpectralVector eval_vdot(double t) const;

    double aux_at(const std::string& name, std::size_t time_index) const;
    const std::vector<double>& aux_series(const std::string& name) const;

private:
    std::size_t locate(double t) const;
};

// cubic Hermite on [t0, t1] given endpoint values and derivatives
double hermite_value(double t, double t0, double t1, double y0, double y1,
                     double d0, double d1);
double hermite_deriv(double t, double t0, double t1, double y0, double y1,
                     double d0, double d1);

// shared output-grid policy: n_log points with 1+t log-spaced on [0, T]
// plus n_layer linear points in the boundary layer [0, layer_width]
std::vector<double> output_grid(double T, int n_log, int n_layer,
                                double layer_width);

}  // namespace kirchlab
