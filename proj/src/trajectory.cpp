#include "kirchlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kirchlab {

double hermite_value(double t, double t0, double t1, double y0, double y1,
                     double d0, double d1) {
    double h = t1 - t0;
    double s = (t - t0) / h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

double hermite_deriv(double t, double t0, double t1, double y0, double y1,
                     double d0, double d1) {
    double h = t1 - t0;
    double s = (t - t0) / h;
    double s2 = s * s;
    return ((6 * s2 - 6 * s) * (y0 - y1) / h + (3 * s2 - 4 * s + 1) * d0 +
            (3 * s2 - 2 * s) * d1);
}

std::size_t Trajectory::locate(double t) const {
    if (nodes.size() < 2)
        throw std::runtime_error("Trajectory: no dense-output skeleton");
    if (t < nodes.front().t || t > nodes.back().t * (1.0 + 1e-12))
        throw std::out_of_range("Trajectory::eval: t outside [0, T]");
    auto it = std::upper_bound(
        nodes.begin(), nodes.end(), t,
        [](double value, const StepNode& n) { return value < n.t; });
    std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    if (k > 0) --k;
    if (k + 1 >= nodes.size()) k = nodes.size() - 2;
    return k;
}

void Trajectory::eval(double t, SpectralVector& u, SpectralVector& v) const {
    std::size_t k = locate(t);
    const StepNode& a = nodes[k];
    const StepNode& b = nodes[k + 1];
    std::size_t n = a.u.size();
    u.resize(n);
    v.resize(n);
    if (t == a.t) { u = a.u; v = a.v; return; }
    if (t == b.t) { u = b.u; v = b.v; return; }
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = hermite_value(t, a.t, b.t, a.u[i], b.u[i], a.v[i], b.v[i]);
        v[i] = hermite_value(t, a.t, b.t, a.v[i], b.v[i], a.vdot[i], b.vdot[i]);
    }
}

SpectralVector Trajectory::eval_u(double t) const {
    SpectralVector u, v;
    eval(t, u, v);
    return u;
}

SpectralVector Trajectory::eval_v(double t) const {
    SpectralVector u, v;
    eval(t, u, v);
    return v;
}

SpectralVector Trajectory::eval_vdot(double t) const {
    std::size_t k = locate(t);
    const StepNode& a = nodes[k];
    const StepNode& b = nodes[k + 1];
    std::size_t n = a.u.size();
    SpectralVector w(n);
    if (t == a.t) return a.vdot;
    if (t == b.t) return b.vdot;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = hermite_deriv(t, a.t, b.t, a.v[i], b.v[i], a.vdot[i], b.vdot[i]);
    return w;
}

double Trajectory::aux_at(const std::string& name, std::size_t time_index) const {
    return aux_series(name).at(time_index);
}

const std::vector<double>& Trajectory::aux_series(const std::string& name) const {
    for (std::size_t k = 0; k < aux_names.size(); ++k)
        if (aux_names[k] == name) return aux[k];
    throw std::out_of_range("Trajectory: no aux series named " + name);
}

std::vector<double> output_grid(double T, int n_log, int n_layer,
                                double layer_width) {
    if (!(T > 0.0)) throw std::invalid_argument("output_grid: T must be > 0");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n_log + n_layer) + 2);
    double lmax = std::log1p(T);
    for (int i = 0; i <= n_log; ++i) {
        double t = std::expm1(lmax * static_cast<double>(i) / n_log);
        g.push_back(std::min(t, T));
    }
    if (n_layer > 0 && layer_width > 0.0) {
        double w = std::min(layer_width, T);
        for (int i = 1; i <= n_layer; ++i)
            g.push_back(w * static_cast<double>(i) / n_layer);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    g.front() = 0.0;
    g.back() = T;
    return g;
}

}  // namespace kirchlab
