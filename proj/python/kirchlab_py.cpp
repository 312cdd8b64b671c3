// Python surface: build a problem from plain data, solve either side of the
// singular limit, and pull constants / fits back as dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kirchlab/analysis.hpp"
#include "kirchlab/corrector.hpp"
#include "kirchlab/parabolic.hpp"

namespace py = pybind11;
using namespace kirchlab;

namespace {

Nonlinearity make_m(const std::string& family, const py::dict& params) {
    if (family == "constant") return Nonlinearity::constant(params["mu"].cast<double>());
    if (family == "affine")
        return Nonlinearity::affine(params["a"].cast<double>(), params["b"].cast<double>());
    if (family == "table")
        return Nonlinearity::table(params["knots"].cast<std::vector<double>>(),
                                   params["values"].cast<std::vector<double>>());
    throw std::invalid_argument("nonlinearity family: constant|affine|table");
}

ProblemSetup make_problem(const std::vector<double>& eigenvalues,
                          const std::string& family, const py::dict& params,
                          double p, const std::vector<double>& u0,
                          const std::vector<double>& u1, double eps) {
    return ProblemSetup(eps, OperatorSpec(eigenvalues), make_m(family, params),
                        Dissipation(p), u0, u1);
}

py::dict traj_to_dict(const Trajectory& traj) {
    py::dict d;
    d["t"] = traj.times;
    std::vector<std::vector<double>> u(traj.times.size()), v(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        u[i] = traj.u_samples[i];
        v[i] = traj.v_samples[i];
    }
    d["u"] = u;
    d["v"] = v;
    d["accepted_steps"] = traj.meta.accepted_steps;
    return d;
}

}  // namespace

PYBIND11_MODULE(_kirchlab, mod) {
    mod.doc() = "spectral Kirchhoff equation laboratory";

    mod.def(
        "solve_hyperbolic",
        [](const std::vector<double>& eigenvalues, const std::string& family,
           const py::dict& params, double p, const std::vector<double>& u0,
           const std::vector<double>& u1, double eps, double rel_tol, double T) {
            const ProblemSetup setup =
                make_problem(eigenvalues, family, params, p, u0, u1, eps);
            SolverConfig cfg;
            cfg.rel_tol = rel_tol;
            cfg.T = T;
            const Trajectory traj = solve_hyperbolic(setup, cfg);
            py::dict d = traj_to_dict(traj);
            d["hamiltonian_gap"] = hamiltonian_identity_gap(setup, traj);
            return d;
        },
        py::arg("eigenvalues"), py::arg("family"), py::arg("params"), py::arg("p"),
        py::arg("u0"), py::arg("u1"), py::arg("eps"), py::arg("rel_tol") = 1e-10,
        py::arg("T") = 1e3);

    mod.def(
        "solve_parabolic",
        [](const std::vector<double>& eigenvalues, const std::string& family,
           const py::dict& params, double p, const std::vector<double>& u0,
           const std::vector<double>& u1, double eps, double rel_tol, double T) {
            const ProblemSetup setup =
                make_problem(eigenvalues, family, params, p, u0, u1, eps);
            SolverConfig cfg;
            cfg.rel_tol = rel_tol;
            cfg.T = T;
            return traj_to_dict(solve_parabolic(setup, cfg));
        },
        py::arg("eigenvalues"), py::arg("family"), py::arg("params"), py::arg("p"),
        py::arg("u0"), py::arg("u1"), py::arg("eps"), py::arg("rel_tol") = 1e-10,
        py::arg("T") = 1e3);

    mod.def(
        "constants",
        [](const std::vector<double>& eigenvalues, const std::string& family,
           const py::dict& params, double p, const std::vector<double>& u0,
           const std::vector<double>& u1, double eps) {
            const DerivedConstants dc = derived_constants(
                make_problem(eigenvalues, family, params, p, u0, u1, eps));
            py::dict d;
            d["mu1"] = dc.mu1; d["mu2"] = dc.mu2; d["L"] = dc.L; d["H0"] = dc.H0;
            d["k1"] = dc.k1; d["k2"] = dc.k2; d["k3"] = dc.k3; d["k4"] = dc.k4;
            d["eps0"] = dc.eps0; d["w0"] = dc.w0;
            return d;
        },
        py::arg("eigenvalues"), py::arg("family"), py::arg("params"), py::arg("p"),
        py::arg("u0"), py::arg("u1"), py::arg("eps"));

    mod.def(
        "theta_shape",
        [](double eps, double t) {
            const ThetaShape s = theta_shape(eps, t);
            return py::make_tuple(s.value, s.derivative);
        },
        py::arg("eps"), py::arg("t"));

    mod.def(
        "fit_decay_rate",
        [](const std::vector<double>& t, const std::vector<double>& q, double lo,
           double hi) {
            const DecayFit f = fit_decay_rate(t, q, lo, hi);
            py::dict d;
            d["rate"] = f.rate; d["intercept"] = f.intercept;
            d["residual"] = f.residual; d["ok"] = f.ok; d["note"] = f.note;
            return d;
        },
        py::arg("t"), py::arg("q"), py::arg("window_lo"), py::arg("window_hi"));
}
