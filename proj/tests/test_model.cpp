#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kirchlab/model.hpp"

using namespace kirchlab;

namespace {

ProblemSetup basic_setup(double eps, Nonlinearity m, SpectralVector u0,
                         SpectralVector u1, double p = 1.0) {
    OperatorSpec op(std::vector<double>(u0.size(), 1.0));
    return ProblemSetup(eps, op, std::move(m), Dissipation(p), std::move(u0),
                        std::move(u1));
}

}  // namespace

TEST_CASE("nonlinearity families: values, derivatives, antiderivatives") {
    SUBCASE("constant") {
        const Nonlinearity m = Nonlinearity::constant(2.0);
        CHECK(m.eval(3.0) == 2.0);
        CHECK(m.deriv(3.0) == 0.0);
        CHECK(m.antiderivative(3.0) == doctest::Approx(6.0));
        CHECK(m.mu1() == 2.0);
    }
    SUBCASE("affine") {
        const Nonlinearity m = Nonlinearity::affine(1.0, 0.5);
        CHECK(m.eval(2.0) == doctest::Approx(2.0));
        CHECK(m.deriv(2.0) == doctest::Approx(0.5));
        CHECK(m.antiderivative(2.0) == doctest::Approx(2.0 + 1.0));
        CHECK(m.mu1() == 1.0);
        CHECK(m.max_on(4.0) == doctest::Approx(3.0));
        CHECK(m.max_abs_deriv_on(4.0) == doctest::Approx(0.5));
    }
    SUBCASE("table interpolates its knots and extends constantly") {
        const Nonlinearity m =
            Nonlinearity::table({0.0, 1.0, 2.0}, {1.0, 2.0, 1.5});
        CHECK(m.eval(0.0) == doctest::Approx(1.0));
        CHECK(m.eval(1.0) == doctest::Approx(2.0));
        CHECK(m.eval(5.0) == doctest::Approx(1.5));
        CHECK(m.deriv(5.0) == 0.0);
        // Simpson value against a dense trapezoid oracle
        double oracle = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * i / n, b = 2.0 * (i + 1) / n;
            oracle += 0.5 * (m.eval(a) + m.eval(b)) * (b - a);
        }
        CHECK(m.antiderivative(2.0) == doctest::Approx(oracle).epsilon(1e-8));
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(Nonlinearity::constant(0.0), std::invalid_argument);
        CHECK_THROWS_AS(Nonlinearity::affine(-1.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(Nonlinearity::table({0.0, 1.0}, {1.0, -1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("range maxima against a dense scan oracle (table family)") {
    const Nonlinearity m =
        Nonlinearity::table({0.0, 0.5, 1.0, 2.0}, {1.0, 1.8, 1.1, 1.4});
    const double hi = 1.7;
    double scan_max = 0.0, scan_dmax = 0.0, scan_min = 1e300;
    const int n = 400000;
    for (int i = 0; i <= n; ++i) {
        const double s = hi * i / n;
        scan_max = std::max(scan_max, m.eval(s));
        scan_dmax = std::max(scan_dmax, std::fabs(m.deriv(s)));
    }
    for (int i = 0; i <= n; ++i)
        scan_min = std::min(scan_min, m.eval(4.0 * i / n));
    CHECK(m.max_on(hi) == doctest::Approx(scan_max).epsilon(1e-9));
    CHECK(m.max_abs_deriv_on(hi) == doctest::Approx(scan_dmax).epsilon(1e-6));
    CHECK(m.mu1() == doctest::Approx(scan_min).epsilon(1e-9));
}

TEST_CASE("initial energy and its derived range") {
    const auto setup = basic_setup(0.25, Nonlinearity::constant(1.0),
                                   {1.0, 0.0}, {0.0, 2.0});
    // H(0) = eps |u1|^2 + M(|A^(1/2)u0|^2) = 0.25*4 + 1 = 2
    CHECK(hamiltonian_initial(setup) == doctest::Approx(2.0));
    CHECK(compute_mu2(setup) == doctest::Approx(1.0));
    CHECK(compute_L(setup) == 0.0);
}

TEST_CASE("explicit constants on a hand-checked configuration") {
    // mu1 = mu2 = 1, |u1|^2 = |u0|^2 = 1, |A^(1/2)u0|^2 = 0:
    // k1 = max{2,1}((1)(1+1) + 1 + 0) = 6,  k2 = max{8,1}(6+1+1) = 64
    OperatorSpec op({0.0, 1.0});
    const ProblemSetup setup(0.01, op, Nonlinearity::constant(1.0),
                             Dissipation(1.0), {1.0, 0.0}, {0.0, 1.0});
    const KConstants k = compute_k_constants(setup);
    CHECK(k.k1 == doctest::Approx(6.0));
    CHECK(k.k2 == doctest::Approx(64.0));
    // k3 = k2 + (|A^(1/2)u0|^2 + |A^(1/2)u1|^2)/2 = 64 + 0.5
    CHECK(k.k3 == doctest::Approx(64.5));
    // k4 = max{1,2}(|A^(1/2)u1|^2/mu1 + |Au0|^2 + 4 k3) = 2(1 + 0 + 258)
    CHECK(k.k4 == doctest::Approx(2.0 * (1.0 + 258.0)));
}

TEST_CASE("smallness threshold: constant stiffness gives exactly 1/128") {
    const auto setup = basic_setup(0.001, Nonlinearity::constant(1.0),
                                   {1.0, 0.0}, {0.0, 1.0});
    CHECK(compute_eps0(setup) == doctest::Approx(1.0 / 128.0));
}

TEST_CASE("smallness threshold against a bisection oracle") {
    const auto setup = basic_setup(0.001, Nonlinearity::affine(1.0, 0.5),
                                   {0.4, -0.3}, {0.1, 0.2});
    const double mu1 = 1.0;
    const double mu2 = compute_mu2(setup);
    const double L = compute_L(setup);
    const KConstants k = compute_k_constants(setup);
    double cross = 0.0;
    for (std::size_t i = 0; i < setup.u0.size(); ++i)
        cross += setup.u1[i] * setup.op.lambda(i) * setup.u0[i];
    auto admissible = [&](double e) {
        if (e > 1.0 / 8.0 || e > mu1 / (8.0 * mu2)) return false;
        if (e > mu1 / (128.0 * mu2)) return false;
        if (L > 0 && std::fabs(cross) > 0 &&
            (2.0 * L * std::fabs(cross) / mu1) * e >= 0.5)
            return false;
        if (L > 0 && std::sqrt(e) > mu1 / (2.0 * L * (k.k1 + k.k4))) return false;
        return true;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (admissible(mid) ? lo : hi) = mid;
    }
    const double eps0 = compute_eps0(setup);
    CHECK(eps0 <= lo * (1.0 + 1e-9));
    CHECK(eps0 >= 0.9 * lo);  // the strict inequality is realized with margin
    CHECK(admissible(eps0));
}

TEST_CASE("corrector initial velocity") {
    OperatorSpec op({2.0});
    const ProblemSetup setup(0.1, op, Nonlinearity::constant(3.0),
                             Dissipation(1.0), {0.5}, {1.0});
    // w0 = u1 + (1/b(0)) m(.) A u0 = 1 + 3 * 2 * 0.5 = 4, b(0) = 1
    const SpectralVector w0 = corrector_initial_velocity(setup);
    CHECK(w0[0] == doctest::Approx(4.0));
}

TEST_CASE("dissipation integral, critical case included") {
    const Dissipation crit(1.0);
    CHECK(crit.b_integral(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
    const Dissipation sup(2.0);
    CHECK(sup.b_integral(1e9) == doctest::Approx(1.0).epsilon(1e-6));
    const Dissipation flat(0.0);
    CHECK(flat.b(7.0) == 1.0);
    CHECK(flat.b_integral(7.0) == doctest::Approx(7.0));
}
