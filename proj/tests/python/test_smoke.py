import math

import _kirchlab as kl


def test_constants_match_hand_values():
    c = kl.constants([0.0, 1.0], "constant", {"mu": 1.0}, 1.0,
                     [1.0, 0.0], [0.0, 1.0], 0.01)
    assert c["mu1"] == 1.0
    assert abs(c["k1"] - 6.0) < 1e-12
    assert abs(c["k2"] - 64.0) < 1e-12
    assert abs(c["eps0"] - 1.0 / 128.0) < 1e-15


def test_hyperbolic_energy_identity():
    out = kl.solve_hyperbolic([1.0, 2.0], "affine", {"a": 1.0, "b": 0.5},
                              1.0, [0.5, -0.3], [0.2, 0.1], 0.05, T=100.0)
    assert out["t"][0] == 0.0
    assert out["t"][-1] == 100.0
    assert out["hamiltonian_gap"] <= 1e-6


def test_parabolic_closed_form():
    out = kl.solve_parabolic([1.0], "constant", {"mu": 1.0}, 1.0,
                             [1.0], [0.0], 0.05, T=10.0)
    for t, u in zip(out["t"], out["u"]):
        exact = math.exp(-(((1.0 + t) ** 2) - 1.0) / 2.0)
        if exact > 1e-250:
            assert abs(u[0] - exact) <= 1e-8 * exact


def test_theta_shape_limits():
    v0, d0 = kl.theta_shape(0.1, 0.0)
    assert v0 == 0.0 and d0 == 1.0


def test_decay_fit_power_law():
    t = [math.expm1(math.log1p(1000.0) * i / 400) for i in range(401)]
    q = [4.0 * (1.0 + s) ** -2.0 for s in t]
    fit = kl.fit_decay_rate(t, q, 1.0, 1000.0)
    assert fit["ok"]
    assert abs(fit["rate"] - 2.0) < 1e-9
