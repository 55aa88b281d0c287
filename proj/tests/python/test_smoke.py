import math

import numpy as np
import pytest

import bwave


def test_model_map_and_regime():
    a, b, c, d = bwave.abcd_from_model(0.0, 1.0, 1.0, 1.0)
    assert a == pytest.approx(-1 / 6)
    assert c == pytest.approx(-0.5)
    assert b == 0.0 and d == 0.0
    ok, why = bwave.regime(-1.0, 0.1, -1.0, 0.0)
    assert not ok and why == ["b!=0"]


def test_rearrangement_convention():
    out = bwave.symmetric_decreasing(np.array([3.0, 1.0, 2.0, 0.0]))
    assert out.tolist() == [0.0, 2.0, 3.0, 1.0]


def test_tau_of_gaussian_pair():
    n, L = 512, 40.0
    x = -L / 2 + np.arange(n) * L / n
    f = np.exp(-x * x / 2)
    v = bwave.tau(f, f, L, -1.0, -1.0)
    exact = math.sqrt(math.pi) + math.sqrt(2 * math.pi / 3) + 2 * math.sqrt(math.pi)
    assert v["tau"] == pytest.approx(exact, rel=1e-8)


def test_solve_and_wave():
    r = bwave.solve(-1.0, -1.0)
    m = r["minimizer"]
    assert m["status"] == "converged"
    assert r["bounds"]["m_lower"] <= m["m"] <= r["bounds"]["m_upper"]
    assert np.all(np.diff(m["tau_history"]) <= 0)
    w = r["wave"]
    assert all(v == "pass" for v in w["flags"].values()), w["flags"]
    assert w["omega"] < 0
    assert w["phi"].shape == w["x"].shape


def test_evolve_short_horizon():
    w = bwave.solve(-1.0, -1.0)["wave"]
    d = bwave.evolve(w["phi"], w["psi"], w["L"], w["omega"], -1.0, -1.0, dt=2e-3, t_final=1.0)
    assert d["max_prop_err"] < 1e-6
    assert d["h_drift"] < 1e-8


def test_verify_and_errors():
    rc, rep = bwave.verify("coeff.a = -1\ncoeff.c = -1\nverify.random_pairs = 20\n", jobs=2)
    assert rc == 0
    assert all(v == "pass" for v in rep["checks"].values())
    with pytest.raises(bwave.ConfigError):
        bwave.verify("coeff.a = -1\nnonsense = 3\n")
