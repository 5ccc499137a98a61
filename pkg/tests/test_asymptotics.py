import math

import numpy as np
import pytest

from forelli_rudin import asymptotics
from forelli_rudin.asymptotics import DEFAULT_SCHEDULE, classify_regime, eval_I, fit_asymptotic, point_at
from forelli_rudin.core import BallPoint
from forelli_rudin.errors import AccuracyError, DomainError
from forelli_rudin.quadrature import MonteCarloConfig, build_ball_rule, build_disc_rule
from forelli_rudin.special import radial_moment

# reference values from the hypergeometric oracle in tests/oracles.py
FROZEN = [
    (1 - 2.0 ** -10, 3.0, 0.0, 1301.6609198743585491),
    (0.9, 2.5, 1.0, 1.1910327432416853852),
    (1 - 2.0 ** -6, 4.0, -0.5, 77007.387482929007764),
    (0.75, 1.0, 0.0, 1.1406988998411532721),
    (0.36, 2.7, 0.5, 0.91295445253148301788),
]


@pytest.mark.parametrize("r2,c,t,ref", FROZEN)
def test_against_hypergeometric_oracle(r2, c, t, ref):
    z = BallPoint((math.sqrt(r2) * np.exp(0.7j),))
    assert eval_I(z, c, t) == pytest.approx(ref, rel=1e-9)


def test_log_case_closed_form():
    # n = 1, t = 0, c = 2: I = log(1/(1 - |z|^2)) / |z|^2
    for d in DEFAULT_SCHEDULE:
        assert eval_I(point_at(d), 2.0, 0.0) == pytest.approx(math.log(1 / d) / (1 - d), rel=1e-10)


def test_origin_is_radial_moment():
    for t in (-0.5, 0.0, 2.0):
        assert eval_I(0.0, 3.3, t) == pytest.approx(radial_moment(t, 1), rel=1e-12)


def test_two_dimensional_monte_carlo():
    rule = build_ball_rule(2, MonteCarloConfig(200_000, seed=11), 0.0)
    val = eval_I((math.sqrt(0.5), 0.0), 3.0, 0.0, rule=rule)
    assert val == pytest.approx(1.6261663462294002034, rel=0.02)


def test_rotation_invariance():
    rule = build_disc_rule(64, 257, 0.5)
    a = eval_I(0.6 + 0j, 2.5, 0.5, rule=rule)
    b = eval_I(0.6 + 0j, 2.5, 0.5)
    assert a == pytest.approx(0.87142037403110101915, rel=1e-9)
    for phi in (0.3, 2.0, -2.9):
        assert eval_I(0.6 * np.exp(1j * phi), 2.5, 0.5, rule=rule) == pytest.approx(a, rel=1e-10)
        assert eval_I(0.6 * np.exp(1j * phi), 2.5, 0.5) == pytest.approx(b, rel=1e-10)


def test_regimes():
    assert classify_regime(1.0, 0.0, 1) == "bounded"
    assert classify_regime(2.0, 0.0, 1) == "log"
    assert classify_regime(3.0, 0.0, 1) == "power"
    assert classify_regime(3.5, 0.5, 2) == "log"


def test_fit_reports():
    rep = fit_asymptotic(3.0, 0.0)
    assert rep.regime == "power" and -1.05 <= rep.fitted_exponent <= -0.95
    rep = fit_asymptotic(2.0, 0.0)
    assert rep.regime == "log" and rep.r_squared >= 0.99
    rep = fit_asymptotic(1.0, 0.0)
    assert rep.regime == "bounded" and rep.spread <= 3
    assert len(rep.rows()) == len(DEFAULT_SCHEDULE)


@pytest.mark.parametrize("c,t", [(3.0, 0.0), (4.0, 0.5), (2.6, -0.5)])
def test_power_regime_uniform_domination(c, t):
    # I / (1 - |z|^2)^{n+1+t-c} stays bounded above, including near the origin
    ds = [1.0, 0.9, 0.5, 0.2] + list(DEFAULT_SCHEDULE)
    q = [eval_I(point_at(d), c, t) / d ** (2 + t - c) for d in ds]
    assert max(q) / min(q) < 10
    assert max(q[-3:]) / min(q[-3:]) < 1.1


def test_threads_do_not_change_output():
    a = fit_asymptotic(2.5, 0.0, threads=1)
    b = fit_asymptotic(2.5, 0.0, threads=4)
    assert a.values == b.values


def test_errors(monkeypatch):
    with pytest.raises(DomainError):
        eval_I(0.5, 2.0, -1.0)
    monkeypatch.setattr(asymptotics, "_ORDERS", (2, 3))
    with pytest.raises(AccuracyError):
        eval_I(point_at(1e-6), 3.0, 0.0, rtol=1e-14)


def test_live_oracle_at_random_points():
    pytest.importorskip("mpmath")
    from oracles import I_oracle

    g = np.random.default_rng(77)
    for _ in range(4):
        r2, c, t = g.uniform(0.1, 0.99), g.uniform(0.5, 4.0), g.uniform(-0.7, 2.0)
        z = BallPoint((math.sqrt(r2) * np.exp(1j * g.uniform(0, 6.3)),))
        assert eval_I(z, c, t) == pytest.approx(float(I_oracle(r2, c, t)), rel=1e-8)
