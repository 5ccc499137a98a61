"""Boundary behaviour of

    I_{c,t}(z) = int (1 - |w|^2)^t / |1 - <z,w>|^c dv(w)

(unnormalised weight, normalised volume dv). Bounded when n+1+t-c > 0,
logarithmic when it vanishes, and like (1 - |z|^2)^{n+1+t-c} when negative.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import BallPoint, as_coords
from .errors import AccuracyError, DomainError
from .quadrature import MonteCarloConfig, QuadratureRule, build_ball_rule, build_graded_disc_rule

EQ_TOL = 1e-12
DEFAULT_SCHEDULE = tuple(2.0 ** -k for k in range(3, 11))
_ORDERS = (8, 16, 32, 64)


def _as_point(z, n):
    if isinstance(z, (int, float, np.floating)) and n >= 1:
        return BallPoint.on_axis(float(z), n)
    return BallPoint.of(as_coords(z))


def point_at(one_minus_r2: float, n: int = 1, angle: float = 0.0) -> BallPoint:
    """Point on the ray of angle ``angle`` with 1 - |z|^2 equal to the given value."""
    r = math.sqrt(1.0 - one_minus_r2)
    return BallPoint((r * complex(math.cos(angle), math.sin(angle)),) + (0j,) * (n - 1))


def _quad(z: np.ndarray, c: float, t: float, rule: QuadratureRule) -> float:
    w = rule.weights_for(t, normalized=False)
    base = np.abs(1.0 - rule.nodes @ np.conj(z))
    return float(np.sum(w * base ** (-c)))


def eval_I(z, c: float, t: float, n: int | None = None, rule: QuadratureRule | None = None,
           rtol: float = 1e-8, return_info: bool = False):
    """I_{c,t}(z) by quadrature.

    With no rule and n = 1 the graded disc rule focused at z is refined
    (order doubled) until two successive values agree to ``rtol``.
    """
    if not t > -1:
        raise DomainError(f"I_(c,t) diverges for t <= -1 (t = {t})")
    pt = _as_point(z, n or 1)
    if rule is not None:
        val = _quad(pt.array, c, t, rule)
        return (val, False) if return_info else val
    if pt.n == 1:
        zc = pt.coords[0]
        angle = float(np.angle(zc)) if zc != 0 else 0.0
        delta = max(pt.one_minus_norm_sq, 1e-13)
        prev = None
        for level, order in enumerate(_ORDERS):
            val = _quad(pt.array, c, t, build_graded_disc_rule(t, angle, delta, order))
            if prev is not None and abs(val - prev) <= rtol * abs(val):
                return (val, level > 1) if return_info else val
            prev = val
        raise AccuracyError(f"I_(c={c}, t={t}) at 1-|z|^2={delta:.3g} did not settle to {rtol}")
    mc = build_ball_rule(pt.n, MonteCarloConfig(200_000, seed=0), t)
    val = _quad(pt.array, c, t, mc)
    return (val, False) if return_info else val


def classify_regime(c: float, t: float, n: int) -> str:
    gap = n + 1 + t - c
    if abs(gap) <= EQ_TOL:
        return "log"
    return "bounded" if gap > 0 else "power"


@dataclass
class RegimeReport:
    c: float
    t: float
    n: int
    regime: str
    fitted_exponent: float
    fit_residual: float
    r_squared: float
    spread: float
    one_minus_r2: list = field(default_factory=list)
    values: list = field(default_factory=list)
    refined: list = field(default_factory=list)

    def rows(self):
        return list(zip(self.one_minus_r2, self.values, self.refined))


def _linfit(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid ** 2))), r2


def fit_asymptotic(c: float, t: float, n: int = 1, schedule=DEFAULT_SCHEDULE,
                   rule: QuadratureRule | None = None, threads: int = 1) -> RegimeReport:
    """Evaluate I_{c,t} along a radius schedule and fit the regime's growth law.

    power: slope of log I against log(1 - |z|^2).
    log:   slope of log I against log log(1/(1 - |z|^2)); r_squared is for
           I against log(1/(1 - |z|^2)).
    bounded: slope as for power; spread is max/min.
    """
    d = np.asarray(schedule, dtype=float)
    if np.any((d <= 0) | (d > 1)):
        raise DomainError("schedule entries must lie in (0, 1]")
    job = lambda x: eval_I(point_at(x, n), c, t, n, rule, return_info=True)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(job, d))
    else:
        res = [job(x) for x in d]
    vals = np.array([r[0] for r in res])
    refined = [bool(r[1]) for r in res]
    regime = classify_regime(c, t, n)
    L = np.log(1.0 / d)
    slope, _, resid, _ = _linfit(np.log(d), np.log(vals))
    _, _, _, r2_log = _linfit(L, vals)
    if regime == "log":
        exponent, _, resid, _ = _linfit(np.log(L), np.log(vals))
    else:
        exponent = slope
    return RegimeReport(c, t, n, regime, exponent, resid, r2_log,
                        float(vals.max() / vals.min()), d.tolist(), vals.tolist(), refined)
