"""Quadrature rules for the weighted measures dv_theta on the ball.

For n = 1 the rules are deterministic: a tensor Gauss-Jacobi (in r^2) times
uniform-angle rule, and a graded composite rule that concentrates nodes near
one boundary point. For n >= 2 there are seeded Monte Carlo rules.

Integrands are callables evaluated on an array of nodes of shape (N, n);
product integrands receive broadcastable arrays of shapes (N1, 1, n) and
(1, N2, n).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special as sps

from .errors import DomainError, EvaluationError
from .special import log_gamma, norm_const


def _frozen(arr):
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights approximating integration against dv_theta.

    ``one_minus_r2`` holds 1 - |node|^2 computed without cancellation, which
    matters for nodes very close to the sphere.
    """

    nodes: np.ndarray
    weights: np.ndarray
    one_minus_r2: np.ndarray
    theta: float
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        object.__setattr__(self, "nodes", _frozen(nodes))
        object.__setattr__(self, "weights", _frozen(np.asarray(self.weights, dtype=float)))
        object.__setattr__(self, "one_minus_r2", _frozen(np.asarray(self.one_minus_r2, dtype=float)))

    @property
    def n(self) -> int:
        return self.nodes.shape[1]

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def conversion_factor(self) -> float:
        """1 / c_theta: turns dv_theta into the unnormalised (1 - |z|^2)^theta dv."""
        return 1.0 / norm_const(self.theta, self.n)

    def weights_for(self, theta: float, normalized: bool = True) -> np.ndarray:
        """Weights for dv_theta' on the same nodes.

        With ``normalized=False`` the weights integrate against
        (1 - |z|^2)^theta' dv instead.
        """
        if theta == self.theta:
            w = np.array(self.weights)
        else:
            w = self.weights * self.one_minus_r2 ** (theta - self.theta)
        if normalized:
            if theta == self.theta:
                return w
            return w * (norm_const(theta, self.n) / norm_const(self.theta, self.n))
        return w * self.conversion_factor

    def reweighted(self, theta: float) -> "QuadratureRule":
        """Same node grid, weights retargeted to dv_theta."""
        params = dict(self.params, reweighted_from=self.theta)
        return QuadratureRule(self.nodes, self.weights_for(theta), self.one_minus_r2,
                              float(theta), self.kind, params)

    def describe(self) -> dict:
        digest = hashlib.sha256(self.nodes.tobytes() + self.weights.tobytes()).hexdigest()[:16]
        return {"kind": self.kind, "n": self.n, "theta": self.theta, "size": self.size,
                "params": self.params, "digest": digest}

    def to_json(self) -> str:
        return json.dumps(self.describe(), sort_keys=True)

    def integrate(self, f):
        return integrate(f, self)

    def integrate_with_error(self, f):
        """Estimate and a standard-error estimate (zero for deterministic rules)."""
        vals = _evaluate(f, self)
        est = _wsum(self.weights, vals)
        if self.kind != "monte_carlo":
            return est, 0.0
        w = self.weights
        if self.params.get("self_normalized", True):
            var = np.sum(w ** 2 * np.abs(vals - est) ** 2)
        else:
            var = np.var(w * vals * self.size, ddof=1) / self.size
        return est, float(math.sqrt(var))


@dataclass(frozen=True, eq=False)
class ProductRule:
    """Tensor product of two rules, one per ball factor."""

    first: QuadratureRule
    second: QuadratureRule

    def describe(self) -> dict:
        return {"first": self.first.describe(), "second": self.second.describe()}


@dataclass(frozen=True)
class MonteCarloConfig:
    sample_count: int
    seed: int = 0
    radial_tilt: float | None = None
    self_normalized: bool = True


def rule_from_description(desc: dict) -> QuadratureRule:
    """Rebuild a rule from :meth:`QuadratureRule.describe` output."""
    p = desc["params"]
    kind = desc["kind"]
    if kind == "disc":
        rule = build_disc_rule(p["n_radial"], p["n_angular"], p["jacobi_theta"], p.get("angle_offset", 0.0))
    elif kind == "graded_disc":
        rule = build_graded_disc_rule(p["theta"], p["focus_angle"], p["delta"], p["order"])
    elif kind == "monte_carlo":
        cfg = MonteCarloConfig(p["sample_count"], p["seed"], p["radial_tilt"], p["self_normalized"])
        rule = build_ball_rule(desc["n"], cfg, p["theta"])
    else:
        raise DomainError(f"unknown rule kind {kind!r}")
    if "reweighted_from" in p:
        rule = rule.reweighted(desc["theta"])
    return rule


# -- construction -------------------------------------------------------------


@lru_cache(maxsize=64)
def _gauss_jacobi_unit(m: int, theta: float):
    """Nodes y in (0,1) and weights for the weight y^theta dy (normalised to 1)."""
    t, w = sps.roots_jacobi(m, 0.0, theta)
    y = (1.0 + t) / 2.0
    w = w / np.sum(w)
    return y, w


@lru_cache(maxsize=16)
def _gauss_legendre(m: int):
    return np.polynomial.legendre.leggauss(m)


def build_disc_rule(n_radial: int, n_angular: int, jacobi_theta: float = 0.0,
                    angle_offset: float = 0.0) -> QuadratureRule:
    """Gauss-Jacobi in x = r^2 with weight (1-x)^theta, times a uniform angular grid.

    Exact for polynomials in z, conj(z) of bidegree (j, k) with |j - k| < n_angular
    and min(j, k) <= 2 n_radial - 1. Weights sum to one: the rule targets dv_theta.
    """
    if n_radial < 2 or n_angular < 4:
        raise DomainError(f"need n_radial >= 2 and n_angular >= 4, got {n_radial}, {n_angular}")
    if not jacobi_theta > -1:
        raise DomainError(f"jacobi_theta must exceed -1, got {jacobi_theta}")
    y, wy = _gauss_jacobi_unit(int(n_radial), float(jacobi_theta))
    r = np.sqrt(1.0 - y)
    phi = angle_offset + 2.0 * np.pi * np.arange(n_angular) / n_angular
    nodes = (r[:, None] * np.exp(1j * phi)[None, :]).ravel()
    weights = np.repeat(wy / n_angular, n_angular)
    omr = np.repeat(y, n_angular)
    params = {"n_radial": int(n_radial), "n_angular": int(n_angular),
              "jacobi_theta": float(jacobi_theta), "angle_offset": float(angle_offset)}
    return QuadratureRule(nodes, weights, omr, float(jacobi_theta), "disc", params)


def _geometric_edges(first: float, limit: float) -> np.ndarray:
    edges = [0.0]
    e = min(first, limit / 2.0)
    while e < limit / 1.5:
        edges.append(e)
        e *= 2.0
    edges.append(limit)
    return np.array(edges)


@lru_cache(maxsize=128)
def _graded_parts(theta: float, delta: float, order: int):
    # radial variable y = 1 - |z|^2 on (0, 1], weight y^theta
    edges = _geometric_edges(delta / 8.0, 1.0)
    ys, wys = [], []
    y0, w0 = _gauss_jacobi_unit(order, theta)
    h = edges[1]
    ys.append(h * y0)
    wys.append(w0 * h ** (theta + 1.0) / (theta + 1.0))
    t, wt = _gauss_legendre(order)
    for lo, hi in zip(edges[1:-1], edges[2:]):
        half, mid = (hi - lo) / 2.0, (hi + lo) / 2.0
        yy = mid + half * t
        ys.append(yy)
        wys.append(half * wt * yy ** theta)
    y = np.concatenate(ys)
    wy = np.concatenate(wys) * (theta + 1.0)
    # angle offset from the focus direction, symmetric panels on [-pi, pi]
    aedges = _geometric_edges(delta / 8.0, np.pi)
    ps, wps = [], []
    for lo, hi in zip(aedges[:-1], aedges[1:]):
        half, mid = (hi - lo) / 2.0, (hi + lo) / 2.0
        pp = mid + half * t
        ps.extend([pp, -pp])
        wps.extend([half * wt, half * wt])
    psi = np.concatenate(ps)
    wpsi = np.concatenate(wps) / (2.0 * np.pi)
    return y, wy, psi, wpsi


def build_graded_disc_rule(theta: float = 0.0, focus_angle: float = 0.0, delta: float = 1e-3,
                           order: int = 16) -> QuadratureRule:
    """Composite Gauss rule on the disc graded toward the boundary point e^{i focus_angle}.

    Panels shrink geometrically down to about delta/8 in both 1 - |z|^2 and
    the angle, which resolves kernels like |1 - <z,u>|^{-c} for evaluation
    points with 1 - |z|^2 of order delta.
    """
    if not theta > -1:
        raise DomainError(f"theta must exceed -1, got {theta}")
    if not 0 < delta:
        raise DomainError(f"delta must be positive, got {delta}")
    if order < 2:
        raise DomainError("order must be at least 2")
    delta = min(float(delta), 1.0)
    y, wy, psi, wpsi = _graded_parts(float(theta), delta, int(order))
    r = np.sqrt(1.0 - y)
    nodes = (r[:, None] * np.exp(1j * (focus_angle + psi))[None, :]).ravel()
    weights = (wy[:, None] * wpsi[None, :]).ravel()
    omr = np.repeat(y, psi.size)
    params = {"theta": float(theta), "focus_angle": float(focus_angle), "delta": delta,
              "order": int(order)}
    return QuadratureRule(nodes, weights, omr, float(theta), "graded_disc", params)


def build_ball_rule(n: int, config: MonteCarloConfig, theta: float = 0.0) -> QuadratureRule:
    """Seeded importance-sampling rule for dv_theta on the ball of C^n.

    |z|^2 is drawn from Beta(n, tilt + 1), which is exactly the law of |z|^2
    under dv_tilt; directions are uniform on the sphere.
    """
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    if config.sample_count < 2:
        raise DomainError("sample_count must be at least 2")
    if not theta > -1:
        raise DomainError(f"theta must exceed -1, got {theta}")
    tilt = theta if config.radial_tilt is None else float(config.radial_tilt)
    if not tilt > -1:
        raise DomainError(f"radial_tilt must exceed -1, got {tilt}")
    rng = np.random.default_rng(config.seed)
    N = int(config.sample_count)
    x = rng.beta(n, tilt + 1.0, size=N)
    g = rng.standard_normal((N, n)) + 1j * rng.standard_normal((N, n))
    g /= np.sqrt(np.sum(np.abs(g) ** 2, axis=1))[:, None]
    nodes = np.sqrt(x)[:, None] * g
    omr = 1.0 - x
    if tilt == theta:
        w = np.full(N, 1.0 / N)
    else:
        logb = lambda s: log_gamma(n) + log_gamma(s + 1.0) - log_gamma(n + s + 1.0)  # noqa: E731
        w = np.exp((theta - tilt) * np.log(omr) + logb(tilt) - logb(theta)) / N
    if config.self_normalized:
        w = w / np.sum(w)
    params = {"sample_count": N, "seed": int(config.seed), "radial_tilt": tilt,
              "self_normalized": bool(config.self_normalized), "theta": float(theta)}
    return QuadratureRule(nodes, w, omr, float(theta), "monte_carlo", params)


# -- integration ----------------------------------------------------------------


def _wsum(w, vals):
    # numpy reduces contiguous arrays pairwise
    prod = np.ascontiguousarray(w * vals)
    s = np.sum(prod)
    return complex(s) if np.iscomplexobj(s) else float(s)


def _evaluate(f, rule: QuadratureRule):
    vals = np.asarray(f(rule.nodes))
    if vals.ndim == 0:
        vals = np.full(rule.size, vals[()])
    vals = vals.reshape(rule.size)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise EvaluationError(f"non-finite integrand value {vals[k]!r} at node {k}: {rule.nodes[k].tolist()}")
    return vals


def integrate(f, rule):
    """Weighted sum of f over the rule. Complex results stay complex."""
    if isinstance(rule, ProductRule):
        return integrate_product(f, rule)
    return _wsum(rule.weights, _evaluate(f, rule))


def integrate_product(f, rule: ProductRule, chunk: int = 256):
    u, e = rule.first.nodes, rule.second.nodes
    wu, we = rule.first.weights, rule.second.weights
    total = 0.0
    for s in range(0, e.shape[0], chunk):
        block = np.asarray(f(u[:, None, :], e[None, s:s + chunk, :]))
        block = np.broadcast_to(block, (u.shape[0], min(chunk, e.shape[0] - s)))
        if not np.all(np.isfinite(block)):
            i, j = np.argwhere(~np.isfinite(block))[0]
            raise EvaluationError(f"non-finite integrand value at node pair ({i}, {s + j}): "
                                  f"{u[i].tolist()}, {e[s + j].tolist()}")
        total = total + we[s:s + chunk] @ (wu @ block)
    return complex(total) if np.iscomplexobj(total) else float(total)
