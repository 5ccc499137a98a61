"""Discrete mixed norms

    ||f||_{p, alpha} = ( int [ int |f|^{p1} dv_{alpha1}(z) ]^{p2/p1} dv_{alpha2}(w) )^{1/p2}

with the inner integral in the first variable. An infinite exponent becomes a
maximum over nodes, which only approximates the essential supremum; such
results carry ``approximate=True``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import INF, parse_exponent
from .errors import EvaluationError
from .operators import Separable
from .quadrature import QuadratureRule
from .special import norm_const


@dataclass(frozen=True, eq=False)
class MixedNormSpec:
    p: tuple
    alpha: tuple
    inner_rule: QuadratureRule
    outer_rule: QuadratureRule

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(parse_exponent(v, f"p[{i}]") for i, v in enumerate(self.p)))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))


def _lp(values, weights, p, axis):
    a = np.abs(values)
    if p is INF:
        return np.max(a, axis=axis)
    if p == 1.0:
        return np.tensordot(a, weights, axes=([axis], [0])) if axis == 0 else a @ weights
    s = np.tensordot(a ** p, weights, axes=([axis], [0])) if axis == 0 else a ** p @ weights
    return s ** (1.0 / p)


def _check(vals):
    if not np.all(np.isfinite(vals)):
        idx = np.argwhere(~np.isfinite(vals))[0].tolist()
        raise EvaluationError(f"non-finite function value at node index {idx}")
    return vals


def single_norm(f, p, alpha: float, rule: QuadratureRule, return_flag: bool = False):
    """||f||_{L^p(dv_alpha)} on one ball. ``f`` is a callable or node values."""
    p = parse_exponent(p)
    vals = np.broadcast_to(np.asarray(f(rule.nodes) if callable(f) else f), (rule.size,))
    vals = _check(vals)
    value = float(_lp(vals, rule.weights_for(alpha), p, 0))
    return (value, p is INF) if return_flag else value


def grid_values(f, spec: MixedNormSpec) -> np.ndarray:
    z, w = spec.inner_rule.nodes, spec.outer_rule.nodes
    vals = np.asarray(f(z[:, None, :], w[None, :, :]))
    return np.broadcast_to(vals, (z.shape[0], w.shape[0]))


def mixed_norm(f, spec: MixedNormSpec, return_flag: bool = False):
    """Mixed norm of f on the product grid.

    ``f`` may be a callable f(z, w), a :class:`Separable`, or an array of
    shape (inner nodes, outer nodes).
    """
    approx = spec.p[0] is INF or spec.p[1] is INF
    if isinstance(f, Separable) and len(f.terms) == 1:
        coef, g, h = f.terms[0]
        value = abs(coef) * single_norm(g, spec.p[0], spec.alpha[0], spec.inner_rule) \
            * single_norm(h, spec.p[1], spec.alpha[1], spec.outer_rule)
        return (value, approx) if return_flag else value
    vals = _check(np.asarray(f) if not callable(f) else grid_values(f, spec))
    w1 = spec.inner_rule.weights_for(spec.alpha[0])
    w2 = spec.outer_rule.weights_for(spec.alpha[1])
    inner = _lp(vals, w1, spec.p[0], 0)
    value = float(_lp(inner, w2, spec.p[1], 0))
    return (value, approx) if return_flag else value


def power_norm_closed_form(N: float, p, alpha: float, n: int) -> float:
    """||(1 - |z|^2)^N||_{L^p(dv_alpha)} = (c_alpha / c_{N p + alpha})^{1/p}."""
    p = parse_exponent(p)
    if p is INF:
        return 1.0 if N >= 0 else float("inf")
    return (norm_const(alpha, n) / norm_const(N * p + alpha, n)) ** (1.0 / p)
