"""Forelli-Rudin type integral operators on a product of two balls.

All five operators share one shape: a power of (1 - |z|^2) in front, a kernel
(1 - <z,u>)^{-c} or |1 - <z,u>|^{-c}, and a weighted measure in u; the same
again in (w, eta). :func:`apply_factorized` does the work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import BallPoint, OperatorParams, ProductPoint, inner_product
from .errors import DomainError, EvaluationError
from .quadrature import ProductRule, QuadratureRule, build_ball_rule, build_disc_rule, \
    build_graded_disc_rule, MonteCarloConfig
from .special import norm_const

MAX_EVAL_RADIUS = 0.999


class Separable:
    """Sum of products g(u) h(eta). Operators act on each term factorwise."""

    def __init__(self, first: Callable, second: Callable, coef: complex = 1.0):
        self.terms = [(complex(coef), first, second)]

    def __add__(self, other: "Separable") -> "Separable":
        out = Separable.__new__(Separable)
        out.terms = self.terms + other.terms
        return out

    def __rmul__(self, scalar) -> "Separable":
        out = Separable.__new__(Separable)
        out.terms = [(scalar * c, g, h) for c, g, h in self.terms]
        return out

    def __call__(self, u, eta):
        u, eta = np.asarray(u), np.asarray(eta)
        total = 0
        for c, g, h in self.terms:
            total = total + c * np.asarray(g(u)) * np.asarray(h(eta))
        return total


def kernel_value(z, u, c: float, modulus: bool = False):
    """(1 - <z,u>)^{-c} on the principal branch, or |1 - <z,u>|^{-c}."""
    base = 1.0 - inner_product(z, u)
    if modulus:
        return np.abs(base) ** (-c)
    return base ** (-c)


@dataclass(frozen=True)
class FactorSpec:
    """One variable's share of an operator.

    prefactor(z) = (1 - |z|^2)^pre, kernel exponent c, measure
    dv_weight (normalized) or (1 - |u|^2)^weight dv (not normalized).
    """

    pre: float
    weight: float
    c: float
    modulus: bool
    normalized: bool


def t_factors(params: OperatorParams, modulus: bool = False):
    return tuple(FactorSpec(params.a[i], params.b[i], params.c[i], modulus, False) for i in range(2))


def adjoint_factors(params: OperatorParams):
    return tuple(FactorSpec(params.b[i] - params.alpha[i], params.beta[i], params.c[i], False, False)
                 for i in range(2))


def bergman_factors(gamma, n: int):
    return tuple(FactorSpec(0.0, g, n + 1.0 + g, False, True) for g in gamma)


def berezin_factors(gamma, n: int):
    return tuple(FactorSpec(n + 1.0 + g, g, 2.0 * (n + 1.0 + g), True, True) for g in gamma)


def _is_single(at) -> bool:
    if isinstance(at, ProductPoint):
        return True
    if not isinstance(at, (tuple, list)) or len(at) != 2:
        return False
    first = at[0]
    if isinstance(first, BallPoint):
        return True
    if isinstance(first, ProductPoint):
        return False
    try:
        return np.asarray(first, dtype=complex).ndim <= 1
    except (TypeError, ValueError):
        return False


def _points(at):
    if _is_single(at):
        return [ProductPoint.of(at)], True
    return [ProductPoint.of(p) for p in at], False


def _check_radius(pt: BallPoint):
    if np.sqrt(pt.norm_sq) > MAX_EVAL_RADIUS:
        raise DomainError(f"evaluation point |z| = {np.sqrt(pt.norm_sq):.6g} exceeds {MAX_EVAL_RADIUS}")


def measure_weights(rule: QuadratureRule, spec: FactorSpec) -> np.ndarray:
    return rule.weights_for(spec.weight, normalized=spec.normalized)


def _rule_theta(spec: FactorSpec) -> float:
    return spec.weight if spec.weight > -1 else 0.0


def default_rule(spec: FactorSpec, n: int, focus: BallPoint | None = None) -> QuadratureRule:
    """A rule matched to one factor: graded toward the focus point when n = 1."""
    theta = _rule_theta(spec)
    if n == 1:
        if focus is None:
            return build_disc_rule(48, 96, theta)
        z = focus.coords[0]
        return build_graded_disc_rule(theta, float(np.angle(z)) if z != 0 else 0.0,
                                      max(focus.one_minus_norm_sq, 1e-12), 10)
    return build_ball_rule(n, MonteCarloConfig(20000, seed=0), theta)


def _factor_rows(spec: FactorSpec, rule: QuadratureRule, zs: np.ndarray, weights: np.ndarray):
    """Row p holds weight_j * K(z_p, u_j) for factor evaluation points zs (P, n)."""
    ker = kernel_value(zs[:, None, :], rule.nodes[None, :, :], spec.c, spec.modulus)
    return ker * weights[None, :]


def _prefactor(spec: FactorSpec, pt: BallPoint) -> float:
    return pt.one_minus_norm_sq ** spec.pre if spec.pre != 0 else 1.0


def _eval_term(g, rule):
    vals = np.asarray(g(rule.nodes), dtype=complex)
    vals = np.broadcast_to(vals, (rule.size,))
    if not np.all(np.isfinite(vals)):
        k = int(np.argmax(~np.isfinite(vals)))
        raise EvaluationError(f"non-finite input value at node {k}: {rule.nodes[k].tolist()}")
    return vals


def apply_factorized(f, specs: Sequence[FactorSpec], at, rule: ProductRule | None = None,
                     n: int | None = None, chunk: int = 128):
    """Evaluate the operator described by ``specs`` on ``f`` at one or more product points.

    ``f`` is a :class:`Separable` or a callable f(u, eta). Without an explicit
    rule, separable inputs get rules graded toward each evaluation point.
    """
    pts, single = _points(at)
    for pt in pts:
        _check_radius(pt.z)
        _check_radius(pt.w)
    n = n or pts[0].z.n
    s1, s2 = specs
    out = np.empty(len(pts), dtype=complex)

    if isinstance(f, Separable):
        for k, pt in enumerate(pts):
            r1 = rule.first if rule else default_rule(s1, n, pt.z)
            r2 = rule.second if rule else default_rule(s2, n, pt.w)
            row1 = _factor_rows(s1, r1, pt.z.array[None, :], measure_weights(r1, s1))[0]
            row2 = _factor_rows(s2, r2, pt.w.array[None, :], measure_weights(r2, s2))[0]
            total = 0j
            for coef, g, h in f.terms:
                total += coef * (row1 @ _eval_term(g, r1)) * (row2 @ _eval_term(h, r2))
            out[k] = total * _prefactor(s1, pt.z) * _prefactor(s2, pt.w)
        return out[0] if single else out

    if rule is None:
        rule = ProductRule(default_rule(s1, n), default_rule(s2, n))
    r1, r2 = rule.first, rule.second
    zs = np.array([pt.z.array for pt in pts])
    ws = np.array([pt.w.array for pt in pts])
    w1, w2 = measure_weights(r1, s1), measure_weights(r2, s2)
    # M[j, p] = sum_k F[j, k] B[p, k], built chunkwise in eta
    M = np.zeros((r1.size, len(pts)), dtype=complex)
    for s in range(0, r2.size, chunk):
        block = np.asarray(f(r1.nodes[:, None, :], r2.nodes[None, s:s + chunk, :]), dtype=complex)
        block = np.broadcast_to(block, (r1.size, min(chunk, r2.size - s)))
        if not np.all(np.isfinite(block)):
            i, j = np.argwhere(~np.isfinite(block))[0]
            raise EvaluationError(f"non-finite input value at node pair ({i}, {s + j})")
        B = kernel_value(ws[:, None, :], r2.nodes[None, s:s + chunk, :], s2.c, s2.modulus) \
            * w2[None, s:s + chunk]
        M += block @ B.T
    for s in range(0, len(pts), chunk):
        A = _factor_rows(s1, r1, zs[s:s + chunk], w1)
        out[s:s + chunk] = np.sum(A * M[:, s:s + chunk].T, axis=1)
    pre = np.array([_prefactor(s1, pt.z) * _prefactor(s2, pt.w) for pt in pts])
    out *= pre
    return out[0] if single else out


def apply_on_grid(f, specs: Sequence[FactorSpec], rule_in: ProductRule, rule_out: ProductRule):
    """Operator values on the whole output grid, shape (N_out1, N_out2).

    The input ``f`` is integrated with ``rule_in``; nodes of ``rule_out`` are
    the evaluation points.
    """
    mats = []
    for spec, rin, rout in zip(specs, (rule_in.first, rule_in.second), (rule_out.first, rule_out.second)):
        K = kernel_value(rout.nodes[:, None, :], rin.nodes[None, :, :], spec.c, spec.modulus)
        K = K * measure_weights(rin, spec)[None, :]
        if spec.pre != 0:
            K = K * (rout.one_minus_r2 ** spec.pre)[:, None]
        mats.append(K)
    A, B = mats
    if isinstance(f, Separable):
        out = 0
        for coef, g, h in f.terms:
            out = out + coef * np.outer(A @ _eval_term(g, rule_in.first), B @ _eval_term(h, rule_in.second))
        return out
    F = np.asarray(f) if not callable(f) else \
        np.asarray(f(rule_in.first.nodes[:, None, :], rule_in.second.nodes[None, :, :]), dtype=complex)
    F = np.broadcast_to(F, (rule_in.first.size, rule_in.second.size))
    if not np.all(np.isfinite(F)):
        raise EvaluationError("non-finite input value on the input grid")
    return A @ F @ B.T


def apply_T(f, params: OperatorParams, at, rule: ProductRule | None = None):
    """T_{a,b,c} f: holomorphic kernel, measure (1 - |u|^2)^b dv (not normalized)."""
    return apply_factorized(f, t_factors(params), at, rule, params.n)


def apply_S(f, params: OperatorParams, at, rule: ProductRule | None = None):
    """S_{a,b,c} f: as T with the kernel replaced by its modulus."""
    return apply_factorized(f, t_factors(params, modulus=True), at, rule, params.n)


def apply_adjoint(g, params: OperatorParams, at, rule: ProductRule | None = None):
    """Adjoint of T_{0,b,c} for the unnormalised pairings with weights beta and alpha.

    (1 - |z|^2)^{b - alpha} times the integral of (1 - <z,u>)^{-c} g against
    (1 - |u|^2)^beta dv, in each variable.
    """
    return apply_factorized(g, adjoint_factors(params), at, rule, params.n)


def adjoint_pairing_constant(params: OperatorParams) -> float:
    """<T f, g> in L^2(dv_beta) over <f, T* g> in L^2(dv_alpha).

    The two pairings use normalized measures, so they differ by
    prod_i c_{beta_i} / c_{alpha_i}.
    """
    n = params.n
    return float(np.prod([norm_const(params.beta[i], n) / norm_const(params.alpha[i], n)
                          for i in range(2)]))


def bergman_project(f, gamma, at, rule: ProductRule | None = None, n: int = 1):
    """Weighted Bergman projection P_gamma, normalized measures dv_gamma."""
    return apply_factorized(f, bergman_factors(tuple(gamma), n), at, rule, n)


def berezin_transform(f, gamma, at, rule: ProductRule | None = None, n: int = 1):
    """Weighted Berezin transform B_gamma, normalized measures dv_gamma."""
    return apply_factorized(f, berezin_factors(tuple(gamma), n), at, rule, n)


def pairing(f, g, alpha, rule: ProductRule):
    """<f, g> in L^2(dv_alpha1 x dv_alpha2), f and g given as values on the product grid."""
    w1 = rule.first.weights_for(alpha[0])
    w2 = rule.second.weights_for(alpha[1])
    return complex(w1 @ (np.asarray(f) * np.conj(np.asarray(g))) @ w2)
