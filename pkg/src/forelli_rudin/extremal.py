"""Test-function families that witness unboundedness.

Norms of the kernel-type families reduce to values of I_{c,t} at the anchor
point, so the growth near the sphere is computed from one-variable
integrals; direct product quadrature is available for cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import DEFAULT_SCHEDULE, eval_I, point_at
from .core import INF, BallPoint, OperatorParams, holder_conjugate, inner_product
from .errors import DomainError
from .mixed_norm import MixedNormSpec, mixed_norm, power_norm_closed_form
from .operators import Separable, _points
from .quadrature import ProductRule, build_graded_disc_rule
from .special import norm_const

EQ_TOL = 1e-12


@dataclass(frozen=True)
class ExtremalFamily:
    """kind "power": (1-|z|^2)^{N1} (1-|w|^2)^{N2}.

    kind "kernel": prod_i (1-|anchor_i|^2)^{prefactor_i} (1 - <x_i, anchor_i>)^{-exponent_i}.
    kind "unimodular": (1 - <anchor, x>)^{num} / |1 - <anchor, x>|^{den} in
    variable ``factor`` (0 or 1) and 1 in the other.
    """

    kind: str
    n: int
    exponents: tuple
    prefactors: tuple = (0.0, 0.0)
    anchors: tuple = ()
    factor: int = 1


def power_family(N1: float, N2: float, n: int = 1) -> ExtremalFamily:
    return ExtremalFamily("power", n, (float(N1), float(N2)))


def kernel_family(params: OperatorParams, xi, zeta, critical=(False, False)) -> ExtremalFamily:
    """The reproducing-kernel family centred at (xi, zeta).

    Exponents n + 1 + b_i; prefactor n + 1 + b_i - (n + 1 + alpha_i)/p_i, or 0
    for a factor flagged critical.
    """
    n = params.n
    exps = tuple(n + 1.0 + params.b[i] for i in range(2))
    pre = tuple(0.0 if critical[i] else n + 1.0 + params.b[i] - (n + 1.0 + params.alpha[i]) / params.p[i]
                for i in range(2))
    return ExtremalFamily("kernel", n, exps, pre, (BallPoint.of(xi), BallPoint.of(zeta)))


def unimodular_family(params: OperatorParams, anchor, factor: int = 1) -> ExtremalFamily:
    """(1 - <anchor, x>)^{(n+1+beta)/q} / |1 - <anchor, x>|^{n+1+beta} in one variable."""
    n, be, q = params.n, params.beta[factor], params.q[factor]
    return ExtremalFamily("unimodular", n, ((n + 1.0 + be) / q, n + 1.0 + be), (0.0, 0.0),
                          (BallPoint.of(anchor),), factor)


def _factor_fn(fam: ExtremalFamily, i: int):
    if fam.kind == "power":
        N = fam.exponents[i]
        return lambda x: (1.0 - np.sum(np.abs(x) ** 2, axis=-1)) ** N
    if fam.kind == "kernel":
        a = fam.anchors[i]
        scale = a.one_minus_norm_sq ** fam.prefactors[i]
        k = fam.exponents[i]
        return lambda x: scale * (1.0 - inner_product(x, a.array)) ** (-k)
    if i != fam.factor:
        return lambda x: np.ones(np.shape(x)[:-1], dtype=complex)
    a = fam.anchors[0]
    num, den = fam.exponents
    return lambda x: (1.0 - inner_product(a.array, x)) ** num / np.abs(1.0 - inner_product(a.array, x)) ** den


def as_separable(fam: ExtremalFamily) -> Separable:
    return Separable(_factor_fn(fam, 0), _factor_fn(fam, 1))


def eval_family(fam: ExtremalFamily, at):
    pts, single = _points(at)
    f0, f1 = _factor_fn(fam, 0), _factor_fn(fam, 1)
    vals = np.array([complex(f0(pt.z.array[None, :])[0] * f1(pt.w.array[None, :])[0]) for pt in pts])
    return vals[0] if single else vals


def _kernel_factor_norm(d_anchor, radius, exponent, prefactor, p, alpha, n):
    """|| (1-|xi|^2)^pre (1 - <x, xi>)^{-k} ||_{L^p_alpha} by one-variable integrals."""
    scale = d_anchor ** prefactor
    if p is INF:
        return scale * (1.0 - radius) ** (-exponent) if exponent > 0 else scale * (1.0 + radius) ** (-exponent)
    val = norm_const(alpha, n) * eval_I(point_at(d_anchor, n), exponent * p, alpha, n)
    return scale * val ** (1.0 / p)


def family_mixed_norm(fam: ExtremalFamily, p, alpha, rule: ProductRule | None = None) -> float:
    """Mixed norm of a family member; direct quadrature when a rule is given."""
    if rule is not None:
        return mixed_norm(as_separable(fam), MixedNormSpec(p, alpha, rule.first, rule.second))
    n = fam.n
    if fam.kind == "power":
        return math.prod(power_norm_closed_form(fam.exponents[i], p[i], alpha[i], n) for i in range(2))
    if fam.kind == "kernel":
        out = 1.0
        for i in range(2):
            a = fam.anchors[i]
            out *= _kernel_factor_norm(a.one_minus_norm_sq, math.sqrt(a.norm_sq), fam.exponents[i],
                                       fam.prefactors[i], p[i], alpha[i], n)
        return out
    a = fam.anchors[0]
    num, den = fam.exponents
    k = den - num  # |g| = |1 - <anchor, x>|^{-k}
    pi = p[fam.factor]
    return _kernel_factor_norm(a.one_minus_norm_sq, math.sqrt(a.norm_sq), k, 0.0, pi, alpha[fam.factor], n)


def closed_form_T_kernel(params: OperatorParams, xi, zeta, at):
    """T_{a,b,c} applied to the kernel family, in closed form.

    T f(z, w) = prod_i (1-|x_i|^2)^{a_i} (1-|anchor_i|^2)^{pre_i} / c_{b_i} * (1 - <x_i, anchor_i>)^{-c_i}.
    """
    fam = kernel_family(params, xi, zeta)
    n = params.n
    pts, single = _points(at)
    vals = []
    for pt in pts:
        v = 1.0 + 0j
        for i, x in enumerate((pt.z, pt.w)):
            anc = fam.anchors[i]
            v *= x.one_minus_norm_sq ** params.a[i] * anc.one_minus_norm_sq ** fam.prefactors[i] \
                / norm_const(params.b[i], n) * (1.0 - inner_product(x.array, anc.array)) ** (-params.c[i])
        vals.append(v)
    return vals[0] if single else np.array(vals)


def kernel_test_quantity(xi, params: OperatorParams) -> float:
    """(1-|xi|^2)^{(n+1+b1) q1 - (n+1+alpha1) q1/p1} * I_{c1 q1, beta1}(xi) for S_{0,b,c}.

    Must stay bounded in xi when the first factor is bounded; grows like
    (1-|xi|^2)^{q1 (bound - c1)} otherwise. Output weights are absorbed first.
    """
    sh = params.shifted()
    n, b, al, be, p, q, c = sh.n, sh.b[0], sh.alpha[0], sh.beta[0], sh.p[0], sh.q[0], sh.c[0]
    if p is INF or q is INF:
        raise DomainError("needs finite p1, q1")
    pt = BallPoint.of(xi)
    return pt.one_minus_norm_sq ** ((n + 1 + b) * q - (n + 1 + al) * q / p) * eval_I(pt, c * q, be, n)


def growth_exponent(one_minus_r2, values, last: int = 5) -> float:
    """e in values ~ (1 - |z|^2)^{-e}, from the last ``last`` shells."""
    x = np.log(np.asarray(one_minus_r2)[-last:])
    y = np.log(np.asarray(values)[-last:])
    if np.ptp(x) == 0:
        return float("nan")
    return float(-np.polyfit(x, y, 1)[0])


def log_power(one_minus_r2, values, last: int = 5) -> float:
    """k in values ~ log(1/(1 - |z|^2))^k, from the last ``last`` shells."""
    L = np.log(1.0 / np.asarray(one_minus_r2)[-last:])
    return float(np.polyfit(np.log(L), np.log(np.asarray(values)[-last:]), 1)[0])


@dataclass
class ExtremalCurve:
    one_minus_r2: list
    family_norm: list
    T_norm: list
    ratio: list
    exponent: float
    approximate: bool = False
    extra: dict = field(default_factory=dict)

    def rows(self):
        radii = [math.sqrt(1.0 - d) for d in self.one_minus_r2]
        return list(zip(radii, self.family_norm, self.T_norm, self.ratio))


def necessity_ratio_curve(params: OperatorParams, schedule=DEFAULT_SCHEDULE, last: int = 5) -> ExtremalCurve:
    """||T f_{xi,zeta}|| / ||f_{xi,zeta}|| with xi = zeta on the positive real axis.

    ``exponent`` is the fitted growth rate e (ratio ~ (1-|xi|^2)^{-e}).
    """
    sh = params.shifted()
    n = sh.n
    if any(x is INF for x in sh.p + sh.q):
        raise DomainError("needs finite exponents")
    if any(not b > -1 for b in sh.b):
        raise DomainError("the reproducing formula needs b > -1")
    # ||(1-|z|^2)^a g||_{q,beta} = (c_beta / c_{beta+aq})^{1/q} ||g||_{q, beta+aq}
    shift = math.prod((norm_const(params.beta[i], n) / norm_const(sh.beta[i], n)) ** (1.0 / sh.q[i])
                      for i in range(2))
    fn, tn = [], []
    for d in schedule:
        x = point_at(d, n)
        fam = kernel_family(sh, x, x)
        fnorm = family_mixed_norm(fam, sh.p, sh.alpha)
        t = shift
        for i in range(2):
            t *= _kernel_factor_norm(d, x.coords[0].real, sh.c[i], fam.prefactors[i], sh.q[i], sh.beta[i], n) \
                / norm_const(sh.b[i], n)
        fn.append(fnorm)
        tn.append(t)
    ratio = [t / f for t, f in zip(tn, fn)]
    return ExtremalCurve(list(schedule), fn, tn, ratio, growth_exponent(schedule, ratio, last))


def _critical_adjoint_factor(w: BallPoint, anchor: BallPoint, num: float, c: float, beta: float, n: int):
    """int (1-|eta|^2)^beta g_anchor(eta) (1 - <w, eta>)^{-c} dv(eta) for n = 1."""
    if n != 1:
        raise DomainError("the off-anchor adjoint evaluation is implemented for n = 1")
    den = n + 1.0 + beta
    delta = max(min(w.one_minus_norm_sq, anchor.one_minus_norm_sq), 1e-13)
    ang = float(np.angle(anchor.coords[0])) if anchor.coords[0] != 0 else 0.0
    prev = None
    for order in (8, 16, 32):
        rule = build_graded_disc_rule(beta, ang, delta, order)
        x = rule.nodes
        base = 1.0 - inner_product(anchor.array, x)
        vals = base ** num / np.abs(base) ** den * (1.0 - inner_product(w.array, x)) ** (-c)
        val = complex(np.sum(rule.weights_for(beta, normalized=False) * vals))
        if prev is not None and abs(val - prev) <= 1e-8 * abs(val):
            return val
        prev = val
    return val


def log_blowup_probe(params: OperatorParams, schedule=DEFAULT_SCHEDULE, factor: int = 1,
                     last: int = 5) -> ExtremalCurve:
    """Compare ||g_zeta||_{L^{q'}_beta} with ||T* g_zeta||_{L^{p'}_alpha} at an endpoint factor.

    ``factor`` (0 or 1) must have p = 1 and alpha = b. At the critical
    exponent c = (n+1+beta)/q the adjoint side grows like log(1/(1-|zeta|^2))
    while the input grows like its 1/q' power. The sup over the endpoint
    variable is bounded below by the value at w = zeta, which is what
    ``T_norm`` reports (``approximate``); a max over a few more points of
    the anchor's ray is kept in ``extra["T_ray_sup"]``.

    ``exponent`` is the log-power mismatch: T_norm power minus family_norm power.
    """
    sh = params.shifted()
    n, i, o = sh.n, factor, 1 - factor
    if sh.p[i] != 1.0 or abs(sh.alpha[i] - sh.b[i]) > EQ_TOL * max(1.0, abs(sh.b[i])):
        raise DomainError(f"factor {i + 1} needs p = 1 and alpha = b")
    if sh.q[i] is INF or sh.p[o] is INF:
        raise DomainError("needs finite q and p")
    qc = holder_conjugate(sh.q[i])
    num, den = (n + 1.0 + sh.beta[i]) / sh.q[i], n + 1.0 + sh.beta[i]
    # the other factor: T* of the constant 1 is (1-|z|^2)^{b-alpha} / c_beta
    pc_o = holder_conjugate(sh.p[o])
    other = power_norm_closed_form(sh.b[o] - sh.alpha[o], pc_o, sh.alpha[o], n) / norm_const(sh.beta[o], n)
    gn, tn, sup_est = [], [], []
    for d in schedule:
        anchor = point_at(d, n)
        if qc is INF:
            gn.append(1.0)
        else:
            gn.append((norm_const(sh.beta[i], n) * eval_I(anchor, (den - num) * qc, sh.beta[i], n)) ** (1.0 / qc))
        if abs(sh.c[i] - num) <= EQ_TOL:
            at_anchor = eval_I(anchor, den, sh.beta[i], n)
        else:
            at_anchor = abs(_critical_adjoint_factor(anchor, anchor, num, sh.c[i], sh.beta[i], n))
        ray = [abs(_critical_adjoint_factor(point_at(min(d * f, 0.9), n), anchor, num, sh.c[i],
                                            sh.beta[i], n)) for f in (0.25, 0.5, 2.0, 4.0)]
        tn.append(at_anchor * other)
        sup_est.append(max([at_anchor] + ray) * other)
    ratio = [t / g for t, g in zip(tn, gn)]
    mismatch = log_power(schedule, tn, last) - log_power(schedule, gn, last) if qc is not INF \
        else log_power(schedule, tn, last)
    return ExtremalCurve(list(schedule), gn, tn, ratio, mismatch, True,
                         {"T_log_power": log_power(schedule, tn, last),
                          "family_log_power": log_power(schedule, gn, last) if qc is not INF else 0.0,
                          "T_ray_sup": sup_est})
