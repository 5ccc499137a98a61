"""Schur-test test functions for S_{0,b,c} and numerical checks of the two
Schur inequalities.

The test functions are h1(u, eta) = (1-|u|^2)^{s1} (1-|eta|^2)^{s2} and
h2(z, w) = (1-|z|^2)^{r1} (1-|w|^2)^{r2}, with the kernel split as
K^{gamma} * K^{delta}, gamma + delta = 1, in each variable. The kernel is
K_i(z, u) = (1-|u|^2)^{b_i - alpha_i} |1 - <z,u>|^{-c_i} against dv_{alpha_i}.

A nonzero output weight a is first absorbed into the target measure
(beta -> beta + a q), so everything here is about S_{0,b,c}.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .asymptotics import eval_I, point_at
from .core import INF, OperatorParams, holder_conjugate, reciprocal
from .errors import DomainError, InfeasibleError
from .quadrature import QuadratureRule
from .special import norm_const

MARGIN = 1e-6
EQ_TOL = 1e-12
DEFAULT_RADII = (0.5, 0.75, 0.875, 0.9375, 0.96875, 0.984375, 0.99)


@dataclass(frozen=True)
class SchurWeights:
    lambda_: tuple
    tau: tuple
    r: tuple
    s: tuple
    gamma: tuple
    delta: tuple
    case_tag: str      # interior, p2_one, p1_one, both_one_eq, mixed
    variant: str       # which inequality pair applies: mixed_norm, both_one, p1_one, p2_one
    kernel_c: tuple    # kernel exponents the checks use
    kernel_weight: tuple  # b_i - alpha_i
    beta: tuple        # target weights after absorbing a
    s_interval: tuple  # open interval each s_i was taken from (None for fixed s)

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lambda_")
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _variant(p) -> str:
    if p[0] == 1.0 and p[1] == 1.0:
        return "both_one"
    if p[0] == 1.0:
        return "p1_one"
    if p[1] == 1.0:
        return "p2_one"
    return "mixed_norm"


def _subcritical_factor(n, al, be, b, q, p, c, mixed):
    """Weights for a factor with p = 1 or p > 1 and alpha + 1 < p (b + 1)."""
    inv_pc = reciprocal(holder_conjugate(p))  # 1/p'
    A = (n + 1 + al) * inv_pc
    Bq = (n + 1 + be) / q
    lam = Bq - (n + 1 + al) / p
    tau = A + Bq
    e = b - al
    if not e + (1 + al) * inv_pc > 0:
        raise InfeasibleError(f"alpha + 1 < p (b + 1) fails ({al + 1} vs {p * (b + 1)}): "
                              "no admissible s")
    r = -(1 + be) / (2 * q)
    if mixed:
        s, interval = 0.0, None
    else:
        lo = (-tau * (1 + al) * inv_pc - e * A + e * r) / (tau + e)
        hi = (e * Bq + e * r) / (tau + e)
        if hi - lo < MARGIN:
            raise InfeasibleError(f"s interval ({lo}, {hi}) is empty or narrower than {MARGIN}")
        s, interval = 0.5 * (lo + hi), (lo, hi)
    gamma = (A + s - r) / tau
    delta = (Bq + r - s) / tau
    return dict(lam=lam, tau=tau, r=r, s=s, gamma=gamma, delta=delta, kc=c, kw=e, interval=interval)


def _critical_factor(n, al, be, b, q, c):
    """Weights for a factor with p = 1 and alpha = b."""
    Bq = (n + 1 + be) / q
    kc = c if abs(c) > EQ_TOL else Bq / 2.0  # c = 0 is dominated by any c0 in (0, Bq)
    r = -(1 + be) / (2 * q)
    gamma = -r / kc
    return dict(lam=Bq - (n + 1 + al), tau=kc, r=r, s=0.0, gamma=gamma, delta=1.0 - gamma,
                kc=kc, kw=0.0, interval=None)


def construct_weights(params: OperatorParams) -> SchurWeights:
    """Explicit Schur test functions for the exponent pattern of ``params``.

    The subcritical weights are designed for the critical kernel exponent
    (smaller c only helps); the checks then use the actual c.
    """
    p, q = params.p, params.q
    if any(x is INF for x in p + q):
        raise DomainError("Schur weights need finite exponents")
    if max(p) > min(q):
        raise DomainError(f"Schur test needs max p <= min q, got p={p}, q={q}")
    sh = params.shifted()
    n = sh.n
    variant = _variant(p)
    kinds = []
    for i in range(2):
        if p[i] == 1.0:
            d = sh.alpha[i] - sh.b[i]
            if abs(d) <= EQ_TOL * max(1.0, abs(sh.b[i])):
                kinds.append("crit")
            elif d < 0 and variant == "both_one":
                kinds.append("sub")
            else:
                raise InfeasibleError(f"p{i + 1} = 1 needs alpha{i + 1} = b{i + 1}"
                                      + (" or alpha < b when both p are 1" if variant == "both_one" else ""))
        else:
            kinds.append("sub")
    mixed = variant == "both_one" and kinds[0] != kinds[1]
    facs = []
    for i, kind in enumerate(kinds):
        args = (n, sh.alpha[i], sh.beta[i], sh.b[i], q[i])
        if kind == "crit":
            facs.append(_critical_factor(*args, sh.c[i]))
        else:
            facs.append(_subcritical_factor(*args, p[i], sh.c[i], mixed))
    tag = {"mixed_norm": "interior", "p1_one": "p1_one", "p2_one": "p2_one"}.get(variant)
    if tag is None:
        tag = "interior" if kinds == ["sub", "sub"] else ("both_one_eq" if kinds == ["crit", "crit"] else "mixed")
    pick = lambda key: tuple(float(f[key]) for f in facs)  # noqa: E731
    return SchurWeights(pick("lam"), pick("tau"), pick("r"), pick("s"), pick("gamma"), pick("delta"),
                        tag, variant, pick("kc"), pick("kw"), tuple(sh.beta),
                        tuple(f["interval"] for f in facs))


def ray_sup(radius: float, E: float, G: float) -> float:
    """sup over u of (1 - |u|^2)^E |1 - <z,u>|^{-G} for |z| = radius (exact, along the ray)."""
    zr = radius if G >= 0 else -radius

    def g(rho):
        return (1 - rho * rho) ** E * (1 - zr * rho) ** (-G)

    cands = [0.0]
    # stationary points of E log(1 - rho^2) - G log(1 - zr rho)
    A, B, C = 2 * E * zr - G * zr, -2 * E, G * zr
    if abs(A) > 1e-300:
        disc = B * B - 4 * A * C
        if disc >= 0:
            cands += [(-B + sgn * math.sqrt(disc)) / (2 * A) for sgn in (1, -1)]
    elif abs(B) > 1e-300:
        cands.append(-C / B)
    best = max(g(x) for x in cands if 0 <= x < 1)
    if E < 0:
        return math.inf
    if E == 0:
        best = max(best, (1 - zr) ** (-G))
    return best


def _factor_first(w: SchurWeights, params: OperatorParams, i: int, radius: float, rule):
    """R_i at |z| = radius: the first-inequality integral (or sup) over h2_i^{p'}."""
    n = params.n
    al = params.alpha[i]
    pc = holder_conjugate(params.p[i])
    d = (1 - radius) * (1 + radius)
    E = w.kernel_weight[i] * w.gamma[i] + w.s[i]
    G = w.kernel_c[i] * w.gamma[i]
    if pc is INF:
        return ray_sup(radius, E, G) / d ** w.r[i]
    val = norm_const(al, n) * eval_I(point_at(d, n), G * pc, E * pc + al, n, rule)
    return val / d ** (w.r[i] * pc)


def _factor_second(w: SchurWeights, params: OperatorParams, i: int, radius: float, rule):
    n = params.n
    q = params.q[i]
    be = w.beta[i]
    d = (1 - radius) * (1 + radius)
    dq = w.delta[i] * q
    val = norm_const(be, n) * eval_I(point_at(d, n), w.kernel_c[i] * dq, w.r[i] * q + be, n, rule)
    return d ** (w.kernel_weight[i] * dq) * val / d ** (w.s[i] * q)


def first_exponents(variant, p):
    pc = [holder_conjugate(x) for x in p]
    if variant == "mixed_norm":
        return (pc[1] / pc[0], 1.0)
    if variant == "p1_one":
        return (pc[1], 1.0)
    if variant == "p2_one":
        return (1.0, pc[0])
    return (1.0, 1.0)


def schur_norm_bound(C1: float, C2: float, p, q, variant: str | None = None) -> float:
    """Operator-norm bound from the two Schur constants."""
    variant = variant or _variant(p)
    if variant == "both_one":
        e1 = 1.0
    elif variant == "p2_one":
        e1 = reciprocal(holder_conjugate(p[0]))
    else:
        e1 = reciprocal(holder_conjugate(p[1]))
    return C1 ** e1 * C2 ** (1.0 / q[1])


@dataclass
class SchurCheck:
    radii: list
    shell_ratio: list      # combined ratio at z = w on each shell
    running_max: list      # constant estimate using shells up to each radius
    max_ratio: float
    last_change: float     # relative change of running_max over the last shell

    @property
    def stabilized(self) -> bool:
        return self.last_change < 0.10


def _check(kind, w, params, radii, rule):
    radii = list(radii)
    fn = _factor_first if kind == "first" else _factor_second
    if kind == "first":
        ex = first_exponents(w.variant, params.p)
    else:
        ex = (params.q[1] / params.q[0], 1.0)
    R = [[fn(w, params, i, r, rule) for r in radii] for i in range(2)]
    shell = [R[0][k] ** ex[0] * R[1][k] ** ex[1] for k in range(len(radii))]
    run = [max(R[0][:k + 1]) ** ex[0] * max(R[1][:k + 1]) ** ex[1] for k in range(len(radii))]
    change = abs(run[-1] - run[-2]) / run[-1] if len(run) > 1 else 0.0
    return SchurCheck(radii, shell, run, run[-1], change)


def verify_schur_first(weights: SchurWeights, params: OperatorParams, sample_points=DEFAULT_RADII,
                       rule: QuadratureRule | None = None) -> SchurCheck:
    """Ratio LHS / h2^{p'} of the first Schur inequality on shells |z| = |w| = radius."""
    return _check("first", weights, params, sample_points, rule)


def verify_schur_second(weights: SchurWeights, params: OperatorParams, sample_points=DEFAULT_RADII,
                        rule: QuadratureRule | None = None) -> SchurCheck:
    """Ratio LHS / h1^{q2} of the second Schur inequality on shells |u| = |eta| = radius."""
    return _check("second", weights, params, sample_points, rule)


# -- node-level version -------------------------------------------------------


@dataclass
class DiscreteSchur:
    """Discrete operator f -> sum K1 K2 f mu1 mu2 with its exact Schur constants."""

    K1: np.ndarray
    K2: np.ndarray
    mu: tuple
    nu: tuple
    C1: float
    C2: float
    bound: float

    def apply(self, F):
        return (self.K1 * self.mu[0][None, :]) @ F @ (self.K2 * self.mu[1][None, :]).T


def discrete_schur(weights: SchurWeights, params: OperatorParams, rules_in, rules_out) -> DiscreteSchur:
    """Schur constants on finite node sets.

    rules_in[i] carries the source measure dv_alpha_i, rules_out[i] the target
    dv_beta_i. On finite measures the Schur argument is exact, so ``bound``
    dominates ||K f|| / ||f|| for every f on the input grid.
    """
    p, q = params.p, params.q
    Ks, mus, nus, R, Q = [], [], [], [], []
    for i in range(2):
        rin, rout = rules_in[i], rules_out[i]
        mu = rin.weights_for(params.alpha[i])
        nu = rout.weights_for(weights.beta[i])
        base = np.abs(1.0 - rout.nodes @ np.conj(rin.nodes).T)
        K = rin.one_minus_r2[None, :] ** weights.kernel_weight[i] * base ** (-weights.kernel_c[i])
        h1 = rin.one_minus_r2 ** weights.s[i]
        h2 = rout.one_minus_r2 ** weights.r[i]
        g, dl = weights.gamma[i], weights.delta[i]
        pc = holder_conjugate(p[i])
        if pc is INF:
            R.append(np.max(K ** g * h1[None, :], axis=1) / h2)
        else:
            R.append((K ** (g * pc) * h1[None, :] ** pc) @ mu / h2 ** pc)
        Q.append((nu * h2 ** q[i]) @ K ** (dl * q[i]) / h1 ** q[i])
        Ks.append(K)
        mus.append(mu)
        nus.append(nu)
    ex = first_exponents(weights.variant, p)
    C1 = float(np.max(R[0]) ** ex[0] * np.max(R[1]) ** ex[1])
    C2 = float(np.max(Q[0]) ** (q[1] / q[0]) * np.max(Q[1]))
    return DiscreteSchur(Ks[0], Ks[1], tuple(mus), tuple(nus), C1, C2,
                         schur_norm_bound(C1, C2, p, q, weights.variant))


def schur_csv_rows(first: SchurCheck, second: SchurCheck):
    return [(r, a, b) for r, a, b in zip(first.radii, first.shell_ratio, second.shell_ratio)]
