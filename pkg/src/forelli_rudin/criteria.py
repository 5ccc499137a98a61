"""Boundedness criteria for T_{a,b,c} / S_{a,b,c} : L^p_alpha -> L^q_beta on a
product of two balls, plus the Bergman and Berezin special cases and the
classical one-variable criteria used as cross-checks.

Inequalities are evaluated as stated: strict ones fail at equality.
Two reals within EQ_TOL (relative to their size) count as equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import INF, OperatorParams, exponent_extremes, parse_exponent
from .errors import DomainError

EQ_TOL = 1e-12


@dataclass(frozen=True)
class Condition:
    id: str
    lhs: float
    rhs: float
    strictness: str  # "<", "<=", "=="

    @property
    def holds(self) -> bool:
        close = abs(self.lhs - self.rhs) <= EQ_TOL * max(1.0, abs(self.lhs), abs(self.rhs))
        if self.strictness == "==":
            return close
        if self.strictness == "<=":
            return close or self.lhs < self.rhs
        if self.strictness == "<":
            return not close and self.lhs < self.rhs
        raise ValueError(self.strictness)

    def as_tuple(self):
        return (self.id, self.lhs, self.rhs, self.strictness)


@dataclass
class ClassificationResult:
    bounded: bool
    theorem_case: str
    satisfied_branch: str | None = None
    failures: list = field(default_factory=list)
    conditions: list = field(default_factory=list)

    def to_dict(self):
        return {"bounded": self.bounded, "theorem_case": self.theorem_case,
                "satisfied_branch": self.satisfied_branch,
                "failures": [list(f) for f in self.failures]}


def _case(p, q) -> str:
    """Which characterisation applies to the exponent pattern, if any."""
    if any(x is INF for x in tuple(p) + tuple(q)):
        return "out_of_domain"
    qmin = exponent_extremes(q)[0]
    p1, p2 = p
    if p1 == 1.0 and p2 == 1.0:
        return "both_ones"
    if p1 == 1.0:
        return "p1_endpoint" if p2 <= qmin else "out_of_domain"
    if p2 == 1.0:
        return "p2_endpoint" if p1 <= qmin else "out_of_domain"
    return "interior" if max(p1, p2) <= qmin else "out_of_domain"


_BRANCHES = {
    "interior": [("interior", ("sub", "sub"))],
    "p1_endpoint": [("first_critical", ("crit", "sub"))],
    "p2_endpoint": [("second_critical", ("sub", "crit"))],
    "both_ones": [("both_subcritical", ("sub", "sub")), ("both_critical", ("crit", "crit")),
                  ("first_critical", ("crit", "sub")), ("second_critical", ("sub", "crit"))],
}


def _decide(case, factor_conditions):
    if case == "out_of_domain":
        return ClassificationResult(False, case)
    tried = []
    for name, kinds in _BRANCHES[case]:
        conds = factor_conditions(0, kinds[0]) + factor_conditions(1, kinds[1])
        fails = [c for c in conds if not c.holds]
        if not fails:
            return ClassificationResult(True, case, name, [], conds)
        tried.append((name, conds, fails))
    if len(tried) == 1:
        _, conds, fails = tried[0]
        return ClassificationResult(False, case, None, [f.as_tuple() for f in fails], conds)
    failures = [(f"{name}:{f.id}", f.lhs, f.rhs, f.strictness) for name, _, fails in tried for f in fails]
    return ClassificationResult(False, case, None, failures, [c for _, cs, _ in tried for c in cs])


def classify(params: OperatorParams) -> ClassificationResult:
    """Decide boundedness of T_{a,b,c} (equivalently S_{a,b,c}) from L^p_alpha to L^q_beta."""
    n, a, b, c, al, be, p, q = (params.n, params.a, params.b, params.c, params.alpha,
                                params.beta, params.p, params.q)

    def conds(i, kind):
        k = i + 1
        out = [Condition(f"a{k}", -q[i] * a[i], be[i] + 1.0, "<")]
        if kind == "sub":
            lam = (n + 1 + be[i]) / q[i] - (n + 1 + al[i]) / p[i]
            out.append(Condition(f"b{k}", al[i] + 1.0, p[i] * (b[i] + 1.0), "<"))
            out.append(Condition(f"c{k}", c[i], n + 1 + a[i] + b[i] + lam, "<="))
        else:
            out.append(Condition(f"alpha{k}_eq_b{k}", al[i], b[i], "=="))
            out.append(Condition(f"c{k}", c[i], a[i] + (n + 1 + be[i]) / q[i], "<"))
        return out

    return _decide(_case(p, q), conds)


def _special_conditions(gamma, alpha, beta, p, q, n):
    def conds(i, kind):
        k = i + 1
        if kind == "sub":
            return [Condition(f"gamma{k}", alpha[i] + 1.0, p[i] * (gamma[i] + 1.0), "<"),
                    Condition(f"scale{k}", (n + 1 + alpha[i]) / p[i], (n + 1 + beta[i]) / q[i], "<=")]
        return [Condition(f"alpha{k}_eq_gamma{k}", alpha[i], gamma[i], "=="),
                Condition(f"scale{k}", n + 1 + gamma[i], (n + 1 + beta[i]) / q[i], "<")]
    return conds


def _special_args(gamma, alpha, beta, p, q, n):
    for name, pair in (("gamma", gamma), ("alpha", alpha), ("beta", beta)):
        if any(not x > -1 for x in pair):
            raise DomainError(f"{name} entries must exceed -1, got {tuple(pair)}")
    p = tuple(parse_exponent(x, "p") for x in p)
    q = tuple(parse_exponent(x, "q") for x in q)
    return tuple(map(float, gamma)), tuple(map(float, alpha)), tuple(map(float, beta)), p, q, int(n)


def classify_berezin(gamma, alpha, beta, p, q, n: int = 1) -> ClassificationResult:
    """Berezin transform B_gamma : L^p_alpha -> L^q_beta."""
    args = _special_args(gamma, alpha, beta, p, q, n)
    return _decide(_case(args[3], args[4]), _special_conditions(*args))


def classify_bergman(gamma, alpha, beta, p, q, n: int = 1) -> ClassificationResult:
    """Bergman projection P_gamma : L^p_alpha -> L^q_beta.

    Same conditions as the Berezin transform.
    """
    args = _special_args(gamma, alpha, beta, p, q, n)
    return _decide(_case(args[3], args[4]), _special_conditions(*args))


def bergman_as_operator(gamma, alpha, beta, p, q, n: int = 1) -> OperatorParams:
    """P_gamma as T_{0, gamma, n+1+gamma} (up to positive normalising constants)."""
    return OperatorParams(n, (0.0, 0.0), tuple(gamma), tuple(n + 1.0 + g for g in gamma),
                          tuple(alpha), tuple(beta), tuple(p), tuple(q))


def berezin_as_operator(gamma, alpha, beta, p, q, n: int = 1) -> OperatorParams:
    """B_gamma as S_{n+1+gamma, gamma, 2(n+1+gamma)} (up to normalising constants)."""
    return OperatorParams(n, tuple(n + 1.0 + g for g in gamma), tuple(gamma),
                          tuple(2.0 * (n + 1.0 + g) for g in gamma),
                          tuple(alpha), tuple(beta), tuple(p), tuple(q))


def classify_diagonal_classical(p: float, sigma: float, n: int = 1) -> bool:
    """One-variable T_{0,sigma,n+1+sigma} on L^p(dv): bounded iff (sigma + 1) p > 1."""
    if not 1.0 <= p < float("inf"):
        raise DomainError(f"need 1 <= p < inf, got {p}")
    return (sigma + 1.0) * p > 1.0


def classify_zhu_classical(p: float, a: float, b: float, lam: float) -> bool:
    """One-variable T_{a,b,n+1+a+b} on L^p(dv_lam): bounded iff -p a < lam + 1 < p (b + 1)."""
    if not 1.0 <= p < float("inf"):
        raise DomainError(f"need 1 <= p < inf, got {p}")
    return -p * a < lam + 1.0 < p * (b + 1.0)


def sweep(params: OperatorParams, field_name: str, index: int, values):
    """Classify along a one-parameter family obtained by varying one entry."""
    out = []
    for v in values:
        pair = list(getattr(params, field_name))
        pair[index] = v
        out.append((v, classify(params.with_(**{field_name: tuple(pair)}))))
    return out
