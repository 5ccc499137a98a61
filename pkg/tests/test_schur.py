import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from forelli_rudin.core import INF, OperatorParams
from forelli_rudin.criteria import classify
from forelli_rudin.errors import DomainError, InfeasibleError
from forelli_rudin.mixed_norm import MixedNormSpec, mixed_norm
from forelli_rudin.quadrature import build_disc_rule
from forelli_rudin.schur import (construct_weights, discrete_schur, ray_sup, schur_norm_bound,
                                 verify_schur_first, verify_schur_second)


def test_stein_weights_exact(stein):
    w = construct_weights(stein)
    assert w.lambda_ == (0.0, 0.0) and w.tau == (2.0, 2.0)
    assert w.r == (-0.25, -0.25) and w.s == (-0.25, -0.25)
    assert w.gamma == (0.5, 0.5) and w.delta == (0.5, 0.5)
    assert w.s_interval == ((-0.5, 0.0), (-0.5, 0.0))
    assert w.case_tag == "interior"
    assert '"lambda"' in w.to_json()


@st.composite
def bounded_interior(draw):
    p = (draw(st.floats(1.2, 3.0)), draw(st.floats(1.2, 3.0)))
    q = tuple(max(p) + draw(st.floats(0.0, 2.0)) for _ in range(2))
    b = (draw(st.floats(-0.5, 2.0)), draw(st.floats(-0.5, 2.0)))
    alpha = tuple(draw(st.floats(-0.9, p[i] * (b[i] + 1) - 1 - 0.05)) for i in range(2))
    beta = (draw(st.floats(-0.9, 2.0)), draw(st.floats(-0.9, 2.0)))
    return OperatorParams(draw(st.integers(1, 3)), (0, 0), b, (0.0, 0.0), alpha, beta, p, q)


@settings(max_examples=100, deadline=None)
@given(bounded_interior())
def test_split_and_interval_invariants(P):
    w = construct_weights(P)
    for i in range(2):
        assert w.gamma[i] + w.delta[i] == pytest.approx(1.0, abs=1e-14)
        assert -(1 + w.beta[i]) / P.q[i] < w.r[i] < 0
        lo, hi = w.s_interval[i]
        assert lo + 1e-6 <= w.s[i] <= hi - 1e-6


def test_infeasible_and_domain_errors(stein):
    with pytest.raises(InfeasibleError):
        construct_weights(stein.with_(alpha=(1.0, 0.0)))  # alpha1 + 1 = p1 (b1 + 1)
    with pytest.raises(InfeasibleError):
        construct_weights(stein.with_(p=(1, 2), alpha=(0.5, 0)))
    with pytest.raises(DomainError):
        construct_weights(stein.with_(p=(3, 2), q=(2, 2)))
    with pytest.raises(DomainError):
        construct_weights(stein.with_(q=(2, INF)))


def test_endpoint_constructions(stein):
    w = construct_weights(stein.with_(p=(2, 1), q=(2, 2), c=(2, 1.5)))
    assert w.case_tag == "p2_one" and w.gamma[1] == pytest.approx(0.25 / 1.5)
    w = construct_weights(stein.with_(p=(1, 1), q=(1, 1), c=(0.0, 1.9)))
    assert w.case_tag == "both_one_eq" and w.kernel_c[0] == 1.0
    w = construct_weights(stein.with_(p=(1, 1), q=(1, 1), b=(0.5, 0.0), c=(2.5, 1.9)))
    assert w.case_tag == "mixed" and w.s[0] == 0.0


def test_ray_sup_matches_brute_force():
    g = np.random.default_rng(3)
    for _ in range(30):
        R, E, G = g.uniform(0, 0.99), g.uniform(-2, 2), g.uniform(-3, 3)
        rho = np.linspace(-1 + 1e-9, 1 - 1e-9, 400_001)
        brute = np.max((1 - rho ** 2) ** E * np.abs(1 - R * rho) ** (-G))
        assert ray_sup(R, E, G) >= brute * (1 - 1e-9)
        assert ray_sup(R, E, G) <= brute * (1 + 1e-4) or E < 0


def test_norm_bound_arithmetic():
    assert schur_norm_bound(1.0, 1.0, (3, 1.7), (3, 4)) == 1.0
    assert schur_norm_bound(4.0, 9.0, (2, 2), (2, 2)) == pytest.approx(6.0)


def test_stein_checks_stabilize(stein):
    a, b = verify_schur_first(construct_weights(stein), stein), verify_schur_second(construct_weights(stein), stein)
    for chk in (a, b):
        assert chk.stabilized and chk.max_ratio < 10


def test_equal_weights_settle_deep(stein):
    # with b = alpha the ratio approaches its limit like a power of 1 - |z|^2,
    # so flatness only shows up close to the sphere
    P = stein.with_(p=(2, 2), q=(3, 3), b=(0.5, 0.5), alpha=(0.5, 0.5), c=(23 / 12, 23 / 12))
    assert classify(P).bounded
    radii = [math.sqrt(1 - 2.0 ** -k) for k in range(2, 31, 4)]
    for fn in (verify_schur_first, verify_schur_second):
        chk = fn(construct_weights(P), P, radii)
        assert chk.last_change < 0.01
        assert max(chk.shell_ratio[-3:]) / min(chk.shell_ratio[-3:]) < 1.2


def test_violating_tuple_grows(stein):
    bad = stein.with_(c=(2.5, 2))
    chk = verify_schur_second(construct_weights(bad), bad)
    assert not chk.stabilized
    assert all(x < y for x, y in zip(chk.shell_ratio[-4:], chk.shell_ratio[-3:]))


def test_discrete_bound_dominates(stein, rng):
    rin = (build_disc_rule(10, 12), build_disc_rule(10, 12))
    rout = (build_disc_rule(9, 11), build_disc_rule(9, 11))
    w = construct_weights(stein)
    ds = discrete_schur(w, stein, rin, rout)
    spec_in = MixedNormSpec(stein.p, stein.alpha, *rin)
    spec_out = MixedNormSpec(stein.q, stein.beta, *rout)
    for _ in range(20):
        F = rng.standard_normal((rin[0].size, rin[1].size)) + 1j * rng.standard_normal((rin[0].size, rin[1].size))
        ratio = mixed_norm(ds.apply(F), spec_out) / mixed_norm(F, spec_in)
        assert ratio <= ds.bound * (1 + 1e-12)
    # f == 1 is close to the extremal direction for a positive kernel
    ones = np.ones((rin[0].size, rin[1].size))
    assert mixed_norm(ds.apply(ones), spec_out) / mixed_norm(ones, spec_in) <= ds.bound
