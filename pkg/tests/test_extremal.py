import numpy as np
import pytest

from forelli_rudin.asymptotics import DEFAULT_SCHEDULE, point_at
from forelli_rudin.core import BallPoint, ProductPoint
from forelli_rudin.errors import DomainError
from forelli_rudin.extremal import (as_separable, closed_form_T_kernel, eval_family, family_mixed_norm, growth_exponent,
                                    kernel_family, kernel_test_quantity, log_blowup_probe,
                                    necessity_ratio_curve, power_family, unimodular_family)
from forelli_rudin.mixed_norm import power_norm_closed_form
from forelli_rudin.operators import apply_T
from forelli_rudin.quadrature import ProductRule, build_disc_rule, build_graded_disc_rule
from forelli_rudin.special import beta_fn


def pp(z, w):
    return ProductPoint(BallPoint.of(z), BallPoint.of(w))


def test_family_values_at_origin(stein):
    o = pp((0.0,), (0.0,))
    assert eval_family(power_family(1.5, 2.0), o) == 1
    assert eval_family(kernel_family(stein, 0.0, 0.0), o) == 1


def test_unimodular_modulus(stein, rng):
    fam = unimodular_family(stein, (0.7,), factor=1)
    for _ in range(10):
        z, w = rng.uniform(-0.6, 0.6, 2) + 1j * rng.uniform(-0.6, 0.6, 2)
        val = eval_family(fam, pp((z,), (w,)))
        assert abs(val) == pytest.approx(abs(1 - 0.7 * np.conj(w)) ** (-1.0), rel=1e-12)


def test_power_family_norm():
    got = family_mixed_norm(power_family(0.5, 1.0), (2, 3), (0.0, 1.0))
    assert got == pytest.approx(power_norm_closed_form(0.5, 2, 0.0, 1) * power_norm_closed_form(1.0, 3, 1.0, 1))
    rule = ProductRule(build_disc_rule(12, 8, 0.0), build_disc_rule(12, 8, 1.0))
    assert family_mixed_norm(power_family(0.5, 1.0), (2, 3), (0.0, 1.0), rule) == pytest.approx(got, rel=1e-10)


def test_kernel_family_norm_against_quadrature(stein):
    fam = kernel_family(stein, (0.8,), (0.9,))
    rule = ProductRule(build_graded_disc_rule(0.0, 0.0, 0.36, 24), build_graded_disc_rule(0.0, 0.0, 0.19, 24))
    direct = family_mixed_norm(fam, stein.p, stein.alpha, rule)
    assert family_mixed_norm(fam, stein.p, stein.alpha) == pytest.approx(direct, rel=1e-8)


def test_kernel_family_uniform_bound(stein):
    vals = [family_mixed_norm(kernel_family(stein, (r,), (r,)), stein.p, stein.alpha) for r in (0.9, 0.99, 0.999)]
    assert max(vals) / min(vals) < 3


def test_critical_kernel_family_grows_like_log(stein):
    P = stein.with_(p=(2, 1), q=(2, 2))
    ds = DEFAULT_SCHEDULE
    vals = [family_mixed_norm(kernel_family(P, point_at(d), point_at(d), critical=(False, True)), P.p, P.alpha)
            for d in ds]
    x = np.log(np.log(1 / np.array(ds)))
    slope = np.polyfit(x[-5:], np.log(vals[-5:]), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.1)


@pytest.mark.parametrize("z,w", [((0.3,), (-0.2j,)), ((0.5j,), (0.4,)), ((-0.45 + 0.1j,), (0.2 - 0.3j,))])
def test_closed_form_matches_quadrature(stein, z, w):
    P = stein.with_(a=(0.3, 0.0), b=(0.5, 1.0), c=(1.8, 2.4), alpha=(0.5, 0.2))
    fam = kernel_family(P, (0.6,), (0.5j,))
    got = apply_T(as_separable(fam), P, pp(z, w))
    assert got == pytest.approx(closed_form_T_kernel(P, (0.6,), (0.5j,), pp(z, w)), rel=1e-4)
    # a general callable through a shared 4D rule, at a smaller radius
    rin = ProductRule(build_disc_rule(64, 128, 0.5), build_disc_rule(64, 128, 1.0))
    at = pp((0.3,), (0.2j,))
    _, f0, f1 = as_separable(fam).terms[0]
    gen = apply_T(lambda Z, W: f0(Z) * f1(W), P, at, rule=rin)
    assert gen == pytest.approx(closed_form_T_kernel(P, (0.6,), (0.5j,), at), rel=1e-4)


def test_kernel_test_quantity(stein):
    assert kernel_test_quantity((0.0,), stein) == pytest.approx(beta_fn(1, 1), rel=1e-12)
    P = stein.with_(c=(2.5, 2))
    ds = DEFAULT_SCHEDULE
    vals = [kernel_test_quantity(point_at(d), P) for d in ds]
    slope = np.polyfit(np.log(ds[-5:]), np.log(vals[-5:]), 1)[0]
    assert slope == pytest.approx(-0.5 * P.q[0], rel=0.1)


def test_kernel_test_quantity_bounded_at_bound(stein):
    P = stein.with_(c=(1.8, 2), b=(-0.1, 0))
    vals = [kernel_test_quantity(point_at(d), P) for d in DEFAULT_SCHEDULE]
    assert max(vals) / min(vals) < 3


def test_necessity_curves(stein):
    bounded = necessity_ratio_curve(stein)
    assert bounded.ratio[-1] / bounded.ratio[0] < 3
    bad = necessity_ratio_curve(stein.with_(c=(2.5, 2)))
    assert 0.4 <= bad.exponent <= 0.6
    assert bad.ratio[-3] < bad.ratio[-2] < bad.ratio[-1]
    flat = necessity_ratio_curve(stein, schedule=[0.1] * 6)
    assert len(set(flat.ratio)) == 1


def test_growth_exponent_fit():
    d = np.array(DEFAULT_SCHEDULE)
    assert growth_exponent(d, 7.0 * d ** -0.3) == pytest.approx(0.3, abs=1e-12)


def test_log_probe_q2_two(stein):
    P = stein.with_(p=(2, 1), q=(2, 2), c=(2, 1.0), alpha=(0, 0), b=(0, 0))
    curve = log_blowup_probe(P)
    assert curve.exponent == pytest.approx(0.5, abs=0.1)
    assert curve.extra["family_log_power"] == pytest.approx(0.5, abs=0.1)


def test_log_probe_q2_one(stein):
    P = stein.with_(p=(1, 1), q=(1, 1), c=(1.9, 2.0))
    curve = log_blowup_probe(P)
    assert curve.family_norm == [1.0] * len(curve.family_norm)
    assert curve.extra["T_log_power"] == pytest.approx(1.0, abs=0.1)


def test_log_probe_subcritical_adjoint_bounded(stein):
    # below the critical exponent the adjoint side stays bounded; with q2 > 1
    # the input still grows like log^{1/q2'}
    P = stein.with_(p=(2, 1), q=(2, 2), c=(2, 0.7))
    curve = log_blowup_probe(P)
    assert max(curve.T_norm) / min(curve.T_norm) < 3
    assert curve.ratio[-1] < curve.ratio[0]


def test_log_probe_requires_endpoint(stein):
    with pytest.raises(DomainError):
        log_blowup_probe(stein)
