import math

import numpy as np
import pytest

from fracmass import (Ball, Box, Constant, HalfSpace, Indicator, MassError,
                      PeriodicProfile, Periodic1D, Polynomial, Product,
                      ProfileReach, QuadratureSpec, RadialAngular,
                      RadialShells, Sector, Shift, Sum, TrigPoly,
                      alpha_analytic, alpha_numeric, alpha_translated,
                      angular_integral, power, sphere_area, tail_integral,
                      translation_bound)

SECTOR_HALF = Indicator(Sector(2, arcs=((0.0, math.pi / 2),)))
STRIPES = Periodic1D(PeriodicProfile(2.0, (0.0, 1.0), (1.0, 0.0)))


# ---------------------------------------------------------------------------
# analytic route


def test_alpha_constant_matches_sphere_constant():
    for d in (1, 2, 3):
        for p in (1, 2, 3):
            ma = alpha_analytic(Constant(d, 1.0), p, d)
            assert ma.route == "analytic"
            assert ma.value == pytest.approx(sphere_area(d) / p, rel=1e-12)


def test_alpha_compact_support_is_zero():
    ma = alpha_analytic(Indicator(Ball((0.0, 0.0), 5.0)), 3, 2)
    assert ma.value == 0.0 and ma.error == 0.0


def test_alpha_sector():
    ma = alpha_analytic(SECTOR_HALF, 1, 2)
    assert ma.value == pytest.approx(math.pi / 2.0, rel=1e-10)


def test_alpha_periodic_mean():
    ma = alpha_analytic(STRIPES, 2, 1)
    assert ma.value == pytest.approx(0.5, rel=1e-12)


def test_alpha_unknown_tail_rejected():
    with pytest.raises(MassError):
        alpha_analytic(Indicator(RadialShells(2)), 1, 2)


def test_alpha_requires_integer_p():
    with pytest.raises(MassError):
        alpha_analytic(Constant(1, 1.0), 1.5, 1)


def test_alpha_p_ratio():
    fields = [Constant(2, 1.0), SECTOR_HALF,
              RadialAngular(ProfileReach(1.0, 1.0),
                            TrigPoly(1.0, (0.5,), (0.25,)))]
    for f in fields:
        a1 = alpha_analytic(f, 1, 2).value
        for p in (2, 3, 4):
            ap = alpha_analytic(f, p, 2).value
            assert ap == pytest.approx(a1 / p, rel=1e-12)


def test_alpha_composition_with_powers():
    # alpha of f^k equals the angular integral of the k-th power of the
    # angular limit, checked against an independent quadrature
    f = RadialAngular(ProfileReach(1.0, 1.0), TrigPoly(1.0, (0.5,)))
    for k in (1, 2, 3):
        ma = alpha_analytic(power(f, k), 1, 2)
        want = angular_integral(
            lambda u: (1.0 + 0.5 * u[:, 0]) ** k, 2)
        assert abs(ma.value - want.value) <= 1e-8


# ---------------------------------------------------------------------------
# numeric route


def test_numeric_constant_d1(spec):
    res = alpha_numeric(Constant(1, 1.0), 2, 1, s_grid=(0.1, 0.0316227766,
                                                        0.01, 0.0031622777,
                                                        0.001), spec=spec)
    assert res.limit == pytest.approx(1.0, rel=1e-6)
    assert not res.flagged


def test_numeric_halfspace_symmetry(spec):
    res = alpha_numeric(Indicator(HalfSpace((1.0, 0.0))), 1, 2,
                        s_grid=(0.1, 0.0316227766, 0.01, 0.0031622777, 0.001),
                        spec=spec)
    assert res.limit == pytest.approx(math.pi, rel=1e-3)


def test_numeric_stripes(spec):
    res = alpha_numeric(STRIPES, 2, 1,
                        s_grid=(0.01, 0.0031622777, 0.001, 0.00031622777,
                                0.0001), R=2.0, spec=spec)
    assert res.limit == pytest.approx(0.5, rel=1e-2)


def test_numeric_r_independence(spec):
    grid = (0.1, 0.0316227766, 0.01, 0.0031622777, 0.001)
    a = alpha_numeric(SECTOR_HALF, 1, 2, grid, R=1.0, spec=spec)
    b = alpha_numeric(SECTOR_HALF, 1, 2, grid, R=10.0, spec=spec)
    tol = 3.0 * (a.limit_error + b.limit_error) + 1e-9
    assert abs(a.limit - b.limit) <= tol


def test_tail_integral_validation(spec):
    with pytest.raises(MassError):
        tail_integral(Constant(1, 1.0), 2, 1, s=1.5, R=1.0, spec=spec)
    with pytest.raises(MassError):
        tail_integral(Constant(1, 1.0), 2, 1, s=0.1, R=-1.0, spec=spec)


# ---------------------------------------------------------------------------
# translation invariance


@pytest.mark.parametrize("R", [10.0, 100.0])
def test_translation_invariance(R, spec):
    s = 1e-3
    ramp_in_box = Product((Polynomial(1, ((1.0, (1,)),)),
                           Indicator(Box((-1.0,), (1.0,)))))
    cases = [
        (Constant(2, 1.0), (3.0, 0.0)),
        (SECTOR_HALF, (1.0, -2.0)),
        (Sum((Constant(1, 1.0), ramp_in_box)), (4.0,)),
    ]
    for f, x in cases:
        d = f.dim
        base = alpha_translated(f, 1, d, (0.0,) * d, R, s, spec)
        moved = alpha_translated(f, 1, d, x, R, s, spec)
        bound = translation_bound(1, d, s, float(np.linalg.norm(x)), R,
                                  base.value)
        tol = bound + 3.0 * (base.error + moved.error) + 1e-12
        assert abs(moved.value - base.value) <= tol


def test_translated_compact_support(spec):
    f = Indicator(Ball((0.0, 0.0), 1.0))
    est = alpha_translated(f, 1, 2, (5.0, 1.0), 10.0, 1e-3, spec)
    s, R = 1e-3, 10.0
    assert abs(est.value) <= s * R ** (-(2 + s)) * math.pi + est.error + 1e-12


def test_shifted_field_same_alpha():
    f = SECTOR_HALF
    g = Shift(f, (2.0, -1.0))
    a = alpha_analytic(f, 2, 2).value
    b = alpha_analytic(g, 2, 2).value
    assert b == pytest.approx(a, rel=1e-12)
