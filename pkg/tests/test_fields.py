import math

import numpy as np
import pytest

from fracmass import (AngularIndicator, AngularLimit, Ball, Box, Bump,
                      CompactSupport, Constant, FieldError, Indicator,
                      PeriodicMean, PeriodicProfile, Periodic1D, Polynomial,
                      Product, ProfileReach, RadialAngular, RadialShells,
                      Sector, Shift, Sum, TrigPoly, UniformValue, UnknownTail,
                      neg_part, pos_part, power)
from fracmass.fields import tails_structurally_equal


def ev(f, *coords):
    return float(f.values(np.array([coords], dtype=float))[0])


def example_v():
    """1 + x inside (-1,1), constant 1 outside."""
    ramp = Product((Polynomial(1, ((1.0, (1,)),)),
                    Indicator(Box((-1.0,), (1.0,)))))
    return Sum((Constant(1, 1.0), ramp))


STRIPES = Periodic1D(PeriodicProfile(1.0, (0.0, 0.5), (1.0, 0.0)))


# ---------------------------------------------------------------------------
# pointwise evaluation


def test_eval_examples():
    assert ev(Indicator(Ball((0.0, 0.0), 1.0)), 0.3, 0.0) == 1.0
    assert ev(example_v(), 0.5) == pytest.approx(1.5)
    assert ev(example_v(), 3.0) == pytest.approx(1.0)
    assert ev(STRIPES, 1.25) == 1.0
    assert ev(STRIPES, 1.75) == 0.0


def test_eval_dimension_mismatch():
    with pytest.raises(FieldError):
        Constant(2, 1.0).values(np.zeros((3, 1)))


def test_constructor_zoo_evaluates(rng):
    fields = [
        Constant(2, -1.5),
        Indicator(Sector(2, arcs=((0.0, 2.0),))),
        Polynomial(2, ((1.0, (2, 0)), (-0.5, (1, 1)))),
        Bump((0.1, -0.2), 0.7, k=3, scale=2.0),
        RadialAngular(ProfileReach(1.0, 2.0), TrigPoly(0.5, (1.0,), (0.0,))),
        Shift(Bump((0.0, 0.0), 1.0), (0.5, 0.5)),
        power(Bump((0.0, 0.0), 1.0), 3),
    ]
    x = rng.normal(size=(64, 2))
    for f in fields:
        out = f.values(x)
        assert out.shape == (64,)
        assert np.all(np.isfinite(out))


# ---------------------------------------------------------------------------
# algebraic wrappers


def test_pos_neg_decomposition(rng):
    fields = [
        Constant(1, -3.0),
        Polynomial(1, ((1.0, (1,)),)),
        example_v(),
        Sum((Polynomial(1, ((1.0, (3,)),)), Constant(1, -0.25))),
        Periodic1D(PeriodicProfile(2.0, (0.0, 1.0), (1.0, -1.0))),
    ]
    x = rng.uniform(-4.0, 4.0, size=(10_000, 1))
    for f in fields:
        v = f.values(x)
        vp = pos_part(f).values(x)
        vn = neg_part(f).values(x)
        assert np.all(vp >= 0.0) and np.all(vn >= 0.0)
        np.testing.assert_allclose(vp - vn, v, atol=1e-12)


def test_pos_part_examples():
    assert ev(pos_part(Constant(1, -3.0)), 0.7) == 0.0
    assert ev(neg_part(Indicator(Ball((0.0,), 1.0))), 0.2) == 0.0
    ramp = Product((Polynomial(1, ((1.0, (1,)),)),
                    Indicator(Box((-1.0,), (1.0,)))))
    assert ev(pos_part(ramp), 0.5) == pytest.approx(0.5)
    assert ev(pos_part(ramp), -0.5) == 0.0


def test_power_matches_product(rng):
    f = Sum((Bump((0.0, 0.0), 1.0), Constant(2, 0.3)))
    x = rng.normal(size=(10_000, 2))
    np.testing.assert_allclose(power(f, 2).values(x),
                               Product((f, f)).values(x), atol=1e-12)


def test_power_indicator_idempotent(rng):
    chi = Indicator(Ball((0.0, 0.0), 1.0))
    x = rng.uniform(-2.0, 2.0, size=(5000, 2))
    np.testing.assert_array_equal(power(chi, 2).values(x), chi.values(x))


def test_power_constant_and_zero():
    assert ev(power(Constant(1, 3.0), 2), 0.0) == pytest.approx(9.0)
    unit = power(Bump((0.0,), 1.0), 0)
    assert ev(unit, 5.0) == 1.0
    t = unit.tail()
    assert isinstance(t, AngularLimit)
    assert float(t.limit.values(np.array([[1.0]]))[0]) == 1.0


# ---------------------------------------------------------------------------
# tail models


def test_tail_model_examples():
    assert isinstance(Indicator(Sector(2, arcs=((0.0, 1.0),))).tail(),
                      AngularLimit)
    t = Indicator(Ball((0.0, 0.0), 1.0)).tail()
    assert isinstance(t, CompactSupport) and t.radius == pytest.approx(1.0)
    assert isinstance(Indicator(RadialShells(2)).tail(), UnknownTail)
    assert isinstance(STRIPES.tail(), PeriodicMean)
    assert STRIPES.tail().mean == pytest.approx(0.5)


def test_compact_support_really_vanishes(rng):
    f = Bump((0.2, -0.1), 0.6, scale=3.0)
    t = f.tail()
    r = t.radius
    theta = rng.uniform(0.0, 2.0 * math.pi, size=200)
    x = (r + 1e-9 + rng.uniform(0.0, 5.0, size=200))[:, None] \
        * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    assert np.all(f.values(x) == 0.0)


def test_tail_propagation_through_nodes():
    sec = Indicator(Sector(2, arcs=((0.0, 1.0),)))
    bump = Bump((0.0, 0.0), 1.0)
    assert isinstance(Sum((sec, bump)).tail(), AngularLimit)
    assert isinstance(Product((sec, Constant(2, 2.0))).tail(), AngularLimit)
    shells = Indicator(RadialShells(2))
    assert isinstance(Sum((sec, shells)).tail(), UnknownTail)
    assert tails_structurally_equal(Shift(sec, (1.0, 2.0)).tail(), sec.tail())


def test_power_squares_angular_limit():
    f = RadialAngular(ProfileReach(1.0, 1.0), TrigPoly(0.0, (1.0,)))
    t2 = power(f, 2).tail()
    assert isinstance(t2, AngularLimit)
    ang = np.array([0.0, 0.7, 2.1])
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    np.testing.assert_allclose(t2.limit.values(dirs), np.cos(ang) ** 2,
                               atol=1e-12)


def test_pos_part_tail_rules():
    f = RadialAngular(ProfileReach(1.0, 1.0), TrigPoly(0.0, (1.0,)))
    tp = pos_part(f).tail()
    assert isinstance(tp, AngularLimit)
    ang = np.array([0.5, 2.5])
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    np.testing.assert_allclose(tp.limit.values(dirs),
                               np.maximum(np.cos(ang), 0.0), atol=1e-12)
    # piecewise-constant periodic profiles clip exactly
    sq = Periodic1D(PeriodicProfile(2.0, (0.0, 1.0), (1.0, -1.0)))
    assert pos_part(sq).tail().mean == pytest.approx(0.5)
    assert neg_part(sq).tail().mean == pytest.approx(0.5)


def test_far_values_match_direct_evaluation(rng):
    fields = [
        example_v(),
        Indicator(Sector(2, arcs=((0.3, 2.0),))),
        Sum((Constant(2, 0.5), Bump((0.0, 0.0), 1.0))),
    ]
    for f in fields:
        d = f.dim
        u = rng.normal(size=(50, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        lam = 150.0
        np.testing.assert_allclose(f.far_values(lam, u), f.values(lam * u),
                                   atol=1e-9)


def test_far_values_unavailable_for_periodic():
    with pytest.raises(FieldError):
        STRIPES.far_values(1e6, np.array([[1.0]]))
