import math

import numpy as np
import pytest
from scipy.special import ndtr

from fracmass import (Ball, Box, Complement, Empty, GaussError,
                      GaussianMeasure, HalfSpace, MehlerKernel,
                      closed_form_limit, exact, fit_points, gauss_perimeter,
                      gauss_sweep, pair_mass_limit, rho_s)
from fracmass.quad import adaptive_1d

HALFLINE = HalfSpace((1.0,))
INTERVAL = Box((-1.0,), (1.0,))
HALFPLANE = HalfSpace((1.0, 0.0))
DISK = Ball((0.0, 0.0), 1.0)


# ---------------------------------------------------------------------------
# measure and kernel primitives


def test_gaussian_mass_d1():
    m = GaussianMeasure(1)
    got = adaptive_1d(m.density, -9.0, 9.0, rel_tol=1e-13)
    assert got.value == pytest.approx(1.0, abs=1e-12)
    assert m.cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert m.interval_mass(-1.0, 1.0) == pytest.approx(
        2.0 * ndtr(1.0) - 1.0, abs=1e-14)


def test_gaussian_mass_d2():
    m = GaussianMeasure(2)
    gx, gw = np.polynomial.legendre.leggauss(48)
    edges = np.linspace(-9.0, 9.0, 7)
    nodes = np.concatenate([0.5 * (a + b) + 0.5 * (b - a) * gx
                            for a, b in zip(edges[:-1], edges[1:])])
    wts = np.concatenate([0.5 * (b - a) * gw
                          for a, b in zip(edges[:-1], edges[1:])])
    pts = np.stack([np.repeat(nodes, nodes.size),
                    np.tile(nodes, nodes.size)], axis=1)
    mass = float((wts[:, None] * wts[None, :]).ravel() @ m.density(pts))
    assert mass == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(GaussError):
        m.cdf(0.0)


def test_mehler_symmetry_and_long_time(rng):
    x = rng.normal(size=(6, 2))
    y = rng.normal(size=(6, 2))
    k = MehlerKernel(0.7)
    assert np.allclose(k.eval(x, y), k.eval(y, x), rtol=0.0, atol=1e-14)
    far = MehlerKernel(40.0)
    assert np.max(np.abs(far.eval(x, y) - 1.0)) < 1e-12
    with pytest.raises(GaussError):
        MehlerKernel(0.0)


def test_rho_symmetry():
    for s in (0.05, 0.31, 0.9):
        assert rho_s(-2.0, 1.5, s) == pytest.approx(rho_s(1.5, -2.0, s),
                                                    rel=1e-13)
    a, b = (0.3, -0.4), (-1.1, 0.8)
    assert rho_s(a, b, 0.25, 2) == pytest.approx(rho_s(b, a, 0.25, 2),
                                                 rel=1e-13)


def test_rho_rejects_diagonal_and_bad_s():
    with pytest.raises(GaussError):
        rho_s(0.5, 0.5, 0.3)
    for s in (0.0, 1.0, 1.5, -0.2):
        with pytest.raises(GaussError):
            rho_s(0.0, 1.0, s)


def test_rho_scaled_limit_on_point_grid():
    # s * rho_s -> 2 for every off-diagonal pair; extrapolate down a small
    # geometric grid and check the intercept
    grid = tuple(0.004 * 0.5 ** k for k in range(5))
    for x in (-2.0, -1.0, 0.0, 1.0, 2.0):
        for y in (-1.5, -0.5, 0.25, 0.75, 1.75):
            res = fit_points([(s, exact(s * rho_s(x, y, s))) for s in grid])
            assert res.limit == pytest.approx(2.0, abs=1e-3)


def test_rho_blows_up_at_short_distance():
    vals = [rho_s(0.0, h, 0.4) for h in (2.0, 1.0, 0.5, 0.25, 0.125)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    vals2 = [rho_s((0.0, 0.0), (h, h), 0.4, 2) for h in (1.0, 0.5, 0.25)]
    assert all(b > a for a, b in zip(vals2, vals2[1:]))


# ---------------------------------------------------------------------------
# perimeter


@pytest.mark.parametrize("d,omega", [(1, INTERVAL), (2, DISK)])
def test_perimeter_trivial_sets(d, omega, spec):
    for e in (Empty(d), Complement(Empty(d))):
        est = gauss_perimeter(e, omega, 0.3, d, spec)
        assert est.value == 0.0


def test_perimeter_complement_symmetric():
    pe = gauss_perimeter(HALFLINE, INTERVAL, 0.2, 1)
    pc = gauss_perimeter(Complement(HALFLINE), INTERVAL, 0.2, 1)
    assert pe.value > 0.0
    assert pe.value == pytest.approx(pc.value, rel=1e-10)


def test_perimeter_validation(spec):
    with pytest.raises(GaussError):
        gauss_perimeter(Empty(3), Ball((0.0, 0.0, 0.0), 1.0), 0.3, 3, spec)
    with pytest.raises(GaussError):
        gauss_perimeter(HALFLINE, INTERVAL, 1.2, 1, spec)
    with pytest.raises(GaussError):
        gauss_perimeter(HALFPLANE, INTERVAL, 0.3, 1, spec)


# ---------------------------------------------------------------------------
# s -> 0 limit targets


def test_closed_form_masses_d1():
    # halfline against the unit interval, pieces straight from the cdf
    a = ndtr(1.0) - ndtr(0.0)
    b = 1.0 - ndtr(1.0)
    c = ndtr(0.0) - ndtr(-1.0)
    nn = ndtr(-1.0)
    cf = closed_form_limit(HALFLINE, INTERVAL, 1)
    assert cf == pytest.approx(2.0 * ((a + b) * c + a * nn), abs=1e-12)
    assert cf == pytest.approx(0.4496, abs=1e-4)


def test_closed_form_identity(rng):
    # (a+b)(c+d') - b d' = (a+b)c + a d', so the dominated-convergence
    # value and the reported closed form agree for any mass split
    raw = rng.uniform(size=(200, 4))
    a, b, c, dd = (raw / raw.sum(axis=1, keepdims=True)).T
    lhs = (a + b) * (c + dd) - b * dd
    rhs = (a + b) * c + a * dd
    assert np.allclose(lhs, rhs, rtol=0.0, atol=1e-12)


@pytest.mark.parametrize("e,omega,d", [
    (HALFLINE, INTERVAL, 1),
    (HALFPLANE, DISK, 2),
    (Ball((0.5,), 0.7), Box((-2.0,), (0.0,)), 1),
])
def test_pair_mass_matches_closed_form(e, omega, d):
    assert pair_mass_limit(e, omega, d) == pytest.approx(
        closed_form_limit(e, omega, d), abs=1e-12)


def test_sweep_limit_d1():
    res = gauss_sweep(HALFLINE, INTERVAL, 1)
    cf = closed_form_limit(HALFLINE, INTERVAL, 1)
    assert not res.flagged
    assert abs(res.limit - cf) <= 0.01 * cf


def test_sweep_limit_d2_smoke():
    # tensor rule is coarse here; accept the looser of 3 sigma and 12%
    res = gauss_sweep(HALFPLANE, DISK, 2)
    cf = closed_form_limit(HALFPLANE, DISK, 2)
    assert abs(res.limit - cf) <= max(3.0 * res.limit_error, 0.12 * cf)
