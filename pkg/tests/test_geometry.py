import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from fracmass import (Ball, Box, Complement, GeometryError, HalfSpace,
                      Intersection, QuadratureSpec, RadialShells, Sector,
                      Union, ball_volume, distance_to_boundary, sphere_area,
                      volume)


def pts(*rows):
    return np.array(rows, dtype=float)


# ---------------------------------------------------------------------------
# sphere constants


def test_sphere_area_values():
    assert sphere_area(1) == 2.0
    assert sphere_area(2) == pytest.approx(2.0 * math.pi, abs=1e-15)
    assert sphere_area(3) == pytest.approx(4.0 * math.pi, abs=1e-15)


def test_sphere_area_gamma_closed_form():
    for d in (1, 2, 3):
        want = d * math.pi ** (d / 2.0) / gamma_fn(d / 2.0 + 1.0)
        assert sphere_area(d) == pytest.approx(want, rel=1e-14)


def test_unsupported_dimension_rejected():
    with pytest.raises(GeometryError):
        sphere_area(4)
    with pytest.raises(GeometryError):
        Ball((0.0, 0.0, 0.0, 0.0), 1.0)


# ---------------------------------------------------------------------------
# membership


def test_contains_primitives():
    assert Ball((0.0, 0.0), 1.0).contains(pts((0.5, 0.0)))[0]
    assert not HalfSpace((1.0, 0.0)).contains(pts((-1.0, 0.0)))[0]
    assert Complement(Ball((0.0, 0.0), 1.0)).contains(pts((2.0, 0.0)))[0]
    box = Box((-1.0, -1.0), (1.0, 1.0))
    assert box.contains(pts((0.9, -0.9)))[0]
    assert not box.contains(pts((1.1, 0.0)))[0]


def test_contains_dimension_mismatch():
    with pytest.raises(GeometryError):
        Ball((0.0, 0.0), 1.0).contains(pts((0.5,)))


def test_sector_membership():
    sec = Sector(2, arcs=((0.0, math.pi / 2),))
    assert sec.contains(pts((1.0, 1.0)))[0]
    assert not sec.contains(pts((-1.0, 1.0)))[0]
    one_d = Sector(1, signs=(1,))
    assert one_d.contains(pts((3.0,)))[0]
    assert not one_d.contains(pts((-3.0,)))[0]


def test_radial_shells_dyadic_pattern():
    sh = RadialShells(1)
    # dyadic tower: r in [2^{2k}, 2^{2k+1})
    assert sh.contains(pts((1.5,)))[0]          # [1, 2)
    assert not sh.contains(pts((3.0,)))[0]      # [2, 4) is off
    assert sh.contains(pts((5.0,)))[0]          # [4, 8)
    assert not sh.contains(pts((10.0,)))[0]     # [8, 16) is off


def test_boolean_algebra_on_random_points(rng):
    a = Ball((0.3, -0.2), 0.9)
    b = Box((-1.0, -1.0), (0.5, 0.8))
    x = rng.uniform(-2.0, 2.0, size=(10_000, 2))
    ca, cb = a.contains(x), b.contains(x)
    assert np.array_equal(Complement(a).contains(x), ~ca)
    assert np.array_equal(Union((a, b)).contains(x), ca | cb)
    assert np.array_equal(Intersection((a, b)).contains(x), ca & cb)


# ---------------------------------------------------------------------------
# volume


def test_volume_ball_exact():
    v = volume(Ball((0.0, 0.0), 1.0), 2)
    assert v.error_kind == "exact"
    assert v.value == pytest.approx(math.pi, rel=1e-15)
    assert ball_volume(3, 2.0) == pytest.approx(4.0 / 3.0 * math.pi * 8.0,
                                                rel=1e-14)


def test_volume_halfspace_through_center():
    v = volume(Intersection((HalfSpace((1.0, 0.0)), Ball((0.0, 0.0), 1.0))), 2)
    assert v.value == pytest.approx(math.pi / 2.0, rel=1e-12)


def test_volume_sector_wedge(spec):
    theta = math.pi / 3.0
    wedge = Intersection((Sector(2, arcs=((0.0, theta),)),
                          Ball((0.0, 0.0), 1.0)))
    v = volume(wedge, 2, spec)
    assert abs(v.value - theta / 2.0) <= 3.0 * v.error + 1e-12


def test_volume_additivity(rng, spec):
    # |A| + |B| = |A u B| + |A n B| within combined error bars
    for _ in range(4):
        c = rng.uniform(-0.5, 0.5, size=2)
        a = Ball(tuple(c), float(rng.uniform(0.4, 1.0)))
        lo = rng.uniform(-1.0, 0.0, size=2)
        b = Box(tuple(lo), tuple(lo + rng.uniform(0.5, 1.5, size=2)))
        va, vb = volume(a, 2, spec), volume(b, 2, spec)
        vu = volume(Union((a, b)), 2, spec)
        vi = volume(Intersection((a, b)), 2, spec)
        lhs, rhs = va.value + vb.value, vu.value + vi.value
        err = va.error + vb.error + vu.error + vi.error
        assert abs(lhs - rhs) <= 3.0 * err + 1e-9


def test_volume_unbounded_needs_clip():
    with pytest.raises(GeometryError):
        volume(HalfSpace((1.0, 0.0)), 2)
    clipped = volume(HalfSpace((1.0, 0.0)), 2, clip=Ball((0.0, 0.0), 1.0))
    assert abs(clipped.value - math.pi / 2.0) <= 3.0 * clipped.error + 1e-12


# ---------------------------------------------------------------------------
# boundary distance


def test_distance_to_boundary_primitives():
    assert distance_to_boundary(Ball((0.0, 0.0), 1.0), (0.0, 0.0)) == 1.0
    assert distance_to_boundary(Box((-1.0, -1.0), (1.0, 1.0)),
                                (0.5, 0.0)) == pytest.approx(0.5)
    comp = Intersection((Ball((0.0, 0.0), 1.0), HalfSpace((1.0, 0.0), -0.5)))
    assert distance_to_boundary(comp, (0.0, 0.0)) == pytest.approx(0.5)


def test_distance_to_boundary_outside_raises():
    with pytest.raises(GeometryError):
        distance_to_boundary(Ball((0.0, 0.0), 1.0), (2.0, 0.0))


def _ray_exit_distance(region, x, direction, limit=8.0):
    lo, hi = 0.0, limit
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if region.contains(np.array([x + mid * direction]))[0]:
            lo = mid
        else:
            hi = mid
    return hi


def test_distance_lower_bound_by_ray_casting(rng):
    regions = [
        Ball((0.2, 0.1), 0.8),
        Box((-1.0, -0.5), (0.7, 1.0)),
        Intersection((Ball((0.0, 0.0), 1.0), HalfSpace((0.0, 1.0), -0.3))),
        Union((Ball((-0.4, 0.0), 0.5), Ball((0.4, 0.0), 0.5))),
    ]
    for region in regions:
        x = np.zeros(2)
        assert region.contains(np.array([x]))[0]
        claimed = distance_to_boundary(region, x)
        angles = rng.uniform(0.0, 2.0 * math.pi, size=1000)
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        true_dist = min(_ray_exit_distance(region, x, u) for u in dirs)
        assert claimed <= true_dist + 1e-9


# ---------------------------------------------------------------------------
# boundedness reporting


def test_bounding_radius():
    assert Ball((1.0, 0.0), 1.0).bounding_radius() == pytest.approx(2.0)
    assert Box((-1.0,), (3.0,)).bounding_radius() == pytest.approx(3.0)
    assert HalfSpace((1.0, 0.0)).bounding_radius() is None
    assert RadialShells(2).bounding_radius() is None
    inter = Intersection((HalfSpace((1.0, 0.0)), Ball((0.0, 0.0), 2.0)))
    assert inter.bounding_radius() == pytest.approx(2.0)
