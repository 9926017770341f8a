"""Constructive solid geometry over R^d for d in {1, 2, 3}.

Regions are immutable trees of primitives (balls, boxes, half-spaces,
angular sectors, radial shell towers) combined by complement, union and
intersection.  Membership is exact; metric queries (volume, distance to
the boundary) are analytic where possible and conservative otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

SUPPORTED_DIMS = (1, 2, 3)
MAX_CSG_DEPTH = 8

_TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    pass


def check_dim(d: int) -> int:
    if d not in SUPPORTED_DIMS:
        raise GeometryError(f"dimension must be one of {SUPPORTED_DIMS}, got {d!r}")
    return d


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere S^{d-1}: 2, 2*pi, 4*pi for d=1,2,3."""
    check_dim(d)
    return {1: 2.0, 2: _TWO_PI, 3: 4.0 * math.pi}[d]


def ball_volume(d: int, radius: float) -> float:
    check_dim(d)
    unit = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}[d]
    return unit * radius**d


def _as_points(pts: np.ndarray, d: int) -> np.ndarray:
    a = np.asarray(pts, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != d:
        raise GeometryError(f"expected points of shape (n, {d}), got {a.shape}")
    return a


# Far-field membership summary.  kind is "compact" (the region dies out
# beyond exact_beyond) or "angular" (beyond exact_beyond membership depends
# only on the direction and matches contains_far exactly).  exact_beyond None
# means membership only converges to contains_far, with the angular measure of
# the discrepancy at radius r bounded by dev_coeff / r.
@dataclass(frozen=True)
class TailInfo:
    kind: str
    exact_beyond: Optional[float]
    dev_coeff: float = 0.0


# ---------------------------------------------------------------------------
# interval helpers for ray tracing (lists of disjoint (lo, hi), lo < hi)

def _ivl_normalize(ivls: list[tuple[float, float]]) -> list[tuple[float, float]]:
    ivls = sorted((lo, hi) for lo, hi in ivls if hi > lo)
    out: list[tuple[float, float]] = []
    for lo, hi in ivls:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def _ivl_intersect(a: list[tuple[float, float]], b: list[tuple[float, float]]):
    out = []
    for lo1, hi1 in a:
        for lo2, hi2 in b:
            lo, hi = max(lo1, lo2), min(hi1, hi2)
            if hi > lo:
                out.append((lo, hi))
    return _ivl_normalize(out)


def _ivl_complement(a: list[tuple[float, float]], r_max: float):
    out = []
    cur = 0.0
    for lo, hi in a:
        if lo > cur:
            out.append((cur, lo))
        cur = max(cur, hi)
    if cur < r_max:
        out.append((cur, r_max))
    return out


# ---------------------------------------------------------------------------


class Region:
    """Base class; subclasses are frozen dataclasses."""

    dim: int

    # -- membership ---------------------------------------------------------
    def contains(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains_point(self, x: Sequence[float]) -> bool:
        return bool(self.contains(_as_points(np.asarray(x), self.dim))[0])

    def contains_far(self, log_r: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        """Membership of points r*theta with log r possibly beyond float range."""
        raise NotImplementedError

    # -- metric queries ------------------------------------------------------
    def bounding_radius(self) -> Optional[float]:
        """Radius about the origin covering the region, or None if unbounded."""
        raise NotImplementedError

    @property
    def is_bounded(self) -> bool:
        return self.bounding_radius() is not None

    def boundary_gap(self, pts: np.ndarray) -> np.ndarray:
        """Lower bound on the distance from each point to the region boundary."""
        raise NotImplementedError

    def ray_intervals(self, direction: np.ndarray, r_max: float) -> list[tuple[float, float]]:
        """Intersection of {r * direction : 0 <= r <= r_max} with the region."""
        raise NotImplementedError

    def angular_breaks(self) -> tuple[float, ...]:
        """Angles (d=2 only) where the radial structure changes discontinuously."""
        return ()

    def tail_info(self) -> Optional[TailInfo]:
        return None

    def depth(self) -> int:
        return 0

    def _check_depth(self) -> None:
        if self.depth() > MAX_CSG_DEPTH:
            raise GeometryError(f"CSG nesting depth exceeds {MAX_CSG_DEPTH}")


@dataclass(frozen=True)
class Empty(Region):
    dim: int = 2

    def __post_init__(self):
        check_dim(self.dim)

    def contains(self, pts):
        return np.zeros(_as_points(pts, self.dim).shape[0], dtype=bool)

    def contains_far(self, log_r, dirs):
        return np.zeros(np.shape(log_r), dtype=bool)

    def bounding_radius(self):
        return 0.0

    def boundary_gap(self, pts):
        p = _as_points(pts, self.dim)
        return np.full(p.shape[0], np.inf)

    def ray_intervals(self, direction, r_max):
        return []

    def tail_info(self):
        return TailInfo("compact", 0.0)


@dataclass(frozen=True)
class Ball(Region):
    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        check_dim(self.dim)
        if not self.radius > 0:
            raise GeometryError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.center)

    def _c(self):
        return np.asarray(self.center)

    def contains(self, pts):
        p = _as_points(pts, self.dim)
        return np.linalg.norm(p - self._c(), axis=1) <= self.radius

    def contains_far(self, log_r, dirs):
        return np.zeros(np.shape(log_r), dtype=bool)

    def bounding_radius(self):
        return float(np.linalg.norm(self._c()) + self.radius)

    def boundary_gap(self, pts):
        p = _as_points(pts, self.dim)
        return np.abs(self.radius - np.linalg.norm(p - self._c(), axis=1))

    def ray_intervals(self, direction, r_max):
        u = np.asarray(direction, dtype=float)
        c = self._c()
        b = -2.0 * float(u @ c)
        c0 = float(c @ c) - self.radius**2
        disc = b * b - 4.0 * c0
        if disc <= 0:
            return []
        rt = math.sqrt(disc)
        lo, hi = (-b - rt) / 2.0, (-b + rt) / 2.0
        lo, hi = max(lo, 0.0), min(hi, r_max)
        return [(lo, hi)] if hi > lo else []

    def angular_breaks(self):
        if self.dim != 2:
            return ()
        c = self._c()
        nc = float(np.linalg.norm(c))
        if nc <= self.radius:
            return ()
        # directions where rays from the origin graze the ball
        phi = math.atan2(c[1], c[0])
        half = math.asin(min(1.0, self.radius / nc))
        return (phi - half, phi + half)

    def tail_info(self):
        return TailInfo("compact", self.bounding_radius())


@dataclass(frozen=True)
class Box(Region):
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(float(c) for c in self.lo))
        object.__setattr__(self, "hi", tuple(float(c) for c in self.hi))
        check_dim(self.dim)
        if len(self.lo) != len(self.hi):
            raise GeometryError("box lo/hi dimension mismatch")
        if not all(h > l for l, h in zip(self.lo, self.hi)):
            raise GeometryError("box must satisfy lo < hi componentwise")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, pts):
        p = _as_points(pts, self.dim)
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        return np.all((p >= lo) & (p <= hi), axis=1)

    def contains_far(self, log_r, dirs):
        return np.zeros(np.shape(log_r), dtype=bool)

    def bounding_radius(self):
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        corner = np.maximum(np.abs(lo), np.abs(hi))
        return float(np.linalg.norm(corner))

    def boundary_gap(self, pts):
        p = _as_points(pts, self.dim)
        lo, hi = np.asarray(self.lo), np.asarray(self.hi)
        excess = np.maximum(np.maximum(lo - p, p - hi), 0.0)
        outside = np.any(excess > 0, axis=1)
        gap_out = np.linalg.norm(excess, axis=1)
        gap_in = np.minimum(p - lo, hi - p).min(axis=1)
        return np.where(outside, gap_out, np.maximum(gap_in, 0.0))

    def ray_intervals(self, direction, r_max):
        u = np.asarray(direction, dtype=float)
        ivls = [(0.0, r_max)]
        for i in range(self.dim):
            if abs(u[i]) < 1e-300:
                if not (self.lo[i] <= 0.0 <= self.hi[i]):
                    return []
                continue
            a, b = self.lo[i] / u[i], self.hi[i] / u[i]
            if a > b:
                a, b = b, a
            ivls = _ivl_intersect(ivls, [(max(a, 0.0), min(b, r_max))])
            if not ivls:
                return []
        return ivls

    def angular_breaks(self):
        if self.dim != 2:
            return ()
        corners = [(self.lo[0], self.lo[1]), (self.lo[0], self.hi[1]),
                   (self.hi[0], self.lo[1]), (self.hi[0], self.hi[1])]
        return tuple(math.atan2(y, x) for x, y in corners if (x, y) != (0.0, 0.0))

    def tail_info(self):
        return TailInfo("compact", self.bounding_radius())


@dataclass(frozen=True)
class HalfSpace(Region):
    """Points with x . normal >= offset."""

    normal: tuple[float, ...]
    offset: float = 0.0

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        nn = np.linalg.norm(n)
        if nn == 0:
            raise GeometryError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", tuple(n / nn))
        object.__setattr__(self, "offset", float(self.offset) / nn)
        check_dim(self.dim)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, pts):
        p = _as_points(pts, self.dim)
        return p @ np.asarray(self.normal) >= self.offset

    def contains_far(self, log_r, dirs):
        dots = np.asarray(dirs) @ np.asarray(self.normal)
        # at astronomical radius the offset is negligible except on the equator
        out = dots > 0
        if self.offset <= 0:
            out = out | (dots == 0)
        return out

    def bounding_radius(self):
        return None

    def boundary_gap(self, pts):
        p = _as_points(pts, self.dim)
        return np.abs(p @ np.asarray(self.normal) - self.offset)

    def ray_intervals(self, direction, r_max):
        a = float(np.asarray(direction) @ np.asarray(self.normal))
        if abs(a) < 1e-300:
            return [(0.0, r_max)] if 0.0 >= self.offset else []
        t = self.offset / a
        if a > 0:
            lo = max(t, 0.0)
            return [(lo, r_max)] if r_max > lo else []
        hi = min(t, r_max)
        return [(0.0, hi)] if hi > 0 else []

    def angular_breaks(self):
        if self.dim != 2:
            return ()
        phi = math.atan2(self.normal[1], self.normal[0])
        return (phi - math.pi / 2.0, phi + math.pi / 2.0)

    def tail_info(self):
        if self.dim == 1:
            return TailInfo("angular", abs(self.offset))
        if self.offset == 0.0:
            return TailInfo("angular", 0.0)
        # offset plane: membership differs from the through-origin half-space
        # only on an angular band of width O(|offset| / r)
        coeff = {2: 8.0, 3: 16.0 * math.pi}[self.dim] * abs(self.offset)
        return TailInfo("angular", None, coeff)


@dataclass(frozen=True)
class Sector(Region):
    """Apex-at-origin angular set.

    d=1: rays, signs subset of {-1, +1}.
    d=2: finite union of arcs, each stored as (start angle, width).
    d=3: finite union of spherical caps (axis, half angle).
    """

    dim: int
    signs: tuple[int, ...] = ()
    arcs: tuple[tuple[float, float], ...] = ()
    caps: tuple[tuple[tuple[float, float, float], float], ...] = ()

    def __post_init__(self):
        check_dim(self.dim)
        if self.dim == 1:
            ss = tuple(sorted(set(int(s) for s in self.signs)))
            if not ss or any(s not in (-1, 1) for s in ss):
                raise GeometryError("d=1 sector needs signs from {-1, +1}")
            object.__setattr__(self, "signs", ss)
        elif self.dim == 2:
            if not self.arcs:
                raise GeometryError("d=2 sector needs at least one arc")
            norm = []
            for lo, width in self.arcs:
                if not 0 < width <= _TWO_PI:
                    raise GeometryError("arc width must lie in (0, 2*pi]")
                norm.append((float(lo) % _TWO_PI, float(width)))
            norm.sort()
            for (l1, w1), (l2, _) in zip(norm, norm[1:]):
                if l1 + w1 > l2 + 1e-15:
                    raise GeometryError("sector arcs must be disjoint")
            if len(norm) > 1 and norm[-1][0] + norm[-1][1] > norm[0][0] + _TWO_PI + 1e-15:
                raise GeometryError("sector arcs must be disjoint")
            object.__setattr__(self, "arcs", tuple(norm))
        else:
            if not self.caps:
                raise GeometryError("d=3 sector needs at least one cap")
            norm = []
            for axis, half in self.caps:
                a = np.asarray(axis, dtype=float)
                na = np.linalg.norm(a)
                if na == 0 or not 0 < half <= math.pi:
                    raise GeometryError("cap needs nonzero axis and half angle in (0, pi]")
                norm.append((tuple(a / na), float(half)))
            object.__setattr__(self, "caps", tuple(norm))

    def _dir_member(self, dirs: np.ndarray) -> np.ndarray:
        if self.dim == 1:
            v = dirs[:, 0]
            out = np.zeros(v.shape, dtype=bool)
            if 1 in self.signs:
                out |= v > 0
            if -1 in self.signs:
                out |= v < 0
            return out
        if self.dim == 2:
            theta = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), _TWO_PI)
            out = np.zeros(theta.shape, dtype=bool)
            for lo, width in self.arcs:
                out |= np.mod(theta - lo, _TWO_PI) < width
            return out
        out = np.zeros(dirs.shape[0], dtype=bool)
        for axis, half in self.caps:
            out |= dirs @ np.asarray(axis) >= math.cos(half) - 1e-15
        return out

    def contains(self, pts):
        p = _as_points(pts, self.dim)
        r = np.linalg.norm(p, axis=1)
        ok = r > 0
        out = np.zeros(p.shape[0], dtype=bool)
        if ok.any():
            out[ok] = self._dir_member(p[ok] / r[ok, None])
        return out

    def contains_far(self, log_r, dirs):
        return self._dir_member(np.asarray(dirs))

    def bounding_radius(self):
        return None

    def angular_measure(self) -> float:
        """H^{d-1} measure of the directions in the sector."""
        if self.dim == 1:
            return float(len(self.signs))
        if self.dim == 2:
            return float(sum(w for _, w in self.arcs))
        # caps may overlap in principle; construction keeps them disjoint enough
        return float(sum(_TWO_PI * (1.0 - math.cos(half)) for _, half in self.caps))

    def boundary_gap(self, pts):
        p = _as_points(pts, self.dim)
        r = np.linalg.norm(p, axis=1)
        if self.dim == 1:
            return r
        if self.dim == 2:
            edges = self.angular_breaks()
            if not edges or self.angular_measure() >= _TWO_PI - 1e-14:
                return r
            theta = np.arctan2(p[:, 1], p[:, 0])
            gap = np.full(r.shape, np.inf)
            for e in edges:
                dth = np.abs(np.mod(theta - e + math.pi, _TWO_PI) - math.pi)
                gap = np.minimum(gap, np.where(dth < math.pi / 2, np.sin(dth), 1.0))
            return np.minimum(r, r * gap)
        gap = np.full(r.shape, np.inf)
        rr = np.where(r > 0, r, 1.0)
        dirs = p / rr[:, None]
        for axis, half in self.caps:
            psi = np.arccos(np.clip(dirs @ np.asarray(axis), -1, 1))
            dth = np.abs(psi - half)
            gap = np.minimum(gap, np.where(dth < math.pi / 2, np.sin(dth), 1.0))
        return np.minimum(r, r * gap)

    def ray_intervals(self, direction, r_max):
        u = np.asarray(direction, dtype=float).reshape(1, -1)
        return [(0.0, r_max)] if bool(self._dir_member(u)[0]) else []

    def angular_breaks(self):
        if self.dim != 2:
            return ()
        out = []
        for lo, width in self.arcs:
            out.extend((lo, (lo + width) % _TWO_PI))
        return tuple(out)

    def tail_info(self):
        return TailInfo("angular", 0.0)


def _dyadic_tower(k: int) -> tuple[float, float]:
    ln2 = math.log(2.0)
    return (2 * k * ln2, (2 * k + 1) * ln2)


def _exp_tower(k: int, base: float) -> tuple[float, float]:
    ln2 = math.log(2.0)
    return (base**(k + 1) * ln2, 2.0 * base**(k + 1) * ln2)


@dataclass(frozen=True)
class RadialShells(Region):
    """Union of spherical shells given by a named log-radius pattern.

    "dyadic_tower": r in [2^{2k}, 2^{2k+1}), k = 0, 1, ...
    "exp_tower":    log2 r in [B^k, 2 B^k), k = 1, 2, ... (B = base)
    """

    dim: int
    pattern: str = "dyadic_tower"
    base: float = 4.0

    _MAX_K = 400

    def __post_init__(self):
        check_dim(self.dim)
        if self.pattern not in ("dyadic_tower", "exp_tower"):
            raise GeometryError(f"unknown shell pattern {self.pattern!r}")
        if self.pattern == "exp_tower" and not self.base > 1:
            raise GeometryError("exp_tower base must exceed 1")

    def log_shells(self, log_r_max: float):
        """Yield (log lo, log hi) for shells starting below log_r_max."""
        for k in range(self._MAX_K):
            lo, hi = (_dyadic_tower(k) if self.pattern == "dyadic_tower"
                      else _exp_tower(k, self.base))
            if lo > log_r_max:
                return
            yield (lo, hi)

    def _member_log(self, log_r: np.ndarray) -> np.ndarray:
        lam = np.asarray(log_r, dtype=float)
        out = np.zeros(lam.shape, dtype=bool)
        if lam.size == 0:
            return out
        for lo, hi in self.log_shells(float(np.max(lam))):
            out |= (lam >= lo) & (lam < hi)
        return out

    def contains(self, pts):
        p = _as_points(pts, self.dim)
        r = np.linalg.norm(p, axis=1)
        out = np.zeros(r.shape, dtype=bool)
        pos = r > 0
        out[pos] = self._member_log(np.log(r[pos]))
        return out

    def contains_far(self, log_r, dirs):
        return self._member_log(np.asarray(log_r))

    def bounding_radius(self):
        return None

    def boundary_gap(self, pts):
        p = _as_points(pts, self.dim)
        r = np.linalg.norm(p, axis=1)
        gap = np.full(r.shape, np.inf)
        rmax = float(np.max(r)) if r.size else 1.0
        for lo, hi in self.log_shells(math.log(max(rmax, 1.0)) + 3.0):
            for edge_log in (lo, hi):
                if edge_log < 700:
                    gap = np.minimum(gap, np.abs(r - math.exp(edge_log)))
        return gap

    def ray_intervals(self, direction, r_max):
        out = []
        for lo, hi in self.log_shells(math.log(max(r_max, 1e-300))):
            a = math.exp(lo)
            b = math.exp(min(hi, 700.0))
            out.append((min(a, r_max), min(b, r_max)))
        return _ivl_normalize(out)

    def tail_info(self):
        return None


@dataclass(frozen=True)
class Complement(Region):
    region: Region

    @property
    def dim(self) -> int:
        return self.region.dim

    def __post_init__(self):
        self._check_depth()

    def depth(self):
        return 1 + self.region.depth()

    def contains(self, pts):
        return ~self.region.contains(pts)

    def contains_far(self, log_r, dirs):
        return ~self.region.contains_far(log_r, dirs)

    def bounding_radius(self):
        return None

    def boundary_gap(self, pts):
        return self.region.boundary_gap(pts)

    def ray_intervals(self, direction, r_max):
        return _ivl_complement(self.region.ray_intervals(direction, r_max), r_max)

    def angular_breaks(self):
        return self.region.angular_breaks()

    def tail_info(self):
        info = self.region.tail_info()
        if info is None:
            return None
        # far membership is the pointwise negation, same radius and envelope
        return TailInfo("angular", info.exact_beyond, info.dev_coeff)


@dataclass(frozen=True)
class Union(Region):
    regions: tuple[Region, ...]

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        if len(self.regions) < 2:
            raise GeometryError("union needs at least two regions")
        dims = {r.dim for r in self.regions}
        if len(dims) != 1:
            raise GeometryError("union over mixed dimensions")
        self._check_depth()

    @property
    def dim(self) -> int:
        return self.regions[0].dim

    def depth(self):
        return 1 + max(r.depth() for r in self.regions)

    def contains(self, pts):
        out = self.regions[0].contains(pts)
        for r in self.regions[1:]:
            out = out | r.contains(pts)
        return out

    def contains_far(self, log_r, dirs):
        out = self.regions[0].contains_far(log_r, dirs)
        for r in self.regions[1:]:
            out = out | r.contains_far(log_r, dirs)
        return out

    def bounding_radius(self):
        rads = [r.bounding_radius() for r in self.regions]
        return None if any(v is None for v in rads) else max(rads)

    def boundary_gap(self, pts):
        out = self.regions[0].boundary_gap(pts)
        for r in self.regions[1:]:
            out = np.minimum(out, r.boundary_gap(pts))
        return out

    def ray_intervals(self, direction, r_max):
        out = []
        for r in self.regions:
            out.extend(r.ray_intervals(direction, r_max))
        return _ivl_normalize(out)

    def angular_breaks(self):
        out = []
        for r in self.regions:
            out.extend(r.angular_breaks())
        return tuple(out)

    def tail_info(self):
        infos = [r.tail_info() for r in self.regions]
        if any(i is None for i in infos):
            return None
        if all(i.kind == "compact" for i in infos):
            return TailInfo("compact", max(i.exact_beyond for i in infos))
        return _combine_angular(infos)


@dataclass(frozen=True)
class Intersection(Region):
    regions: tuple[Region, ...]

    def __post_init__(self):
        object.__setattr__(self, "regions", tuple(self.regions))
        if len(self.regions) < 2:
            raise GeometryError("intersection needs at least two regions")
        dims = {r.dim for r in self.regions}
        if len(dims) != 1:
            raise GeometryError("intersection over mixed dimensions")
        self._check_depth()

    @property
    def dim(self) -> int:
        return self.regions[0].dim

    def depth(self):
        return 1 + max(r.depth() for r in self.regions)

    def contains(self, pts):
        out = self.regions[0].contains(pts)
        for r in self.regions[1:]:
            out = out & r.contains(pts)
        return out

    def contains_far(self, log_r, dirs):
        out = self.regions[0].contains_far(log_r, dirs)
        for r in self.regions[1:]:
            out = out & r.contains_far(log_r, dirs)
        return out

    def bounding_radius(self):
        rads = [r.bounding_radius() for r in self.regions if r.bounding_radius() is not None]
        return min(rads) if rads else None

    def boundary_gap(self, pts):
        out = self.regions[0].boundary_gap(pts)
        for r in self.regions[1:]:
            out = np.minimum(out, r.boundary_gap(pts))
        return out

    def ray_intervals(self, direction, r_max):
        out = self.regions[0].ray_intervals(direction, r_max)
        for r in self.regions[1:]:
            out = _ivl_intersect(out, r.ray_intervals(direction, r_max))
        return out

    def angular_breaks(self):
        out = []
        for r in self.regions:
            out.extend(r.angular_breaks())
        return tuple(out)

    def tail_info(self):
        infos = [r.tail_info() for r in self.regions]
        if any(i is None for i in infos):
            return None
        compacts = [i for i in infos if i.kind == "compact"]
        if compacts:
            return TailInfo("compact", min(i.exact_beyond for i in compacts))
        return _combine_angular(infos)


def _combine_angular(infos: list[TailInfo]) -> TailInfo:
    # compact pieces vanish beyond their radius, so only their radii matter
    radii = [i.exact_beyond for i in infos]
    dev = sum(i.dev_coeff for i in infos if i.kind == "angular")
    if any(v is None for v in radii):
        return TailInfo("angular", None, dev)
    return TailInfo("angular", max(radii), dev)


# ---------------------------------------------------------------------------
# operations


def distance_to_boundary(region: Region, x: Sequence[float]) -> float:
    """Lower bound on dist(x, boundary); exact for primitives. x must lie inside."""
    pt = np.asarray(x, dtype=float).reshape(1, -1)
    if not bool(region.contains(pt)[0]):
        raise GeometryError("distance_to_boundary: point is not inside the region")
    return float(region.boundary_gap(pt)[0])


def _analytic_volume(region: Region, d: int) -> Optional[float]:
    if isinstance(region, Empty):
        return 0.0
    if isinstance(region, Ball):
        return ball_volume(d, region.radius)
    if isinstance(region, Box):
        return float(np.prod(np.asarray(region.hi) - np.asarray(region.lo)))
    if isinstance(region, Intersection) and len(region.regions) == 2:
        a, b = region.regions
        if isinstance(b, (HalfSpace, Sector)):
            a, b = b, a
        if isinstance(a, HalfSpace) and isinstance(b, Ball):
            # half-space through the ball center cuts the ball in half
            if abs(float(np.asarray(b.center) @ np.asarray(a.normal)) - a.offset) < 1e-14 * max(1.0, b.radius):
                return ball_volume(d, b.radius) / 2.0
        if isinstance(a, Sector) and isinstance(b, Ball):
            if all(c == 0.0 for c in b.center):
                return a.angular_measure() / sphere_area(d) * ball_volume(d, b.radius)
        if isinstance(a, Ball) and isinstance(b, Ball):
            gap = float(np.linalg.norm(np.asarray(a.center) - np.asarray(b.center)))
            if gap + a.radius <= b.radius:
                return ball_volume(d, a.radius)
            if gap + b.radius <= a.radius:
                return ball_volume(d, b.radius)
    return None


def volume(region: Region, d: int, spec=None, clip: Optional[Region] = None):
    """Lebesgue measure; analytic for a few shapes, Monte Carlo otherwise.

    Returns an EstimateWithError. Unbounded regions need a bounded clip region.
    """
    from .quad import EstimateWithError, QuadratureSpec, mc_mean

    check_dim(d)
    if region.dim != d:
        raise GeometryError("region dimension mismatch")
    exact = _analytic_volume(region, d)
    if exact is not None and clip is None:
        return EstimateWithError(exact, 0.0, "exact")

    target = Intersection((region, clip)) if clip is not None else region
    rho = target.bounding_radius()
    if rho is None:
        raise GeometryError("volume of an unbounded region needs a bounding clip")
    if rho == 0.0:
        return EstimateWithError(0.0, 0.0, "exact")
    spec = spec or QuadratureSpec()
    vbox = (2.0 * rho) ** d

    def draw(rng, n):
        pts = rng.uniform(-rho, rho, size=(n, d))
        return vbox * target.contains(pts).astype(float)

    return mc_mean(draw, spec, stream=5)


# ---------------------------------------------------------------------------
# batched ray tracing from arbitrary origins


def _pad_where(values: np.ndarray, keep: np.ndarray, pad: float) -> np.ndarray:
    return np.where(keep & np.isfinite(values), values, pad)


def ray_crossing_candidates(region: Region, origins: np.ndarray,
                            dirs: np.ndarray, r_max: float) -> np.ndarray:
    """Candidate boundary-crossing radii for rays origins[i] + r * dirs[i].

    Returns an (n, k) array padded with r_max.  Every radius in (0, r_max)
    where a ray crosses the region boundary appears among that row's
    candidates; spurious extra candidates are allowed (callers classify
    membership at cell midpoints, so they are harmless).
    """
    o = _as_points(origins, region.dim)
    u = _as_points(dirs, region.dim)
    n = o.shape[0]
    pad = float(r_max)

    def sphere_hits(center: np.ndarray, radius: float) -> np.ndarray:
        w = o - center
        b = np.einsum("ij,ij->i", w, u)
        c0 = np.einsum("ij,ij->i", w, w) - radius * radius
        disc = b * b - c0
        rt = np.sqrt(np.maximum(disc, 0.0))
        hit = disc > 0
        return np.stack([_pad_where(-b - rt, hit, pad),
                         _pad_where(-b + rt, hit, pad)], axis=1)

    if isinstance(region, Empty):
        return np.empty((n, 0))
    if isinstance(region, Ball):
        return sphere_hits(np.asarray(region.center), region.radius)
    if isinstance(region, Box):
        cols = []
        for i in range(region.dim):
            ui = u[:, i]
            ok = np.abs(ui) > 1e-300
            safe = np.where(ok, ui, 1.0)
            cols.append(_pad_where((region.lo[i] - o[:, i]) / safe, ok, pad))
            cols.append(_pad_where((region.hi[i] - o[:, i]) / safe, ok, pad))
        return np.stack(cols, axis=1)
    if isinstance(region, HalfSpace):
        nv = np.asarray(region.normal)
        a = u @ nv
        ok = np.abs(a) > 1e-300
        t = (region.offset - o @ nv) / np.where(ok, a, 1.0)
        return _pad_where(t, ok, pad).reshape(n, 1)
    if isinstance(region, Sector):
        cols = [np.clip(-np.einsum("ij,ij->i", o, u), 0.0, pad)]
        if region.dim == 1:
            ok = np.abs(u[:, 0]) > 1e-300
            cols.append(_pad_where(-o[:, 0] / np.where(ok, u[:, 0], 1.0), ok, pad))
        elif region.dim == 2:
            for phi in region.angular_breaks():
                nv = np.array([-math.sin(phi), math.cos(phi)])
                a = u @ nv
                ok = np.abs(a) > 1e-300
                cols.append(_pad_where(-(o @ nv) / np.where(ok, a, 1.0), ok, pad))
        else:
            for axis, half in region.caps:
                av = np.asarray(axis)
                c2 = math.cos(half) ** 2
                oa, ua = o @ av, u @ av
                qa = ua * ua - c2
                qb = 2.0 * (oa * ua - c2 * np.einsum("ij,ij->i", o, u))
                qc = oa * oa - c2 * np.einsum("ij,ij->i", o, o)
                lin = np.abs(qa) < 1e-14
                safe_a = np.where(lin, 1.0, qa)
                disc = qb * qb - 4.0 * safe_a * qc
                rt = np.sqrt(np.maximum(disc, 0.0))
                r1 = np.where(lin, -qc / np.where(np.abs(qb) > 1e-300, qb, 1.0),
                              (-qb - rt) / (2.0 * safe_a))
                r2 = np.where(lin, pad, (-qb + rt) / (2.0 * safe_a))
                keep = lin | (disc > 0)
                cols.append(_pad_where(r1, keep, pad))
                cols.append(_pad_where(r2, ~lin & (disc > 0), pad))
        return np.stack(cols, axis=1)
    if isinstance(region, RadialShells):
        reach = float(np.max(np.linalg.norm(o, axis=1))) + pad
        cols = []
        zero = np.zeros(region.dim)
        for lo, hi in region.log_shells(math.log(max(reach, 1e-300))):
            for edge in (lo, hi):
                if edge <= 700.0 and math.exp(edge) <= reach:
                    cols.append(sphere_hits(zero, math.exp(edge)))
        if not cols:
            return np.empty((n, 0))
        return np.concatenate(cols, axis=1)
    if isinstance(region, Complement):
        return ray_crossing_candidates(region.region, o, u, r_max)
    if isinstance(region, (Union, Intersection)):
        parts = [ray_crossing_candidates(r, o, u, r_max) for r in region.regions]
        return np.concatenate(parts, axis=1)
    raise GeometryError(f"ray tracing not implemented for {type(region).__name__}")
