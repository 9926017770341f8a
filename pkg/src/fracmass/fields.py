"""Scalar fields on R^d with declared structure at infinity.

Fields form an immutable expression tree (constants, indicators,
polynomials, bumps, radial-angular products, 1-d periodic profiles,
and the usual sum/product/shift/clip wrappers).  Each node propagates
a tail model describing the field for |x| -> infinity: compact support,
an angular limit on the sphere, a periodic mean (d=1), or unknown.
Tail models are declared and propagated structurally, never inferred
from samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry import Region, check_dim, sphere_area

_TWO_PI = 2.0 * math.pi

# nominal log-radius passed to far-membership queries when only the
# direction matters
LOG_FAR = 1.0e6


class FieldError(ValueError):
    pass


def _as_points(pts, d: int) -> np.ndarray:
    a = np.asarray(pts, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1) if d > 1 else a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[1] != d:
        raise FieldError(f"expected points of shape (n, {d}), got {a.shape}")
    return a


# ---------------------------------------------------------------------------
# angular functions on S^{d-1}


class AngularFn:
    """Bounded function of the direction; the u_inf of an angular tail."""

    dim: int

    def values(self, dirs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def breaks(self) -> tuple[float, ...]:
        """Discontinuity angles, d=2 only."""
        return ()

    def sup_abs(self) -> float:
        raise NotImplementedError

    def tv(self) -> float:
        """Upper bound on the total variation over the sphere (d=2)."""
        raise NotImplementedError


@dataclass(frozen=True)
class UniformValue(AngularFn):
    dim: int
    value: float

    def values(self, dirs):
        return np.full(np.asarray(dirs).shape[0], float(self.value))

    def sup_abs(self):
        return abs(self.value)

    def tv(self):
        return 0.0


@dataclass(frozen=True)
class AngularIndicator(AngularFn):
    """Indicator of the direction set of a region, via far membership."""

    region: Region

    @property
    def dim(self):
        return self.region.dim

    def values(self, dirs):
        dirs = np.asarray(dirs, dtype=float)
        log_r = np.full(dirs.shape[0], LOG_FAR)
        return self.region.contains_far(log_r, dirs).astype(float)

    def breaks(self):
        return self.region.angular_breaks()

    def sup_abs(self):
        return 1.0

    def tv(self):
        nb = len(self.region.angular_breaks())
        return float(max(nb, 2))


@dataclass(frozen=True)
class PairValues(AngularFn):
    """d=1 angular function: one value per ray."""

    minus: float
    plus: float
    dim: int = 1

    def values(self, dirs):
        v = np.asarray(dirs, dtype=float)[:, 0]
        return np.where(v > 0, float(self.plus), float(self.minus))

    def sup_abs(self):
        return max(abs(self.minus), abs(self.plus))

    def tv(self):
        return 0.0


@dataclass(frozen=True)
class TrigPoly(AngularFn):
    """a0 + sum a_n cos(n theta) + b_n sin(n theta) on S^1."""

    a0: float
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    dim: int = 2

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))

    def values(self, dirs):
        dirs = np.asarray(dirs, dtype=float)
        theta = np.arctan2(dirs[:, 1], dirs[:, 0])
        out = np.full(theta.shape, float(self.a0))
        for n, c in enumerate(self.cos_coeffs, start=1):
            out += c * np.cos(n * theta)
        for n, c in enumerate(self.sin_coeffs, start=1):
            out += c * np.sin(n * theta)
        return out

    def sup_abs(self):
        return abs(self.a0) + sum(abs(c) for c in self.cos_coeffs) \
            + sum(abs(c) for c in self.sin_coeffs)

    def tv(self):
        t = 0.0
        for n, c in enumerate(self.cos_coeffs, start=1):
            t += 4.0 * n * abs(c)
        for n, c in enumerate(self.sin_coeffs, start=1):
            t += 4.0 * n * abs(c)
        return t


@dataclass(frozen=True)
class ASum(AngularFn):
    terms: tuple[AngularFn, ...]

    @property
    def dim(self):
        return self.terms[0].dim

    def values(self, dirs):
        out = self.terms[0].values(dirs)
        for t in self.terms[1:]:
            out = out + t.values(dirs)
        return out

    def breaks(self):
        out = []
        for t in self.terms:
            out.extend(t.breaks())
        return tuple(out)

    def sup_abs(self):
        return sum(t.sup_abs() for t in self.terms)

    def tv(self):
        return sum(t.tv() for t in self.terms)


@dataclass(frozen=True)
class AProd(AngularFn):
    factors: tuple[AngularFn, ...]

    @property
    def dim(self):
        return self.factors[0].dim

    def values(self, dirs):
        out = self.factors[0].values(dirs)
        for f in self.factors[1:]:
            out = out * f.values(dirs)
        return out

    def breaks(self):
        out = []
        for f in self.factors:
            out.extend(f.breaks())
        return tuple(out)

    def sup_abs(self):
        out = 1.0
        for f in self.factors:
            out *= f.sup_abs()
        return out

    def tv(self):
        # product rule bound: TV(fg) <= sup|f| TV(g) + sup|g| TV(f)
        total = 0.0
        for i, f in enumerate(self.factors):
            others = 1.0
            for j, g in enumerate(self.factors):
                if j != i:
                    others *= g.sup_abs()
            total += others * f.tv()
        return total


@dataclass(frozen=True)
class AScale(AngularFn):
    fn: AngularFn
    factor: float

    @property
    def dim(self):
        return self.fn.dim

    def values(self, dirs):
        return self.factor * self.fn.values(dirs)

    def breaks(self):
        return self.fn.breaks()

    def sup_abs(self):
        return abs(self.factor) * self.fn.sup_abs()

    def tv(self):
        return abs(self.factor) * self.fn.tv()


@dataclass(frozen=True)
class APow(AngularFn):
    fn: AngularFn
    k: int

    @property
    def dim(self):
        return self.fn.dim

    def values(self, dirs):
        return self.fn.values(dirs) ** self.k

    def breaks(self):
        return self.fn.breaks()

    def sup_abs(self):
        return self.fn.sup_abs() ** self.k

    def tv(self):
        b = self.fn.sup_abs()
        return self.k * b ** (self.k - 1) * self.fn.tv()


@dataclass(frozen=True)
class APos(AngularFn):
    fn: AngularFn

    @property
    def dim(self):
        return self.fn.dim

    def values(self, dirs):
        return np.maximum(self.fn.values(dirs), 0.0)

    def breaks(self):
        return self.fn.breaks()

    def sup_abs(self):
        return self.fn.sup_abs()

    def tv(self):
        return self.fn.tv()


@dataclass(frozen=True)
class ANeg(AngularFn):
    fn: AngularFn

    @property
    def dim(self):
        return self.fn.dim

    def values(self, dirs):
        return np.maximum(-self.fn.values(dirs), 0.0)

    def breaks(self):
        return self.fn.breaks()

    def sup_abs(self):
        return self.fn.sup_abs()

    def tv(self):
        return self.fn.tv()


# ---------------------------------------------------------------------------
# 1-d periodic profiles (piecewise constant on [0, period))


@dataclass(frozen=True)
class PeriodicProfile:
    period: float
    starts: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self):
        if not self.period > 0:
            raise FieldError("period must be positive")
        if len(self.starts) != len(self.levels) or not self.starts:
            raise FieldError("starts and levels must be equal-length, nonempty")
        st = [float(s) % self.period for s in self.starts]
        order = sorted(range(len(st)), key=lambda i: st[i])
        st2 = tuple(st[i] for i in order)
        lv2 = tuple(float(self.levels[i]) for i in order)
        if any(a >= b for a, b in zip(st2, st2[1:])):
            raise FieldError("piece starts must be distinct modulo the period")
        object.__setattr__(self, "starts", st2)
        object.__setattr__(self, "levels", lv2)

    def _lengths(self) -> np.ndarray:
        st = np.asarray(self.starts)
        nxt = np.append(st[1:], st[0] + self.period)
        return nxt - st

    def value_at(self, x) -> np.ndarray:
        xm = np.mod(np.asarray(x, dtype=float), self.period)
        idx = np.searchsorted(np.asarray(self.starts), xm, side="right") - 1
        idx = np.where(idx < 0, len(self.starts) - 1, idx)
        return np.asarray(self.levels)[idx]

    def mean(self) -> float:
        return float(np.dot(self._lengths(), np.asarray(self.levels)) / self.period)

    def sup_abs(self) -> float:
        return float(np.max(np.abs(self.levels)))

    def abs_mean_dev(self) -> float:
        """Mean of |value - mean| over one period."""
        m = self.mean()
        return float(np.dot(self._lengths(), np.abs(np.asarray(self.levels) - m))
                     / self.period)

    def map_levels(self, fn) -> "PeriodicProfile":
        return PeriodicProfile(self.period, self.starts,
                               tuple(fn(v) for v in self.levels))

    def shifted(self, dx: float) -> "PeriodicProfile":
        return PeriodicProfile(self.period,
                               tuple((s + dx) % self.period for s in self.starts),
                               self.levels)

    def combine(self, other: "PeriodicProfile", op) -> "PeriodicProfile":
        if abs(self.period - other.period) > 1e-12 * self.period:
            raise FieldError("profiles must share the period to combine")
        starts = sorted(set(self.starts) | set(other.starts))
        levels = tuple(op(float(self.value_at([s])[0]), float(other.value_at([s])[0]))
                       for s in starts)
        return PeriodicProfile(self.period, tuple(starts), levels)


# ---------------------------------------------------------------------------
# tail models


@dataclass(frozen=True)
class CompactSupport:
    radius: float


@dataclass(frozen=True)
class AngularLimit:
    """u(r theta) -> limit(theta).

    exact_beyond: radius past which the field equals its limit exactly,
    or None when convergence is only asymptotic.  In the latter case the
    angular L1 deviation at radius r is bounded by min(dev_l1 / r, dev_sup
    times the sphere measure), with dev_sup a uniform bound on |u - limit|.
    """

    limit: AngularFn
    exact_beyond: Optional[float]
    dev_l1: float = 0.0
    dev_sup: float = 0.0


@dataclass(frozen=True)
class PeriodicMean:
    profile: PeriodicProfile
    exact_beyond: float

    @property
    def mean(self) -> float:
        return self.profile.mean()


@dataclass(frozen=True)
class UnknownTail:
    pass


TailModel = object


def tails_structurally_equal(a: TailModel, b: TailModel) -> bool:
    """Same tag and same limiting object; radii and envelopes may differ."""
    if type(a) is not type(b):
        return False
    if isinstance(a, AngularLimit):
        return a.limit == b.limit
    if isinstance(a, PeriodicMean):
        return (a.profile.period == b.profile.period
                and abs(a.profile.mean() - b.profile.mean()) < 1e-12)
    return True


# ---------------------------------------------------------------------------
# radial profiles for RadialAngular


class RadialProfile:
    def values(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def limit(self) -> Optional[float]:
        """Value as r -> infinity, or None when there is none."""
        raise NotImplementedError

    def exact_beyond(self) -> Optional[float]:
        raise NotImplementedError

    def lipschitz(self) -> Optional[float]:
        raise NotImplementedError

    def sup_abs(self) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ProfileConst(RadialProfile):
    value: float

    def values(self, r):
        return np.full(np.asarray(r).shape, float(self.value))

    def limit(self):
        return self.value

    def exact_beyond(self):
        return 0.0

    def lipschitz(self):
        return 0.0

    def sup_abs(self):
        return abs(self.value)


@dataclass(frozen=True)
class ProfileReach(RadialProfile):
    """Linear ramp from 0 at the origin to `level` at r0, constant after."""

    level: float
    r0: float

    def __post_init__(self):
        if not self.r0 > 0:
            raise FieldError("reach radius must be positive")

    def values(self, r):
        r = np.asarray(r, dtype=float)
        return self.level * np.minimum(r / self.r0, 1.0)

    def limit(self):
        return self.level

    def exact_beyond(self):
        return self.r0

    def lipschitz(self):
        return abs(self.level) / self.r0

    def sup_abs(self):
        return abs(self.level)


@dataclass(frozen=True)
class ProfileBump(RadialProfile):
    """scale * (1 - (r/r0)^2)^k for r <= r0, zero after; C^{k-1} at r0."""

    scale: float
    r0: float
    k: int = 2

    def __post_init__(self):
        if not self.r0 > 0 or self.k < 1:
            raise FieldError("bump profile needs r0 > 0 and k >= 1")

    def values(self, r):
        t = np.asarray(r, dtype=float) / self.r0
        core = np.clip(1.0 - t * t, 0.0, None)
        return self.scale * core**self.k

    def limit(self):
        return 0.0

    def exact_beyond(self):
        return self.r0

    def lipschitz(self):
        return abs(self.scale) * 2.0 * self.k / self.r0

    def sup_abs(self):
        return abs(self.scale)


# ---------------------------------------------------------------------------
# fields


class ScalarField:
    dim: int

    def values(self, pts) -> np.ndarray:
        raise NotImplementedError

    def far_values(self, log_r: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        """Values at radius exp(log_r), valid at astronomical radii."""
        raise FieldError(f"{type(self).__name__} has no far-field evaluation")

    def tail(self) -> TailModel:
        raise NotImplementedError

    def lipschitz_on(self, radius: float) -> Optional[float]:
        """Lipschitz constant on the ball of this radius, or None."""
        return None

    def sup_abs_on(self, radius: Optional[float]) -> float:
        """Bound on |u| over the ball of this radius (None: all of R^d)."""
        raise NotImplementedError

    def angular_breaks(self) -> tuple[float, ...]:
        return ()

    def ray_breaks(self, direction: np.ndarray, r_max: float) -> tuple[float, ...]:
        """Radii in (0, r_max) where the field may jump along the ray."""
        return ()


@dataclass(frozen=True)
class Constant(ScalarField):
    dim: int
    value: float

    def __post_init__(self):
        check_dim(self.dim)

    def values(self, pts):
        return np.full(_as_points(pts, self.dim).shape[0], float(self.value))

    def far_values(self, log_r, dirs):
        return np.full(np.asarray(log_r).shape, float(self.value))

    def tail(self):
        if self.value == 0.0:
            return CompactSupport(0.0)
        return AngularLimit(UniformValue(self.dim, self.value), 0.0)

    def lipschitz_on(self, radius):
        return 0.0

    def sup_abs_on(self, radius):
        return abs(self.value)


@dataclass(frozen=True)
class Indicator(ScalarField):
    region: Region

    @property
    def dim(self):
        return self.region.dim

    def values(self, pts):
        return self.region.contains(_as_points(pts, self.dim)).astype(float)

    def far_values(self, log_r, dirs):
        return self.region.contains_far(np.asarray(log_r), np.asarray(dirs)).astype(float)

    def tail(self):
        info = self.region.tail_info()
        if info is None:
            return UnknownTail()
        if info.kind == "compact":
            return CompactSupport(info.exact_beyond)
        if info.exact_beyond is not None:
            return AngularLimit(AngularIndicator(self.region), info.exact_beyond)
        return AngularLimit(AngularIndicator(self.region), None,
                            dev_l1=info.dev_coeff, dev_sup=1.0)

    def sup_abs_on(self, radius):
        return 1.0

    def angular_breaks(self):
        return self.region.angular_breaks()

    def ray_breaks(self, direction, r_max):
        out = []
        for lo, hi in self.region.ray_intervals(direction, r_max):
            if 0.0 < lo < r_max:
                out.append(lo)
            if 0.0 < hi < r_max:
                out.append(hi)
        return tuple(out)


@dataclass(frozen=True)
class Polynomial(ScalarField):
    """Sum of c * x^m terms, total degree at most 4."""

    dim: int
    terms: tuple[tuple[float, tuple[int, ...]], ...]

    def __post_init__(self):
        check_dim(self.dim)
        norm = []
        for coeff, expo in self.terms:
            expo = tuple(int(e) for e in expo)
            if len(expo) != self.dim or any(e < 0 for e in expo):
                raise FieldError("bad monomial exponents")
            if sum(expo) > 4:
                raise FieldError("polynomial degree is capped at 4")
            norm.append((float(coeff), expo))
        object.__setattr__(self, "terms", tuple(norm))

    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def values(self, pts):
        p = _as_points(pts, self.dim)
        out = np.zeros(p.shape[0])
        for coeff, expo in self.terms:
            term = np.full(p.shape[0], coeff)
            for i, e in enumerate(expo):
                if e:
                    term = term * p[:, i] ** e
            out += term
        return out

    def far_values(self, log_r, dirs):
        if self.degree() == 0:
            c = sum(c for c, _ in self.terms)
            return np.full(np.asarray(log_r).shape, c)
        raise FieldError("polynomial far field is unbounded")

    def tail(self):
        if self.degree() == 0:
            c = sum(c for c, _ in self.terms)
            if c == 0.0:
                return CompactSupport(0.0)
            return AngularLimit(UniformValue(self.dim, c), 0.0)
        return UnknownTail()

    def lipschitz_on(self, radius):
        lip = 0.0
        for coeff, expo in self.terms:
            deg = sum(expo)
            if deg:
                lip += abs(coeff) * deg * max(radius, 0.0) ** (deg - 1)
        return lip

    def sup_abs_on(self, radius):
        if radius is None:
            return abs(sum(c for c, _ in self.terms)) if self.degree() == 0 else math.inf
        return sum(abs(c) * radius ** sum(e) for c, e in self.terms)


@dataclass(frozen=True)
class Bump(ScalarField):
    """scale * (1 - |x-center|^2 / radius^2)^k on its ball, zero outside."""

    center: tuple[float, ...]
    radius: float
    k: int = 2
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        check_dim(self.dim)
        if not self.radius > 0 or self.k < 1:
            raise FieldError("bump needs radius > 0 and k >= 1")

    @property
    def dim(self):
        return len(self.center)

    def values(self, pts):
        p = _as_points(pts, self.dim)
        t2 = np.sum((p - np.asarray(self.center)) ** 2, axis=1) / self.radius**2
        core = np.clip(1.0 - t2, 0.0, None)
        return self.scale * core**self.k

    def far_values(self, log_r, dirs):
        return np.zeros(np.asarray(log_r).shape)

    def tail(self):
        return CompactSupport(float(np.linalg.norm(self.center)) + self.radius)

    def lipschitz_on(self, radius):
        return abs(self.scale) * 2.0 * self.k / self.radius

    def sup_abs_on(self, radius):
        return abs(self.scale)


@dataclass(frozen=True)
class RadialAngular(ScalarField):
    """profile(|x|) times angular(x/|x|), with the limit declared by parts."""

    profile: RadialProfile
    angular: AngularFn

    @property
    def dim(self):
        return self.angular.dim

    def values(self, pts):
        p = _as_points(pts, self.dim)
        r = np.linalg.norm(p, axis=1)
        out = np.zeros(p.shape[0])
        pos = r > 0
        if pos.any():
            dirs = p[pos] / r[pos, None]
            out[pos] = self.profile.values(r[pos]) * self.angular.values(dirs)
        return out

    def far_values(self, log_r, dirs):
        lam = np.asarray(log_r, dtype=float)
        lim = self.profile.limit()
        if lim is None:
            raise FieldError("radial profile has no limit at infinity")
        # profiles settle at normal-float radii; anything beyond is the limit
        out = np.full(lam.shape, lim)
        near = lam < 300.0
        if near.any():
            out[near] = self.profile.values(np.exp(lam[near]))
        return out * self.angular.values(np.asarray(dirs))

    def tail(self):
        lim = self.profile.limit()
        eb = self.profile.exact_beyond()
        if lim is None or eb is None:
            return UnknownTail()
        if lim == 0.0:
            return CompactSupport(eb)
        return AngularLimit(AScale(self.angular, lim), eb)

    def lipschitz_on(self, radius):
        plip = self.profile.lipschitz()
        if plip is None:
            return None
        if isinstance(self.angular, UniformValue):
            return plip * abs(self.angular.value)
        return None

    def sup_abs_on(self, radius):
        return self.profile.sup_abs() * self.angular.sup_abs()

    def angular_breaks(self):
        return self.angular.breaks()

    def ray_breaks(self, direction, r_max):
        # the profile may kink where it settles (reach point, bump edge)
        eb = self.profile.exact_beyond()
        if eb is not None and 0.0 < eb < r_max:
            return (eb,)
        return ()


@dataclass(frozen=True)
class Periodic1D(ScalarField):
    """Periodic extension of a piecewise-constant profile, on all of R."""

    profile: PeriodicProfile
    dim: int = 1

    def __post_init__(self):
        if self.dim != 1:
            raise FieldError("periodic fields are d=1 only")

    def values(self, pts):
        p = _as_points(pts, 1)
        return self.profile.value_at(p[:, 0])

    def tail(self):
        return PeriodicMean(self.profile, 0.0)

    def sup_abs_on(self, radius):
        return self.profile.sup_abs()

    def ray_breaks(self, direction, r_max):
        sgn = 1.0 if float(np.asarray(direction).reshape(-1)[0]) > 0 else -1.0
        out = []
        base = 0.0
        T = self.profile.period
        while base < r_max + T:
            for s in self.profile.starts:
                x = base + s if sgn > 0 else -(base + s)
                r = abs(x)
                if 0.0 < r < r_max:
                    out.append(r)
            base += T
        return tuple(sorted(out))


@dataclass(frozen=True)
class Shift(ScalarField):
    """Translate: value at x is field(x - offset)."""

    field: ScalarField
    offset: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(float(v) for v in self.offset))
        if len(self.offset) != self.field.dim:
            raise FieldError("shift offset dimension mismatch")

    @property
    def dim(self):
        return self.field.dim

    def values(self, pts):
        p = _as_points(pts, self.dim)
        return self.field.values(p - np.asarray(self.offset))

    def far_values(self, log_r, dirs):
        lam = np.asarray(log_r, dtype=float)
        dirs = np.asarray(dirs, dtype=float)
        out = np.empty(lam.shape)
        near = lam < 300.0  # keeps |x|^2 inside float range downstream
        if near.any():
            pts = np.exp(lam[near])[:, None] * dirs[near] - np.asarray(self.offset)
            out[near] = self.field.values(pts)
        far = ~near
        if far.any():
            # at these radii a bounded shift moves log-radius and direction
            # by O(exp(-log_r)); membership layers that thin carry no
            # sampling mass
            out[far] = self.field.far_values(lam[far], dirs[far])
        return out

    def tail(self):
        t = self.field.tail()
        v = float(np.linalg.norm(self.offset))
        if isinstance(t, CompactSupport):
            return CompactSupport(t.radius + v)
        if isinstance(t, AngularLimit):
            if v == 0.0:
                return t
            if self.dim == 1:
                eb = None if t.exact_beyond is None else t.exact_beyond + v
                return AngularLimit(t.limit, eb, t.dev_l1, t.dev_sup)
            # translation tilts the rays: the limit function is unchanged
            # but exactness degrades to an O(1/r) angular deviation
            extra_l1 = 2.0 * t.limit.tv() * v
            sup = max(t.dev_sup, 2.0 * t.limit.sup_abs())
            return AngularLimit(t.limit, None, t.dev_l1 + extra_l1, sup)
        if isinstance(t, PeriodicMean):
            return PeriodicMean(t.profile.shifted(self.offset[0]),
                                t.exact_beyond + abs(self.offset[0]))
        return UnknownTail()

    def lipschitz_on(self, radius):
        return self.field.lipschitz_on(radius + float(np.linalg.norm(self.offset)))

    def sup_abs_on(self, radius):
        if radius is None:
            return self.field.sup_abs_on(None)
        return self.field.sup_abs_on(radius + float(np.linalg.norm(self.offset)))

    def ray_breaks(self, direction, r_max):
        # conservative: exact jump radii are not available off the origin ray
        return ()


@dataclass(frozen=True)
class Sum(ScalarField):
    terms: tuple[ScalarField, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if len(self.terms) < 2:
            raise FieldError("sum needs at least two terms")
        if len({t.dim for t in self.terms}) != 1:
            raise FieldError("sum over mixed dimensions")

    @property
    def dim(self):
        return self.terms[0].dim

    def values(self, pts):
        out = self.terms[0].values(pts)
        for t in self.terms[1:]:
            out = out + t.values(pts)
        return out

    def far_values(self, log_r, dirs):
        out = self.terms[0].far_values(log_r, dirs)
        for t in self.terms[1:]:
            out = out + t.far_values(log_r, dirs)
        return out

    def tail(self):
        t = self.terms[0].tail()
        for term in self.terms[1:]:
            t = _tail_add(t, term.tail(), self.dim)
        return t

    def lipschitz_on(self, radius):
        total = 0.0
        for t in self.terms:
            lip = t.lipschitz_on(radius)
            if lip is None:
                return None
            total += lip
        return total

    def sup_abs_on(self, radius):
        return sum(t.sup_abs_on(radius) for t in self.terms)

    def angular_breaks(self):
        out = []
        for t in self.terms:
            out.extend(t.angular_breaks())
        return tuple(out)

    def ray_breaks(self, direction, r_max):
        out = []
        for t in self.terms:
            out.extend(t.ray_breaks(direction, r_max))
        return tuple(sorted(out))


@dataclass(frozen=True)
class Product(ScalarField):
    factors: tuple[ScalarField, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) < 2:
            raise FieldError("product needs at least two factors")
        if len({f.dim for f in self.factors}) != 1:
            raise FieldError("product over mixed dimensions")

    @property
    def dim(self):
        return self.factors[0].dim

    def values(self, pts):
        out = self.factors[0].values(pts)
        for f in self.factors[1:]:
            out = out * f.values(pts)
        return out

    def far_values(self, log_r, dirs):
        t = self.tail()
        if isinstance(t, CompactSupport):
            return np.zeros(np.asarray(log_r).shape)
        out = self.factors[0].far_values(log_r, dirs)
        for f in self.factors[1:]:
            out = out * f.far_values(log_r, dirs)
        return out

    def tail(self):
        t = self.factors[0].tail()
        for f in self.factors[1:]:
            t = _tail_mul(t, f.tail(), self.dim)
        return t

    def lipschitz_on(self, radius):
        lips, sups = [], []
        for f in self.factors:
            lip = f.lipschitz_on(radius)
            if lip is None:
                return None
            lips.append(lip)
            sups.append(f.sup_abs_on(radius))
        total = 0.0
        for i, lip in enumerate(lips):
            others = 1.0
            for j, s in enumerate(sups):
                if j != i:
                    others *= s
            total += lip * others
        return total

    def sup_abs_on(self, radius):
        sups = [f.sup_abs_on(radius) for f in self.factors]
        if any(s == 0.0 for s in sups):
            return 0.0
        out = 1.0
        for s in sups:
            out *= s
        return out

    def angular_breaks(self):
        out = []
        for f in self.factors:
            out.extend(f.angular_breaks())
        return tuple(out)

    def ray_breaks(self, direction, r_max):
        out = []
        for f in self.factors:
            out.extend(f.ray_breaks(direction, r_max))
        return tuple(sorted(out))


@dataclass(frozen=True)
class Scale(ScalarField):
    field: ScalarField
    factor: float

    @property
    def dim(self):
        return self.field.dim

    def values(self, pts):
        return self.factor * self.field.values(pts)

    def far_values(self, log_r, dirs):
        return self.factor * self.field.far_values(log_r, dirs)

    def tail(self):
        t = self.field.tail()
        if self.factor == 0.0:
            return CompactSupport(0.0)
        if isinstance(t, CompactSupport):
            return t
        if isinstance(t, AngularLimit):
            return AngularLimit(AScale(t.limit, self.factor), t.exact_beyond,
                                abs(self.factor) * t.dev_l1,
                                abs(self.factor) * t.dev_sup)
        if isinstance(t, PeriodicMean):
            return PeriodicMean(t.profile.map_levels(lambda v: self.factor * v),
                                t.exact_beyond)
        return UnknownTail()

    def lipschitz_on(self, radius):
        lip = self.field.lipschitz_on(radius)
        return None if lip is None else abs(self.factor) * lip

    def sup_abs_on(self, radius):
        return abs(self.factor) * self.field.sup_abs_on(radius)

    def angular_breaks(self):
        return self.field.angular_breaks()

    def ray_breaks(self, direction, r_max):
        return self.field.ray_breaks(direction, r_max)


@dataclass(frozen=True)
class PosPart(ScalarField):
    field: ScalarField

    @property
    def dim(self):
        return self.field.dim

    def values(self, pts):
        return np.maximum(self.field.values(pts), 0.0)

    def far_values(self, log_r, dirs):
        return np.maximum(self.field.far_values(log_r, dirs), 0.0)

    def tail(self):
        return _tail_clip(self.field.tail(), positive=True)

    def lipschitz_on(self, radius):
        return self.field.lipschitz_on(radius)

    def sup_abs_on(self, radius):
        return self.field.sup_abs_on(radius)

    def angular_breaks(self):
        return self.field.angular_breaks()

    def ray_breaks(self, direction, r_max):
        return self.field.ray_breaks(direction, r_max)


@dataclass(frozen=True)
class NegPart(ScalarField):
    field: ScalarField

    @property
    def dim(self):
        return self.field.dim

    def values(self, pts):
        return np.maximum(-self.field.values(pts), 0.0)

    def far_values(self, log_r, dirs):
        return np.maximum(-self.field.far_values(log_r, dirs), 0.0)

    def tail(self):
        return _tail_clip(self.field.tail(), positive=False)

    def lipschitz_on(self, radius):
        return self.field.lipschitz_on(radius)

    def sup_abs_on(self, radius):
        return self.field.sup_abs_on(radius)

    def angular_breaks(self):
        return self.field.angular_breaks()

    def ray_breaks(self, direction, r_max):
        return self.field.ray_breaks(direction, r_max)


@dataclass(frozen=True)
class Power(ScalarField):
    field: ScalarField
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise FieldError("power exponent must be a natural number")

    @property
    def dim(self):
        return self.field.dim

    def values(self, pts):
        return self.field.values(pts) ** self.k

    def far_values(self, log_r, dirs):
        return self.field.far_values(log_r, dirs) ** self.k

    def tail(self):
        if self.k == 0:
            return AngularLimit(UniformValue(self.dim, 1.0), 0.0)
        t = self.field.tail()
        if isinstance(t, CompactSupport):
            return t
        if isinstance(t, AngularLimit):
            if t.exact_beyond is not None:
                return AngularLimit(APow(t.limit, self.k), t.exact_beyond)
            b = t.limit.sup_abs() + t.dev_sup
            return AngularLimit(APow(t.limit, self.k), None,
                                self.k * b ** (self.k - 1) * t.dev_l1,
                                self.k * b ** (self.k - 1) * t.dev_sup)
        if isinstance(t, PeriodicMean):
            return PeriodicMean(t.profile.map_levels(lambda v: v**self.k),
                                t.exact_beyond)
        return UnknownTail()

    def lipschitz_on(self, radius):
        lip = self.field.lipschitz_on(radius)
        if lip is None:
            return None
        b = self.field.sup_abs_on(radius)
        return self.k * b ** (max(self.k - 1, 0)) * lip if self.k else 0.0

    def sup_abs_on(self, radius):
        return self.field.sup_abs_on(radius) ** self.k

    def angular_breaks(self):
        return self.field.angular_breaks()

    def ray_breaks(self, direction, r_max):
        return self.field.ray_breaks(direction, r_max)


# ---------------------------------------------------------------------------
# tail combination rules


def _is_uniform_const(fn: AngularFn) -> Optional[float]:
    if isinstance(fn, UniformValue):
        return fn.value
    if isinstance(fn, AScale):
        inner = _is_uniform_const(fn.fn)
        return None if inner is None else fn.factor * inner
    return None


def _tail_add(a: TailModel, b: TailModel, dim: int) -> TailModel:
    if isinstance(a, UnknownTail) or isinstance(b, UnknownTail):
        return UnknownTail()
    if isinstance(a, CompactSupport) and isinstance(b, CompactSupport):
        return CompactSupport(max(a.radius, b.radius))
    if isinstance(b, CompactSupport):
        a, b = b, a
    if isinstance(a, CompactSupport):
        if isinstance(b, AngularLimit):
            eb = None if b.exact_beyond is None else max(b.exact_beyond, a.radius)
            return AngularLimit(b.limit, eb, b.dev_l1, b.dev_sup)
        if isinstance(b, PeriodicMean):
            return PeriodicMean(b.profile, max(b.exact_beyond, a.radius))
    if isinstance(a, AngularLimit) and isinstance(b, AngularLimit):
        eb = (None if (a.exact_beyond is None or b.exact_beyond is None)
              else max(a.exact_beyond, b.exact_beyond))
        return AngularLimit(ASum((a.limit, b.limit)), eb,
                            a.dev_l1 + b.dev_l1, a.dev_sup + b.dev_sup)
    if isinstance(a, PeriodicMean) and isinstance(b, PeriodicMean):
        if abs(a.profile.period - b.profile.period) < 1e-12 * a.profile.period:
            prof = a.profile.combine(b.profile, lambda u, v: u + v)
            return PeriodicMean(prof, max(a.exact_beyond, b.exact_beyond))
        return UnknownTail()
    # periodic plus a uniform angular constant stays periodic
    per, ang = (a, b) if isinstance(a, PeriodicMean) else (b, a)
    if isinstance(per, PeriodicMean) and isinstance(ang, AngularLimit):
        c = _is_uniform_const(ang.limit)
        if c is not None and ang.exact_beyond is not None:
            return PeriodicMean(per.profile.map_levels(lambda v: v + c),
                                max(per.exact_beyond, ang.exact_beyond))
    return UnknownTail()


def _tail_mul(a: TailModel, b: TailModel, dim: int) -> TailModel:
    # a vanishing factor kills the product outside its support,
    # whatever the other factor does
    if isinstance(a, CompactSupport):
        return a if not isinstance(b, CompactSupport) else CompactSupport(
            min(a.radius, b.radius))
    if isinstance(b, CompactSupport):
        return b
    if isinstance(a, UnknownTail) or isinstance(b, UnknownTail):
        return UnknownTail()
    if isinstance(a, AngularLimit) and isinstance(b, AngularLimit):
        if a.exact_beyond is not None and b.exact_beyond is not None:
            return AngularLimit(AProd((a.limit, b.limit)),
                                max(a.exact_beyond, b.exact_beyond))
        ba = a.limit.sup_abs() + a.dev_sup
        bb = b.limit.sup_abs() + b.dev_sup
        return AngularLimit(AProd((a.limit, b.limit)), None,
                            ba * b.dev_l1 + bb * a.dev_l1,
                            ba * b.dev_sup + b.limit.sup_abs() * a.dev_sup)
    per, ang = (a, b) if isinstance(a, PeriodicMean) else (b, a)
    if isinstance(per, PeriodicMean) and isinstance(ang, AngularLimit):
        c = _is_uniform_const(ang.limit)
        if c is not None and ang.exact_beyond is not None:
            return PeriodicMean(per.profile.map_levels(lambda v: v * c),
                                max(per.exact_beyond, ang.exact_beyond))
    return UnknownTail()


def _tail_clip(t: TailModel, positive: bool) -> TailModel:
    if isinstance(t, CompactSupport):
        return t
    if isinstance(t, AngularLimit):
        limit = APos(t.limit) if positive else ANeg(t.limit)
        # clipping is 1-Lipschitz, so the deviation envelope carries over
        return AngularLimit(limit, t.exact_beyond, t.dev_l1, t.dev_sup)
    if isinstance(t, PeriodicMean):
        fn = (lambda v: max(v, 0.0)) if positive else (lambda v: max(-v, 0.0))
        return PeriodicMean(t.profile.map_levels(fn), t.exact_beyond)
    return UnknownTail()


# ---------------------------------------------------------------------------
# module-level operations


def eval(f: ScalarField, x) -> float:
    """Pointwise evaluation at a single point."""
    return float(f.values(_as_points(np.asarray(x, dtype=float), f.dim))[0])


def eval_many(f: ScalarField, pts) -> np.ndarray:
    return f.values(pts)


def power(f: ScalarField, k: int) -> ScalarField:
    if k < 0:
        raise FieldError("power exponent must be a natural number")
    if k == 0:
        return Constant(f.dim, 1.0)
    if k == 1:
        return f
    if isinstance(f, Constant):
        return Constant(f.dim, f.value**k)
    if isinstance(f, Indicator):
        # 0/1 values are idempotent under powers
        return f
    return Power(f, k)


def pos_part(f: ScalarField) -> ScalarField:
    if isinstance(f, Constant):
        return Constant(f.dim, max(f.value, 0.0))
    if isinstance(f, Indicator):
        return f
    return PosPart(f)


def neg_part(f: ScalarField) -> ScalarField:
    if isinstance(f, Constant):
        return Constant(f.dim, max(-f.value, 0.0))
    if isinstance(f, Indicator):
        return Constant(f.dim, 0.0)
    return NegPart(f)


def tail_model(f: ScalarField) -> TailModel:
    return f.tail()


def exterior_constant(f: ScalarField) -> Optional[tuple[float, float]]:
    """(value, radius) when the field is exactly constant beyond a radius."""
    t = f.tail()
    if isinstance(t, CompactSupport):
        return (0.0, t.radius)
    if isinstance(t, AngularLimit) and t.exact_beyond is not None:
        c = _is_uniform_const(t.limit)
        if c is not None:
            return (c, t.exact_beyond)
    return None
