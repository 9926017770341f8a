"""The p-mass at infinity: alpha_p(u) = lim_{s -> 0+} s * integral over
{|y| > R} of u(y) |y|^{-(d+sp)} dy (the limit does not depend on R).

Two routes.  The analytic route reads the tail model: zero for compact
support, the sphere average of the angular limit, twice the period mean
in d=1.  The numeric route evaluates the truncated tail integral on an
s-grid and extrapolates; whenever the field is exactly radial-structured
beyond a radius the radial integral is closed-form, so the 1/s mass
blow-up never enters the sampling problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import fields as flds
from .asymptotics import SSweepResult, fit_points
from .geometry import (Ball, Complement, Intersection, RadialShells, Region,
                       check_dim, sphere_area)
from .quad import (EstimateWithError, QuadratureSpec, angular_integral, combine,
                   exact, field_moment, mc_mean)

# Monte Carlo stream tags (one per estimator family, never reused)
STREAM_ALPHA_TAIL = 11
STREAM_ALPHA_TRANSLATED = 12

# periods of exact summation before switching to the mean-plus-remainder
# bound for periodic tails
_PERIODIC_EXACT_PERIODS = 256


class MassError(ValueError):
    pass


@dataclass(frozen=True)
class MassAtInfinity:
    p: int
    value: float
    route: str  # "analytic" or "numeric"
    error: float


def _check_p(p: int) -> int:
    if int(p) != p or p < 1:
        raise MassError("p must be a natural number >= 1")
    return int(p)


def alpha_analytic(f: flds.ScalarField, p: int, d: int) -> MassAtInfinity:
    """Mass at infinity from the declared tail model."""
    p = _check_p(p)
    check_dim(d)
    if f.dim != d:
        raise MassError("field dimension mismatch")
    t = f.tail()
    if isinstance(t, flds.CompactSupport):
        return MassAtInfinity(p, 0.0, "analytic", 0.0)
    if isinstance(t, flds.AngularLimit):
        est = angular_integral(t.limit.values, d, t.limit.breaks())
        return MassAtInfinity(p, est.value / p, "analytic", est.error / p)
    if isinstance(t, flds.PeriodicMean):
        if d != 1:
            raise MassError("periodic tails are d=1 only")
        return MassAtInfinity(p, 2.0 * t.mean / p, "analytic", 0.0)
    raise MassError("field has an unknown tail model; use the numeric route")


# ---------------------------------------------------------------------------
# numeric route


def _annulus_moment(f: flds.ScalarField, d: int, r_in: float, r_out: float,
                    s: float, p: int) -> EstimateWithError:
    """Deterministic s * integral of f |y|^{-(d+sp)} over r_in < |y| < r_out."""
    if r_out <= r_in:
        return exact(0.0)
    ann = Intersection((Ball((0.0,) * d, r_out), Complement(Ball((0.0,) * d, r_in))))
    est = field_moment(f, ann, d, weight_exponent=-(d + s * p))
    return s * est


def _shell_tail_exact(region: RadialShells, d: int, s: float, p: int,
                      log_R: float) -> EstimateWithError:
    """s * tail integral for a shell-tower indicator, closed form in log space.

    Each shell contributes (e^{-sp*lo} - e^{-sp*hi}) / (sp) to the radial
    integral.  The dyadic tower needs its geometric closed form: the shell
    count to convergence grows like 1/sp.
    """
    sp = s * p
    acc = 0.0
    if region.pattern == "dyadic_tower":
        L = math.log(2.0)
        q = math.exp(-sp * L)
        k1 = max(0, math.ceil(log_R / (2.0 * L)))
        # a shell cut by log_R contributes its clipped piece
        k_cut = math.floor(log_R / (2.0 * L))
        if k_cut >= 0 and 2 * k_cut * L <= log_R < (2 * k_cut + 1) * L \
                and k_cut < k1:
            acc += math.exp(-sp * log_R) - math.exp(-sp * (2 * k_cut + 1) * L)
        # full shells k >= k1: (1-q) * sum q^{2k} = q^{2 k1} / (1+q)
        acc += q ** (2 * k1) / (1.0 + q)
    else:
        # doubly exponential boundaries: direct summation converges in
        # a handful of terms for any sp
        for lo, hi in region.log_shells(log_R + 80.0 / max(sp, 1e-12)):
            lo = max(lo, log_R)
            if hi <= lo:
                continue
            term = math.exp(-sp * lo) - math.exp(-sp * hi)
            acc += term
            if term < 1e-18 * max(acc, 1.0) and lo > log_R:
                break
    value = sphere_area(d) * acc / p
    return EstimateWithError(value, abs(value) * 1e-14, "analytic")


def _periodic_ray_integral(prof: flds.PeriodicProfile, sgn: float, r0: float,
                           s: float, p: int) -> EstimateWithError:
    """s * integral_{r0}^{inf} prof(sgn*r) r^{-1-sp} dr, exact plus remainder.

    Piecewise-constant segments integrate in closed form; after a fixed
    number of periods the profile is replaced by its mean, with the
    oscillatory remainder bounded by summation by parts.
    """
    sp = s * p
    T = prof.period
    r1 = r0 + _PERIODIC_EXACT_PERIODS * T
    # segment breakpoints of r -> prof(sgn*r) in [r0, r1]
    starts = np.asarray(prof.starts)
    k_lo = math.floor((sgn * r0 if sgn > 0 else -r1) / T) - 1
    k_hi = math.ceil((sgn * r1 if sgn > 0 else -r0) / T) + 1
    cuts = [r0, r1]
    for k in range(k_lo, k_hi + 1):
        for st in starts:
            x = k * T + st
            r = sgn * x
            if r0 < r < r1:
                cuts.append(r)
    cuts = sorted(set(cuts))
    acc = 0.0
    for a, b in zip(cuts, cuts[1:]):
        mid = 0.5 * (a + b)
        v = float(prof.value_at([sgn * mid])[0])
        acc += v * (a**(-sp) - b**(-sp)) / sp
    mean_tail = prof.mean() * r1**(-sp) / sp
    remainder = prof.abs_mean_dev() * T * (r1 - T) ** (-1.0 - sp)
    return EstimateWithError(s * (acc + mean_tail), s * remainder, "analytic")


def _mc_log_tail(f: flds.ScalarField, p: int, d: int, s: float, R: float,
                 spec: QuadratureSpec, center: Optional[np.ndarray] = None,
                 stream: int = STREAM_ALPHA_TAIL) -> EstimateWithError:
    """Monte Carlo s * tail integral via log-radius importance sampling.

    lambda = log r is drawn from the exponential density sp*e^{-sp(l - ln R)},
    directions uniformly; the weight is then constant in lambda, so the
    estimator stays bounded however small s becomes.
    """
    sp = s * p
    log_R = math.log(R)
    dwd = sphere_area(d)
    wconst = dwd * math.exp(-sp * log_R) / p  # s * dw_d * R^{-sp} / (sp)

    def draw(rng, n):
        lam = log_R + rng.exponential(1.0, size=n) / sp
        z = rng.standard_normal(size=(n, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        vals = np.empty(n)
        # 300 keeps squared norms inside float range during membership tests
        near = lam < 300.0
        if near.any():
            pts = np.exp(lam[near])[:, None] * z[near]
            if center is not None:
                pts = pts + center
            vals[near] = f.values(pts)
        far = ~near
        if far.any():
            # a bounded recentering is invisible at these radii
            vals[far] = f.far_values(lam[far], z[far])
        return wconst * vals

    return mc_mean(draw, spec, stream=stream)


def tail_integral(f: flds.ScalarField, p: int, d: int, s: float, R: float,
                  spec: Optional[QuadratureSpec] = None) -> EstimateWithError:
    """s * integral of f(y)|y|^{-(d+sp)} over |y| > R, routed by tail model."""
    p = _check_p(p)
    check_dim(d)
    if not 0.0 < s < 1.0:
        raise MassError("s must lie in (0, 1)")
    if R <= 0.0:
        raise MassError("truncation radius must be positive")
    spec = spec or QuadratureSpec()
    t = f.tail()

    if isinstance(f, flds.Indicator) and isinstance(f.region, RadialShells):
        return _shell_tail_exact(f.region, d, s, p, math.log(R))

    if isinstance(t, flds.CompactSupport):
        if R >= t.radius:
            return exact(0.0)
        return _annulus_moment(f, d, R, t.radius, s, p)

    if isinstance(t, flds.AngularLimit):
        sp = s * p
        m1 = angular_integral(t.limit.values, d, t.limit.breaks())
        if t.exact_beyond is not None:
            r0 = max(R, t.exact_beyond)
            parts = [m1 * (math.exp(-sp * math.log(r0)) / p)]
            if r0 > R:
                parts.append(_annulus_moment(f, d, R, r0, s, p))
            return combine(parts)
        # asymptotic limit only: integrate the limit, bound the deviation
        main = m1 * (math.exp(-sp * math.log(R)) / p)
        dev = min(t.dev_l1 * R ** (-1.0 - sp) / (1.0 + sp) * s,
                  t.dev_sup * sphere_area(d) * math.exp(-sp * math.log(R)) / p)
        return EstimateWithError(main.value, main.error + dev, "analytic")

    if isinstance(t, flds.PeriodicMean):
        if d != 1:
            raise MassError("periodic tails are d=1 only")
        r0 = max(R, t.exact_beyond)
        parts = [_periodic_ray_integral(t.profile, sgn, r0, s, p)
                 for sgn in (1.0, -1.0)]
        if r0 > R:
            parts.append(_annulus_moment(f, d, R, r0, s, p))
        return combine(parts)

    return _mc_log_tail(f, p, d, s, R, spec)


def alpha_numeric(f: flds.ScalarField, p: int, d: int,
                  s_grid: Sequence[float], R: float = 1.0,
                  spec: Optional[QuadratureSpec] = None) -> SSweepResult:
    """Sweep the truncated tail integral and extrapolate s -> 0.

    The same QuadratureSpec (hence seed) is reused across the grid, so
    Monte Carlo points share their random numbers and the extrapolated
    intercept is stable.
    """
    spec = spec or QuadratureSpec()
    points = [(float(s), tail_integral(f, p, d, float(s), R, spec))
              for s in s_grid]
    values = [abs(est.value) for _, est in points]
    head = max(values[0], 1e-12)
    if values[-1] > 50.0 * head and values[-1] > 10.0 * points[-1][1].error \
            and all(b >= a for a, b in zip(values[-4:], values[-3:])):
        raise MassError("tail integral appears divergent along the sweep")
    return fit_points(points)


def alpha_translated(f: flds.ScalarField, p: int, d: int, x: Sequence[float],
                     R: float, s: float,
                     spec: Optional[QuadratureSpec] = None) -> EstimateWithError:
    """s * integral of f(y)|x-y|^{-(d+sp)} over |y - x| > R, single s.

    Shares random draws with the x = 0 evaluation (same seed and stream),
    so translation comparisons are common-random-number paired.
    """
    p = _check_p(p)
    check_dim(d)
    spec = spec or QuadratureSpec()
    center = np.asarray(tuple(float(c) for c in x), dtype=float)
    if center.shape != (d,):
        raise MassError("translation point dimension mismatch")
    t = f.tail()
    if isinstance(t, flds.CompactSupport) and R >= t.radius + float(np.linalg.norm(center)):
        return exact(0.0)
    return _mc_log_tail(f, p, d, s, R, spec, center=center,
                        stream=STREAM_ALPHA_TRANSLATED)


def translation_bound(p: int, d: int, s: float, x_norm: float, R: float,
                      alpha_value: float) -> float:
    """Analytic bound on |alpha at x - alpha at 0| for the invariance test."""
    return (d + s * p) * x_norm / R * abs(alpha_value)
