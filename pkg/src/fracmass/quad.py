"""Integration engine.

Deterministic 1-d quadrature (QUADPACK behind a singularity-aware wrapper,
plus a vectorized adaptive Gauss panel scheme), angular integrals over
S^{d-1}, region moments of fields, and a seeded batched Monte Carlo core
whose results are a deterministic function of (seed, budget, batch_count)
regardless of worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy import integrate as _sp_integrate

from . import fields as flds
from .geometry import Region, check_dim, sphere_area

_TWO_PI = 2.0 * math.pi


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    sample_budget: int = 160_000
    rng_seed: int = 0
    target_rel_error: float = 1e-3
    batch_count: int = 40

    def __post_init__(self):
        if self.sample_budget < 1000:
            raise ValueError("sample_budget must be at least 1000")
        if not 0.0 < self.target_rel_error < 1.0:
            raise ValueError("target_rel_error must lie in (0, 1)")
        if self.batch_count < 2 or self.sample_budget % self.batch_count != 0:
            raise ValueError("batch_count must be >= 2 and divide sample_budget")

    def batch_size(self) -> int:
        return self.sample_budget // self.batch_count

    def with_budget(self, budget: int) -> "QuadratureSpec":
        budget = max(1000, int(budget))
        budget -= budget % self.batch_count
        if budget < 1000:
            budget = 1000 + (self.batch_count - 1000 % self.batch_count) % self.batch_count
        return QuadratureSpec(budget, self.rng_seed, self.target_rel_error,
                              self.batch_count)


# error_kind ordering: statistical dominates analytic dominates exact
_KIND_RANK = {"exact": 0, "analytic": 1, "statistical": 2}


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    error: float
    error_kind: str = "statistical"

    def __post_init__(self):
        if self.error_kind not in _KIND_RANK:
            raise ValueError(f"unknown error_kind {self.error_kind!r}")
        if self.error_kind == "exact" and self.error != 0.0:
            raise ValueError("exact estimates carry zero error")
        if self.error < 0 or not math.isfinite(self.value):
            raise ValueError("estimate must be finite with nonnegative error")

    def __add__(self, other):
        if isinstance(other, EstimateWithError):
            return combine([self, other], [1.0, 1.0])
        return EstimateWithError(self.value + other, self.error, self.error_kind)

    def __mul__(self, c: float):
        return EstimateWithError(c * self.value, abs(c) * self.error, self.error_kind)

    __rmul__ = __mul__


def exact(value: float) -> EstimateWithError:
    return EstimateWithError(float(value), 0.0, "exact")


def combine(parts: Sequence[EstimateWithError],
            weights: Optional[Sequence[float]] = None) -> EstimateWithError:
    """Weighted sum; independent errors add in quadrature."""
    if weights is None:
        weights = [1.0] * len(parts)
    value = sum(w * p.value for w, p in zip(weights, parts))
    err = math.sqrt(sum((w * p.error) ** 2 for w, p in zip(weights, parts)))
    kind = "exact"
    for p in parts:
        if _KIND_RANK[p.error_kind] > _KIND_RANK[kind]:
            kind = p.error_kind
    if kind == "exact" and err != 0.0:
        kind = "analytic"
    return EstimateWithError(value, err, kind)


def product(a: EstimateWithError, b: EstimateWithError) -> EstimateWithError:
    err = abs(a.value) * b.error + abs(b.value) * a.error + a.error * b.error
    kind = a.error_kind if _KIND_RANK[a.error_kind] >= _KIND_RANK[b.error_kind] else b.error_kind
    if kind == "exact" and err != 0.0:
        kind = "analytic"
    return EstimateWithError(a.value * b.value, err, kind)


# ---------------------------------------------------------------------------
# 1-d quadrature


def integrate_1d(f: Callable[[float], float], a: float, b: float,
                 sing_a: float = 0.0, sing_b: float = 0.0,
                 rel_tol: float = 1e-10) -> EstimateWithError:
    """Integrate f on (a, b) with declared endpoint singularity exponents.

    sing_a / sing_b declare f(x) ~ (x-a)^{e} near the endpoint with e in
    (-1, 0]; the substitution x = a + t^{1/(1+e)} absorbs the singularity.
    b may be +inf (then sing_b must be 0).
    """
    if not a < b:
        raise QuadratureError("integrate_1d needs a < b")
    for e in (sing_a, sing_b):
        if not -1.0 < e <= 0.0:
            raise QuadratureError("singularity exponent must lie in (-1, 0]")
    g, lo, hi = f, a, b
    if sing_a < 0.0:
        if not math.isfinite(a):
            raise QuadratureError("singular endpoint must be finite")
        q = 1.0 / (1.0 + sing_a)

        def g_lo(t, _g=g, _a=a, _q=q):
            return _g(_a + t**_q) * _q * t ** (_q - 1.0)

        g = g_lo
        lo = 0.0
        hi = (b - a) ** (1.0 + sing_a) if math.isfinite(b) else math.inf
        if sing_b < 0.0:
            raise QuadratureError("declare at most one singular endpoint per call")
    elif sing_b < 0.0:
        if not math.isfinite(b):
            raise QuadratureError("singular endpoint must be finite")
        q = 1.0 / (1.0 + sing_b)

        def g_hi(t, _g=g, _b=b, _q=q):
            return _g(_b - t**_q) * _q * t ** (_q - 1.0)

        g = g_hi
        lo = 0.0
        hi = (b - a) ** (1.0 + sing_b)

    with np.errstate(over="ignore", invalid="ignore"):
        value, abserr = _sp_integrate.quad(g, lo, hi, epsabs=1e-13,
                                           epsrel=rel_tol, limit=300)
    if not math.isfinite(value):
        raise QuadratureError("non-finite quadrature value")
    if abserr > max(1e-11, 100.0 * rel_tol * abs(value)):
        raise QuadratureError(
            f"quadrature did not converge: value={value:.6g} abserr={abserr:.2g}")
    return EstimateWithError(value, abserr, "analytic")


# Gauss-Legendre panel pair used by the vectorized adaptive scheme
_GL_LOW = np.polynomial.legendre.leggauss(7)
_GL_HIGH = np.polynomial.legendre.leggauss(15)


def _panel_values(fvec, lo: np.ndarray, hi: np.ndarray):
    """Low/high Gauss estimates of column integrals for panels [lo_i, hi_i]."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    xs_l = mid[None, :] + half[None, :] * _GL_LOW[0][:, None]
    xs_h = mid[None, :] + half[None, :] * _GL_HIGH[0][:, None]
    n_l, n_h = xs_l.shape[0], xs_h.shape[0]
    allx = np.concatenate([xs_l.ravel(), xs_h.ravel()])
    vals = fvec(allx)
    v_l = vals[: n_l * lo.size].reshape(n_l, lo.size)
    v_h = vals[n_l * lo.size:].reshape(n_h, lo.size)
    est_l = half * (_GL_LOW[1] @ v_l)
    est_h = half * (_GL_HIGH[1] @ v_h)
    return est_l, est_h


def adaptive_1d(fvec: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                breaks: Sequence[float] = (), rel_tol: float = 1e-9,
                abs_tol: float = 1e-14, max_depth: int = 40) -> EstimateWithError:
    """Vectorized adaptive Gauss quadrature of a batch-evaluable integrand.

    fvec maps an array of abscissae to integrand values. breaks are interior
    points where the integrand may be non-smooth; panels never straddle them.
    """
    if not a < b:
        if a == b:
            return exact(0.0)
        raise QuadratureError("adaptive_1d needs a <= b")
    pts = sorted({float(a), float(b)} | {float(x) for x in breaks if a < x < b})
    lo = np.asarray(pts[:-1])
    hi = np.asarray(pts[1:])
    total = 0.0
    total_err = 0.0
    for depth in range(max_depth):
        est_l, est_h = _panel_values(fvec, lo, hi)
        err = np.abs(est_h - est_l)
        budget = abs_tol + rel_tol * max(abs(total + float(np.sum(est_h))), 1.0)
        ok = err <= budget * (hi - lo) / (b - a)
        total += float(np.sum(est_h[ok]))
        total_err += float(np.sum(err[ok]))
        if ok.all():
            return EstimateWithError(total, total_err, "analytic")
        lo, hi = lo[~ok], hi[~ok]
        mid = 0.5 * (lo + hi)
        lo = np.concatenate([lo, mid])
        hi = np.concatenate([mid, hi])
        if lo.size > 200_000:
            raise QuadratureError("adaptive_1d: panel explosion")
    # leftover panels: accept the high-order estimate, report the gap
    est_l, est_h = _panel_values(fvec, lo, hi)
    total += float(np.sum(est_h))
    total_err += float(np.sum(np.abs(est_h - est_l)))
    return EstimateWithError(total, total_err, "analytic")


def integrate_radial_power(gvec, lo: float, hi: float, gamma: float,
                           rel_tol: float = 1e-9) -> EstimateWithError:
    """Integral of g(r) r^gamma on [lo, hi], gamma > -1, absorbing the weight.

    Near r=0 the substitution r = ((1+gamma) t)^{1/(1+gamma)} turns the
    integrand into g(r(t)), which the panel scheme handles at full order.
    """
    if gamma <= -1.0:
        raise QuadratureError("radial weight exponent must exceed -1")
    if hi <= lo:
        return exact(0.0)
    if lo > 0.0 or gamma == 0.0:
        return adaptive_1d(lambda r: gvec(r) * r**gamma, lo, hi, rel_tol=rel_tol)
    q = 1.0 + gamma

    def h(t):
        r = (q * t) ** (1.0 / q)
        return gvec(r)

    return adaptive_1d(h, 0.0, hi**q / q, rel_tol=rel_tol)


# ---------------------------------------------------------------------------
# angular integration over S^{d-1}


def angular_integral(fn: Callable[[np.ndarray], np.ndarray], d: int,
                     breaks: Sequence[float] = (),
                     rel_tol: float = 1e-9) -> EstimateWithError:
    """Integral of fn over the unit sphere S^{d-1} (fn takes (n,d) directions)."""
    check_dim(d)
    if d == 1:
        v = fn(np.array([[1.0], [-1.0]]))
        return EstimateWithError(float(v[0] + v[1]), 0.0, "exact")
    if d == 2:
        cuts = sorted({b % _TWO_PI for b in breaks})

        def g(theta):
            dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
            return np.asarray(fn(dirs), dtype=float)

        return adaptive_1d(g, 0.0, _TWO_PI, breaks=cuts, rel_tol=rel_tol)

    # d = 3: integrate over polar angle, azimuth inner loop
    def outer(phi_arr):
        out = np.empty(phi_arr.shape)
        for i, phi in enumerate(phi_arr):
            sphi, cphi = math.sin(phi), math.cos(phi)

            def inner(psi, _s=sphi, _c=cphi):
                dirs = np.stack([_s * np.cos(psi), _s * np.sin(psi),
                                 np.full(psi.shape, _c)], axis=1)
                return np.asarray(fn(dirs), dtype=float)

            out[i] = adaptive_1d(inner, 0.0, _TWO_PI, rel_tol=rel_tol * 0.5).value * sphi
        return out

    cuts = sorted({b for b in breaks if 0.0 < b < math.pi})
    return adaptive_1d(outer, 0.0, math.pi, breaks=cuts, rel_tol=rel_tol)


# ---------------------------------------------------------------------------
# moments of fields over regions


def _indicator_region(f: flds.ScalarField) -> Optional[Region]:
    """Region whose indicator the field equals, when that is structural."""
    if isinstance(f, flds.Indicator):
        return f.region
    if isinstance(f, flds.Power) and f.k >= 1:
        return _indicator_region(f.field)
    if isinstance(f, (flds.PosPart,)):
        return _indicator_region(f.field)
    return None


def field_moment(f: flds.ScalarField, region: Region, d: int,
                 weight_exponent: float = 0.0,
                 rel_tol: float = 1e-9) -> EstimateWithError:
    """Integral of f(x) |x|^{weight_exponent} over the region.

    Deterministic: interval decomposition in d=1, polar quadrature with exact
    per-ray region intervals in d=2 and d=3.
    """
    check_dim(d)
    if region.dim != d or f.dim != d:
        raise QuadratureError("dimension mismatch in field_moment")
    rho = region.bounding_radius()
    if rho is None:
        raise QuadratureError("field_moment needs a bounded region")
    if rho == 0.0:
        return exact(0.0)
    gamma = weight_exponent + (d - 1)
    if gamma <= -1.0:
        raise QuadratureError("moment weight is not integrable at the origin")

    if d == 1:
        parts = []
        for sgn in (1.0, -1.0):
            u = np.array([sgn])
            fbreaks = f.ray_breaks(u, rho)
            for lo, hi in region.ray_intervals(u, rho):
                inner_breaks = [x for x in fbreaks if lo < x < hi]

                def g(r, _s=sgn):
                    pts = (_s * r).reshape(-1, 1)
                    return f.values(pts)

                if lo == 0.0 and weight_exponent != 0.0:
                    parts.append(integrate_radial_power(g, lo, hi, gamma,
                                                        rel_tol=rel_tol))
                else:
                    wfun = (lambda r, _s=sgn: f.values((_s * r).reshape(-1, 1))
                            * r**weight_exponent) if weight_exponent else g
                    parts.append(adaptive_1d(wfun, lo, hi, breaks=inner_breaks,
                                             rel_tol=rel_tol))
        return combine(parts) if parts else exact(0.0)

    if d == 2:
        abreaks = set(region.angular_breaks()) | set(f.angular_breaks())
        cuts = sorted({b % _TWO_PI for b in abreaks})

        def per_angle(theta_arr):
            out = np.empty(theta_arr.shape)
            for i, th in enumerate(theta_arr):
                u = np.array([math.cos(th), math.sin(th)])
                fbreaks = f.ray_breaks(u, rho)
                acc = 0.0
                for lo, hi in region.ray_intervals(u, rho):
                    ib = [x for x in fbreaks if lo < x < hi]

                    def g(r, _u=u):
                        return f.values(r[:, None] * _u[None, :])

                    if lo == 0.0:
                        est = integrate_radial_power(g, lo, hi, gamma,
                                                     rel_tol=rel_tol * 0.3)
                    else:
                        est = adaptive_1d(lambda r, _g=g: _g(r) * r**gamma,
                                          lo, hi, breaks=ib, rel_tol=rel_tol * 0.3)
                    acc += est.value
                out[i] = acc
            return out

        return adaptive_1d(per_angle, 0.0, _TWO_PI, breaks=cuts, rel_tol=rel_tol)

    # d = 3: polar angle outer, azimuth middle, radius inner
    def outer(phi_arr):
        out = np.empty(phi_arr.shape)
        for i, phi in enumerate(phi_arr):
            sphi, cphi = math.sin(phi), math.cos(phi)

            def middle(psi_arr, _s=sphi, _c=cphi):
                vals = np.empty(psi_arr.shape)
                for j, psi in enumerate(psi_arr):
                    u = np.array([_s * math.cos(psi), _s * math.sin(psi), _c])
                    acc = 0.0
                    for lo, hi in region.ray_intervals(u, rho):
                        def g(r, _u=u):
                            return f.values(r[:, None] * _u[None, :])

                        if lo == 0.0:
                            est = integrate_radial_power(g, lo, hi, gamma,
                                                         rel_tol=rel_tol)
                        else:
                            est = adaptive_1d(lambda r, _g=g: _g(r) * r**gamma,
                                              lo, hi, rel_tol=rel_tol)
                        acc += est.value
                    vals[j] = acc
                return vals

            out[i] = adaptive_1d(middle, 0.0, _TWO_PI, rel_tol=rel_tol).value * sphi
        return out

    return adaptive_1d(outer, 0.0, math.pi, rel_tol=rel_tol * 3.0)


# ---------------------------------------------------------------------------
# Monte Carlo core


def _thread_count() -> int:
    raw = os.environ.get("FRACMASS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def mc_mean(draw: Callable[[Generator, int], np.ndarray], spec: QuadratureSpec,
            stream: int = 0) -> EstimateWithError:
    """Batched Monte Carlo mean of a draw function.

    draw(rng, n) returns n sample values whose expectation is the target.
    The value is the mean of batch means in batch-index order; the error is
    the standard error over batches.  Deterministic in (seed, stream, budget,
    batch_count); thread count never changes the result.
    """
    B = spec.batch_count
    n = spec.batch_size()

    def one_batch(i: int) -> float:
        rng = Generator(Philox(SeedSequence([spec.rng_seed, stream, i])))
        vals = np.asarray(draw(rng, n), dtype=float)
        if vals.shape != (n,):
            raise QuadratureError("draw must return one value per sample")
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("non-finite Monte Carlo sample values")
        return float(np.mean(vals))

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            means = list(pool.map(one_batch, range(B)))
    else:
        means = [one_batch(i) for i in range(B)]
    means = np.asarray(means)
    value = float(np.mean(means))
    err = float(np.std(means, ddof=1) / math.sqrt(B))
    return EstimateWithError(value, err, "statistical")


@dataclass(frozen=True)
class PairSampler:
    """Importance sampler for double integrals: draw pairs plus the density.

    draw(rng, n) -> (x, y, inv_density) with x, y of shape (n, d) and
    inv_density the reciprocal sampling density at each pair (closed form,
    exact).  Zero-density points must never be drawn where g is nonzero.
    """

    draw: Callable[[Generator, int], tuple]


def mc_double_integral(g: Callable[[np.ndarray, np.ndarray], np.ndarray],
                       sampler: PairSampler, spec: QuadratureSpec,
                       stream: int = 1) -> EstimateWithError:
    """Importance-sampled estimate of a double integral of g."""

    def draw(rng, n):
        x, y, inv_density = sampler.draw(rng, n)
        return np.asarray(g(x, y), dtype=float) * np.asarray(inv_density, dtype=float)

    return mc_mean(draw, spec, stream=stream)


def uniform_box_sampler(d: int, rho: float):
    """Uniform pair sampler on the box [-rho, rho]^d squared (for tests)."""
    vol = (2.0 * rho) ** d

    def draw(rng, n):
        x = rng.uniform(-rho, rho, size=(n, d))
        y = rng.uniform(-rho, rho, size=(n, d))
        return x, y, np.full(n, vol * vol)

    return PairSampler(draw)
