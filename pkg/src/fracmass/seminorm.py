"""Localized Gagliardo seminorm over Q_Omega, fractional perimeter, Hardy pair.

The seminorm [u]^p over Q_Omega splits into an interior-interior part, an
interior-exterior part up to radius R, and a tail beyond R.  The two inner
parts are Monte Carlo with power-law radial importance sampling; the tail is
semi-analytic whenever the field declares a usable tail model, because the
tail carries the whole s -> 0 limit and sampling it naively would bias the
extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fields as flds
from .geometry import (Ball, Intersection, Region, check_dim,
                       ray_crossing_candidates, sphere_area, volume)
from .quad import (EstimateWithError, QuadratureSpec, _indicator_region,
                   angular_integral, combine, exact, field_moment, mc_mean,
                   product)

STREAM_SEMINORM_INTERIOR = 21
STREAM_SEMINORM_NEAR = 22
STREAM_SEMINORM_TAIL = 23

# radius cutoff (in log space) beyond which fields are asked for far values
_EVAL_LOG_MAX = 300.0


class SeminormError(ValueError):
    pass


@dataclass(frozen=True)
class SeminormBreakdown:
    """The three pieces of [u]^p_{W^{s,p}(Q_Omega)} and their sum.

    total = interior_interior + 2 * (near + tail): the interior-exterior
    pairs are counted once per ordering in the symmetric double integral.
    """

    interior_interior: EstimateWithError
    interior_exterior_near: EstimateWithError
    interior_exterior_tail: EstimateWithError
    total: EstimateWithError
    s: float
    p: float
    R: float


def _unit_dirs(rng, n: int, d: int) -> np.ndarray:
    if d == 1:
        return np.where(rng.random(n) < 0.5, -1.0, 1.0).reshape(n, 1)
    v = rng.normal(size=(n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _restrict_to(f: flds.ScalarField, omega: Optional[Region]):
    """A globally smooth field agreeing with f on omega, or None.

    Indicators of omega itself (or of a ball covering it) collapse to the
    constant 1 inside omega, which is what lets piecewise products like
    poly(x) * chi_omega expose their interior Lipschitz constant.
    """
    if isinstance(f, (flds.Constant, flds.Polynomial, flds.Bump)):
        return f
    if isinstance(f, flds.RadialAngular):
        return None
    if isinstance(f, flds.Indicator):
        if omega is None:
            return None
        if f.region == omega:
            return flds.Constant(f.dim, 1.0)
        rho = omega.bounding_radius()
        if isinstance(f.region, Ball) and rho is not None:
            dist = float(np.linalg.norm(np.asarray(f.region.center)))
            if dist + rho <= f.region.radius:
                return flds.Constant(f.dim, 1.0)
        return None
    if isinstance(f, flds.Sum):
        parts = [_restrict_to(t, omega) for t in f.terms]
        return None if any(p is None for p in parts) else flds.Sum(tuple(parts))
    if isinstance(f, flds.Product):
        parts = [_restrict_to(t, omega) for t in f.factors]
        return None if any(p is None for p in parts) else flds.Product(tuple(parts))
    if isinstance(f, flds.Scale):
        g = _restrict_to(f.field, omega)
        return None if g is None else flds.Scale(g, f.factor)
    if isinstance(f, flds.Shift):
        # the child is evaluated on a translate of omega; only globally
        # smooth children restrict safely
        g = _restrict_to(f.field, None)
        return None if g is None else flds.Shift(g, f.offset)
    if isinstance(f, flds.PosPart):
        g = _restrict_to(f.field, omega)
        return None if g is None else flds.PosPart(g)
    if isinstance(f, flds.NegPart):
        g = _restrict_to(f.field, omega)
        return None if g is None else flds.NegPart(g)
    if isinstance(f, flds.Power):
        g = _restrict_to(f.field, omega)
        return None if g is None else flds.Power(g, f.k)
    return None


def _abs_power_field(f: flds.ScalarField, c: float, k: int) -> flds.ScalarField:
    """|f - c|^k as a field; pointwise one of the two clipped parts is zero."""
    g = f if c == 0.0 else flds.Sum((f, flds.Constant(f.dim, -c)))
    return flds.Sum((flds.Power(flds.PosPart(g), k),
                     flds.Power(flds.PosPart(flds.Scale(g, -1.0)), k)))


# ---------------------------------------------------------------------------
# interior-interior term


def _interior_ray_mc(E: Region, omega: Region, s: float, p: float,
                     rho: float, spec: QuadratureSpec) -> EstimateWithError:
    # indicator integrand: |chi(x) - chi(y)| in {0, 1}, exact radial integral
    # of r^{-1-sp} over the straddling cells along each sampled ray
    d = omega.dim
    sp = s * p
    D = 2.0 * rho
    vbox = (2.0 * rho) ** d
    dw = sphere_area(d)
    eps = 1e-15 * D

    def draw(rng, n):
        x = rng.uniform(-rho, rho, size=(n, d))
        mask = omega.contains(x)
        th = _unit_dirs(rng, n, d)
        cand = np.concatenate([ray_crossing_candidates(E, x, th, D),
                               ray_crossing_candidates(omega, x, th, D)], axis=1)
        c = np.clip(cand, 0.0, D)
        edges = np.sort(np.concatenate(
            [np.zeros((n, 1)), c, np.full((n, 1), D)], axis=1), axis=1)
        mids = 0.5 * (edges[:, :-1] + edges[:, 1:])
        m = mids.shape[1]
        pts = (x[:, None, :] + mids[:, :, None] * th[:, None, :]).reshape(-1, d)
        in_e = E.contains(pts).reshape(n, m)
        in_o = omega.contains(pts).reshape(n, m)
        chi_x = E.contains(x)
        g = in_o & (in_e != chi_x[:, None])
        lo = np.maximum(edges[:, :-1], eps) ** (-sp)
        hi = np.maximum(edges[:, 1:], eps) ** (-sp)
        return vbox * mask * dw * np.sum(g * (lo - hi), axis=1) / sp

    return mc_mean(draw, spec, stream=STREAM_SEMINORM_INTERIOR)


def _interior_smooth_mc(f: flds.ScalarField, omega: Region, s: float, p: float,
                        rho: float, lip: float,
                        spec: QuadratureSpec) -> EstimateWithError:
    d = omega.dim
    sp = s * p
    D = 2.0 * rho
    vbox = (2.0 * rho) ** d
    dw = sphere_area(d)
    # truncation radius: the excluded near-diagonal mass must stay below a
    # tenth of the target relative error (against the trivial scale bound)
    r_min = D * (0.1 * spec.target_rel_error) ** (1.0 / (p - sp))
    A = r_min ** (-sp) - D ** (-sp)

    def draw(rng, n):
        x = rng.uniform(-rho, rho, size=(n, d))
        mask = omega.contains(x).astype(float)
        th = _unit_dirs(rng, n, d)
        r = (r_min ** (-sp) - rng.random(n) * A) ** (-1.0 / sp)
        y = x + r[:, None] * th
        ok = omega.contains(y)
        du = np.abs(f.values(x) - f.values(y))
        return vbox * mask * dw * (A / sp) * du ** p * ok

    est = mc_mean(draw, spec, stream=STREAM_SEMINORM_INTERIOR)
    excluded = vbox * dw * lip ** p * r_min ** (p - sp) / (p - sp)
    return EstimateWithError(est.value, est.error + excluded, "statistical")


# ---------------------------------------------------------------------------
# interior-exterior near term (exterior restricted to B_R minus omega)


def _near_ray_mc(E: Region, omega: Region, s: float, p: float, R: float,
                 rho: float, spec: QuadratureSpec) -> EstimateWithError:
    d = omega.dim
    sp = s * p
    vbox = (2.0 * rho) ** d
    dw = sphere_area(d)
    eps = 1e-15 * R
    ball = Ball((0.0,) * d, R)
    reach = R + rho * math.sqrt(d)

    def draw(rng, n):
        x = rng.uniform(-rho, rho, size=(n, d))
        inside = omega.contains(x)
        th = _unit_dirs(rng, n, d)
        hi_r = np.linalg.norm(x, axis=1) + R
        t = np.where(inside, np.maximum(omega.boundary_gap(x), eps), hi_r)
        cand = np.concatenate([ray_crossing_candidates(E, x, th, reach),
                               ray_crossing_candidates(omega, x, th, reach),
                               ray_crossing_candidates(ball, x, th, reach)], axis=1)
        c = np.clip(cand, t[:, None], hi_r[:, None])
        edges = np.sort(np.concatenate(
            [t[:, None], c, hi_r[:, None]], axis=1), axis=1)
        mids = 0.5 * (edges[:, :-1] + edges[:, 1:])
        m = mids.shape[1]
        pts = (x[:, None, :] + mids[:, :, None] * th[:, None, :]).reshape(-1, d)
        in_e = E.contains(pts).reshape(n, m)
        in_o = omega.contains(pts).reshape(n, m)
        in_b = ball.contains(pts).reshape(n, m)
        chi_x = E.contains(x)
        g = in_b & ~in_o & (in_e != chi_x[:, None])
        lo = edges[:, :-1] ** (-sp)
        hi = edges[:, 1:] ** (-sp)
        return vbox * inside * dw * np.sum(g * (lo - hi), axis=1) / sp

    return mc_mean(draw, spec, stream=STREAM_SEMINORM_NEAR)


def _near_generic_mc(f: flds.ScalarField, omega: Region, s: float, p: float,
                     R: float, rho: float, spec: QuadratureSpec) -> EstimateWithError:
    d = omega.dim
    sp = s * p
    vbox = (2.0 * rho) ** d
    dw = sphere_area(d)
    eps = 1e-15 * R

    def draw(rng, n):
        x = rng.uniform(-rho, rho, size=(n, d))
        inside = omega.contains(x)
        mask = inside.astype(float)
        th = _unit_dirs(rng, n, d)
        hi_r = np.linalg.norm(x, axis=1) + R
        t = np.where(inside, np.maximum(omega.boundary_gap(x), eps), hi_r * 0.5)
        a_lo = t ** (-sp)
        a_hi = hi_r ** (-sp)
        r = (a_lo - rng.random(n) * (a_lo - a_hi)) ** (-1.0 / sp)
        y = x + r[:, None] * th
        ok = (np.linalg.norm(y, axis=1) <= R) & ~omega.contains(y)
        du = np.abs(f.values(x) - f.values(y))
        return vbox * mask * dw * ((a_lo - a_hi) / sp) * du ** p * ok

    return mc_mean(draw, spec, stream=STREAM_SEMINORM_NEAR)


# ---------------------------------------------------------------------------
# interior-exterior tail term (exterior beyond B_R)


def _tail_mc(f: flds.ScalarField, omega: Region, s: float, p: float, R: float,
             rho: float, spec: QuadratureSpec) -> EstimateWithError:
    # heavy-tail fallback: radius exp(log R + Exp(1)/sp), the same profile as
    # the kernel, so weights stay bounded uniformly in s
    d = omega.dim
    sp = s * p
    vbox = (2.0 * rho) ** d
    dw = sphere_area(d)

    def draw(rng, n):
        x = rng.uniform(-rho, rho, size=(n, d))
        mask = omega.contains(x).astype(float)
        ux = f.values(x)
        th = _unit_dirs(rng, n, d)
        lam = math.log(R) + rng.exponential(1.0, size=n) / sp
        uy = np.empty(n)
        near = lam <= _EVAL_LOG_MAX
        if near.any():
            uy[near] = f.values(np.exp(lam[near])[:, None] * th[near])
        if (~near).any():
            uy[~near] = f.far_values(lam[~near], th[~near])
        # kernel ratio (|y| / |x - y|)^{d+sp}; indistinguishable from 1
        # once |y| outruns the domain by 40 e-folds
        ratio = np.ones(n)
        close = lam <= 40.0
        if close.any():
            y = np.exp(lam[close])[:, None] * th[close]
            dist = np.linalg.norm(y - x[close], axis=1)
            ratio[close] = (np.exp(lam[close]) / dist) ** (d + sp)
        du = np.abs(ux - uy)
        return vbox * mask * dw * R ** (-sp) / sp * du ** p * ratio

    return mc_mean(draw, spec, stream=STREAM_SEMINORM_TAIL)


def _tail_term(f: flds.ScalarField, omega: Region, s: float, p: float,
               R: float, rho: float, spec: QuadratureSpec) -> EstimateWithError:
    d = omega.dim
    sp = s * p
    dw = sphere_area(d)
    vbox = (2.0 * rho) ** d
    model = f.tail()

    if isinstance(model, (flds.UnknownTail, flds.PeriodicMean)):
        return _tail_mc(f, omega, s, p, R, rho, spec)

    integer_p = float(p).is_integer()
    K = R ** (-sp) / sp
    # replacing |x-y| by |y| beyond R: the error integrates one power of
    # radius faster than the main term, hence the extra sp/(1+sp) decay
    corr_rel = ((d + sp) * (rho / R) * (sp / (1.0 + sp))
                * (1.0 - rho / R) ** (-(d + sp + 1.0)))
    dev = 0.0

    if isinstance(model, flds.CompactSupport):
        if model.radius > R:
            raise SeminormError(
                f"compact tail radius {model.radius:g} exceeds R={R:g}; increase R")
        if not integer_p:
            return _tail_mc(f, omega, s, p, R, rho, spec)
        G = field_moment(_abs_power_field(f, 0.0, int(p)), omega, d) * dw
    else:
        eb = model.exact_beyond
        if eb is None or eb > R:
            if model.dev_l1 == 0.0 and model.dev_sup == 0.0:
                raise SeminormError(
                    "tail model only takes hold beyond R; increase R")
            sup = f.sup_abs_on(None)
            if not math.isfinite(sup):
                raise SeminormError(
                    "asymptotic tail envelope needs a bounded field")
            env = min(model.dev_l1 * R ** (-1.0 - sp) / (1.0 + sp),
                      dw * model.dev_sup * R ** (-sp) / sp)
            dev = (vbox * p * (2.0 * sup) ** (p - 1.0)
                   * (1.0 - rho / R) ** (-(d + sp)) * env)
        lim = model.limit
        E = _indicator_region(f)
        uniform = flds._is_uniform_const(lim)
        if E is not None:
            M1 = angular_integral(lim.values, d, lim.breaks())
            vol_cap = volume(Intersection((E, omega)), d, spec)
            vol_om = volume(omega, d, spec)
            G = combine([product(exact(dw) + M1 * (-1.0), vol_cap),
                         product(M1, vol_om + vol_cap * (-1.0))])
        elif uniform is not None and integer_p:
            G = field_moment(_abs_power_field(f, uniform, int(p)), omega, d) * dw
        elif integer_p and int(p) % 2 == 0 and int(p) <= 8:
            k_p = int(p)
            vol_om = volume(omega, d, spec)
            parts, weights = [], []
            for k in range(k_p + 1):
                if k == 0:
                    mom = field_moment(flds.power(f, k_p), omega, d)
                    ang = exact(dw)
                elif k == k_p:
                    mom = vol_om
                    ang = angular_integral(flds.APow(lim, k_p).values, d, lim.breaks())
                else:
                    mom = field_moment(flds.power(f, k_p - k), omega, d)
                    ang = angular_integral(flds.APow(lim, k).values, d, lim.breaks())
                parts.append(product(mom, ang))
                weights.append(math.comb(k_p, k) * (-1.0) ** k)
            G = combine(parts, weights)
        else:
            return _tail_mc(f, omega, s, p, R, rho, spec)

    main = G * K
    err = main.error + corr_rel * abs(main.value) + dev
    kind = "statistical" if main.error_kind == "statistical" else "analytic"
    return EstimateWithError(main.value, err, kind)


# ---------------------------------------------------------------------------
# public operations


def gagliardo_qomega(f: flds.ScalarField, omega: Region, s: float, p: float,
                     R: Optional[float] = None,
                     spec: Optional[QuadratureSpec] = None) -> SeminormBreakdown:
    """[u]^p_{W^{s,p}(Q_Omega)} split into interior, near and tail parts.

    Q_Omega keeps every pair with at least one point in omega.  The near
    exterior reaches to radius R (default 8x the bounding radius); beyond R
    the tail model of the field takes over analytically, or a heavy-tail
    sampler when only statistical accuracy is available.
    """
    spec = spec or QuadratureSpec()
    d = check_dim(omega.dim)
    if f.dim != d:
        raise SeminormError("field and region dimensions differ")
    if not 0.0 < s < 1.0:
        raise SeminormError("s must lie in (0, 1)")
    if p < 1.0:
        raise SeminormError("p must be at least 1")
    rho = omega.bounding_radius()
    if rho is None:
        raise SeminormError("omega must be bounded")
    if R is None:
        R = 8.0 * rho
    R = float(R)
    if R < 2.0 * rho:
        raise SeminormError("R must be at least twice the bounding radius of omega")

    E = _indicator_region(f)
    if E is not None:
        if s * p >= 1.0:
            raise SeminormError("indicator seminorms need s*p < 1")
        ii = _interior_ray_mc(E, omega, s, p, rho, spec)
        near = _near_ray_mc(E, omega, s, p, R, rho, spec)
    else:
        g = _restrict_to(f, omega)
        lip = g.lipschitz_on(rho) if g is not None else None
        if lip is None:
            raise SeminormError(
                "interior term needs an indicator field or a Lipschitz bound on omega")
        ii = _interior_smooth_mc(f, omega, s, p, rho, lip, spec)
        near = _near_generic_mc(f, omega, s, p, R, rho, spec)

    tail = _tail_term(f, omega, s, p, R, rho, spec)
    total = ii + (near + tail) * 2.0
    return SeminormBreakdown(ii, near, tail, total, float(s), float(p), R)


def fractional_perimeter(E: Region, omega: Region, s: float,
                         R: Optional[float] = None,
                         spec: Optional[QuadratureSpec] = None) -> EstimateWithError:
    """Per_s(E; omega) = half the W^{s,1}(Q_Omega) seminorm of the indicator."""
    br = gagliardo_qomega(flds.Indicator(E), omega, s, 1.0, R=R, spec=spec)
    return br.total * 0.5


def hardy_pair(f: flds.ScalarField, omega: Region, s: float, delta: float,
               d: int, spec: Optional[QuadratureSpec] = None):
    """Both sides of the fractional Hardy inequality for zero-extended f.

    lhs = dw_d (1-delta)^2 / 2^{2s+1} * integral of |f|^2 |x|^{-2s} over omega;
    rhs = (s/2) [f]^2 over the whole space, which equals the Q_Omega seminorm
    because f vanishes outside omega (validated through its tail model).
    """
    spec = spec or QuadratureSpec()
    check_dim(d)
    if omega.dim != d or f.dim != d:
        raise SeminormError("dimension mismatch in hardy_pair")
    if not 0.0 < delta < 1.0:
        raise SeminormError("delta must lie in (0, 1)")
    if not s < delta * delta / 8.0:
        raise SeminormError("hardy range requires s < delta^2 / 8")
    rho = omega.bounding_radius()
    if rho is None:
        raise SeminormError("omega must be bounded")
    model = f.tail()
    if not (isinstance(model, flds.CompactSupport) and model.radius <= rho * (1 + 1e-12)):
        raise SeminormError("hardy needs a field vanishing outside omega")
    lhs_int = field_moment(flds.power(f, 2), omega, d, weight_exponent=-2.0 * s)
    lhs = lhs_int * (sphere_area(d) * (1.0 - delta) ** 2 / 2.0 ** (2.0 * s + 1.0))
    br = gagliardo_qomega(f, omega, s, 2.0, spec=spec)
    rhs = br.total * (s / 2.0)
    return lhs, rhs
