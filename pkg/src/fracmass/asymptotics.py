"""s-sweeps and s -> 0 extrapolation with fit diagnostics.

Two fit models only: L + a*s and L + a*s + b*s*ln(1/s).  The model with
the smaller weighted residual wins.  No convergence rate is assumed; the
residual is always reported and a large one raises a flag instead of
being hidden in the intercept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quad import EstimateWithError

FIT_MODELS = ("affine", "log_corrected")

# weighted rms residual beyond which the sweep is marked as having no
# clean limit
FLAG_THRESHOLD = 10.0


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class SSweepResult:
    points: tuple[tuple[float, EstimateWithError], ...]
    limit: float
    limit_error: float
    fit_model: str
    residual: float
    flagged: bool

    def point_values(self) -> np.ndarray:
        return np.array([p.value for _, p in self.points])


def default_s_grid(s_max: float = 1e-1, s_min: float = 1e-4,
                   per_decade: int = 2) -> tuple[float, ...]:
    n = int(round(per_decade * math.log10(s_max / s_min))) + 1
    return tuple(np.geomspace(s_max, s_min, n))


def check_grid(s_grid: Sequence[float]) -> np.ndarray:
    s = np.asarray(list(s_grid), dtype=float)
    if s.size < 5:
        raise SweepError("sweep needs at least 5 grid points")
    if np.any(s <= 0.0) or np.any(s >= 1.0):
        raise SweepError("all s must lie in (0, 1)")
    if np.any(np.diff(s) >= 0.0):
        raise SweepError("s grid must be strictly decreasing")
    ratios = s[1:] / s[:-1]
    if np.max(ratios) - np.min(ratios) > 1e-3:
        raise SweepError("s grid must be geometric")
    return s


def _wls(s: np.ndarray, v: np.ndarray, w: np.ndarray, model: str):
    cols = [np.ones_like(s), s]
    if model == "log_corrected":
        cols.append(s * np.log(1.0 / s))
    X = np.stack(cols, axis=1)
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], v * sw, rcond=None)
    fit = X @ coef
    chi = float(np.sqrt(np.mean(w * (v - fit) ** 2)))
    try:
        cov = np.linalg.inv((X * w[:, None]).T @ X)
        intercept_err = float(math.sqrt(max(cov[0, 0], 0.0)))
    except np.linalg.LinAlgError:
        intercept_err = math.inf
    return float(coef[0]), intercept_err, chi


def fit_points(points: Sequence[tuple[float, EstimateWithError]]) -> SSweepResult:
    """Extrapolate the s -> 0 limit from precomputed sweep points."""
    pts = tuple((float(s), est) for s, est in points)
    check_grid([s for s, _ in pts])
    s = np.array([p[0] for p in pts])
    v = np.array([p[1].value for p in pts])
    e = np.array([p[1].error for p in pts])
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(e))):
        raise SweepError("non-finite sweep evaluations")
    floor = 1e-14 * max(float(np.max(np.abs(v))), 1.0)
    e_eff = np.maximum(e, floor)
    w = 1.0 / e_eff**2

    best = None
    for model in FIT_MODELS:
        limit, ierr, chi = _wls(s, v, w, model)
        if best is None or chi < best[3]:
            best = (model, limit, ierr, chi)
    model, limit, intercept_err, residual = best

    # scale the intercept error by the reduced residual when the model
    # misfits beyond the point errors; never trust the fit more than the
    # best-measured small-s points
    small_pt_err = float(np.max(e[-3:]))
    limit_error = max(intercept_err * max(residual, 1.0), small_pt_err)
    flagged = residual > FLAG_THRESHOLD
    return SSweepResult(pts, limit, limit_error, model, residual, flagged)


def sweep(evaluator: Callable[[float], EstimateWithError],
          s_grid: Sequence[float]) -> SSweepResult:
    """Evaluate on the grid and extrapolate; evaluator returns an estimate."""
    s = check_grid(s_grid)
    points = []
    for si in s:
        est = evaluator(float(si))
        if not isinstance(est, EstimateWithError):
            est = EstimateWithError(float(est), 0.0, "exact")
        points.append((float(si), est))
    return fit_points(points)
