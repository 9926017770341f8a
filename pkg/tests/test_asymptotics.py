import numpy as np
import pytest

from fracmass import (EstimateWithError, Indicator, RadialShells, SSweepResult,
                      SweepError, alpha_numeric, default_s_grid, exact,
                      fit_points, sweep)
from fracmass.asymptotics import check_grid


def geometric(n=7, top=0.1, ratio=10 ** -0.5):
    return tuple(top * ratio ** k for k in range(n))


# ---------------------------------------------------------------------------
# grid validation


def test_default_grid_shape():
    g = default_s_grid()
    assert len(g) == 7
    assert g[0] == pytest.approx(0.1) and g[-1] == pytest.approx(1e-4)
    check_grid(g)


def test_grid_rejections():
    with pytest.raises(SweepError):
        check_grid((0.1, 0.01, 0.001))  # too few
    with pytest.raises(SweepError):
        check_grid((0.1, 0.05, 0.01, 0.005, 0.001))  # not geometric
    with pytest.raises(SweepError):
        check_grid((0.001, 0.01, 0.1, 0.2, 0.5))  # increasing
    with pytest.raises(SweepError):
        check_grid((1.5, 0.15, 0.015, 0.0015, 0.00015))  # outside (0,1)


# ---------------------------------------------------------------------------
# extrapolation


def test_affine_exactness():
    res = sweep(lambda s: 3.0 + 2.0 * s, geometric())
    assert res.limit == pytest.approx(3.0, abs=1e-12)
    assert res.residual < 1.0
    assert not res.flagged


def test_closed_form_half():
    # s * int_1^inf r^{-1-2s} dr = 1/2 for every s
    res = sweep(lambda s: 0.5, geometric())
    assert res.limit == pytest.approx(0.5, abs=1e-13)


def test_log_corrected_model_selected():
    res = sweep(lambda s: 1.0 + s * np.log(1.0 / s), geometric())
    assert res.fit_model == "log_corrected"
    assert res.limit == pytest.approx(1.0, abs=1e-10)


def test_limit_error_floor_at_small_s_points():
    pts = [(s, EstimateWithError(2.0 + s, 0.05, "statistical"))
           for s in geometric()]
    res = fit_points(pts)
    assert res.limit_error >= 0.05


def test_monotone_error():
    rng = np.random.default_rng(3)
    noise = rng.normal(size=7)
    for scale_ratio in [1.0]:
        big = fit_points([(s, EstimateWithError(1.0 + s + 0.1 * n * 0.0, 0.1))
                          for s, n in zip(geometric(), noise)])
        small = fit_points([(s, EstimateWithError(1.0 + s, 0.01))
                            for s in geometric()])
        assert big.limit_error >= 3.0 * small.limit_error


def test_dyadic_shells_flagged(spec):
    # near-exact per-point errors plus curvature in s make the fit hopeless
    res = alpha_numeric(Indicator(RadialShells(2)), 1, 2,
                        default_s_grid(), spec=spec)
    assert res.flagged
    assert res.residual > 10.0


def test_exp_tower_two_accumulation_values(spec):
    # ratio-1/2 geometric grid samples both phases of the log-periodic tail
    grid = tuple(2.0 ** -k for k in range(20, 29))
    res = alpha_numeric(Indicator(RadialShells(2, pattern="exp_tower")),
                        1, 2, grid, spec=spec)
    assert res.flagged
    values = res.point_values()
    evens, odds = values[-1::-2], values[-2::-2]
    assert abs(evens[0] - evens[1]) < 1e-3
    assert abs(odds[0] - odds[1]) < 1e-3
    assert abs(evens[0] - odds[0]) > 0.03


def test_non_finite_rejected():
    pts = [(s, exact(1.0)) for s in geometric()]
    pts[3] = (pts[3][0], EstimateWithError(0.0, 0.0, "exact"))
    res = fit_points(pts)  # fine: all finite
    assert np.isfinite(res.limit)
    with pytest.raises(SweepError):
        fit_points([(s, EstimateWithError(0.0, np.inf, "statistical"))
                    for s in geometric()])
