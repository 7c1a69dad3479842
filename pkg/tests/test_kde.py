import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flamelets import (
    BandwidthRange,
    GridSpec,
    KdeModel,
    PointCloud,
    YGrid,
    bandwidth_sweep,
    bandwidth_vineyards,
    build_flamelet,
    default_grid_spec,
    gaussian_mixture,
    kde_evaluate,
    noisy_circle,
    select_bandwidth_ta,
    silverman_extended,
    silverman_from_stats,
)
from flamelets.errors import FlameletError, UnsupportedDimensionError


def test_single_point_1d():
    f = kde_evaluate(KdeModel(PointCloud([0.0]), 1.0), GridSpec((5,), (-2.0,), (1.0,)))
    assert f.values[2] == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-15)
    assert f.values[2] == pytest.approx(0.398942, abs=1e-6)


def test_single_point_2d():
    f = kde_evaluate(KdeModel(PointCloud([[0.5, -1.0]]), 1.0), GridSpec((3, 3), (-0.5, -2.0), (1.0, 1.0)))
    assert f.values[1, 1] == pytest.approx(1 / (2 * math.pi), abs=1e-15)
    assert f.values[1, 1] == pytest.approx(0.159155, abs=1e-6)
    # one unit away along an axis
    assert f.values[0, 1] == pytest.approx(math.exp(-0.5) / (2 * math.pi))


@pytest.mark.filterwarnings("ignore:the evaluation grid")
def test_2d_matches_direct_sum(rng):
    x = rng.normal(size=(7, 2))
    h = 0.6
    grid = GridSpec((4, 5), (-1.0, -1.5), (0.7, 0.6))
    f = kde_evaluate(KdeModel(PointCloud(x), h), grid)
    gx, gy = grid.axes()
    for i, a in enumerate(gx):
        for j, b in enumerate(gy):
            r2 = ((x - [a, b]) ** 2).sum(axis=1) / h**2
            assert f.values[i, j] == pytest.approx(np.exp(-r2 / 2).sum() / (7 * 2 * math.pi * h * h), rel=1e-12)


def test_symmetric_sample():
    f = kde_evaluate(KdeModel(PointCloud([-1.3, 1.3]), 0.4), GridSpec((41,), (-4.0,), (0.2,)))
    assert np.allclose(f.values, f.values[::-1], rtol=0, atol=1e-15)


def test_density_integrates_to_one():
    s = gaussian_mixture(300, seed=3)
    grid = default_grid_spec(s, 0.3, 2048)
    f = kde_evaluate(KdeModel(s, 0.3), grid)
    # only the kernel tails beyond the 3h padding are lost
    assert np.trapezoid(f.values, grid.axes()[0]) == pytest.approx(1, abs=1e-4)
    coarse = default_grid_spec(s, 0.3, 512)
    assert 0.3 >= 3 * coarse.spacing[0]
    f = kde_evaluate(KdeModel(s, 0.3), coarse)
    assert np.trapezoid(f.values, coarse.axes()[0]) == pytest.approx(1, abs=1e-3)


def test_model_errors():
    with pytest.raises(FlameletError):
        KdeModel(PointCloud([0.0]), 0.0)
    with pytest.raises(UnsupportedDimensionError):
        KdeModel(PointCloud([[0.0, 0.0, 0.0]]), 1.0)
    with pytest.raises(FlameletError):
        BandwidthRange(0.1, 1.0, 1)
    with pytest.raises(FlameletError):
        BandwidthRange(1.0, 0.1)


def test_bandwidth_range_values():
    r = BandwidthRange(0.05, 5, 3)
    assert r.values() == pytest.approx([0.05, 0.5, 5])
    assert r.sigma_grid().unit.tolist() == [0, 0.5, 1]
    assert BandwidthRange(1, 3, 3, "lin").values().tolist() == [1, 2, 3]


def test_silverman_examples():
    assert silverman_from_stats(100, 1, 1.0) == pytest.approx((4 / 300) ** 0.4, abs=1e-15)
    assert silverman_from_stats(100, 0, 2.0) == pytest.approx((4 / 200) ** 0.5 * 2.0, abs=1e-15)


def test_silverman_sample_and_scaling(rng):
    x = rng.normal(size=(100, 2))
    s = np.mean(np.var(x, axis=0, ddof=1))
    assert silverman_extended(PointCloud(x), 1) == pytest.approx((4 / 300) ** 0.4 * s, rel=1e-12)
    for c in (0.5, 3.0):
        assert silverman_extended(PointCloud(c * x), 1) == pytest.approx(c**2 * silverman_extended(PointCloud(x), 1))
    classic = silverman_extended(PointCloud(x), 2, classic=True)
    assert classic == pytest.approx((4 / 400) ** (1 / 6) * math.sqrt(s))
    with pytest.raises(FlameletError):
        silverman_extended(PointCloud([[1.0, 1.0]] * 5), 1)


def test_coarse_grid_warns():
    s = gaussian_mixture(100, seed=0)
    with pytest.warns(UserWarning, match="h_min/2"):
        bandwidth_vineyards(s, BandwidthRange(0.01, 1, 2), default_grid_spec(s, 1, 64))


def test_1d_dimension_one_is_empty():
    s = gaussian_mixture(100, seed=0)
    with pytest.warns(UserWarning, match="no loops"):
        f = bandwidth_sweep(s, BandwidthRange(0.2, 1, 3), dims=(0, 1), y_steps=32)
    assert np.all(f[1].surface == 0)
    assert f[0].surface.max() > 0


def test_sweep_native_sigma_is_bandwidth():
    s = gaussian_mixture(200, seed=0)
    r = BandwidthRange(0.1, 2, 4)
    f = bandwidth_sweep(s, r, y_steps=32)[0]
    assert f.sigma.native.tolist() == r.values().tolist()
    assert f.convention == "superlevel"


def test_parallel_sweep_matches_serial():
    s = gaussian_mixture(200, seed=4)
    r = BandwidthRange(0.1, 2, 5)
    serial = bandwidth_sweep(s, r, y_steps=64)
    parallel = bandwidth_sweep(s, r, y_steps=64, jobs=2)
    assert serial[0] == parallel[0]


@pytest.mark.filterwarnings("ignore:grid spacing")
def test_mixture_sweep_modes():
    s = gaussian_mixture(2000, seed=0)
    f = bandwidth_sweep(s, BandwidthRange(0.05, 5, 12), dims=(0,))[0]
    second = f.level(2).max(axis=1)
    assert second[0] > 0.1
    assert second[-1] == 0
    # at the largest bandwidth the evaluated density is unimodal
    v = kde_evaluate(KdeModel(s, 5.0), default_grid_spec(s, 5.0)).values
    interior = (v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])
    assert interior.sum() == 1


def test_circle_single_dominant_crest():
    # oracle: noiseless circle, one mid-range bandwidth
    clean = noisy_circle(200, noise=0.0, seed=0)
    h = 0.3
    d = bandwidth_vineyards(clean, BandwidthRange(h, 2 * h, 2), default_grid_spec(clean, 2 * h, 64), dims=(1,))[1]
    pers = np.sort(d.diagrams[0].persistences)[::-1]
    assert pers[0] >= 5 * (pers[1] if len(pers) > 1 else 0)
    noisy = noisy_circle(200, noise=0.02, seed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        f = bandwidth_sweep(noisy, BandwidthRange(0.15, 0.6, 4), default_grid_spec(noisy, 0.6, 64), dims=(1,))[1]
    assert f.level(1).max() >= 5 * f.level(2).max()
    assert select_bandwidth_ta(f, 1).sigma == pytest.approx(0.15)


def _max_adjacent_step(sample, steps, ygrid):
    r = BandwidthRange(0.1, 2.0, steps, "lin")
    v = bandwidth_vineyards(sample, r, default_grid_spec(sample, 2.0, 256))[0]
    f = build_flamelet(v, ygrid)
    return np.abs(np.diff(f.surface, axis=1)).max()


def test_sweep_continuity_under_refinement():
    s = gaussian_mixture(300, seed=1)
    y = YGrid(0, 0.5, 512)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        gaps = [_max_adjacent_step(s, steps, y) for steps in (5, 9, 17, 33)]
    for coarse, fine in zip(gaps, gaps[1:]):
        assert fine <= 1.1 * coarse
    assert gaps[-1] < gaps[0] / 2


@pytest.mark.filterwarnings("ignore:the evaluation grid")
def test_permutation_invariance_is_exact(rng):
    for d, grid in ((1, GridSpec((300,), (-5.0,), (0.033,))), (2, GridSpec((40, 30), (-4.0, -3.0), (0.2, 0.2)))):
        x = rng.normal(size=(500, d))
        a = kde_evaluate(KdeModel(PointCloud(x), 0.3), grid).values
        b = kde_evaluate(KdeModel(PointCloud(x[rng.permutation(500)]), 0.3), grid).values
        assert np.array_equal(a, b)


def test_smoothing_reduces_mode_count():
    s = gaussian_mixture(2000, seed=0)
    r = BandwidthRange(0.05, 5, 6)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        d = bandwidth_vineyards(s, r)[0].diagrams
    counts = [int(np.sum(x.persistences > 0)) for x in d]
    assert counts[-1] <= counts[0]
    assert counts[-1] == 1


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=20), st.floats(0.2, 2))
@settings(max_examples=30, deadline=None)
def test_kde_nonnegative_and_bounded(xs, h):
    grid = GridSpec((50,), (-10.0,), (0.4,))
    f = kde_evaluate(KdeModel(PointCloud(xs), h), grid).values
    assert np.all(f >= 0)
    assert f.max() <= 1 / (math.sqrt(2 * math.pi) * h) + 1e-12
