"""Point clouds, pairwise distances and set distances."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DimensionMismatchError, FlameletError

__all__ = [
    "Metric",
    "PointCloud",
    "DynamicPointCloud",
    "pairwise_distances",
    "hausdorff",
    "integrated_hausdorff",
    "trapezoid",
]


class Metric(enum.Enum):
    EUCLIDEAN = "euclidean"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    """A finite set of points in R^D, stored as an ``(n, D)`` array."""

    points: np.ndarray

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise FlameletError(f"a point cloud needs at least one point of dimension >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise FlameletError("point coordinates must be finite")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.array_equal(self.points, other.points))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DynamicPointCloud:
    """A time-indexed sequence of point clouds, ``frames[i] = (t_i, cloud_i)``."""

    frames: tuple

    def __init__(self, frames: Sequence[tuple[float, PointCloud]]):
        frames = tuple((float(t), c if isinstance(c, PointCloud) else PointCloud(c)) for t, c in frames)
        if len(frames) < 2:
            raise FlameletError("a dynamic point cloud needs at least two frames")
        ts = np.array([t for t, _ in frames])
        if not np.all(np.isfinite(ts)) or np.any(np.diff(ts) <= 0):
            raise FlameletError("frame times must be finite and strictly increasing")
        if len({c.dim for _, c in frames}) != 1:
            raise DimensionMismatchError("all frames must share the same dimension")
        object.__setattr__(self, "frames", frames)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.frames])

    @property
    def dim(self) -> int:
        return self.frames[0][1].dim

    def __len__(self) -> int:
        return len(self.frames)

    def __eq__(self, other):
        if not isinstance(other, DynamicPointCloud):
            return NotImplemented
        return len(self) == len(other) and all(
            ta == tb and ca == cb for (ta, ca), (tb, cb) in zip(self.frames, other.frames)
        )

    __hash__ = None


def pairwise_distances(cloud: PointCloud, metric: Metric = Metric.EUCLIDEAN) -> np.ndarray:
    """Symmetric matrix of Euclidean distances with an exactly zero diagonal."""
    if metric is not Metric.EUCLIDEAN:
        raise FlameletError(f"unsupported metric {metric}")
    d = cdist(cloud.points, cloud.points)
    np.fill_diagonal(d, 0.0)
    # cdist is symmetric up to rounding; enforce it exactly
    return np.maximum(d, d.T)


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    """Hausdorff distance: the larger of the two directed sup-inf distances."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"cannot compare clouds in R^{a.dim} and R^{b.dim}")
    d = cdist(a.points, b.points)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def trapezoid(values, grid) -> float:
    """Trapezoid rule; a single node is treated as a constant function on a unit interval."""
    values = np.asarray(values, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if values.shape[0] == 1:
        return float(values[0])
    return float(np.trapezoid(values, grid, axis=0))


def _bracket(times: np.ndarray, t: float) -> tuple[int, int, float]:
    """Indices ``(i, j)`` of the frames around ``t`` and the weight of ``j``."""
    j = int(np.searchsorted(times, t, side="left"))
    if j < len(times) and times[j] == t:
        return j, j, 0.0
    i = j - 1
    return i, j, (t - times[i]) / (times[j] - times[i])


def integrated_hausdorff(a: DynamicPointCloud, b: DynamicPointCloud) -> float:
    """Trapezoid-rule integral of the frame-wise Hausdorff distance over time.

    Frame times are merged into one grid restricted to the overlap of the two
    time ranges. At a node falling between frames, the distance is bilinearly
    interpolated from the Hausdorff distances of the bracketing frame pairs, so
    on coinciding grids this is exactly ``d_H(a(t), b(t))``.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError("trajectories live in different dimensions")
    ta, tb = a.times, b.times
    lo, hi = max(ta[0], tb[0]), min(ta[-1], tb[-1])
    if not lo < hi:
        raise FlameletError("trajectories have non-overlapping time ranges")
    grid = np.union1d(ta, tb)
    grid = grid[(grid >= lo) & (grid <= hi)]

    cache: dict[tuple[int, int], float] = {}

    def frame_distance(i: int, j: int) -> float:
        if (i, j) not in cache:
            cache[i, j] = hausdorff(a.frames[i][1], b.frames[j][1])
        return cache[i, j]

    dist = np.empty(len(grid))
    for n, t in enumerate(grid):
        i0, i1, wa = _bracket(ta, t)
        j0, j1, wb = _bracket(tb, t)
        v = (1 - wa) * (1 - wb) * frame_distance(i0, j0)
        if wa:
            v += wa * (1 - wb) * frame_distance(i1, j0)
        if wb:
            v += (1 - wa) * wb * frame_distance(i0, j1)
        if wa and wb:
            v += wa * wb * frame_distance(i1, j1)
        dist[n] = v
    return trapezoid(dist, grid)
