"""Tent functions, persistence landscapes, power-weighted silhouettes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import FlameletError, GridMismatchError
from .persistence import PersistenceDiagram, PersistencePair

__all__ = [
    "YGrid",
    "Landscape",
    "triangle",
    "default_ygrid",
    "landscape",
    "silhouette",
    "landscape_norm",
    "landscape_distance",
]

DEFAULT_STEPS = 512
DEFAULT_K = 5
PADDING = 0.05


@dataclass(frozen=True)
class YGrid:
    min: float
    max: float
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max) and self.min < self.max):
            raise FlameletError(f"y-grid needs finite min < max, got [{self.min}, {self.max}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise FlameletError("y-grid needs at least 2 steps")
        object.__setattr__(self, "min", float(self.min))
        object.__setattr__(self, "max", float(self.max))
        object.__setattr__(self, "steps", int(self.steps))

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.steps)

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.steps - 1)


@dataclass(frozen=True, eq=False)
class Landscape:
    """``levels[k-1]`` holds the k-th landscape sampled on ``grid``."""

    grid: YGrid
    levels: np.ndarray

    def __post_init__(self):
        levels = np.array(self.levels, dtype=float, copy=True)
        if levels.ndim != 2 or levels.shape[1] != self.grid.steps or levels.shape[0] < 1:
            raise FlameletError(f"levels must have shape (K, {self.grid.steps}), got {levels.shape}")
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    @property
    def K(self) -> int:
        return self.levels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Landscape):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.levels, other.levels)

    __hash__ = None


def triangle(pair: PersistencePair, y):
    """Tent of height half the persistence, centred at the midpoint of birth and death."""
    mid = (pair.birth + pair.death) / 2
    half = abs(pair.birth - pair.death) / 2
    out = np.maximum(0.0, half - np.abs(np.asarray(y, dtype=float) - mid))
    return float(out) if out.ndim == 0 else out


def _tents(diagram: PersistenceDiagram, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    arr = diagram.as_array()
    arr = arr[arr[:, 0] != arr[:, 1]]
    mid = arr.sum(axis=1) / 2
    half = np.abs(arr[:, 1] - arr[:, 0]) / 2
    return np.maximum(0.0, half[:, None] - np.abs(y[None, :] - mid[:, None])), 2 * half


def default_ygrid(diagrams: Iterable[PersistenceDiagram], steps: int = DEFAULT_STEPS) -> YGrid:
    """Grid covering every birth and death value, padded by 5% on each side."""
    coords = [d.as_array().ravel() for d in diagrams]
    coords = np.concatenate(coords) if coords else np.empty(0)
    if coords.size == 0:
        return YGrid(0.0, 1.0, steps)
    lo, hi = float(coords.min()), float(coords.max())
    pad = PADDING * (hi - lo) if hi > lo else 0.5
    return YGrid(lo - pad, hi + pad, steps)


def landscape(diagram: PersistenceDiagram, grid: YGrid | None = None, K: int = DEFAULT_K) -> Landscape:
    """Sample the first ``K`` landscape functions on ``grid``; missing levels are zero."""
    if K < 1:
        raise FlameletError("K must be at least 1")
    grid = grid or default_ygrid([diagram])
    y = grid.nodes
    tents, _ = _tents(diagram, y)
    levels = np.zeros((K, grid.steps))
    if tents.shape[0]:
        if tents.shape[0] > K:
            tents = np.partition(tents, tents.shape[0] - K, axis=0)[-K:]
        top = -np.sort(-tents, axis=0)
        levels[: top.shape[0]] = top
    return Landscape(grid, levels)


def silhouette(diagram: PersistenceDiagram, grid: YGrid | None = None, p: float = 1.0) -> np.ndarray:
    """Power-weighted silhouette, tent weights being ``persistence ** p``."""
    if not p > 0:
        raise FlameletError("the silhouette power must be positive")
    grid = grid or default_ygrid([diagram])
    tents, pers = _tents(diagram, grid.nodes)
    if pers.size == 0 or pers.max() == 0:
        raise FlameletError("silhouette undefined: every pair has zero persistence")
    # rescaling by the largest weight avoids overflow for large p
    w = (pers / pers.max()) ** p
    return (w @ tents) / w.sum()


def landscape_norm(l: Landscape, p: float = 2.0) -> float:
    """``(sum_k ||lambda_k||_p^p)^(1/p)`` with trapezoid integrals; ``p = inf`` gives the sup."""
    if not p >= 1:
        raise FlameletError("landscape norms need p >= 1")
    if math.isinf(p):
        return float(l.levels.max())
    total = np.trapezoid(l.levels**p, l.grid.nodes, axis=1).sum()
    return float(total ** (1.0 / p))


def landscape_distance(a: Landscape, b: Landscape) -> float:
    """Sup-norm distance between two landscapes sampled on the same grid."""
    if a.grid != b.grid or a.K != b.K:
        raise GridMismatchError("landscapes must share their y-grid and number of levels")
    return float(np.max(np.abs(a.levels - b.levels)))
