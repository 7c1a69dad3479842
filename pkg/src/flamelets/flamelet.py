"""Persistence flamelets: landscapes stacked along a scale parameter.

A flamelet samples ``Lambda^k(sigma, y) = lambda^k_{D_sigma}(y)`` on a
``(sigma, y)`` lattice. Integrals over sigma use the trapezoid rule on the
sigma values rescaled to [0, 1].
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .diagram_metrics import Vineyard
from .errors import FlameletError, GridMismatchError
from .filtration import SUBLEVEL, SUPERLEVEL, rips_filtration
from .geometry import DynamicPointCloud, trapezoid
from .landscape import DEFAULT_K, DEFAULT_STEPS, YGrid, default_ygrid, landscape
from .persistence import compute_persistence

__all__ = [
    "SigmaGrid",
    "Flamelet",
    "BandwidthSelection",
    "build_flamelet",
    "integrated_landscape_distance",
    "flamelet_norm",
    "mean_flamelet",
    "variance_flamelet",
    "projection_matrix",
    "select_bandwidth_ta",
    "rips_vineyards",
    "time_flamelets",
]


class SigmaGrid:
    """Scale values in their native units together with their [0, 1] rescaling."""

    def __init__(self, native: Sequence[float], unit: Sequence[float] | None = None):
        native = np.array(native, dtype=float).reshape(-1)
        if native.size == 0 or not np.all(np.isfinite(native)) or np.any(np.diff(native) <= 0):
            raise FlameletError("sigma values must be finite and strictly increasing")
        if unit is None:
            span = native[-1] - native[0]
            unit = (native - native[0]) / span if native.size > 1 else np.zeros(1)
        unit = np.array(unit, dtype=float).reshape(-1)
        if unit.shape != native.shape or np.any(np.diff(unit) <= 0) or unit[0] < 0 or unit[-1] > 1:
            raise FlameletError("rescaled sigma must be strictly increasing within [0, 1]")
        native.setflags(write=False)
        unit.setflags(write=False)
        self.native = native
        self.unit = unit

    def __len__(self) -> int:
        return self.native.size

    def __eq__(self, other):
        if not isinstance(other, SigmaGrid):
            return NotImplemented
        return np.array_equal(self.native, other.native) and np.array_equal(self.unit, other.unit)

    __hash__ = None

    def __repr__(self):
        return f"SigmaGrid({len(self)} values in [{self.native[0]:g}, {self.native[-1]:g}])"


class Flamelet:
    """``surface[k-1, i, :]`` is the k-th landscape of the diagram at ``sigma.native[i]``."""

    def __init__(self, sigma: SigmaGrid, ygrid: YGrid, surface, dim: int = 0, convention: str = SUBLEVEL):
        surface = np.array(surface, dtype=float)
        if surface.ndim != 3 or surface.shape[1:] != (len(sigma), ygrid.steps) or surface.shape[0] < 1:
            raise FlameletError(f"surface must have shape (K, {len(sigma)}, {ygrid.steps}), got {surface.shape}")
        if not np.all(np.isfinite(surface)):
            raise FlameletError("flamelet values must be finite")
        if convention not in (SUBLEVEL, SUPERLEVEL):
            raise FlameletError(f"unknown convention {convention!r}")
        surface.setflags(write=False)
        self.sigma = sigma
        self.ygrid = ygrid
        self.surface = surface
        self.dim = int(dim)
        self.convention = convention

    @property
    def K(self) -> int:
        return self.surface.shape[0]

    def level(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.K:
            raise FlameletError(f"level k={k} outside 1..{self.K}")
        return self.surface[k - 1]

    def scaled(self, c: float) -> "Flamelet":
        return Flamelet(self.sigma, self.ygrid, c * self.surface, self.dim, self.convention)

    def same_lattice(self, other: "Flamelet") -> bool:
        return self.sigma == other.sigma and self.ygrid == other.ygrid and self.K == other.K

    def __eq__(self, other):
        if not isinstance(other, Flamelet):
            return NotImplemented
        return (
            self.same_lattice(other)
            and (self.dim, self.convention) == (other.dim, other.convention)
            and np.array_equal(self.surface, other.surface)
        )

    __hash__ = None

    def __repr__(self):
        return f"Flamelet(dim={self.dim}, K={self.K}, {len(self.sigma)} x {self.ygrid.steps})"


class BandwidthSelection(NamedTuple):
    sigma: float
    peak: float
    criterion: str
    index: int


def build_flamelet(vineyard: Vineyard, ygrid: YGrid | None = None, K: int = DEFAULT_K) -> Flamelet:
    """Stack the landscapes of every vineyard slice on a shared y-grid."""
    ygrid = ygrid or default_ygrid(vineyard.diagrams)
    surface = np.stack([landscape(d, ygrid, K).levels for d in vineyard.diagrams], axis=1)
    sigma = SigmaGrid(vineyard.native, vineyard.sigma)
    return Flamelet(sigma, ygrid, surface, vineyard.dim, vineyard.convention)


def _require_same_lattice(flamelets: Sequence[Flamelet]) -> None:
    first = flamelets[0]
    for f in flamelets[1:]:
        if not f.same_lattice(first):
            raise GridMismatchError("flamelets must share sigma grid, y-grid and K")


def integrated_landscape_distance(a: Flamelet, b: Flamelet) -> float:
    """Integral over sigma of the slice-wise sup distance between landscapes."""
    _require_same_lattice([a, b])
    per_slice = np.abs(a.surface - b.surface).max(axis=(0, 2))
    return trapezoid(per_slice, a.sigma.unit)


def flamelet_norm(f: Flamelet, p: float = 2.0) -> float:
    """``(int sum_k ||Lambda^k(sigma, .)||_p^p dsigma)^(1/p)``."""
    if not p >= 1 or math.isinf(p):
        raise FlameletError("flamelet norms need finite p >= 1")
    per_slice = np.trapezoid(f.surface**p, f.ygrid.nodes, axis=2).sum(axis=0)
    return trapezoid(per_slice, f.sigma.unit) ** (1.0 / p)


def mean_flamelet(samples: Sequence[Flamelet]) -> Flamelet:
    """Nodewise average of flamelets on a common lattice."""
    samples = list(samples)
    if not samples:
        raise FlameletError("cannot average zero flamelets")
    _require_same_lattice(samples)
    first = samples[0]
    mean = np.mean([s.surface for s in samples], axis=0)
    return Flamelet(first.sigma, first.ygrid, mean, first.dim, first.convention)


def variance_flamelet(samples: Sequence[Flamelet]) -> np.ndarray:
    """Unbiased nodewise sample variance, shape ``(K, |sigma|, |y|)``."""
    samples = list(samples)
    if len(samples) < 2:
        raise FlameletError("the sample variance needs at least two flamelets")
    _require_same_lattice(samples)
    return np.var([s.surface for s in samples], axis=0, ddof=1)


def projection_matrix(f: Flamelet, k: int) -> np.ndarray:
    """The k-th flamelet as a dense ``(|sigma|, |y|)`` matrix, rows ordered by sigma."""
    return np.array(f.level(k))


def select_bandwidth_ta(f: Flamelet, k: int, criterion: str = "sup") -> BandwidthSelection:
    """Scale whose slice of the k-th flamelet is largest; ties go to the smallest scale.

    ``criterion="sup"`` compares slice maxima, so the winner holds the global
    maximum of the surface. ``criterion="mass"`` compares slice integrals over y.
    """
    surface = f.level(k)
    if criterion == "sup":
        score = surface.max(axis=1)
    elif criterion == "mass":
        score = np.trapezoid(surface, f.ygrid.nodes, axis=1)
    else:
        raise FlameletError(f"unknown selection criterion {criterion!r}")
    if not np.any(score > 0):
        raise FlameletError(f"level {k} of the flamelet is identically zero; nothing to select")
    i = int(np.argmax(score))
    return BandwidthSelection(float(f.sigma.native[i]), float(score[i]), criterion, i)


def rips_vineyards(
    cloud: DynamicPointCloud, dims: Sequence[int] = (0, 1), max_radius: float = math.inf
) -> dict[int, Vineyard]:
    """One Rips diagram per frame, indexed by frame time rescaled to [0, 1]."""
    dims = sorted(set(dims))
    max_dim = max(dims) + 1
    per_dim: dict[int, list] = {d: [] for d in dims}
    for _, frame in cloud.frames:
        diagrams = compute_persistence(rips_filtration(frame, max_dim, max_radius), dims)
        for d in dims:
            per_dim[d].append(diagrams[d])
    sigma = SigmaGrid(cloud.times)
    return {d: Vineyard(sigma.unit, per_dim[d], native=sigma.native) for d in dims}


def time_flamelets(
    cloud: DynamicPointCloud,
    dims: Sequence[int] = (0, 1),
    K: int = DEFAULT_K,
    y_steps: int = DEFAULT_STEPS,
    max_radius: float = math.inf,
) -> dict[int, Flamelet]:
    """Flamelets of a dynamic point cloud, with time as the scale parameter."""
    vineyards = rips_vineyards(cloud, dims, max_radius)
    return {
        d: build_flamelet(v, default_ygrid(v.diagrams, y_steps), K) for d, v in vineyards.items()
    }
