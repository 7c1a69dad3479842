"""Filtered simplicial complexes: Vietoris-Rips on point clouds, lower-star on grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import FlameletError, NonMonotoneFiltrationError, UnsupportedDimensionError
from .geometry import PointCloud, pairwise_distances

__all__ = [
    "Simplex",
    "FilteredComplex",
    "GridFunction",
    "rips_filtration",
    "sublevel_grid_filtration",
    "superlevel_grid_filtration",
]

MAX_DIM = 2
SUBLEVEL = "sublevel"
SUPERLEVEL = "superlevel"


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


class FilteredComplex:
    """Simplices in filtration order, stored column-wise.

    ``values`` are in the scale of the filtered function. The ordering key is
    ``values`` for sublevel complexes and ``-values`` for superlevel ones, and
    the order is (key, dimension, lexicographic vertices). ``vertices`` is an
    ``(m, 3)`` integer array padded with -1.
    """

    def __init__(self, vertices, values, max_dim: int, convention: str = SUBLEVEL, *, presorted=False):
        if convention not in (SUBLEVEL, SUPERLEVEL):
            raise FlameletError(f"unknown convention {convention!r}")
        verts = np.asarray(vertices, dtype=np.int64).reshape(-1, MAX_DIM + 1)
        vals = np.asarray(values, dtype=float).reshape(-1)
        if verts.shape[0] != vals.shape[0]:
            raise FlameletError("one value per simplex is required")
        dims = (verts >= 0).sum(axis=1) - 1
        if not presorted:
            key = vals if convention == SUBLEVEL else -vals
            order = np.lexsort((verts[:, 2], verts[:, 1], verts[:, 0], dims, key))
            verts, vals, dims = verts[order], vals[order], dims[order]
        for a in (verts, vals, dims):
            a.setflags(write=False)
        self.vertices = verts
        self.values = vals
        self.dims = dims
        self.max_dim = int(max_dim)
        self.convention = convention

    @property
    def sign(self) -> float:
        return 1.0 if self.convention == SUBLEVEL else -1.0

    @property
    def keys(self) -> np.ndarray:
        """Values in the ascending (sublevel) scale used for ordering."""
        return self.values * self.sign

    def __len__(self) -> int:
        return self.values.shape[0]

    def __iter__(self) -> Iterator[Simplex]:
        for row, v, d in zip(self.vertices, self.values, self.dims):
            yield Simplex(tuple(int(x) for x in row[: d + 1]), float(v))

    @property
    def simplices(self) -> list[Simplex]:
        return list(self)

    def count(self, dim: int) -> int:
        return int(np.count_nonzero(self.dims == dim))

    def positions(self, dim: int) -> np.ndarray:
        """Global filtration positions of the ``dim``-simplices, in order."""
        return np.flatnonzero(self.dims == dim)

    def facet_positions(self, dim: int) -> np.ndarray:
        """For each ``dim``-simplex (in order), the positions of its ``dim+1`` facets.

        Returns an ``(n_dim, dim+1)`` array; a missing facet is reported as -1.
        """
        if dim < 1:
            raise FlameletError("vertices have no facets")
        pos_hi = self.positions(dim)
        pos_lo = self.positions(dim - 1)
        out = np.full((pos_hi.size, dim + 1), -1, dtype=np.int64)
        if pos_hi.size == 0 or pos_lo.size == 0:
            return out
        base = int(self.vertices[:, 0].max()) + 2
        lo_codes = _encode(self.vertices[pos_lo, :dim], base)
        order = np.argsort(lo_codes, kind="stable")
        sorted_codes = lo_codes[order]
        hi = self.vertices[pos_hi, : dim + 1]
        for drop in range(dim + 1):
            codes = _encode(np.delete(hi, drop, axis=1), base)
            idx = np.minimum(np.searchsorted(sorted_codes, codes), sorted_codes.size - 1)
            found = sorted_codes[idx] == codes
            out[found, drop] = pos_lo[order[idx[found]]]
        return out

    def check_monotone(self) -> None:
        """Raise if some face is missing, follows its coface, or has a larger key."""
        keys = self.keys
        for dim in range(1, MAX_DIM + 1):
            if not self.count(dim):
                continue
            facets = self.facet_positions(dim)
            own = self.positions(dim)
            if np.any(facets < 0):
                raise NonMonotoneFiltrationError("a face of some simplex is missing")
            if np.any(facets >= own[:, None]):
                raise NonMonotoneFiltrationError("a face appears after its coface")
            if np.any(keys[facets] > keys[own][:, None]):
                raise NonMonotoneFiltrationError("a face has a later filtration value than its coface")

    def restricted(self, threshold: float) -> "FilteredComplex":
        """Sub-complex of simplices whose key is at most ``threshold * sign``."""
        keep = self.keys <= threshold * self.sign
        return FilteredComplex(self.vertices[keep], self.values[keep], self.max_dim, self.convention, presorted=True)

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return (
            self.convention == other.convention
            and np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        counts = ", ".join(f"{self.count(d)} {d}-simplices" for d in range(self.max_dim + 1))
        return f"FilteredComplex({self.convention}, {counts})"


def _encode(rows: np.ndarray, base: int) -> np.ndarray:
    code = np.zeros(rows.shape[0], dtype=np.int64)
    for c in range(rows.shape[1]):
        code = code * base + rows[:, c] + 1
    return code


def _pad(rows: np.ndarray) -> np.ndarray:
    out = np.full((rows.shape[0], MAX_DIM + 1), -1, dtype=np.int64)
    out[:, : rows.shape[1]] = rows
    return out


def _check_max_dim(max_dim: int) -> None:
    if not 0 <= max_dim <= MAX_DIM:
        raise UnsupportedDimensionError(f"max_dim must be 0, 1 or 2, got {max_dim}")


def rips_filtration(cloud: PointCloud, max_dim: int = 1, max_radius: float = math.inf) -> FilteredComplex:
    """Vietoris-Rips complex, edges valued by the pairwise distance itself.

    Higher simplices take the largest of their edge values. Edges longer than
    ``max_radius`` (and every simplex containing one) are left out.
    """
    _check_max_dim(max_dim)
    if not max_radius > 0:
        raise FlameletError("max_radius must be positive")
    n = len(cloud)
    dist = pairwise_distances(cloud)
    blocks_v = [_pad(np.arange(n).reshape(-1, 1))]
    blocks_x = [np.zeros(n)]
    if max_dim >= 1 and n > 1:
        iu, ju = np.triu_indices(n, k=1)
        keep = dist[iu, ju] <= max_radius
        iu, ju = iu[keep], ju[keep]
        blocks_v.append(_pad(np.column_stack([iu, ju])))
        blocks_x.append(dist[iu, ju])
    if max_dim >= 2 and n > 2:
        adj = dist <= max_radius
        np.fill_diagonal(adj, False)
        tris = []
        for i in range(n - 2):
            nb = np.flatnonzero(adj[i, i + 1 :]) + i + 1
            if nb.size < 2:
                continue
            sub = np.triu(adj[np.ix_(nb, nb)], k=1)
            a, b = np.nonzero(sub)
            if a.size:
                tris.append(np.column_stack([np.full(a.size, i), nb[a], nb[b]]))
        if tris:
            t = np.concatenate(tris)
            vals = np.maximum(np.maximum(dist[t[:, 0], t[:, 1]], dist[t[:, 0], t[:, 2]]), dist[t[:, 1], t[:, 2]])
            blocks_v.append(_pad(t))
            blocks_x.append(vals)
    return FilteredComplex(np.concatenate(blocks_v), np.concatenate(blocks_x), max_dim)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a function on a regular 1D or 2D grid.

    ``values[i, j]`` is the sample at ``(origin[0] + i*spacing[0], origin[1] + j*spacing[1])``.
    """

    values: np.ndarray
    spacing: tuple[float, ...]
    origin: tuple[float, ...]

    def __init__(self, values, spacing: Sequence[float] | None = None, origin: Sequence[float] | None = None):
        vals = np.array(values, dtype=float, copy=True)
        if vals.ndim == 0:
            vals = vals.reshape(1)
        if vals.size == 0:
            raise FlameletError("a grid function needs at least one sample")
        if not np.all(np.isfinite(vals)):
            raise FlameletError("grid values must be finite")
        nd = vals.ndim
        spacing = tuple(float(s) for s in (spacing if spacing is not None else [1.0] * nd))
        origin = tuple(float(o) for o in (origin if origin is not None else [0.0] * nd))
        if len(spacing) != nd or len(origin) != nd:
            raise FlameletError("spacing and origin need one entry per grid axis")
        if any(not s > 0 for s in spacing):
            raise FlameletError("grid spacing must be positive")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    def axes(self) -> list[np.ndarray]:
        return [o + s * np.arange(n) for o, s, n in zip(self.origin, self.spacing, self.shape)]

    def __neg__(self) -> "GridFunction":
        return GridFunction(-self.values, self.spacing, self.origin)

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return (
            self.spacing == other.spacing
            and self.origin == other.origin
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None


def _grid_cells(shape: tuple[int, ...], max_dim: int) -> list[np.ndarray]:
    if len(shape) == 1:
        n = shape[0]
        idx = np.arange(n)
        cells = [idx.reshape(-1, 1)]
        if max_dim >= 1 and n > 1:
            cells.append(np.column_stack([idx[:-1], idx[1:]]))
        return cells
    rows, cols = shape
    node = np.arange(rows * cols).reshape(rows, cols)
    cells = [node.reshape(-1, 1)]
    if max_dim >= 1:
        edges = [
            np.column_stack([node[:, :-1].ravel(), node[:, 1:].ravel()]),
            np.column_stack([node[:-1, :].ravel(), node[1:, :].ravel()]),
            # diagonal from (i, j) to (i+1, j+1)
            np.column_stack([node[:-1, :-1].ravel(), node[1:, 1:].ravel()]),
        ]
        cells.append(np.concatenate(edges))
    if max_dim >= 2 and rows > 1 and cols > 1:
        a, b = node[:-1, :-1].ravel(), node[1:, 1:].ravel()
        below, right = node[1:, :-1].ravel(), node[:-1, 1:].ravel()
        tris = np.concatenate([np.column_stack([a, below, b]), np.column_stack([a, right, b])])
        cells.append(np.sort(tris, axis=1))
    return cells


def _lower_star(f: GridFunction, max_dim: int, convention: str) -> FilteredComplex:
    _check_max_dim(max_dim)
    if f.ndim > 2:
        raise UnsupportedDimensionError(f"grids of dimension {f.ndim} are not supported")
    flat = f.values.ravel()
    key = flat if convention == SUBLEVEL else -flat
    blocks_v, blocks_x = [], []
    for cells in _grid_cells(f.shape, max_dim):
        if cells.size == 0:
            continue
        # the cell's value is the endpoint sample that comes last in the filtration
        pick = np.take_along_axis(cells, np.argmax(key[cells], axis=1)[:, None], axis=1)[:, 0]
        blocks_v.append(_pad(cells))
        blocks_x.append(flat[pick])
    return FilteredComplex(np.concatenate(blocks_v), np.concatenate(blocks_x), max_dim, convention)


def sublevel_grid_filtration(f: GridFunction, max_dim: int = 1) -> FilteredComplex:
    """Lower-star filtration of the grid graph (1D) or triangulated grid (2D)."""
    return _lower_star(f, max_dim, SUBLEVEL)


def superlevel_grid_filtration(f: GridFunction, max_dim: int = 1) -> FilteredComplex:
    """Upper-star filtration: the sublevel filtration of ``-f``, reported in the scale of ``f``."""
    return _lower_star(f, max_dim, SUPERLEVEL)
