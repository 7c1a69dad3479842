"""Bottleneck distance between diagrams and its integral along a vineyard."""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import DimensionMismatchError, FlameletError, GridMismatchError, OracleSizeError
from .geometry import trapezoid
from .persistence import PersistenceDiagram

__all__ = ["Vineyard", "bottleneck", "bottleneck_bruteforce", "integrated_bottleneck"]

BRUTEFORCE_MAX_POINTS = 6


class Vineyard:
    """Diagrams indexed by a scale parameter ``sigma`` in [0, 1].

    ``native`` optionally records the scale in its own units (a bandwidth, a
    time stamp); it defaults to ``sigma``.
    """

    def __init__(self, sigma: Sequence[float], diagrams: Sequence[PersistenceDiagram], native=None):
        sigma = np.asarray(sigma, dtype=float).reshape(-1)
        diagrams = tuple(diagrams)
        if sigma.size == 0 or sigma.size != len(diagrams):
            raise FlameletError("a vineyard needs one diagram per sigma value, and at least one")
        if np.any(np.diff(sigma) <= 0) or sigma[0] < 0 or sigma[-1] > 1:
            raise FlameletError("sigma must be strictly increasing within [0, 1]")
        if len({(d.dim, d.convention) for d in diagrams}) != 1:
            raise DimensionMismatchError("all diagrams of a vineyard must share dimension and convention")
        native = sigma.copy() if native is None else np.asarray(native, dtype=float).reshape(-1)
        if native.shape != sigma.shape or np.any(np.diff(native) <= 0):
            raise FlameletError("native scale values must be strictly increasing, one per slice")
        sigma.setflags(write=False)
        native.setflags(write=False)
        self.sigma = sigma
        self.native = native
        self.diagrams = diagrams

    @property
    def dim(self) -> int:
        return self.diagrams[0].dim

    @property
    def convention(self) -> str:
        return self.diagrams[0].convention

    @property
    def slices(self) -> list[tuple[float, PersistenceDiagram]]:
        return list(zip(self.sigma.tolist(), self.diagrams))

    def __len__(self) -> int:
        return len(self.diagrams)

    def __eq__(self, other):
        if not isinstance(other, Vineyard):
            return NotImplemented
        return (
            np.array_equal(self.sigma, other.sigma)
            and np.array_equal(self.native, other.native)
            and self.diagrams == other.diagrams
        )

    __hash__ = None


def _check_compatible(a: PersistenceDiagram, b: PersistenceDiagram) -> None:
    if a.dim != b.dim or a.convention != b.convention:
        raise DimensionMismatchError(
            f"cannot compare a dim-{a.dim} {a.convention} diagram with a dim-{b.dim} {b.convention} one"
        )


def _offdiagonal(d: PersistenceDiagram) -> np.ndarray:
    arr = d.to_sublevel()
    return arr[arr[:, 0] != arr[:, 1]]


def _has_perfect_matching(cost: np.ndarray, t: float) -> bool:
    adj = csr_matrix(cost <= t)
    match = maximum_bipartite_matching(adj, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """Exact bottleneck distance (L-infinity ground metric, diagonal matches allowed).

    Both diagrams are augmented with the diagonal projections of the other's
    points. The answer is one of the finitely many pairwise or point-to-diagonal
    costs, so a binary search over the sorted candidates with a perfect-matching
    test at each threshold is exact.
    """
    _check_compatible(a, b)
    pa, pb = _offdiagonal(a), _offdiagonal(b)
    m, n = len(pa), len(pb)
    if m + n == 0:
        return 0.0
    diag_a = np.abs(pa[:, 1] - pa[:, 0]) / 2
    diag_b = np.abs(pb[:, 1] - pb[:, 0]) / 2
    # rows: points of a, then diagonal slots for b; columns: points of b, then slots for a
    cost = np.full((m + n, n + m), np.inf)
    if m and n:
        cost[:m, :n] = np.max(np.abs(pa[:, None, :] - pb[None, :, :]), axis=2)
    cost[np.arange(m), n + np.arange(m)] = diag_a
    cost[m + np.arange(n), np.arange(n)] = diag_b
    cost[m:, n:] = 0.0
    candidates = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(cost, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck_bruteforce(a: PersistenceDiagram, b: PersistenceDiagram) -> float:
    """Bottleneck distance by enumerating every bijection; at most 6 points in total."""
    _check_compatible(a, b)
    pa, pb = a.to_sublevel(), b.to_sublevel()
    if len(pa) + len(pb) > BRUTEFORCE_MAX_POINTS:
        raise OracleSizeError(f"brute force is limited to {BRUTEFORCE_MAX_POINTS} points in total")
    left = [tuple(p) for p in pa] + [None] * len(pb)
    right = [tuple(p) for p in pb] + [None] * len(pa)

    def cost(x, y):
        if x is None and y is None:
            return 0.0
        if x is None:
            return abs(y[1] - y[0]) / 2
        if y is None:
            return abs(x[1] - x[0]) / 2
        return max(abs(x[0] - y[0]), abs(x[1] - y[1]))

    best = np.inf
    for perm in itertools.permutations(range(len(right))):
        worst = max((cost(left[i], right[j]) for i, j in enumerate(perm)), default=0.0)
        best = min(best, worst)
    return float(best)


def integrated_bottleneck(a: Vineyard, b: Vineyard) -> float:
    """Trapezoid-rule integral over sigma of the slice-wise bottleneck distance.

    The two vineyards are restricted to the sigma values they share.
    """
    common, ia, ib = np.intersect1d(a.sigma, b.sigma, return_indices=True)
    if common.size == 0 or (common.size == 1 and (len(a) > 1 or len(b) > 1)):
        raise GridMismatchError("the vineyards share too few sigma values to integrate")
    dist = [bottleneck(a.diagrams[i], b.diagrams[j]) for i, j in zip(ia, ib)]
    return trapezoid(dist, common)
