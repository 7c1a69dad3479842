"""Persistence diagrams from filtered complexes, plus a rank-based Betti oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import FlameletError, OracleSizeError
from .filtration import SUBLEVEL, SUPERLEVEL, FilteredComplex

__all__ = [
    "PersistencePair",
    "PersistenceDiagram",
    "compute_persistence",
    "betti_oracle",
    "gf2_rank",
]

ORACLE_MAX_SIMPLICES = 400


@dataclass(frozen=True)
class PersistencePair:
    birth: float
    death: float
    dim: int = 0
    essential: bool = False

    @property
    def persistence(self) -> float:
        return abs(self.birth - self.death)

    @property
    def removable(self) -> bool:
        """Zero-persistence pairs carry no information and may be dropped downstream."""
        return self.birth == self.death and not self.essential


class PersistenceDiagram:
    """Multiset of persistence pairs of a single homology dimension.

    Sublevel diagrams have ``birth <= death``; superlevel diagrams have
    ``birth >= death``. Essential classes are stored with a finite death
    clamped to the extreme value of the filtration.
    """

    def __init__(self, pairs: Iterable = (), dim: int = 0, convention: str = SUBLEVEL):
        if convention not in (SUBLEVEL, SUPERLEVEL):
            raise FlameletError(f"unknown convention {convention!r}")
        out = []
        for p in pairs:
            if not isinstance(p, PersistencePair):
                b, d, *rest = p
                p = PersistencePair(float(b), float(d), dim, bool(rest[0]) if rest else False)
            if p.dim != dim:
                raise FlameletError(f"pair of dimension {p.dim} in a dimension-{dim} diagram")
            if not (np.isfinite(p.birth) and np.isfinite(p.death)):
                raise FlameletError("diagram coordinates must be finite")
            out.append(p)
        self.pairs = tuple(out)
        self.dim = int(dim)
        self.convention = convention

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return (self.dim, self.convention, self.pairs) == (other.dim, other.convention, other.pairs)

    __hash__ = None

    def __repr__(self):
        return f"PersistenceDiagram(dim={self.dim}, {self.convention}, {len(self)} pairs)"

    def as_array(self) -> np.ndarray:
        """``(m, 2)`` array of (birth, death)."""
        return np.array([(p.birth, p.death) for p in self.pairs], dtype=float).reshape(-1, 2)

    @property
    def persistences(self) -> np.ndarray:
        return np.array([p.persistence for p in self.pairs], dtype=float)

    def nontrivial(self) -> "PersistenceDiagram":
        return PersistenceDiagram([p for p in self.pairs if not p.removable], self.dim, self.convention)

    def to_sublevel(self) -> np.ndarray:
        """(birth, death) in ascending coordinates: superlevel diagrams are negated."""
        arr = self.as_array()
        return arr if self.convention == SUBLEVEL else -arr

    def betti(self, threshold: float) -> int:
        """Number of classes alive at ``threshold`` (essential ones never die)."""
        s = 1.0 if self.convention == SUBLEVEL else -1.0
        t = s * threshold
        n = 0
        for p in self.pairs:
            if s * p.birth <= t and (p.essential or t < s * p.death):
                n += 1
        return n


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root


def compute_persistence(
    complex: FilteredComplex, dims: Iterable[int] = (0, 1), method: str = "cohomology"
) -> dict[int, PersistenceDiagram]:
    """Persistence pairs of ``complex`` over GF(2), one diagram per requested dimension.

    Dimension 0 is paired with a union-find sweep over the edges (the elder
    component survives a merge), which produces exactly the pairing of the
    column reduction of the vertex-edge boundary matrix.

    Dimension 1 pairs edges with triangles. ``method="homology"`` reduces the
    edge-triangle boundary matrix column by column in filtration order.
    ``method="cohomology"`` reduces its anti-transpose (edge coboundaries, in
    reverse filtration order) and skips edges already paired in dimension 0.
    Both give the same pairs; the second avoids the many triangle columns of
    a Rips complex that reduce to zero.
    """
    if method not in ("homology", "cohomology"):
        raise FlameletError(f"unknown reduction method {method!r}")
    dims = sorted(set(dims))
    if any(d not in (0, 1) for d in dims):
        raise FlameletError("persistence is reported for dimensions 0 and 1 only")
    complex.check_monotone()
    values = complex.values
    convention = complex.convention
    clamp = float(values[-1]) if len(complex) else 0.0

    vpos = complex.positions(0)
    epos = complex.positions(1)
    vertex_rank = {int(v): r for r, v in enumerate(complex.vertices[vpos, 0])}
    uf = _UnionFind(len(vpos))
    # birth rank of each component is its root's rank, since the elder root is kept
    h0: list[PersistencePair] = []
    positive_edges: list[int] = []
    for r, p in enumerate(epos):
        a = uf.find(vertex_rank[int(complex.vertices[p, 0])])
        b = uf.find(vertex_rank[int(complex.vertices[p, 1])])
        if a == b:
            positive_edges.append(r)
            continue
        young, old = (a, b) if a > b else (b, a)
        uf.parent[young] = old
        h0.append(PersistencePair(float(values[vpos[young]]), float(values[p]), 0))
    for r in range(len(vpos)):
        if uf.find(r) == r:
            h0.append(PersistencePair(float(values[vpos[r]]), clamp, 0, essential=True))

    out: dict[int, PersistenceDiagram] = {}
    if 0 in dims:
        out[0] = PersistenceDiagram(h0, 0, convention)
    if 1 in dims:
        reduce = _reduce_h1 if method == "homology" else _coreduce_h1
        out[1] = PersistenceDiagram(reduce(complex, epos, positive_edges, clamp), 1, convention)
    return out


def _reduce_h1(complex: FilteredComplex, epos, positive_edges, clamp) -> list[PersistencePair]:
    values = complex.values
    tpos = complex.positions(2)
    pairs: list[PersistencePair] = []
    killed: set[int] = set()
    if tpos.size and positive_edges:
        edge_rank = np.full(len(complex), -1, dtype=np.int64)
        edge_rank[epos] = np.arange(epos.size)
        facets = edge_rank[complex.facet_positions(2)].tolist()
        pivots: dict[int, int] = {}
        remaining = len(positive_edges)
        for t, (e0, e1, e2) in enumerate(facets):
            col = (1 << e0) | (1 << e1) | (1 << e2)
            while col:
                low = col.bit_length() - 1
                other = pivots.get(low)
                if other is None:
                    pivots[low] = col
                    killed.add(low)
                    pairs.append(PersistencePair(float(values[epos[low]]), float(values[tpos[t]]), 1))
                    remaining -= 1
                    break
                col ^= other
            if remaining == 0:
                # every cycle is dead; later triangles can only create 2-cycles
                break
    for r in positive_edges:
        if r not in killed:
            pairs.append(PersistencePair(float(values[epos[r]]), clamp, 1, essential=True))
    return pairs


def _coreduce_h1(complex: FilteredComplex, epos, positive_edges, clamp) -> list[PersistencePair]:
    values = complex.values
    tpos = complex.positions(2)
    deaths: dict[int, int] = {}
    if tpos.size and positive_edges:
        edge_rank = np.full(len(complex), -1, dtype=np.int64)
        edge_rank[epos] = np.arange(epos.size)
        flat_e = edge_rank[complex.facet_positions(2)].ravel()
        flat_t = np.repeat(np.arange(tpos.size), 3)
        order = np.lexsort((flat_t, flat_e))
        cofacets = flat_t[order]
        offsets = np.concatenate([[0], np.cumsum(np.bincount(flat_e, minlength=epos.size))])
        # working columns are int bitsets over triangle ranks: xor and lowest set bit run in C
        nbytes = (tpos.size + 7) // 8

        def to_bits(idx: np.ndarray) -> int:
            buf = np.zeros(nbytes, dtype=np.uint8)
            np.bitwise_or.at(buf, idx >> 3, (1 << (idx & 7)).astype(np.uint8))
            return int.from_bytes(buf.tobytes(), "little")

        def from_bits(col: int) -> np.ndarray:
            buf = np.frombuffer(col.to_bytes(nbytes, "little"), dtype=np.uint8)
            return np.flatnonzero(np.unpackbits(buf, bitorder="little")).astype(np.int32)

        # pivot triangle -> edge rank of a column never modified, or a reduced column
        apparent: dict[int, int] = {}
        reduced: dict[int, np.ndarray] = {}
        for e in reversed(positive_edges):
            lo, hi = offsets[e], offsets[e + 1]
            if lo == hi:
                continue
            low = int(cofacets[lo])
            if low not in apparent and low not in reduced:
                apparent[low] = e
                deaths[e] = low
                continue
            col = to_bits(cofacets[lo:hi])
            while col:
                if low in apparent:
                    o = apparent[low]
                    col ^= to_bits(cofacets[offsets[o] : offsets[o + 1]])
                elif low in reduced:
                    col ^= to_bits(reduced[low])
                else:
                    reduced[low] = from_bits(col)
                    deaths[e] = low
                    break
                low = (col & -col).bit_length() - 1
    pairs = []
    for r in positive_edges:
        if r in deaths:
            pairs.append(PersistencePair(float(values[epos[r]]), float(values[tpos[deaths[r]]]), 1))
    for r in positive_edges:
        if r not in deaths:
            pairs.append(PersistencePair(float(values[epos[r]]), clamp, 1, essential=True))
    return pairs


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank over GF(2) of a dense 0/1 matrix by Gaussian elimination."""
    m = (np.asarray(matrix) % 2).astype(np.uint8)
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        if rank == rows:
            break
        hits = np.flatnonzero(m[rank:, c]) + rank
        if hits.size == 0:
            continue
        piv = hits[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        below = np.flatnonzero(m[:, c])
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
    return rank


def betti_oracle(complex: FilteredComplex, threshold: float, dim: int) -> int:
    """Betti number of the sub-complex at ``threshold`` from boundary-matrix ranks.

    Intended as an independent check of :func:`compute_persistence`; refuses
    complexes with more than 400 simplices.
    """
    if len(complex) > ORACLE_MAX_SIMPLICES:
        raise OracleSizeError(f"betti_oracle handles at most {ORACLE_MAX_SIMPLICES} simplices, got {len(complex)}")
    sub = [s for s in complex.restricted(threshold)]
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in sub:
        by_dim.setdefault(s.dim, []).append(s.vertices)

    def boundary_rank(d: int) -> int:
        if d == 0 or d not in by_dim or d - 1 not in by_dim:
            return 0
        index = {v: i for i, v in enumerate(by_dim[d - 1])}
        mat = np.zeros((len(by_dim[d - 1]), len(by_dim[d])), dtype=np.uint8)
        for j, simplex in enumerate(by_dim[d]):
            for drop in range(len(simplex)):
                mat[index[simplex[:drop] + simplex[drop + 1 :]], j] = 1
        return gf2_rank(mat)

    return len(by_dim.get(dim, [])) - boundary_rank(dim) - boundary_rank(dim + 1)
