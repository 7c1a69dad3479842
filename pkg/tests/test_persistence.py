import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from flamelets import (
    GridFunction,
    PersistenceDiagram,
    PointCloud,
    betti_oracle,
    bottleneck,
    compute_persistence,
    hausdorff,
    rips_filtration,
    sublevel_grid_filtration,
    superlevel_grid_filtration,
)
from flamelets.errors import FlameletError, OracleSizeError
from flamelets.persistence import gf2_rank

SQUARE = PointCloud([[0, 0], [1, 0], [1, 1], [0, 1]])


def test_two_points():
    d = compute_persistence(rips_filtration(PointCloud([[0.0], [2.0]]), 1), (0,))[0]
    assert sorted((p.birth, p.death, p.essential) for p in d) == [(0.0, 2.0, False), (0.0, 2.0, True)]


def test_square_h1():
    d = compute_persistence(rips_filtration(SQUARE, 2))
    h1 = d[1].nontrivial()
    assert len(h1) == 1
    (p,) = h1.pairs
    assert (p.birth, p.death) == pytest.approx((1.0, math.sqrt(2)))
    assert sorted(p.death for p in d[0] if not p.essential) == [1.0, 1.0, 1.0]


def test_empty_diagram_allowed():
    d = compute_persistence(rips_filtration(PointCloud([[0.0, 0.0]]), 2))
    assert len(d[1]) == 0
    assert len(d[0]) == 1 and d[0].pairs[0].essential


def test_sublevel_1d_grid():
    f = GridFunction([0.0, 2.0, 1.0, 3.0])
    d = compute_persistence(sublevel_grid_filtration(f), (0,))[0].nontrivial()
    assert sorted((p.birth, p.death, p.essential) for p in d) == [(0.0, 3.0, True), (1.0, 2.0, False)]


def test_diagram_validation():
    with pytest.raises(FlameletError):
        PersistenceDiagram([(0.0, np.inf)])
    with pytest.raises(FlameletError):
        PersistenceDiagram([(0.0, 1.0)], convention="sideways")


def test_removable_flag():
    d = PersistenceDiagram([(1.0, 1.0), (0.0, 1.0), (2.0, 2.0, True)])
    assert [p.removable for p in d] == [True, False, False]
    assert len(d.nontrivial()) == 2


def test_betti_counts_essential_once_born():
    d = PersistenceDiagram([(0.0, 1.0), (0.5, 3.0, True)])
    assert [d.betti(t) for t in (-1, 0, 0.7, 2, 10)] == [0, 1, 2, 1, 1]


def test_gf2_rank():
    assert gf2_rank(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2
    assert gf2_rank(np.eye(4, dtype=int)) == 4
    assert gf2_rank(np.zeros((0, 3))) == 0


def test_oracle_refuses_large_complex():
    big = rips_filtration(PointCloud(np.arange(30.0)), 2)
    with pytest.raises(OracleSizeError):
        betti_oracle(big, 1.0, 0)


def test_oracle_square():
    k = rips_filtration(SQUARE, 2)
    assert [betti_oracle(k, t, 1) for t in (0.5, 1.0, 1.2, 1.5)] == [0, 1, 1, 0]
    assert [betti_oracle(k, t, 0) for t in (0.5, 1.0)] == [4, 1]


small_clouds = arrays(float, st.tuples(st.integers(1, 7), st.just(2)), elements=st.floats(-3, 3))


@given(small_clouds)
@settings(max_examples=40, deadline=None)
def test_diagram_betti_matches_oracle(points):
    k = rips_filtration(PointCloud(points), 2)
    d = compute_persistence(k)
    for t in np.unique(np.r_[k.values, k.values + 1e-3]):
        assert d[0].betti(t) == betti_oracle(k, t, 0)
        assert d[1].betti(t) == betti_oracle(k, t, 1)


@given(small_clouds)
@settings(max_examples=40, deadline=None)
def test_homology_and_cohomology_agree(points):
    k = rips_filtration(PointCloud(points), 2)
    a = compute_persistence(k, (1,), method="homology")[1]
    b = compute_persistence(k, (1,), method="cohomology")[1]
    assert sorted(map(tuple, a.as_array())) == sorted(map(tuple, b.as_array()))


def test_methods_agree_on_grids(rng):
    for _ in range(10):
        f = GridFunction(rng.normal(size=(6, 7)))
        k = sublevel_grid_filtration(f, 2)
        a = compute_persistence(k, method="homology")
        b = compute_persistence(k, method="cohomology")
        assert a[0] == b[0]
        assert sorted(map(tuple, a[1].as_array())) == sorted(map(tuple, b[1].as_array()))


def test_unknown_method():
    with pytest.raises(FlameletError):
        compute_persistence(rips_filtration(SQUARE, 2), method="magic")


@given(small_clouds, st.data())
@settings(max_examples=40, deadline=None)
def test_rips_h0_stability(points, data):
    shift = data.draw(arrays(float, points.shape, elements=st.floats(-0.3, 0.3)))
    a, b = PointCloud(points), PointCloud(points + shift)
    da = compute_persistence(rips_filtration(a, 1), (0,))[0]
    db = compute_persistence(rips_filtration(b, 1), (0,))[0]
    assert bottleneck(da, db) <= 2 * hausdorff(a, b) + 1e-9


@given(arrays(float, st.integers(1, 15), elements=st.floats(-5, 5)), st.data())
@settings(max_examples=60, deadline=None)
def test_grid_diagram_stability_1d(values, data):
    noise = data.draw(arrays(float, values.shape, elements=st.floats(-1, 1)))
    da = compute_persistence(sublevel_grid_filtration(GridFunction(values)), (0,))[0]
    db = compute_persistence(sublevel_grid_filtration(GridFunction(values + noise)), (0,))[0]
    assert bottleneck(da, db) <= np.max(np.abs(noise)) + 1e-9


def test_grid_diagram_stability_2d(rng):
    for _ in range(20):
        f = rng.normal(size=(5, 6))
        g = f + rng.uniform(-0.2, 0.2, f.shape)
        da = compute_persistence(sublevel_grid_filtration(GridFunction(f), 2))
        db = compute_persistence(sublevel_grid_filtration(GridFunction(g), 2))
        sup = np.max(np.abs(f - g))
        for dim in (0, 1):
            assert bottleneck(da[dim], db[dim]) <= sup + 1e-9


@given(small_clouds)
@settings(max_examples=30, deadline=None)
def test_h0_has_one_pair_per_vertex(points):
    d = compute_persistence(rips_filtration(PointCloud(points), 1), (0,))[0]
    assert len(d) == len(points)
    assert sum(p.essential for p in d) == 1


@given(
    st.one_of(
        arrays(float, st.integers(1, 12), elements=st.floats(-5, 5)),
        arrays(float, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=st.floats(-5, 5)),
    )
)
@settings(max_examples=60, deadline=None)
def test_superlevel_is_negated_sublevel_of_negation(values):
    f = GridFunction(values)
    sup = compute_persistence(superlevel_grid_filtration(f, 2))
    sub = compute_persistence(sublevel_grid_filtration(-f, 2))
    for dim in (0, 1):
        assert sup[dim].convention == "superlevel"
        assert [(p.birth, p.death, p.essential) for p in sup[dim]] == [
            (-p.birth, -p.death, p.essential) for p in sub[dim]
        ]
