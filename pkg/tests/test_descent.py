import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperdescent import descent as ds
from hyperdescent import generators as gen
from hyperdescent import simplicial as sp
from hyperdescent.qlinalg import (ChainMap, QMatrix, homology_dims, induced_homology_rank,
                                  verify_contracting_homotopy)
from hyperdescent.simplicial import SetMap

from oracles import alternating_face_matrices, dense_homology

seeds = st.integers(0, 10**6)


def fold():
    return SetMap((1, 2), ("*",), {1: "*", 2: "*"})


def split():
    return SetMap((1, 2, 3), ("a", "b"), {1: "a", 2: "a", 3: "b"})


def test_cech_nerve_examples():
    assert ds.cech_nerve(fold(), 2).sizes() == [2, 4, 8]
    assert ds.cech_nerve(split(), 2).sizes() == [3, 5, 9]
    ident = SetMap(("a", "b"), ("a", "b"), {"a": "a", "b": "b"})
    nerve = ds.cech_nerve(ident, 3)
    assert nerve.sizes() == [2, 2, 2, 2]
    assert all(len(set(c)) == 1 for cells in nerve.cells for c in cells)
    assert sp.validate(nerve) == []


def test_linearize_point_and_empty():
    c = ds.linearize(sp.point(4))
    assert c.dims == (1,) * 5
    assert [c.d(n).to_rows()[0][0] for n in range(1, 5)] == [0, 1, 0, 1]
    h = homology_dims(c)
    assert h[0] == 1 and all(h[n] == 0 for n in range(1, 4))
    assert ds.linearize(sp.empty(2)).dims == (0, 0, 0)


def test_linearize_matches_dense_oracle():
    x = gen.ez_simplicial_set([{"v": ()}, {"e": ("v", "v")}], 3)
    c = ds.linearize(x)
    mats = alternating_face_matrices(x.cells, x.face)
    assert {n: c.d(n).to_rows() for n in range(1, 4)} == mats
    assert homology_dims(c) == dense_homology({n: len(x.cells[n]) for n in range(4)}, mats)


def test_augmented_dimensions():
    c = ds.augmented_cech_complex(fold(), 3)
    assert c.lo == -1 and c.dims == (1, 2, 4, 8, 16)


def test_contracting_homotopy_examples():
    h = ds.contracting_homotopy(fold(), 2)
    assert h[-1].to_rows() == [[Fraction(1, 2)], [Fraction(1, 2)]]
    c = ds.augmented_cech_complex(fold(), 2)
    assert c.d(0) @ h[-1] == QMatrix.identity(1)
    ident = SetMap((1, 2), (1, 2), {1: 1, 2: 2})
    assert verify_contracting_homotopy(ds.augmented_cech_complex(ident, 3), ds.contracting_homotopy(ident, 3),
                                       range(-1, 3)).ok
    six = SetMap(tuple(range(1, 7)), ("a", "b"), {i: "a" if i <= 3 else "b" for i in range(1, 7)})
    assert verify_contracting_homotopy(ds.augmented_cech_complex(six, 3), ds.contracting_homotopy(six, 3),
                                       range(-1, 3)).ok


def test_contracting_homotopy_needs_constant_fibers():
    with pytest.raises(ValueError):
        ds.contracting_homotopy(split(), 2)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("ny", [1, 2])
def test_contracting_homotopy_fiber_constant(d, ny):
    p = gen.fiber_constant_map(d, ny)
    N = 3
    assert verify_contracting_homotopy(ds.augmented_cech_complex(p, N), ds.contracting_homotopy(p, N),
                                       range(-1, N)).ok


def test_cech_acyclicity_examples():
    assert ds.verify_cech_acyclic(split(), 4).ok
    assert ds.verify_cech_acyclic(SetMap((1, 2), (1, 2), {1: 1, 2: 2}), 3).ok
    bad = ds.verify_cech_acyclic(SetMap((1,), ("a", "b"), {1: "a"}), 3)
    assert not bad.ok and bad.homology[-1] == 1


@given(seeds)
def test_random_surjections_are_acyclic(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    p = gen.random_surjection(rng, rng.randint(k, 4), k)
    rep = ds.verify_cech_acyclic(p, 3)
    assert rep.ok
    assert list(rep.checked) == [-1, 0, 1, 2]


@given(seeds)
def test_linearization_is_additive(seed):
    rng = random.Random(seed)
    x, y = gen.random_simplicial_set(rng), gen.random_simplicial_set(rng)
    u = sp.disjoint_union(x, y)
    cx, cy, cu = ds.linearize(x), ds.linearize(y), ds.linearize(u)
    assert cu.dims == tuple(a + b for a, b in zip(cx.dims, cy.dims))
    hx, hy, hu = homology_dims(cx), homology_dims(cy), homology_dims(cu)
    assert all(hu[n] == hx[n] + hy[n] for n in hu)
    tc = ds.total_complex(sp.identity_map(u))
    assert tc.source.dims == cu.dims


@given(seeds)
def test_homotopic_maps_agree_on_homology(seed):
    rng = random.Random(seed)
    f0, f1 = gen.random_cosk0_pair(rng)
    h = sp.build_homotopy_cosk0(f0, f1, 3)
    a, b = ds.linearize_map(h.start), ds.linearize_map(h.end)
    diff = ChainMap(a.source, a.target, {n: a.f(n) - b.f(n) for n in range(4)})
    assert diff.non_commuting_degrees() == []
    for n in range(3):
        assert induced_homology_rank(diff, n) == 0


def test_descent_examples():
    nerve = ds.cech_augmentation(fold(), 3)
    rep = ds.verify_descent(nerve, 3)
    assert rep.ok and rep.iso_degrees == [0, 1, 2]
    assert rep.source_homology[0] == rep.target_homology[0] == 1
    y = sp.standard_simplex(2, 3)
    assert ds.verify_descent(sp.identity_map(y), 3).ok


def degreewise_surjective(f):
    return all(f.degree(k).is_surjective() for k in range(f.level + 1))


def test_descent_counterexample_found_by_search():
    """A degreewise surjection that is not a hypercover and changes homology."""
    sets = [x for x in gen.small_simplicial_sets(3, 1) if max(x.sizes()) <= 3]
    found = None
    for x in sets:
        for y in sets:
            for f in sp.hom_delta(x, y):
                if not degreewise_surjective(f):
                    continue
                rep = ds.verify_descent(f, 1)
                if not rep.hypercover.ok and rep.source_homology != rep.target_homology:
                    found = rep
                    break
            if found:
                break
        if found:
            break
    assert found is not None
    assert not found.ok
    assert found.hypercover.first_failure() == 1


@given(seeds)
def test_random_hypercovers_descend(seed):
    f = gen.random_hypercover(random.Random(seed), gen.HypercoverConfig(level=2))
    rep = ds.verify_descent(f, 2)
    assert rep.hypercover.ok
    assert rep.ok, rep.to_json()
