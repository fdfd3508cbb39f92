import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperdescent import generators as gen
from hyperdescent import simplicial as sp
from hyperdescent.descent import cech_augmentation
from hyperdescent.simplicial import SetMap, SimplicialMap, TruncatedSimplicialSet

from oracles import brute_cosk_count, brute_hom_count

seeds = st.integers(0, 10**6)


def circle(level=2):
    return gen.ez_simplicial_set([{"v": ()}, {"e": ("v", "v")}], level)


# validation -------------------------------------------------------------------------


def test_validate_examples():
    d1 = sp.standard_simplex(1, 2)
    assert sp.validate(d1) == []
    assert sp.validate(sp.constant(["a", "b"], 3)) == []
    faces = dict(d1.faces)
    f0, f1 = dict(faces[(1, 0)]), dict(faces[(1, 1)])
    f0[(0, 1)], f1[(0, 1)] = f1[(0, 1)], f0[(0, 1)]
    faces[(1, 0)], faces[(1, 1)] = f0, f1
    broken = TruncatedSimplicialSet(d1.cells, faces, d1.degeneracies)
    problems = sp.validate(broken)
    assert problems and all(p.to_json() for p in problems)


def test_validate_reports_missing_tables():
    x = TruncatedSimplicialSet([("v",), ("e",)], {(1, 0): {"e": "v"}}, {})
    assert sp.validate(x)


def test_validate_map_catches_non_simplicial_map():
    d1 = sp.standard_simplex(1, 1)
    bad = SimplicialMap(d1, d1, [{(0,): (0,), (1,): (1,)}, {(0, 0): (0, 1), (0, 1): (0, 1), (1, 1): (1, 1)}])
    assert sp.validate_map(bad)
    assert sp.validate_map(sp.identity_map(d1)) == []


# skeleta and coskeleta --------------------------------------------------------------


def test_sk_examples():
    d2 = sp.standard_simplex(2, 2)
    k = sp.sk(d2, 1)
    fin = sp.FiniteSimplicialSet(k)
    assert len(fin.nondegenerate(0)) == 3 and len(fin.nondegenerate(1)) == 3
    assert sp.sk(d2, 2) == d2
    assert sp.sk(sp.point(0), 0) == sp.point(0)
    with pytest.raises(ValueError):
        sp.sk(d2, 3)


def test_cosk0_of_two_points():
    x = sp.TruncatedSimplicialSet([("a", "b")])
    assert sp.cosk(x, 0, 3).sizes() == [2, 4, 8, 16]


def test_cosk_of_point():
    assert sp.cosk(sp.point(0), 0, 4).sizes() == [1] * 5


@given(seeds)
def test_cosk_sizes_match_brute_force(seed):
    x = gen.random_simplicial_set(random.Random(seed), gen.SimplicialSetConfig(level=1, max_dim=1))
    for n in (0, 1):
        c = sp.cosk(x, n, 3)
        assert sp.validate(c) == []
        for p in range(n + 1, 4):
            assert len(c.cells[p]) == brute_cosk_count(x, n, p)


@given(seeds)
def test_cosk_is_idempotent(seed):
    x = gen.random_simplicial_set(random.Random(seed), gen.SimplicialSetConfig(level=2))
    for n in (0, 1):
        once = sp.cosk(x, n, 3)
        twice = sp.cosk(sp.sk(once, n), n, 3)
        assert once.sizes() == twice.sizes()
        # the unit of the second coskeleton is a bijection
        u = sp.unit(once, n, 3)
        for p in range(4):
            assert u.degree(p).is_surjective() and u.degree(p).is_injective()


@given(seeds)
def test_comparison_bijective_below_n(seed):
    x = gen.random_simplicial_set(random.Random(seed))
    for n in (1, 2, 3):
        for p in range(n):
            c = sp.comparison_map(x, n, p)
            assert c.is_surjective() and c.is_injective()


def test_relative_cosk_examples():
    ab = TruncatedSimplicialSet([("a", "b")])
    two = sp.constant(["*", "o"], 2)
    f = SimplicialMap(ab, two, [{"a": "*", "b": "o"}])
    rel = sp.relative_cosk(f, 0, 2)
    assert rel.source.sizes() == [2, 2, 2]
    assert sp.validate(rel.source) == [] and sp.validate_map(rel) == []
    # over the point it is the absolute coskeleton
    x = circle(1)
    assert sp.relative_cosk(sp.point_base(x, 3), 1, 3).source.sizes() == sp.cosk(x, 1, 3).sizes()
    # over itself nothing changes
    y = sp.standard_simplex(1, 3)
    ident = sp.relative_cosk(sp.identity_map(y), 3, 3)
    assert ident.source.sizes() == y.sizes()
    assert sp.relative_cosk(sp.identity_map(y), -1, 3).source == y


# Eilenberg-Zilber normal forms ----------------------------------------------------


def test_decomposition_examples():
    d1 = sp.standard_simplex(1, 2)
    dec = sp.nondegenerate_decomposition(d1, 1)
    assert len(dec.nondegenerate()) == 1 and len(dec.degenerate()) == 2 and dec.is_partition()
    const = sp.constant(["a"], 3)
    for k in range(1, 4):
        assert sp.nondegenerate_decomposition(const, k).nondegenerate() == []
    c0 = sp.cosk(TruncatedSimplicialSet([("a", "b")]), 0, 2)
    assert sorted(sp.nondegenerate_decomposition(c0, 1).nondegenerate()) == [("a", "b"), ("b", "a")]


def test_ez_counts_and_normal_forms():
    x = gen.ez_simplicial_set([{"v": (), "w": ()}, {"e": ("v", "w"), "f": ("v", "v")}], 3)
    assert sp.validate(x) == []
    for k in range(4):
        assert len(x.cells[k]) == gen.ez_count([2, 2], k)
        for c in x.cells[k]:
            alpha, b = sp.normal_form(x, k, c)
            assert c == (b if alpha == tuple(range(k + 1)) else f"{b}." + "".join(map(str, alpha)))
    assert sp.is_split(x)
    with pytest.raises(ValueError):
        gen.ez_simplicial_set([{"v": ()}, {"e": ("v",)}], 2)


@given(seeds)
def test_random_sets_are_valid_and_split(seed):
    x = gen.random_simplicial_set(random.Random(seed))
    assert sp.validate(x) == []
    assert max(x.sizes()) <= 4
    assert sp.is_split(x)
    for k in range(x.level + 1):
        assert sp.nondegenerate_decomposition(x, k).is_partition()


# Hom_Delta --------------------------------------------------------------------------


def test_hom_delta_examples():
    x = circle(2)
    assert len(sp.hom_delta(sp.simplex(0), x)) == len(x.cells[0])
    assert len(sp.hom_delta(sp.simplex(1), sp.standard_simplex(1, 1))) == 3
    assert len(sp.hom_delta(sp.boundary(2), sp.standard_simplex(2, 2))) == 10
    with pytest.raises(ValueError):
        sp.hom_delta(sp.simplex(2), sp.standard_simplex(1, 1))


def wedge_of_edges():
    """Two copies of Delta[1] glued at a vertex: the pushout of Delta[0] -> Delta[1] (twice)."""
    v = sp.standard_simplex(0, 1)
    e = sp.standard_simplex(1, 1)
    i = SimplicialMap(v, e, [{(0,): (1,)}, {(0, 0): (1, 1)}])
    j = SimplicialMap(v, e, [{(0,): (0,)}, {(0, 0): (0, 0)}])
    return i, j


def test_hom_delta_of_pushout_is_pullback():
    i, j = wedge_of_edges()
    p, ia, jb = sp.pushout(i, j)
    assert sp.validate(p) == []
    for x in (sp.standard_simplex(2, 2), circle(2), sp.standard_simplex(1, 2)):
        left = len(sp.hom_delta(p, x))
        homs_a = sp.hom_delta(i.target, x)
        homs_b = sp.hom_delta(j.target, x)
        right = sum(1 for a in homs_a for b in homs_b if a.compose(i).components[0] == b.compose(j).components[0])
        assert left == right


@given(seeds)
def test_hom_delta_matches_brute_force(seed):
    rng = random.Random(seed)
    cfg = gen.SimplicialSetConfig(level=1, max_cells=3, max_dim=1)
    a, x = gen.random_simplicial_set(rng, cfg), gen.random_simplicial_set(rng, cfg)
    assert len(sp.hom_delta(a, x)) == brute_hom_count(a, x, 1)
    for m in sp.hom_delta(a, x):
        assert sp.validate_map(m) == []


@given(seeds, st.integers(0, 1))
def test_coskeleton_adjunction(seed, n):
    rng = random.Random(seed)
    a = gen.random_simplicial_set(rng, gen.SimplicialSetConfig(level=2))
    x = gen.random_simplicial_set(rng, gen.SimplicialSetConfig(level=2))
    left = len(sp.hom_delta(sp.FiniteSimplicialSet(sp.sk(a, n)), x))
    right = len(sp.hom_delta(a, sp.cosk(sp.sk(x, n), n, 2)))
    assert left == right


# homotopies -------------------------------------------------------------------------


def test_cosk0_homotopy_formula():
    f0 = SetMap(("a",), ("x", "y"), {"a": "x"})
    f1 = SetMap(("a",), ("x", "y"), {"a": "y"})
    h = sp.build_homotopy_cosk0(f0, f1, 2)
    assert h.verify().ok
    assert h.at(1, (0, 1))(("a", "a")) == ("x", "y")
    assert h.endpoint(0).components == h.start.components


def test_constant_homotopy():
    f = SetMap((1, 2), ("x",), {1: "x", 2: "x"})
    h = sp.build_homotopy_cosk0(f, f, 2)
    for p in range(3):
        for phi in sp.monotone_maps(p, 1):
            assert dict(h.at(p, phi).assignment) == dict(h.start.components[p])


def test_coskn_at_zero_reproduces_cosk0():
    f0 = SetMap((1, 2), ("x", "y"), {1: "x", 2: "y"})
    f1 = SetMap((1, 2), ("x", "y"), {1: "y", 2: "y"})
    X, Y = TruncatedSimplicialSet([(1, 2)]), TruncatedSimplicialSet([("x", "y")])
    g0, g1 = SimplicialMap(X, Y, [f0.assignment]), SimplicialMap(X, Y, [f1.assignment])
    hn = sp.build_homotopy_coskn(g0, g1, 0, 3)
    h0 = sp.build_homotopy_cosk0(f0, f1, 3)
    assert hn.verify().ok and h0.verify().ok
    assert hn.map.source.sizes() == h0.map.source.sizes()

    def strip(c, p):  # relative cells over the point carry the base cell "*"
        return c[0] if p > 0 else c

    for p in range(4):
        for phi in sp.monotone_maps(p, 1):
            got = {strip(c, p): strip(v, p) for c, v in hn.at(p, phi).assignment.items()}
            assert got == dict(h0.at(p, phi).assignment)


def test_coskn_rejects_maps_differing_below_n():
    x = sp.standard_simplex(1, 1)
    y = sp.standard_simplex(1, 1)
    maps = sp.hom_delta(x, y)
    a, b = [m for m in maps if m.components[0][(0,)] != m.components[0][(1,)]][0], \
        [m for m in maps if m.components[0][(0,)] == m.components[0][(1,)]][0]
    with pytest.raises(ValueError):
        sp.build_homotopy_coskn(a, b, 1, 2)


@given(seeds)
def test_random_homotopies_verify(seed):
    rng = random.Random(seed)
    f0, f1 = gen.random_cosk0_pair(rng)
    assert sp.build_homotopy_cosk0(f0, f1, 3).verify().ok
    n = rng.randint(0, 2)
    pair = gen.random_coskn_pair(rng, n)
    if pair is not None:
        assert sp.build_homotopy_coskn(pair[0], pair[1], n, 3).verify().ok


# hypercovers and morphism classes ---------------------------------------------------


def test_hypercover_examples():
    y = sp.standard_simplex(1, 3)
    assert sp.is_hypercover(sp.identity_map(y), sp.bijective()).ok
    assert sp.is_hypercover(sp.identity_map(y), sp.surjective()).ok
    p = SetMap((1, 2, 3), ("a", "b"), {1: "a", 2: "a", 3: "b"})
    rep = sp.is_hypercover(cech_augmentation(p, 3), sp.surjective())
    assert rep.ok
    assert [v.source_size for v in rep.degrees][0] == 3
    x0 = TruncatedSimplicialSet([("a",)])
    not_onto = SimplicialMap(x0, TruncatedSimplicialSet([("a", "b")]), [{"a": "a"}])
    assert sp.is_hypercover(not_onto, sp.surjective()).first_failure() == 0


@given(seeds)
def test_bijective_hypercover_iff_degreewise_bijection(seed):
    rng = random.Random(seed)
    f = gen.random_hypercover(rng, gen.HypercoverConfig(level=2))
    degreewise = all(f.degree(k).is_surjective() and f.degree(k).is_injective() for k in range(f.level + 1))
    assert sp.is_hypercover(f, sp.bijective()).ok == degreewise
    assert sp.is_hypercover(f, sp.surjective()).ok


def test_morphism_class_names():
    assert sp.morphism_class("all-fibers-size-d", d=2).name == "all-fibers-size-2"
    assert sp.morphism_class("user-table", fiber_sizes=[1, 2])(SetMap((1, 2), ("a",), {1: "a", 2: "a"}))
    with pytest.raises(ValueError):
        sp.morphism_class("proper")


@given(seeds)
def test_morphism_classes_contain_bijections_and_are_stable(seed):
    rng = random.Random(seed)
    classes = [sp.surjective(), sp.bijective(), sp.fiber_sizes([1]), sp.fibers_of_size(1)]
    perm = list(range(4))
    rng.shuffle(perm)
    bij = SetMap(tuple(range(4)), tuple(range(4)), dict(enumerate(perm)))
    for p in classes:
        assert p(bij)
    # composition and base change along an arbitrary map
    for p in classes:
        f = gen.random_set_map(rng, rng.randint(1, 4), rng.randint(1, 3))
        g = gen.random_set_map(rng, len(f.target), rng.randint(1, 3))
        if p(f) and p(g):
            assert p(g.compose(f))
        if p(g):
            # pullback of g along h: Z -> target(g)
            h = gen.random_set_map(rng, rng.randint(1, 3), len(g.target))
            pb = tuple((z, s) for z in h.source for s in g.source if h(z) == g(s))
            proj = SetMap(pb, h.source, {c: c[0] for c in pb})
            assert p(proj)
