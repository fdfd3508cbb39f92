"""Random and exhaustive instance generators for tests and experiment scripts.

Simplicial sets are built from nondegenerate cells in Eilenberg-Zilber form:
every ``k``-cell is ``alpha^* b`` for a unique surjection ``alpha: [k] -> [l]``
and nondegenerate ``l``-cell ``b``.  Its id is ``b`` itself when ``alpha`` is the
identity and ``"b.alpha"`` otherwise (``alpha`` written as its values).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import motives as mo
from . import simplicial as sp
from . import weight as wt
from .motives import AdditiveObject, MotiveMorphism, PresentedQCategory
from .simplicial import Cell, SetMap, SimplicialMap, TruncatedSimplicialSet

Surj = tuple[int, ...]


def surjections(k: int, l: int) -> list[Surj]:
    """Monotone surjections ``[k] -> [l]`` (there are ``C(k, l)`` of them)."""
    return [(0,) + tuple(itertools.accumulate(steps)) for steps in itertools.product((0, 1), repeat=k)
            if sum(steps) == l]


def _cell_id(alpha: Surj, b: str) -> str:
    if alpha == tuple(range(len(alpha))):
        return b
    return f"{b}." + "".join(str(v) for v in alpha)


def ez_simplicial_set(nondegenerate: Sequence[Mapping[str, Sequence[Cell]]], level: int) -> TruncatedSimplicialSet:
    """Simplicial set from nondegenerate cells and their faces, truncated at ``level``.

    ``nondegenerate[l]`` maps each nondegenerate ``l``-cell to its ``l + 1``
    faces, given as cell ids of degree ``l - 1`` (degenerate ids allowed).
    The face data must satisfy the simplicial identities; the result can be
    checked with :func:`simplicial.validate`.
    """
    forms: list[dict[Cell, tuple[Surj, str]]] = []
    bfaces: dict[str, Sequence[Cell]] = {}
    for l, layer in enumerate(nondegenerate):
        for b, fs in layer.items():
            if len(fs) != (l + 1 if l else 0):
                raise ValueError(f"cell {b} of degree {l} needs {l + 1 if l else 0} faces")
            bfaces[b] = tuple(fs)
    for k in range(level + 1):
        table = {}
        for l in range(min(k, len(nondegenerate) - 1) + 1):
            for alpha in surjections(k, l):
                for b in nondegenerate[l]:
                    cid = _cell_id(alpha, b)
                    if cid in table:
                        raise ValueError(f"cell id {cid} is ambiguous")
                    table[cid] = (alpha, b)
        forms.append(table)
    dim = {b: l for l, layer in enumerate(nondegenerate) for b in layer}

    def face(k: int, i: int, cid: Cell) -> Cell:
        alpha, b = forms[k][cid]
        theta = alpha[:i] + alpha[i + 1:]
        l = dim[b]
        missing = [j for j in range(l + 1) if j not in theta]
        if not missing:
            return _cell_id(theta, b)
        j = missing[0]
        rest = tuple(v - (v > j) for v in theta)
        fb = bfaces[b][j]
        if fb not in forms[l - 1]:
            raise ValueError(f"face {j} of {b} is not a cell of degree {l - 1}")
        beta, c = forms[l - 1][fb]
        return _cell_id(tuple(beta[v] for v in rest), c)

    faces, degens = {}, {}
    cells = [tuple(f) for f in forms]
    for k in range(1, level + 1):
        for i in range(k + 1):
            faces[(k, i)] = {c: face(k, i, c) for c in cells[k]}
        for i in range(k):
            degens[(k, i)] = {c: _cell_id(forms[k - 1][c][0][:i + 1] + forms[k - 1][c][0][i:], forms[k - 1][c][1])
                              for c in cells[k - 1]}
    return TruncatedSimplicialSet(cells, faces, degens)


def ez_count(counts: Sequence[int], k: int) -> int:
    """Number of ``k``-cells given nondegenerate counts per degree."""
    return sum(len(surjections(k, l)) * n for l, n in enumerate(counts) if l <= k)


def boundary_options(x: TruncatedSimplicialSet, l: int) -> list[tuple[Cell, ...]]:
    """Every admissible face tuple for a new nondegenerate ``l``-cell of ``x``."""
    if l == 0:
        return [()]
    bd = sp.boundary(l)
    faces = [tuple(v for v in range(l + 1) if v != j) for j in range(l + 1)]
    return [tuple(m(l - 1, f) for f in faces) for m in sp.hom_delta(bd, sp.sk(x, l - 1))]


@dataclass(frozen=True)
class SimplicialSetConfig:
    level: int = 3
    max_cells: int = 4  # per degree, degenerate cells included
    max_dim: int = 2  # highest degree of a nondegenerate cell
    max_vertices: int = 3


def random_simplicial_set(rng: random.Random, cfg: SimplicialSetConfig = SimplicialSetConfig()
                          ) -> TruncatedSimplicialSet:
    """A random simplicial set with at most ``cfg.max_cells`` cells in each degree up to ``cfg.level``."""
    nd: list[dict[str, tuple]] = [{f"v{i}": () for i in range(rng.randint(1, min(cfg.max_vertices, cfg.max_cells)))}]
    for l in range(1, cfg.max_dim + 1):
        counts = [len(layer) for layer in nd] + [0]
        # w new l-cells add w * C(k, l) cells in degree k
        room = min((cfg.max_cells - ez_count(counts, k)) // len(surjections(k, l)) for k in range(l, cfg.level + 1))
        want = rng.randint(0, max(0, room))
        layer: dict[str, tuple] = {}
        if want:
            x = ez_simplicial_set(nd, l - 1)
            opts = boundary_options(x, l)
            for t in range(want if opts else 0):
                layer[f"{'ef'[l - 1] if l <= 2 else 'c' + str(l)}{t}"] = rng.choice(opts)
        nd.append(layer)
    while len(nd) > 1 and not nd[-1]:
        nd.pop()
    return ez_simplicial_set(nd, cfg.level)


def small_simplicial_sets(max_nondegenerate: int = 4, max_dim: int = 2, level: int | None = None
                          ) -> list[TruncatedSimplicialSet]:
    """Exhaustive list of simplicial sets with at most ``max_nondegenerate`` nondegenerate cells.

    Cells are added in a canonical order (faces chosen as a multiset per
    degree), so relabelings of the same face data are listed once, though
    isomorphic results may still repeat.
    """
    level = max_dim if level is None else level
    out: list[TruncatedSimplicialSet] = []

    def rec(nd: list[dict], used: int) -> None:
        l = len(nd)
        if l > max_dim:
            out.append(ez_simplicial_set(nd, level))
            return
        opts = boundary_options(ez_simplicial_set(nd, l - 1), l)
        letter = "ef"[l - 1] if l <= 2 else f"c{l}"
        for m in range(0, max_nondegenerate - used + 1):
            for combo in itertools.combinations_with_replacement(range(len(opts)), m):
                rec(nd + [{f"{letter}{t}": opts[o] for t, o in enumerate(combo)}], used + m)

    for v in range(1, max_nondegenerate + 1):
        rec([{f"v{i}": () for i in range(v)}], v)
    return out


# finite-set maps --------------------------------------------------------------------


def all_surjections(m: int, k: int) -> list[SetMap]:
    """Every surjection ``{0..m-1} -> {0..k-1}``."""
    src, tgt = tuple(range(m)), tuple(range(k))
    return [SetMap(src, tgt, dict(enumerate(v))) for v in itertools.product(tgt, repeat=m) if len(set(v)) == k]


def fiber_constant_map(d: int, ny: int) -> SetMap:
    """The projection ``Y x {0..d-1} -> Y`` with ``|Y| = ny``: every fiber has ``d`` points."""
    src = tuple((y, a) for y in range(ny) for a in range(d))
    return SetMap(src, tuple(range(ny)), {c: c[0] for c in src})


def random_set_map(rng: random.Random, m: int, k: int) -> SetMap:
    return SetMap(tuple(range(m)), tuple(range(k)), {i: rng.randrange(k) for i in range(m)})


def random_surjection(rng: random.Random, m: int, k: int) -> SetMap:
    if m < k:
        raise ValueError(f"no surjection from {m} points onto {k}")
    while True:
        f = random_set_map(rng, m, k)
        if f.is_surjective():
            return f


# hypercovers ----------------------------------------------------------------------


@dataclass(frozen=True)
class HypercoverConfig:
    level: int = 3
    base: SimplicialSetConfig = SimplicialSetConfig(level=3, max_cells=4, max_dim=2, max_vertices=2)
    max_fiber: int = 2
    max_duplicates: int = 2


def duplicate_edges(f: SimplicialMap, names: Iterable[Cell]) -> SimplicialMap:
    """Add a parallel copy of each listed 1-cell of a 1-truncated ``f.source`` (same faces, same image)."""
    x = f.source
    if x.level != 1:
        raise ValueError("edge duplication works on 1-truncated objects")
    extra = [(c, f"{c}'") for c in names]
    cells = [x.cells[0], x.cells[1] + tuple(n for _, n in extra)]
    faces = {k: {**v, **{n: v[c] for c, n in extra}} for k, v in x.faces.items()}
    src = TruncatedSimplicialSet(cells, faces, x.degeneracies)
    comps = [f.components[0], {**f.components[1], **{n: f.components[1][c] for c, n in extra}}]
    return SimplicialMap(src, f.target, comps)


def random_hypercover(rng: random.Random, cfg: HypercoverConfig = HypercoverConfig()) -> SimplicialMap:
    """A hypercover ``X -> Y`` for a random ``Y``.

    Degree 0 is a random surjection onto ``Y_0``, degree 1 is the relative
    0-coskeleton with some nondegenerate edges doubled, and higher degrees are
    filled in by the relative 1-coskeleton, so the comparison maps are
    surjective in degrees 0 and 1 and bijective above.
    """
    y = random_simplicial_set(rng, cfg.base)
    sizes = [rng.randint(1, cfg.max_fiber) for _ in y.cells[0]]
    if max(sizes) == 1 and cfg.max_fiber > 1:
        sizes[rng.randrange(len(sizes))] = 2  # avoid the identity hypercover
    pts = [(v, a) for v, s in zip(y.cells[0], sizes) for a in range(s)]
    x0 = TruncatedSimplicialSet([tuple(pts)])
    f0 = SimplicialMap(x0, y, [{p: p[0] for p in pts}])
    f1 = sp.relative_cosk(f0, 0, 1)
    degenerate = set(f1.source.degeneracies[(1, 0)].values())
    edges = [c for c in f1.source.cells[1] if c not in degenerate]
    dup = rng.sample(edges, min(len(edges), rng.randint(0, cfg.max_duplicates)))
    f1 = duplicate_edges(f1, dup)
    f1 = SimplicialMap(f1.source, y, f1.components)  # keep the base through the full level
    return sp.relative_cosk(f1, 1, cfg.level)


# homotopy instances --------------------------------------------------------------


def random_cosk0_pair(rng: random.Random, max_size: int = 3) -> tuple[SetMap, SetMap]:
    m, k = rng.randint(1, max_size), rng.randint(1, max_size)
    return random_set_map(rng, m, k), random_set_map(rng, m, k)


def random_coskn_pair(rng: random.Random, n: int, cfg: SimplicialSetConfig = SimplicialSetConfig(level=2)
                      ) -> tuple[SimplicialMap, SimplicialMap] | None:
    """Two maps ``X -> Y`` of random simplicial sets agreeing below degree ``n``, or None."""
    x, y = random_simplicial_set(rng, cfg), random_simplicial_set(rng, cfg)
    maps = sp.hom_delta(x, y)
    if not maps:
        return None
    f0 = rng.choice(maps)
    low = [dict(c) for c in f0.components[:n]]
    peers = [g for g in maps if [dict(c) for c in g.components[:n]] == low]
    return f0, rng.choice(peers)


# motive complexes ------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexConfig:
    max_dim: int = 5  # summands per degree
    max_length: int = 5  # number of degrees
    lo: int = 0
    max_coefficient: int = 2
    density: float = 0.5


def _random_combo(rng: random.Random, cat: PresentedQCategory, obj: str, cfg: ComplexConfig) -> dict[str, Fraction]:
    basis = cat.hom_basis(obj, obj)
    out = {}
    for m in basis:
        if rng.random() < cfg.density:
            c = rng.randint(-cfg.max_coefficient, cfg.max_coefficient)
            if c:
                out[m] = Fraction(c)
    return out


def random_endo_combo(rng, cat, obj, cfg=ComplexConfig()) -> dict[str, Fraction]:
    return _random_combo(rng, cat, obj, cfg)


def _unitriangular(rng, cat, obj: AdditiveObject, cfg: ComplexConfig, upper: bool) -> MotiveMorphism:
    n = len(obj)
    ident = cat.identities[obj.summands[0]] if n else None
    blocks = {(i, i): {ident: Fraction(1)} for i in range(n)}
    for i, j in itertools.product(range(n), repeat=2):
        if (i < j if upper else i > j) and rng.random() < cfg.density:
            c = _random_combo(rng, cat, obj.summands[0], cfg)
            if c:
                blocks[(i, j)] = c
    return MotiveMorphism(cat, obj, obj, blocks)


def _nilpotent_inverse(u: MotiveMorphism) -> MotiveMorphism:
    """Inverse of ``1 + n`` with ``n`` strictly triangular: ``sum (-n)^k``."""
    one = MotiveMorphism.identity(u.category, u.source)
    neg = one - u
    out, power = one, one
    for _ in range(len(u.source)):
        power = power @ neg
        out = out + power
    return out


def _permutation(cat, obj: AdditiveObject, perm: Sequence[int]) -> MotiveMorphism:
    ident = cat.identities[obj.summands[0]] if len(obj) else None
    return MotiveMorphism._trusted(cat, obj, obj, {(perm[j], j): {ident: Fraction(1)} for j in range(len(obj))})


def random_basis_change(rng, cat, obj: AdditiveObject, cfg: ComplexConfig) -> tuple[MotiveMorphism, MotiveMorphism]:
    """A random automorphism ``P L U`` of ``obj^n`` and its inverse."""
    n = len(obj)
    perm = list(range(n))
    rng.shuffle(perm)
    inv_perm = [0] * n
    for j, p in enumerate(perm):
        inv_perm[p] = j
    lo, up = _unitriangular(rng, cat, obj, cfg, False), _unitriangular(rng, cat, obj, cfg, True)
    p, pinv = _permutation(cat, obj, perm), _permutation(cat, obj, inv_perm)
    return p @ lo @ up, _nilpotent_inverse(up) @ _nilpotent_inverse(lo) @ pinv


def random_complex(rng: random.Random, cat: PresentedQCategory | None = None, obj: str | None = None,
                   cfg: ComplexConfig = ComplexConfig()) -> wt.MotiveComplex:
    """A random bounded complex of copies of ``obj``.

    It starts as a sum of single terms and contractible pairs (``obj`` mapped
    by an invertible scalar) and is then conjugated degreewise by random
    automorphisms, so its differentials are dense but ``d o d = 0`` holds.
    """
    cat = mo.scalar_category() if cat is None else cat
    obj = cat.objects[0] if obj is None else obj
    ident = cat.identities[obj]
    length = rng.randint(1, cfg.max_length)
    dims = [0] * length
    pairs = []  # (n, index in C_n, index in C_{n-1}, scalar)
    for n in range(1, length):
        for _ in range(rng.randint(0, 2)):
            if dims[n] < cfg.max_dim and dims[n - 1] < cfg.max_dim:
                pairs.append((n, dims[n], dims[n - 1], Fraction(rng.choice([1, -1, 2, Fraction(1, 2)]))))
                dims[n] += 1
                dims[n - 1] += 1
    for n in range(length):
        dims[n] += rng.randint(0, cfg.max_dim - dims[n])
    terms = [AdditiveObject((obj,) * k) for k in dims]
    diffs = {}
    for n in range(1, length):
        blocks = {(t, s): {ident: lam} for m, s, t, lam in pairs if m == n}
        diffs[n] = MotiveMorphism._trusted(cat, terms[n], terms[n - 1], blocks)
    changes = [_change(rng, cat, t, cfg) for t in terms]
    conj = {n: changes[n - 1][0] @ d @ changes[n][1] for n, d in diffs.items()}
    return wt.MotiveComplex(cat, cfg.lo, terms, conj)


def _change(rng, cat, obj: AdditiveObject, cfg: ComplexConfig):
    if not len(obj):
        z = MotiveMorphism.zero(cat, obj, obj)
        return z, z
    return random_basis_change(rng, cat, obj, cfg)


def random_homotopy(rng, source: wt.MotiveComplex, target: wt.MotiveComplex, cfg: ComplexConfig = ComplexConfig()
                    ) -> dict[int, MotiveMorphism]:
    """Random degree +1 maps ``h_n: S_n -> T_{n+1}`` between complexes of copies of one object."""
    cat = source.category
    out = {}
    for n in source.degrees:
        s, t = source.term(n).carrier, target.term(n + 1).carrier
        blocks = {}
        for i, j in itertools.product(range(len(t)), range(len(s))):
            if rng.random() < cfg.density:
                c = _random_combo(rng, cat, s.summands[j], cfg) if s.summands[j] == t.summands[i] else {}
                if c:
                    blocks[(i, j)] = c
        out[n] = MotiveMorphism(cat, s, t, blocks)
    return out


def random_chain_map(rng: random.Random, cat: PresentedQCategory | None = None, obj: str | None = None,
                     cfg: ComplexConfig = ComplexConfig()) -> wt.MotiveChainMap:
    """A random ``t: T -> X`` with ``X = T + R``: the inclusion plus a null-homotopic term ``d h + h d``."""
    cat = mo.scalar_category() if cat is None else cat
    obj = cat.objects[0] if obj is None else obj
    T = random_complex(rng, cat, obj, cfg)
    R = random_complex(rng, cat, obj, ComplexConfig(cfg.max_dim, T.hi - T.lo + 1, T.lo, cfg.max_coefficient,
                                                    cfg.density))
    lo, hi = T.lo, max(T.hi, R.hi)
    terms, diffs = [], {}
    for n in range(lo, hi + 1):
        terms.append(T.term(n).carrier + R.term(n).carrier)
    for n in range(lo + 1, hi + 1):
        diffs[n] = mo.block_morphism(cat, [[T.d(n), None], [None, R.d(n)]],
                                     [T.term(n - 1).carrier, R.term(n - 1).carrier],
                                     [T.term(n).carrier, R.term(n).carrier])
    X = wt.MotiveComplex(cat, lo, terms, diffs)
    h = random_homotopy(rng, T, X, cfg)
    comps = {}
    for n in T.degrees:
        inc = mo.block_morphism(cat, [[MotiveMorphism.identity(cat, T.term(n).carrier)],
                                      [MotiveMorphism.zero(cat, T.term(n).carrier, R.term(n).carrier)]],
                                [T.term(n).carrier, R.term(n).carrier], [T.term(n).carrier])
        dh = X.d(n + 1) @ h[n]
        hd = h[n - 1] @ T.d(n) if n - 1 in h else MotiveMorphism.zero(cat, T.term(n).carrier, X.term(n).carrier)
        comps[n] = inc + dh + hd
    return wt.MotiveChainMap(T, X, comps)


# groups and permutation realizations ----------------------------------------------


def subgroups(g: mo.FiniteGroup) -> list[tuple[str, ...]]:
    """All subgroups, as sorted element tuples (brute force over subsets; small groups only)."""
    els = g.elements
    out = []
    for r in range(1, len(els) + 1):
        for s in itertools.combinations(els, r):
            ss = set(s)
            if g.identity in ss and all(g.mul[(a, b)] in ss for a in s for b in s):
                out.append(s)
    return out


def coset_permutations(g: mo.FiniteGroup, h: Sequence[str]) -> dict[str, list[int]]:
    """Left multiplication on ``G/H`` as permutations of the coset indices."""
    cosets: list[frozenset[str]] = []
    for x in g.elements:
        c = frozenset(g.mul[(x, y)] for y in h)
        if c not in cosets:
            cosets.append(c)
    index = {x: i for i, c in enumerate(cosets) for x in c}
    return {a: [index[g.mul[(a, next(iter(c)))]] for c in cosets] for a in g.elements}


def sum_permutations(*perms: Mapping[str, Sequence[int]]) -> dict[str, list[int]]:
    """Disjoint union of permutation actions."""
    out: dict[str, list[int]] = {}
    for g in perms[0]:
        row, off = [], 0
        for p in perms:
            row += [off + v for v in p[g]]
            off += len(p[g])
        out[g] = row
    return out


def permutation_actions(g: mo.FiniteGroup, max_dim: int = 6) -> dict[str, dict[str, list[int]]]:
    """Each transitive action ``G/H`` plus sums of two of them, all of dimension <= ``max_dim``."""
    trans = []
    seen = set()
    for h in subgroups(g):
        p = coset_permutations(g, h)
        key = (len(h), tuple(sorted(tuple(v) for v in p.values())))
        if key not in seen and len(p[g.identity]) <= max_dim:
            seen.add(key)
            trans.append((f"G/{len(h)}", p))
    out = dict(trans)
    for (n1, p1), (n2, p2) in itertools.combinations_with_replacement(trans, 2):
        if len(p1[g.identity]) + len(p2[g.identity]) <= max_dim:
            out[f"{n1}+{n2}"] = sum_permutations(p1, p2)
    return out


def permutation_representations(g: mo.FiniteGroup, cat: PresentedQCategory, max_dim: int = 6,
                                obj: str = "X") -> list[mo.Realization]:
    """:func:`permutation_actions` as realizations of ``Q[G]``."""
    return [mo.permutation_realization(cat, g, p, name, obj) for name, p in permutation_actions(g, max_dim).items()]
