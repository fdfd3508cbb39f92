"""Weight complexes over a presented category: ``Gamma``, cones, triangles and quotient stacks.

Complexes have Karoubi objects as terms and :class:`MotiveMorphism`
differentials between the carriers.  Every statement about homology is made
after applying a :class:`Realization`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .motives import (AdditiveObject, CategoryError, GroupAction, K0Class, KaroubiObject, MotiveMorphism,
                      PresentedQCategory, Realization, average_projector, block_morphism, compose, k0_class)
from .qlinalg import ChainMap, QComplex, QMatrix, homology_dims, induced_homology_rank, inverse, rref


def _zero_obj() -> AdditiveObject:
    return AdditiveObject(())


# simplicial motives ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SimplicialMotive:
    """Degrees ``0..level``; ``faces[(n, i)]: X_n -> X_{n-1}``, ``degeneracies[(n, i)]: X_{n-1} -> X_n``."""

    category: PresentedQCategory
    components: tuple[AdditiveObject, ...]
    faces: Mapping[tuple[int, int], MotiveMorphism]
    degeneracies: Mapping[tuple[int, int], MotiveMorphism] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        problems = self.violations()
        if problems:
            raise CategoryError(f"simplicial identities fail: {problems[0]}")

    @property
    def level(self) -> int:
        return len(self.components) - 1

    def _typing(self) -> list[str]:
        out = []
        X = self.components
        for n in range(1, self.level + 1):
            for i in range(n + 1):
                m = self.faces.get((n, i))
                if m is None or m.source != X[n] or m.target != X[n - 1]:
                    out.append(f"d_{i} in degree {n} missing or mistyped")
            for i in range(n):
                m = self.degeneracies.get((n, i))
                if m is None or m.source != X[n - 1] or m.target != X[n]:
                    out.append(f"s_{i} into degree {n} missing or mistyped")
        return out

    def violations(self) -> list[str]:
        """Failed simplicial identities, checked as equalities of formal morphisms."""
        out = self._typing()
        if out:
            return out
        d = lambda n, i: self.faces[(n, i)]
        s = lambda n, i: self.degeneracies[(n, i)]
        ident = lambda n: MotiveMorphism.identity(self.category, self.components[n])
        for n in range(2, self.level + 1):
            for j in range(n + 1):
                for i in range(j):
                    if compose(d(n - 1, i), d(n, j)) != compose(d(n - 1, j - 1), d(n, i)):
                        out.append(f"d_i d_j = d_(j-1) d_i fails in degree {n} (i={i}, j={j})")
        for n in range(1, self.level + 1):
            # s_j: X_{n-1} -> X_n
            for j in range(n):
                for i in range(n + 1):
                    lhs = compose(d(n, i), s(n, j))
                    if i < j:
                        rhs = compose(s(n - 1, j - 1), d(n - 1, i))
                    elif i in (j, j + 1):
                        rhs = ident(n - 1)
                    else:
                        rhs = compose(s(n - 1, j), d(n - 1, i - 1))
                    if lhs != rhs:
                        out.append(f"face/degeneracy identity fails in degree {n} (i={i}, j={j})")
                if n + 1 <= self.level:
                    for i in range(j + 1):
                        if compose(s(n + 1, i), s(n, j)) != compose(s(n + 1, j + 1), s(n, i)):
                            out.append(f"s_i s_j = s_(j+1) s_i fails in degree {n + 1} (i={i}, j={j})")
        return out


@dataclass(frozen=True, eq=False)
class SimplicialMotiveMap:
    source: SimplicialMotive
    target: SimplicialMotive
    components: Mapping[int, MotiveMorphism]

    def __post_init__(self):
        bad = self.violations()
        if bad:
            raise CategoryError(f"not a map of simplicial motives: {bad[0]}")

    def violations(self) -> list[str]:
        X, Y = self.source, self.target
        if X.level != Y.level:
            return ["source and target have different levels"]
        out = []
        for n in range(X.level + 1):
            f = self.components.get(n)
            if f is None or f.source != X.components[n] or f.target != Y.components[n]:
                out.append(f"component {n} missing or mistyped")
        if out:
            return out
        f = self.components
        for n in range(1, X.level + 1):
            for i in range(n + 1):
                if compose(Y.faces[(n, i)], f[n]) != compose(f[n - 1], X.faces[(n, i)]):
                    out.append(f"f d_{i} != d_{i} f in degree {n}")
            for i in range(n):
                if compose(Y.degeneracies[(n, i)], f[n - 1]) != compose(f[n], X.degeneracies[(n, i)]):
                    out.append(f"f s_{i} != s_{i} f in degree {n}")
        return out


def constant_simplicial_motive(cat: PresentedQCategory, obj: AdditiveObject, N: int) -> SimplicialMotive:
    ident = MotiveMorphism.identity(cat, obj)
    faces = {(n, i): ident for n in range(1, N + 1) for i in range(n + 1)}
    degens = {(n, i): ident for n in range(1, N + 1) for i in range(n)}
    return SimplicialMotive(cat, (obj,) * (N + 1), faces, degens)


def _table_morphism(cat, src: AdditiveObject, tgt: AdditiveObject, pairs: Iterable[tuple[int, int]],
                    block: Mapping[int, MotiveMorphism] | None = None, m: int = 1) -> MotiveMorphism:
    """Block morphism putting copies of an ``m``-summand morphism at block positions ``(row, col)``."""
    blocks = {}
    for r, c, *rest in pairs:
        piece = rest[0] if rest else None
        if piece is None:
            for t in range(m):
                blocks[(r * m + t, c * m + t)] = {cat.identities[src.summands[c * m + t]]: Fraction(1)}
        else:
            for (a, b), combo in piece.blocks.items():
                blocks[(r * m + a, c * m + b)] = dict(combo)
    return MotiveMorphism._trusted(cat, src, tgt, blocks)


def simplicial_motive_of(x, cat: PresentedQCategory, obj: str | None = None) -> SimplicialMotive:
    """The simplicial finite set ``x`` with each cell replaced by a copy of ``obj``."""
    obj = cat.objects[0] if obj is None else obj
    comps = [AdditiveObject((obj,) * len(c)) for c in x.cells]
    idx = [{c: k for k, c in enumerate(cells)} for cells in x.cells]
    faces, degens = {}, {}
    for n in range(1, x.level + 1):
        for i in range(n + 1):
            faces[(n, i)] = _table_morphism(cat, comps[n], comps[n - 1],
                                            [(idx[n - 1][x.face(n, i, c)], k) for k, c in enumerate(x.cells[n])])
        for i in range(n):
            degens[(n, i)] = _table_morphism(cat, comps[n - 1], comps[n],
                                             [(idx[n][x.degen(n, i, c)], k) for k, c in enumerate(x.cells[n - 1])])
    return SimplicialMotive(cat, tuple(comps), faces, degens)


def bar_simplicial_motive(a: GroupAction, N: int) -> SimplicialMotive:
    """``(X x EG)/G`` through degree ``N``: degree ``k`` is ``X`` summed over ``G^k`` in lexicographic order.

    ``d_0`` applies ``act(g_1)`` and drops ``g_1``, ``d_i`` replaces
    ``g_i, g_{i+1}`` by the composite ``g_{i+1} g_i`` and ``d_k`` drops ``g_k``.
    """
    G, cat, X = a.group, a.category, a.carrier
    m = len(X)
    els = G.elements
    tuples = [list(itertools.product(els, repeat=k)) for k in range(N + 1)]
    index = [{t: r for r, t in enumerate(ts)} for ts in tuples]
    comps = [AdditiveObject(X.summands * len(ts)) for ts in tuples]
    faces, degens = {}, {}
    for k in range(1, N + 1):
        for i in range(k + 1):
            pairs = []
            for c, t in enumerate(tuples[k]):
                if i == 0:
                    pairs.append((index[k - 1][t[1:]], c, a.act[t[0]]))
                elif i == k:
                    pairs.append((index[k - 1][t[:-1]], c))
                else:
                    merged = t[:i - 1] + (G.mul[(t[i], t[i - 1])],) + t[i + 1:]
                    pairs.append((index[k - 1][merged], c))
            faces[(k, i)] = _table_morphism(cat, comps[k], comps[k - 1], pairs, m=m)
        for i in range(k):
            pairs = [(index[k][t[:i] + (G.identity,) + t[i:]], c) for c, t in enumerate(tuples[k - 1])]
            degens[(k, i)] = _table_morphism(cat, comps[k - 1], comps[k], pairs, m=m)
    return SimplicialMotive(cat, tuple(comps), faces, degens)


# complexes ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MotiveComplex:
    """Terms in degrees ``lo..lo+len(terms)-1``; ``differentials[n]: C_n -> C_{n-1}`` on carriers."""

    category: PresentedQCategory
    lo: int
    terms: tuple[KaroubiObject, ...]
    differentials: Mapping[int, MotiveMorphism] = field(default_factory=dict)

    def __post_init__(self):
        terms = tuple(KaroubiObject.plain(self.category, t) if isinstance(t, AdditiveObject) else t
                      for t in self.terms)
        object.__setattr__(self, "terms", terms)
        for n, d in self.differentials.items():
            if not self.lo < n <= self.hi:
                raise CategoryError(f"differential d_{n} outside degrees {self.lo + 1}..{self.hi}")
            if d.source != self.term(n).carrier or d.target != self.term(n - 1).carrier:
                raise CategoryError(f"d_{n} is mistyped")
            if not (self.term(n).is_plain() and self.term(n - 1).is_plain()):
                if compose(self.term(n - 1).idempotent, compose(d, self.term(n).idempotent)) != d:
                    raise CategoryError(f"d_{n} is not a morphism of Karoubi objects")
        bad = self.square_nonzero()
        if bad:
            raise CategoryError(f"d o d != 0 in degrees {bad}")

    @classmethod
    def _trusted(cls, cat, lo, terms, differentials) -> "MotiveComplex":
        c = object.__new__(cls)
        for k, v in (("category", cat), ("lo", lo), ("terms", tuple(terms)), ("differentials", differentials)):
            object.__setattr__(c, k, v)
        return c

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, n: int) -> KaroubiObject:
        if self.lo <= n <= self.hi:
            return self.terms[n - self.lo]
        return KaroubiObject.plain(self.category, _zero_obj())

    def d(self, n: int) -> MotiveMorphism:
        m = self.differentials.get(n)
        if m is not None:
            return m
        return MotiveMorphism.zero(self.category, self.term(n).carrier, self.term(n - 1).carrier)

    def square_nonzero(self) -> list[int]:
        return [n for n in range(self.lo + 2, self.hi + 1) if not compose(self.d(n - 1), self.d(n)).is_zero()]

    def shift(self, k: int = 1) -> "MotiveComplex":
        """``C[k]_n = C_{n-k}`` with differential ``(-1)^k d``."""
        sign = -1 if k % 2 else 1
        return MotiveComplex(self.category, self.lo + k, self.terms,
                             {n + k: d.scale(sign) for n, d in self.differentials.items()})

    def sizes(self) -> dict[int, int]:
        return {n: len(self.term(n).carrier) for n in self.degrees}


@dataclass(frozen=True, eq=False)
class MotiveChainMap:
    source: MotiveComplex
    target: MotiveComplex
    components: Mapping[int, MotiveMorphism]

    def __post_init__(self):
        for n, f in self.components.items():
            if f.source != self.source.term(n).carrier or f.target != self.target.term(n).carrier:
                raise CategoryError(f"component {n} is mistyped")
        bad = self.non_commuting_degrees()
        if bad:
            raise CategoryError(f"not a chain map: d f != f d in degrees {bad}")

    @property
    def category(self) -> PresentedQCategory:
        return self.source.category

    def f(self, n: int) -> MotiveMorphism:
        m = self.components.get(n)
        if m is not None:
            return m
        return MotiveMorphism.zero(self.category, self.source.term(n).carrier, self.target.term(n).carrier)

    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def non_commuting_degrees(self) -> list[int]:
        S, T = self.source, self.target
        return [n for n in range(min(S.lo, T.lo), max(S.hi, T.hi) + 2)
                if compose(T.d(n), self.f(n)) != compose(self.f(n - 1), S.d(n))]

    def then(self, g: "MotiveChainMap") -> "MotiveChainMap":
        """``g o self``."""
        return MotiveChainMap(self.source, g.target, {n: compose(g.f(n), self.f(n)) for n in self.degrees()})


def identity_chain_map(c: MotiveComplex) -> MotiveChainMap:
    return MotiveChainMap(c, c, {n: MotiveMorphism.identity(c.category, c.term(n).carrier) for n in c.degrees})


def zero_complex(cat: PresentedQCategory, lo: int = 0) -> MotiveComplex:
    return MotiveComplex(cat, lo, (KaroubiObject.plain(cat, _zero_obj()),))


def gamma(x: SimplicialMotive) -> MotiveComplex:
    """Degrees ``0..N`` with ``d_n = sum_i (-1)^i d_i``."""
    diffs = {}
    for n in range(1, x.level + 1):
        d = MotiveMorphism.zero(x.category, x.components[n], x.components[n - 1])
        for i in range(n + 1):
            f = x.faces[(n, i)]
            d = d + (f if i % 2 == 0 else -f)
        diffs[n] = d
    return MotiveComplex(x.category, 0, tuple(KaroubiObject.plain(x.category, c) for c in x.components), diffs)


def gamma_map(f: SimplicialMotiveMap) -> MotiveChainMap:
    return MotiveChainMap(gamma(f.source), gamma(f.target), dict(f.components))


def cone(f: MotiveChainMap) -> MotiveComplex:
    """``cone(f)_n = Y_n + X_{n-1}`` with ``d = [[d_Y, f], [0, -d_X]]``."""
    cat, X, Y = f.category, f.source, f.target
    lo, hi = min(Y.lo, X.lo + 1), max(Y.hi, X.hi + 1)
    terms = [Y.term(n) + X.term(n - 1) for n in range(lo, hi + 1)]
    diffs = {}
    for n in range(lo + 1, hi + 1):
        ys, xs = Y.term(n).carrier, X.term(n - 1).carrier
        yt, xt = Y.term(n - 1).carrier, X.term(n - 2).carrier
        d = block_morphism(cat, [[Y.d(n), f.f(n - 1)], [None, -X.d(n - 1)]], [yt, xt], [ys, xs])
        if not d.is_zero():
            diffs[n] = d
    return MotiveComplex(cat, lo, tuple(terms), diffs)


def _inclusion(cat, first: AdditiveObject, second: AdditiveObject, which: int, into: bool) -> MotiveMorphism:
    """Inclusion of (or projection onto) summand ``which`` of ``first + second``."""
    part = first if which == 0 else second
    ident = MotiveMorphism.identity(cat, part)
    if into:
        rows = [[ident], [None]] if which == 0 else [[None], [ident]]
        return block_morphism(cat, rows, [first, second], [part])
    row = [[ident, None]] if which == 0 else [[None, ident]]
    return block_morphism(cat, row, [part], [first, second])


@dataclass(frozen=True, eq=False)
class Triangle:
    """``T -t-> X -i-> U -delta-> T[1]`` with ``U = cone(t)``."""

    T: MotiveComplex
    X: MotiveComplex
    U: MotiveComplex
    t: MotiveChainMap
    i: MotiveChainMap
    delta: MotiveChainMap

    def shifted_t(self) -> MotiveChainMap:
        """``t[1]: T[1] -> X[1]``."""
        return MotiveChainMap(self.T.shift(1), self.X.shift(1), {n + 1: m for n, m in self.t.components.items()})

    def verify(self, realizations: Sequence[Realization]) -> "TriangleReport":
        composites = {"i.t": self.t.then(self.i), "delta.i": self.i.then(self.delta),
                      "t[1].delta": self.delta.then(self.shifted_t())}
        ranks = {}
        for r in realizations:
            ranks[r.name] = {name: {n: induced_homology_rank(realize_chain_map(m, r), n) for n in m.degrees()}
                             for name, m in composites.items()}
        chi = {r.name: (euler_char(self.X, [r]).realized_rank[r.name],
                        euler_char(self.T, [r]).realized_rank[r.name],
                        euler_char(self.U, [r]).realized_rank[r.name]) for r in realizations}
        return TriangleReport(ranks, chi)


@dataclass(frozen=True)
class TriangleReport:
    composite_ranks: Mapping[str, Mapping[str, Mapping[int, int]]]
    euler: Mapping[str, tuple[int, int, int]]  # (chi X, chi T, chi U)

    @property
    def ok(self) -> bool:
        vanish = all(v == 0 for per in self.composite_ranks.values() for m in per.values() for v in m.values())
        return vanish and all(x == t + u for x, t, u in self.euler.values())

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "composite_ranks": {r: {k: {str(n): v for n, v in sorted(m.items())} for k, m in per.items()}
                                for r, per in sorted(self.composite_ranks.items())},
            "euler": {r: {"X": x, "T": t, "U": u} for r, (x, t, u) in sorted(self.euler.items())},
        }


def triangle(t_incl: MotiveChainMap, x: MotiveComplex | None = None) -> Triangle:
    """Complete ``t: T -> X`` to ``T -> X -> cone(t) -> T[1]``."""
    if x is not None and x is not t_incl.target:
        raise CategoryError("the map must land in the given complex")
    cat, T, X = t_incl.category, t_incl.source, t_incl.target
    U = cone(t_incl)
    inc, proj = {}, {}
    for n in U.degrees:
        xs, ts = X.term(n).carrier, T.term(n - 1).carrier
        inc[n] = _inclusion(cat, xs, ts, 0, True)
        proj[n] = _inclusion(cat, xs, ts, 1, False)
    i = MotiveChainMap(X, U, {n: inc[n] for n in X.degrees})
    delta = MotiveChainMap(U, T.shift(1), proj)
    return Triangle(T, X, U, t_incl, i, delta)


def bar_quotient(a: GroupAction, N: int) -> MotiveComplex:
    return gamma(bar_simplicial_motive(a, N))


def invariants_motive(a: GroupAction) -> KaroubiObject:
    return average_projector(a)


def euler_char(c: MotiveComplex, realizations: Iterable[Realization]) -> K0Class:
    realizations = list(realizations)
    out = K0Class((), {r.name: 0 for r in realizations})
    for n in c.degrees:
        out = out + k0_class(c.term(n), realizations, -1 if n % 2 else 1)
    return out


# realization of complexes ---------------------------------------------------------


@dataclass(frozen=True)
class _Image:
    basis: QMatrix  # dim(carrier) x rank, columns spanning im(e)
    coords: QMatrix  # rank x dim(carrier), left inverse of basis


def _image(k: KaroubiObject, r: Realization) -> _Image | None:
    if k.is_plain():
        return None
    e = r.realize(k.idempotent)
    _, piv = rref(e)
    b = e.submatrix(range(e.rows), piv)
    _, rows = rref(b.T)
    square = b.submatrix(rows, range(b.cols))
    select = QMatrix(len(rows), b.rows, {t: {row: 1} for t, row in enumerate(rows)})
    return _Image(b, inverse(square) @ select)


def _restrict(m: QMatrix, src: _Image | None, tgt: _Image | None) -> QMatrix:
    if src is not None:
        m = m @ src.basis
    if tgt is not None:
        m = tgt.coords @ m
    return m


@dataclass(frozen=True)
class RealizedComplex:
    complex: QComplex
    images: Mapping[int, _Image | None]


def _realize(c: MotiveComplex, r: Realization) -> RealizedComplex:
    images = {n: _image(c.term(n), r) for n in c.degrees}
    dims = [c.term(n).realized_rank(r) for n in c.degrees]
    diffs = {n: _restrict(r.realize(d), images[n], images[n - 1]) for n, d in c.differentials.items()}
    return RealizedComplex(QComplex(c.lo, dims, diffs), images)


def realize_complex(c: MotiveComplex, r: Realization) -> QComplex:
    """The complex of images ``im(r(e_n))`` with the induced differentials."""
    return _realize(c, r).complex


def realize_chain_map(f: MotiveChainMap, r: Realization) -> ChainMap:
    s, t = _realize(f.source, r), _realize(f.target, r)
    comps = {n: _restrict(r.realize(f.f(n)), s.images.get(n), t.images.get(n)) for n in f.degrees()}
    return ChainMap(s.complex, t.complex, comps)


def realized_homology(c: MotiveComplex, r: Realization) -> dict[int, int]:
    return homology_dims(realize_complex(c, r))


# reduction ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cancellation:
    """Cancel summand ``source`` of ``C_degree`` against summand ``target`` of ``C_{degree-1}``."""

    degree: int
    source: int
    target: int
    obj: str
    scalar: Fraction

    def to_json(self) -> dict:
        return {"degree": self.degree, "source": self.source, "target": self.target, "object": self.obj,
                "scalar": str(self.scalar)}


@dataclass(frozen=True)
class ReductionResult:
    reduced: MotiveComplex
    log: tuple[Cancellation, ...]
    realization: str
    dims_before: Mapping[int, int]
    dims_after: Mapping[int, int]
    homology_before: Mapping[int, int]
    homology_after: Mapping[int, int]

    @property
    def ok(self) -> bool:
        return dict(self.homology_before) == dict(self.homology_after)

    def to_json(self) -> dict:
        js = lambda m: {str(n): v for n, v in sorted(m.items())}
        return {"realization": self.realization, "dims_before": js(self.dims_before),
                "dims_after": js(self.dims_after), "homology": js(self.homology_after),
                "homology_before": js(self.homology_before), "cancellations": len(self.log),
                "log": [c.to_json() for c in self.log]}


def _scalar_identity(cat: PresentedQCategory, obj: str, combo: Mapping[str, Fraction]) -> Fraction | None:
    if len(combo) == 1:
        (m, v), = combo.items()
        if m == cat.identities[obj]:
            return v
    return None


def _find_cancellation(c: MotiveComplex) -> Cancellation | None:
    cat = c.category
    for n in sorted(c.differentials):
        if not (c.term(n).is_plain() and c.term(n - 1).is_plain()):
            continue
        d = c.differentials[n]
        for (i, j), combo in sorted(d.blocks.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            obj = d.source.summands[j]
            lam = _scalar_identity(cat, obj, combo) if d.target.summands[i] == obj else None
            if lam is not None:
                return Cancellation(n, j, i, obj, lam)
    return None


def _drop(obj: AdditiveObject, k: int) -> AdditiveObject:
    return AdditiveObject(obj.summands[:k] + obj.summands[k + 1:])


def _reindex(k: int, gone: int) -> int:
    return k - 1 if k > gone else k


def cancel(c: MotiveComplex, step: Cancellation) -> MotiveComplex:
    """One Gaussian elimination: ``d_n' = eps - gamma phi^-1 delta`` on the remaining summands.

    The result is not re-validated; :func:`reduce_abstract` and :func:`replay` check the end product.
    """
    cat, n, j, i = c.category, step.degree, step.source, step.target
    d = c.d(n)
    if d.blocks.get((i, j)) != {cat.identities[step.obj]: step.scalar}:
        raise CategoryError(f"block ({i},{j}) of d_{n} is not {step.scalar} times an identity")
    inv = 1 / step.scalar
    src, tgt = _drop(d.source, j), _drop(d.target, i)
    gam = {r: b for (r, col), b in d.blocks.items() if col == j and r != i}
    dlt = {col: b for (r, col), b in d.blocks.items() if r == i and col != j}
    blocks: dict[tuple[int, int], dict[str, Fraction]] = {}
    for (r, col), b in d.blocks.items():
        if r != i and col != j:
            blocks[(_reindex(r, i), _reindex(col, j))] = dict(b)
    for r, gb in gam.items():
        for col, db in dlt.items():
            key = (_reindex(r, i), _reindex(col, j))
            acc = blocks.setdefault(key, {})
            for m, v in cat.compose_combo(gb, db).items():
                s = acc.get(m, 0) - inv * v
                if s:
                    acc[m] = s
                else:
                    acc.pop(m)
            if not acc:
                del blocks[key]
    diffs = dict(c.differentials)
    diffs[n] = MotiveMorphism._trusted(cat, src, tgt, blocks)
    if n + 1 in diffs:
        up = diffs[n + 1]
        diffs[n + 1] = MotiveMorphism._trusted(cat, up.source, src, {(_reindex(r, j), col): b for (r, col), b
                                                                     in up.blocks.items() if r != j})
    if n - 1 in diffs:
        down = diffs[n - 1]
        diffs[n - 1] = MotiveMorphism._trusted(cat, tgt, down.target, {(r, _reindex(col, i)): b for (r, col), b
                                                                       in down.blocks.items() if col != i})
    terms = list(c.terms)
    terms[n - c.lo] = KaroubiObject.plain(cat, src)
    terms[n - 1 - c.lo] = KaroubiObject.plain(cat, tgt)
    return MotiveComplex._trusted(cat, c.lo, terms, {k: v for k, v in diffs.items() if not v.is_zero()})


def _checked(c: MotiveComplex) -> MotiveComplex:
    return MotiveComplex(c.category, c.lo, c.terms, c.differentials)


def reduce_abstract(c: MotiveComplex) -> tuple[MotiveComplex, tuple[Cancellation, ...]]:
    """Cancel until no differential has an invertible scalar identity block."""
    log = []
    while (step := _find_cancellation(c)) is not None:
        c = cancel(c, step)
        log.append(step)
    return _checked(c), tuple(log)


def replay(c: MotiveComplex, log: Iterable[Cancellation]) -> MotiveComplex:
    for step in log:
        c = cancel(c, step)
    return _checked(c)


def reduce(c: MotiveComplex, r: Realization) -> ReductionResult:
    """Cancel invertible scalar identity blocks, then report realized dims and homology."""
    before = realize_complex(c, r)
    red, log = reduce_abstract(c)
    after = realize_complex(red, r)
    dims = lambda q: {n: q.dim(n) for n in q.degrees}
    return ReductionResult(red, log, r.name, dims(before), dims(after), homology_dims(before), homology_dims(after))


# universal property ------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    degrees: tuple[int, ...]
    per_realization: Mapping[str, Mapping[int, tuple[int, int, int]]]  # (dim source, dim target, rank)

    @property
    def ok(self) -> bool:
        return all(a == b == k for per in self.per_realization.values() for a, b, k in per.values())

    def __bool__(self) -> bool:
        return self.ok

    def failing(self) -> dict[str, list[int]]:
        return {r: [n for n, (a, b, k) in per.items() if not a == b == k]
                for r, per in sorted(self.per_realization.items())}

    def to_json(self) -> dict:
        return {r: {str(n): {"source": a, "target": b, "rank": k, "iso": a == b == k}
                    for n, (a, b, k) in sorted(per.items())}
                for r, per in sorted(self.per_realization.items())}


def verify_universal_equivalence(g: SimplicialMotiveMap, f: SimplicialMotiveMap, a: SimplicialMotiveMap,
                                 b: SimplicialMotiveMap, realizations: Iterable[Realization],
                                 N: int | None = None) -> EquivalenceReport:
    """Square ``g: X -> Y``, ``f: Z -> W``, ``a: X -> Z``, ``b: Y -> W`` with ``b g = f a``.

    Checks that ``cone(Gamma g) -> cone(Gamma f)``, given by ``b`` and ``a``, is an
    isomorphism on realized homology in degrees ``< N``.
    """
    if a.source is not g.source or a.target is not f.source or b.source is not g.target or b.target is not f.target:
        raise CategoryError("maps do not form a square")
    level = g.source.level
    for n in range(level + 1):
        if compose(b.components[n], g.components[n]) != compose(f.components[n], a.components[n]):
            raise CategoryError(f"square does not commute in degree {n}")
    N = level if N is None else N
    cg, cf = cone(gamma_map(g)), cone(gamma_map(f))
    cat = cg.category
    comps = {}
    for n in cg.degrees:
        ys, xs = g.target.components, g.source.components
        ws, zs = f.target.components, f.source.components
        bn = b.components.get(n) if 0 <= n <= level else None
        an = a.components.get(n - 1) if 0 <= n - 1 <= level else None
        src_y = ys[n] if 0 <= n <= level else _zero_obj()
        src_x = xs[n - 1] if 0 <= n - 1 <= level else _zero_obj()
        tgt_w = ws[n] if 0 <= n <= level else _zero_obj()
        tgt_z = zs[n - 1] if 0 <= n - 1 <= level else _zero_obj()
        comps[n] = block_morphism(cat, [[bn, None], [None, an]], [tgt_w, tgt_z], [src_y, src_x])
    m = MotiveChainMap(cg, cf, comps)
    degrees = tuple(range(0, N))
    per = {}
    for r in realizations:
        fm = realize_chain_map(m, r)
        hs, ht = homology_dims(fm.source), homology_dims(fm.target)
        per[r.name] = {n: (hs.get(n, 0), ht.get(n, 0), induced_homology_rank(fm, n)) for n in degrees}
    return EquivalenceReport(degrees, per)
