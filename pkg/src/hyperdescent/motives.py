"""Finitely presented Q-linear categories, their additive and Karoubi completions.

A category is given by basis morphisms and a structure-constant table for
composition.  Morphisms between additive objects are sparse block matrices of
formal rational combinations of basis morphisms.  Realizations send basis
morphisms to rational matrices and serve as computable fibre functors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .qlinalg import QMatrix, as_rat, rank

Combo = Mapping[str, Fraction]


class CategoryError(ValueError):
    """A presentation or realization fails one of its laws."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


def _add_into(acc: dict[str, Fraction], combo: Combo, c: Fraction = Fraction(1)) -> None:
    for k, v in combo.items():
        s = acc.get(k, 0) + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def _clean(combo: Mapping[str, object]) -> dict[str, Fraction]:
    out = {}
    for k, v in combo.items():
        v = as_rat(v)
        if v:
            out[k] = v
    return out


@dataclass(frozen=True, eq=False)
class PresentedQCategory:
    """Objects, basis morphisms ``name -> (source, target)``, identities and ``table[(f, g)] = f o g``."""

    objects: tuple[str, ...]
    morphisms: Mapping[str, tuple[str, str]]
    identities: Mapping[str, str]
    table: Mapping[tuple[str, str], Combo]
    name: str = ""

    def hom_basis(self, a: str, b: str) -> list[str]:
        return [m for m, st in self.morphisms.items() if st == (a, b)]

    def source(self, m: str) -> str:
        return self.morphisms[m][0]

    def target(self, m: str) -> str:
        return self.morphisms[m][1]

    def compose_combo(self, f: Combo, g: Combo) -> dict[str, Fraction]:
        """``f o g`` for formal combinations (``g`` applied first)."""
        acc: dict[str, Fraction] = {}
        for a, x in f.items():
            for b, y in g.items():
                _add_into(acc, self.table[(a, b)], x * y)
        return acc

    def composable(self) -> Iterable[tuple[str, str]]:
        for f, (b, _) in self.morphisms.items():
            for g, (_, b2) in self.morphisms.items():
                if b2 == b:
                    yield f, g


def load_category(doc: Mapping) -> PresentedQCategory:
    """Build and check a category from ``objects``, ``morphisms``, ``identities``, ``compose``.

    ``compose`` is a list of ``[f, g, {h: coefficient}]`` giving ``f o g``.  Every
    composable pair must be listed.  Associativity and unit laws are checked
    on all basis triples.
    """
    objects = tuple(str(o) for o in doc["objects"])
    if len(set(objects)) != len(objects):
        raise CategoryError("duplicate object names")
    morphisms = {}
    for m, st in doc["morphisms"].items():
        s, t = (str(v) for v in st)
        if s not in objects or t not in objects:
            raise CategoryError(f"morphism {m} has unknown endpoints {s} -> {t}", (m,))
        morphisms[str(m)] = (s, t)
    identities = {str(k): str(v) for k, v in doc["identities"].items()}
    for o in objects:
        i = identities.get(o)
        if i is None or morphisms.get(i) != (o, o):
            raise CategoryError(f"object {o} lacks an identity endomorphism", (o,))
    table: dict[tuple[str, str], dict[str, Fraction]] = {}
    entries = doc["compose"]
    if isinstance(entries, Mapping):
        entries = [(k[0], k[1], v) for k, v in entries.items()]
    for f, g, combo in entries:
        f, g = str(f), str(g)
        if f not in morphisms or g not in morphisms:
            raise CategoryError(f"composition entry {f} o {g} names an unknown morphism", (f, g))
        if morphisms[g][1] != morphisms[f][0]:
            raise CategoryError(f"composition entry {f} o {g} is not composable", (f, g))
        want = (morphisms[g][0], morphisms[f][1])
        combo = _clean({str(k): v for k, v in (combo or {}).items()})
        for h in combo:
            if morphisms.get(h) != want:
                raise CategoryError(f"{f} o {g} = ... uses {h}, which is not a morphism {want[0]} -> {want[1]}", (f, g, h))
        if (f, g) in table:
            raise CategoryError(f"composition entry {f} o {g} given twice", (f, g))
        table[(f, g)] = combo
    cat = PresentedQCategory(objects, morphisms, identities, table, str(doc.get("name", "")))
    for f, g in cat.composable():
        if (f, g) not in table:
            raise CategoryError(f"missing composition entry {f} o {g}", (f, g))
    check_category(cat)
    return cat


def check_category(cat: PresentedQCategory) -> None:
    """Raise :class:`CategoryError` naming the first failing identity or associativity instance."""
    for m, (a, b) in cat.morphisms.items():
        if cat.table[(cat.identities[b], m)] != {m: 1}:
            raise CategoryError(f"left identity law fails for {m}", (cat.identities[b], m))
        if cat.table[(m, cat.identities[a])] != {m: 1}:
            raise CategoryError(f"right identity law fails for {m}", (m, cat.identities[a]))
    for f, g in cat.composable():
        fg = cat.table[(f, g)]
        a = cat.source(g)
        for h in cat.morphisms:
            if cat.target(h) != a:
                continue
            lhs = cat.compose_combo(fg, {h: Fraction(1)})
            rhs = cat.compose_combo({f: Fraction(1)}, cat.table[(g, h)])
            if lhs != rhs:
                raise CategoryError(f"associativity fails: ({f} o {g}) o {h} != {f} o ({g} o {h})", (f, g, h))


# additive completion -----------------------------------------------------------


@dataclass(frozen=True)
class AdditiveObject:
    summands: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(self.summands))

    def __add__(self, other: "AdditiveObject") -> "AdditiveObject":
        return AdditiveObject(self.summands + other.summands)

    def __len__(self) -> int:
        return len(self.summands)

    @classmethod
    def zero(cls) -> "AdditiveObject":
        return cls(())


@dataclass(frozen=True, eq=False)
class MotiveMorphism:
    """Sparse block matrix: ``blocks[(i, j)]`` maps source summand ``j`` to target summand ``i``."""

    category: PresentedQCategory
    source: AdditiveObject
    target: AdditiveObject
    blocks: Mapping[tuple[int, int], Combo] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), combo in self.blocks.items():
            if not (0 <= i < len(self.target) and 0 <= j < len(self.source)):
                raise CategoryError(f"block ({i},{j}) outside a {len(self.target)}x{len(self.source)} morphism")
            combo = _clean(combo)
            want = (self.source.summands[j], self.target.summands[i])
            for m in combo:
                if self.category.morphisms.get(m) != want:
                    raise CategoryError(f"block ({i},{j}) uses {m}, not a morphism {want[0]} -> {want[1]}", (i, j, m))
            if combo:
                clean[(i, j)] = combo
        object.__setattr__(self, "blocks", clean)

    @classmethod
    def _trusted(cls, cat, source, target, blocks) -> "MotiveMorphism":
        m = object.__new__(cls)
        object.__setattr__(m, "category", cat)
        object.__setattr__(m, "source", source)
        object.__setattr__(m, "target", target)
        object.__setattr__(m, "blocks", blocks)
        return m

    @classmethod
    def identity(cls, cat: PresentedQCategory, obj: AdditiveObject) -> "MotiveMorphism":
        return cls._trusted(cat, obj, obj, {(i, i): {cat.identities[o]: Fraction(1)} for i, o in enumerate(obj.summands)})

    @classmethod
    def zero(cls, cat: PresentedQCategory, source: AdditiveObject, target: AdditiveObject) -> "MotiveMorphism":
        return cls._trusted(cat, source, target, {})

    @classmethod
    def from_rows(cls, cat, source, target, rows: Sequence[Sequence[Mapping]]) -> "MotiveMorphism":
        return cls(cat, source, target, {(i, j): c for i, r in enumerate(rows) for j, c in enumerate(r) if c})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MotiveMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and {k: dict(v) for k, v in self.blocks.items()} == {k: dict(v) for k, v in other.blocks.items()})

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.blocks

    def _same_type(self, other: "MotiveMorphism") -> None:
        if self.source != other.source or self.target != other.target:
            raise CategoryError("morphisms have different source or target")

    def __add__(self, other: "MotiveMorphism") -> "MotiveMorphism":
        self._same_type(other)
        blocks = {k: dict(v) for k, v in self.blocks.items()}
        for k, v in other.blocks.items():
            acc = blocks.setdefault(k, {})
            _add_into(acc, v)
            if not acc:
                del blocks[k]
        return MotiveMorphism._trusted(self.category, self.source, self.target, blocks)

    def scale(self, c) -> "MotiveMorphism":
        c = as_rat(c)
        if not c:
            return MotiveMorphism.zero(self.category, self.source, self.target)
        return MotiveMorphism._trusted(self.category, self.source, self.target,
                                       {k: {m: c * v for m, v in b.items()} for k, b in self.blocks.items()})

    def __neg__(self) -> "MotiveMorphism":
        return self.scale(-1)

    def __sub__(self, other: "MotiveMorphism") -> "MotiveMorphism":
        return self + (-other)

    def __matmul__(self, other: "MotiveMorphism") -> "MotiveMorphism":
        return compose(self, other)

    def realize(self, r: "Realization") -> QMatrix:
        return r.realize(self)

    def to_json(self) -> list:
        return [[i, j, {m: str(v) for m, v in sorted(c.items())}] for (i, j), c in sorted(self.blocks.items())]


def compose(f: MotiveMorphism, g: MotiveMorphism) -> MotiveMorphism:
    """``f o g``: block product with entries expanded through the structure constants."""
    if g.target != f.source:
        raise CategoryError(f"cannot compose: target {g.target.summands} != source {f.source.summands}")
    cat = f.category
    by_col: dict[int, list[tuple[int, Combo]]] = {}
    for (i, j), c in f.blocks.items():
        by_col.setdefault(j, []).append((i, c))
    out: dict[tuple[int, int], dict[str, Fraction]] = {}
    for (j, k), gc in g.blocks.items():
        for i, fc in by_col.get(j, ()):
            acc = out.setdefault((i, k), {})
            _add_into(acc, cat.compose_combo(fc, gc))
            if not acc:
                del out[(i, k)]
    return MotiveMorphism._trusted(cat, g.source, f.target, out)


def block_morphism(cat: PresentedQCategory, rows: Sequence[Sequence[MotiveMorphism | None]],
                   targets: Sequence[AdditiveObject], sources: Sequence[AdditiveObject]) -> MotiveMorphism:
    """Assemble ``sum targets <- sum sources`` from a grid of morphisms (``None`` is zero)."""
    roff = list(itertools.accumulate([0] + [len(t) for t in targets]))
    coff = list(itertools.accumulate([0] + [len(s) for s in sources]))
    blocks = {}
    for a, row in enumerate(rows):
        for b, m in enumerate(row):
            if m is None:
                continue
            if m.target != targets[a] or m.source != sources[b]:
                raise CategoryError(f"grid entry ({a},{b}) has the wrong type")
            for (i, j), c in m.blocks.items():
                blocks[(roff[a] + i, coff[b] + j)] = dict(c)
    src = AdditiveObject(tuple(itertools.chain.from_iterable(s.summands for s in sources)))
    tgt = AdditiveObject(tuple(itertools.chain.from_iterable(t.summands for t in targets)))
    return MotiveMorphism._trusted(cat, src, tgt, blocks)


# realizations --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Realization:
    """Matrices for basis morphisms; a ``dim(target) x dim(source)`` matrix each."""

    name: str
    category: PresentedQCategory
    dims: Mapping[str, int]
    mats: Mapping[str, QMatrix]

    def __post_init__(self):
        cat = self.category
        for o in cat.objects:
            if o not in self.dims or self.dims[o] < 0:
                raise CategoryError(f"realization {self.name}: no dimension for {o}", (o,))
        for m, (a, b) in cat.morphisms.items():
            mat = self.mats.get(m)
            if mat is None:
                raise CategoryError(f"realization {self.name}: no matrix for {m}", (m,))
            if mat.shape != (self.dims[b], self.dims[a]):
                raise CategoryError(f"realization {self.name}: {m} has shape {mat.shape}", (m,))
        for o in cat.objects:
            if self.mats[cat.identities[o]] != QMatrix.identity(self.dims[o]):
                raise CategoryError(f"realization {self.name}: identity of {o} is not the identity matrix", (o,))
        for f, g in cat.composable():
            if self.mats[f] @ self.mats[g] != self.combo(cat.table[(f, g)], cat.source(g), cat.target(f)):
                raise CategoryError(f"realization {self.name}: mat({f} o {g}) != mat({f}) mat({g})", (f, g))

    def combo(self, c: Combo, a: str, b: str) -> QMatrix:
        out = QMatrix.zeros(self.dims[b], self.dims[a])
        for m, v in c.items():
            out = out + self.mats[m].scale(v)
        return out

    def dim(self, obj: AdditiveObject) -> int:
        return sum(self.dims[o] for o in obj.summands)

    def realize(self, f: MotiveMorphism) -> QMatrix:
        roff = list(itertools.accumulate([0] + [self.dims[o] for o in f.target.summands]))
        coff = list(itertools.accumulate([0] + [self.dims[o] for o in f.source.summands]))
        data: dict[int, dict[int, Fraction]] = {}
        for (i, j), c in f.blocks.items():
            m = self.combo(c, f.source.summands[j], f.target.summands[i])
            for r, row in m.row_items():
                tgt = data.setdefault(roff[i] + r, {})
                for col, v in row.items():
                    tgt[coff[j] + col] = v
        return QMatrix(roff[-1], coff[-1], data)


# Karoubi envelope -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KaroubiObject:
    """A pair ``(carrier, e)`` with ``e o e = e``."""

    carrier: AdditiveObject
    idempotent: MotiveMorphism

    def __post_init__(self):
        e = self.idempotent
        if e.source != self.carrier or e.target != self.carrier:
            raise CategoryError("idempotent must be an endomorphism of the carrier")
        if compose(e, e) != e:
            raise CategoryError("e o e != e")

    @classmethod
    def plain(cls, cat: PresentedQCategory, obj: AdditiveObject) -> "KaroubiObject":
        k = object.__new__(cls)
        object.__setattr__(k, "carrier", obj)
        object.__setattr__(k, "idempotent", MotiveMorphism.identity(cat, obj))
        return k

    @property
    def category(self) -> PresentedQCategory:
        return self.idempotent.category

    def is_plain(self) -> bool:
        return self.idempotent == MotiveMorphism.identity(self.category, self.carrier)

    def __add__(self, other: "KaroubiObject") -> "KaroubiObject":
        cat = self.category
        e = block_morphism(cat, [[self.idempotent, None], [None, other.idempotent]],
                           [self.carrier, other.carrier], [self.carrier, other.carrier])
        k = object.__new__(KaroubiObject)
        object.__setattr__(k, "carrier", self.carrier + other.carrier)
        object.__setattr__(k, "idempotent", e)
        return k

    def realized_rank(self, r: Realization) -> int:
        if self.is_plain():
            return r.dim(self.carrier)
        return rank(r.realize(self.idempotent))


@dataclass(frozen=True)
class K0Class:
    """A signed formal sum of Karoubi objects with its realized ranks."""

    terms: tuple[tuple[int, KaroubiObject], ...]
    realized_rank: Mapping[str, int]

    def __add__(self, other: "K0Class") -> "K0Class":
        keys = self.realized_rank.keys() & other.realized_rank.keys()
        return K0Class(self.terms + other.terms, {k: self.realized_rank[k] + other.realized_rank[k] for k in sorted(keys)})

    def __neg__(self) -> "K0Class":
        return K0Class(tuple((-c, k) for c, k in self.terms), {k: -v for k, v in self.realized_rank.items()})

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def to_json(self) -> dict:
        return {"terms": [[c, list(k.carrier.summands)] for c, k in self.terms],
                "realized_rank": dict(sorted(self.realized_rank.items()))}


def k0_class(k: KaroubiObject, realizations: Iterable[Realization], coefficient: int = 1) -> K0Class:
    return K0Class(((coefficient, k),), {r.name: coefficient * k.realized_rank(r) for r in realizations})


# groups and actions --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Elements and multiplication table ``mul[(g, h)] = g h``."""

    elements: tuple[str, ...]
    mul: Mapping[tuple[str, str], str]
    name: str = ""

    def __post_init__(self):
        els = set(self.elements)
        for g in self.elements:
            for h in self.elements:
                if self.mul.get((g, h)) not in els:
                    raise CategoryError(f"group table undefined at {g}*{h}", (g, h))
        for g, h, k in itertools.product(self.elements, repeat=3):
            if self.mul[(self.mul[(g, h)], k)] != self.mul[(g, self.mul[(h, k)])]:
                raise CategoryError(f"group table not associative at {g},{h},{k}", (g, h, k))
        e = self.identity
        for g in self.elements:
            if not any(self.mul[(g, h)] == e for h in self.elements):
                raise CategoryError(f"{g} has no inverse", (g,))

    @property
    def identity(self) -> str:
        for e in self.elements:
            if all(self.mul[(e, g)] == g == self.mul[(g, e)] for g in self.elements):
                return e
        raise CategoryError("group table has no identity")

    @property
    def order(self) -> int:
        return len(self.elements)


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(f"r{k}" for k in range(n))
    return FiniteGroup(els, {(f"r{a}", f"r{b}"): f"r{(a + b) % n}" for a in range(n) for b in range(n)}, f"Z/{n}")


def perm_str(p: Sequence[int]) -> str:
    return "p" + "".join(str(v) for v in p)


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1``; ``(g h)(i) = g(h(i))``."""
    perms = list(itertools.permutations(range(n)))
    mul = {(perm_str(g), perm_str(h)): perm_str(tuple(g[h[i]] for i in range(n))) for g in perms for h in perms}
    return FiniteGroup(tuple(perm_str(p) for p in perms), mul, f"S{n}")


@dataclass(frozen=True, eq=False)
class GroupAction:
    group: FiniteGroup
    carrier: AdditiveObject
    act: Mapping[str, MotiveMorphism]

    def __post_init__(self):
        G = self.group
        cat = None
        for g in G.elements:
            m = self.act.get(g)
            if m is None or m.source != self.carrier or m.target != self.carrier:
                raise CategoryError(f"act({g}) is missing or not an endomorphism of the carrier", (g,))
            cat = m.category
        if self.act[G.identity] != MotiveMorphism.identity(cat, self.carrier):
            raise CategoryError("act(1) != id", (G.identity,))
        for g in G.elements:
            for h in G.elements:
                if compose(self.act[g], self.act[h]) != self.act[G.mul[(g, h)]]:
                    raise CategoryError(f"act({g}) o act({h}) != act({g}{h})", (g, h))

    @property
    def category(self) -> PresentedQCategory:
        return self.act[self.group.identity].category


def average_projector(a: GroupAction) -> KaroubiObject:
    """``(carrier, (1/|G|) sum_g act(g))``."""
    cat = a.category
    e = MotiveMorphism.zero(cat, a.carrier, a.carrier)
    for g in a.group.elements:
        e = e + a.act[g]
    e = e.scale(Fraction(1, a.group.order))
    if compose(e, e) != e:
        raise CategoryError("average of the action is not idempotent; the action table is broken")
    return KaroubiObject(a.carrier, e)


# standard presentations ---------------------------------------------------------------


def group_algebra_category(group: FiniteGroup, obj: str = "X") -> PresentedQCategory:
    """One object whose endomorphisms are ``Q[G]``; basis morphism names are ``obj.g``."""
    morph = {f"{obj}.{g}": (obj, obj) for g in group.elements}
    table = {(f"{obj}.{g}", f"{obj}.{h}"): {f"{obj}.{group.mul[(g, h)]}": Fraction(1)}
             for g in group.elements for h in group.elements}
    cat = PresentedQCategory((obj,), morph, {obj: f"{obj}.{group.identity}"}, table, f"Q[{group.name}]")
    check_category(cat)
    return cat


def regular_action(group: FiniteGroup, cat: PresentedQCategory | None = None, obj: str = "X") -> GroupAction:
    """``G`` acting on the one-object category ``Q[G]`` by its basis morphisms."""
    cat = group_algebra_category(group, obj) if cat is None else cat
    carrier = AdditiveObject((obj,))
    return GroupAction(group, carrier, {g: MotiveMorphism(cat, carrier, carrier, {(0, 0): {f"{obj}.{g}": 1}})
                                        for g in group.elements})


def permutation_realization(cat: PresentedQCategory, group: FiniteGroup, perm: Mapping[str, Sequence[int]],
                            name: str = "perm", obj: str = "X") -> Realization:
    """Realize ``Q[G]`` by permutation matrices ``e_i -> e_{perm[g][i]}``."""
    n = len(next(iter(perm.values())))
    mats = {f"{obj}.{g}": QMatrix(n, n, {perm[g][i]: {i: 1} for i in range(n)}) for g in group.elements}
    return Realization(name, cat, {obj: n}, mats)


def scalar_category(obj: str = "P") -> PresentedQCategory:
    """One object with endomorphisms ``Q``: its additive completion is rational matrices."""
    ident = f"id_{obj}"
    return PresentedQCategory((obj,), {ident: (obj, obj)}, {obj: ident}, {(ident, ident): {ident: Fraction(1)}}, "Q")


def scalar_realization(cat: PresentedQCategory, name: str = "vect") -> Realization:
    obj = cat.objects[0]
    return Realization(name, cat, {obj: 1}, {cat.identities[obj]: QMatrix.identity(1)})


def matrix_morphism(cat: PresentedQCategory, m: QMatrix) -> MotiveMorphism:
    """A rational matrix as a morphism ``P^cols -> P^rows`` of the scalar category."""
    obj = cat.objects[0]
    ident = cat.identities[obj]
    blocks = {(i, j): {ident: v} for i, row in m.row_items() for j, v in row.items()}
    return MotiveMorphism._trusted(cat, AdditiveObject((obj,) * m.cols), AdditiveObject((obj,) * m.rows), blocks)
