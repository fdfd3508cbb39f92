"""Truncated simplicial sets as explicit face/degeneracy tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

Cell = Hashable
Monotone = tuple[int, ...]  # theta: [k] -> [q] listed as (theta(0), ..., theta(k))


def cell_str(c: Cell) -> str:
    """Canonical string rendering of a cell id (used in reports)."""
    if isinstance(c, tuple):
        return "(" + ",".join(cell_str(x) for x in c) + ")"
    return str(c)


@dataclass(frozen=True)
class TruncatedSimplicialSet:
    """Finite simplicial set data in degrees ``0..level``.

    ``faces[(n, i)]`` maps ``cells[n] -> cells[n-1]`` for ``0 <= i <= n``;
    ``degeneracies[(n, i)]`` maps ``cells[n-1] -> cells[n]`` for ``0 <= i < n``.
    """

    cells: tuple[tuple[Cell, ...], ...]
    faces: Mapping[tuple[int, int], Mapping[Cell, Cell]] = field(default_factory=dict)
    degeneracies: Mapping[tuple[int, int], Mapping[Cell, Cell]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(c) for c in self.cells))
        if not self.cells:
            raise ValueError("a truncated simplicial set needs at least degree 0")

    @property
    def level(self) -> int:
        return len(self.cells) - 1

    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def face(self, n: int, i: int, c: Cell) -> Cell:
        return self.faces[(n, i)][c]

    def degen(self, n: int, i: int, c: Cell) -> Cell:
        """``s_i`` applied to the ``(n-1)``-cell ``c``; lands in degree ``n``."""
        return self.degeneracies[(n, i)][c]

    def act(self, c: Cell, q: int, theta: Monotone) -> Cell:
        """Pull the ``q``-cell ``c`` back along a monotone ``theta: [k] -> [q]``."""
        image = sorted(set(theta))
        for j in reversed(range(q + 1)):
            if j not in image:
                c = self.face(q, j, c)
                q -= 1
        # now c is the restriction to the image; degenerate where theta repeats
        k = len(theta) - 1
        dim = q
        for j in range(k):
            if theta[j] == theta[j + 1]:
                dim += 1
                c = self.degen(dim, j, c)
        return c


@dataclass(frozen=True)
class SetMap:
    """A total map of finite sets given by a lookup table."""

    source: tuple[Cell, ...]
    target: tuple[Cell, ...]
    assignment: Mapping[Cell, Cell]

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        tgt = set(self.target)
        for s in self.source:
            if s not in self.assignment:
                raise ValueError(f"map undefined on {cell_str(s)}")
            if self.assignment[s] not in tgt:
                raise ValueError(f"{cell_str(s)} maps outside the target")

    def __call__(self, x: Cell) -> Cell:
        return self.assignment[x]

    def fibers(self) -> dict[Cell, list[Cell]]:
        out: dict[Cell, list[Cell]] = {t: [] for t in self.target}
        for s in self.source:
            out[self.assignment[s]].append(s)
        return out

    def is_surjective(self) -> bool:
        return all(self.fibers().values())

    def is_injective(self) -> bool:
        return all(len(f) <= 1 for f in self.fibers().values())

    def compose(self, other: "SetMap") -> "SetMap":
        """``self o other``."""
        return SetMap(other.source, self.target, {x: self(other(x)) for x in other.source})


@dataclass(frozen=True)
class SimplicialMap:
    source: TruncatedSimplicialSet
    target: TruncatedSimplicialSet
    components: tuple[Mapping[Cell, Cell], ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.source.level + 1:
            raise ValueError("one component per degree of the source is required")
        if self.target.level < self.source.level:
            raise ValueError("target is truncated below the source")

    @property
    def level(self) -> int:
        return self.source.level

    def __call__(self, n: int, c: Cell) -> Cell:
        return self.components[n][c]

    def degree(self, n: int) -> SetMap:
        return SetMap(self.source.cells[n], self.target.cells[n], self.components[n])

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self o other``."""
        lvl = other.level
        return SimplicialMap(other.source, self.target,
                             [{x: self.components[n][other.components[n][x]] for x in other.source.cells[n]}
                              for n in range(lvl + 1)])

    def truncate(self, n: int) -> "SimplicialMap":
        return SimplicialMap(sk(self.source, n), self.target, self.components[:n + 1])


# construction helpers -----------------------------------------------------------


def monotone_maps(k: int, q: int) -> list[Monotone]:
    """All order-preserving maps ``[k] -> [q]`` in lexicographic order."""
    return list(itertools.combinations_with_replacement(range(q + 1), k + 1))


def from_vertex_tuples(cells_by_degree: Sequence[Iterable[tuple]]) -> TruncatedSimplicialSet:
    """Simplicial set whose ``n``-cells are ``(n+1)``-tuples; faces delete, degeneracies repeat."""
    cells = [tuple(c) for c in cells_by_degree]
    faces, degens = {}, {}
    for n in range(1, len(cells)):
        for i in range(n + 1):
            faces[(n, i)] = {c: c[:i] + c[i + 1:] for c in cells[n]}
        for i in range(n):
            degens[(n, i)] = {c: c[:i + 1] + c[i:] for c in cells[n - 1]}
    return TruncatedSimplicialSet(cells, faces, degens)


def standard_simplex(p: int, level: int) -> TruncatedSimplicialSet:
    """``Delta[p]`` truncated at ``level``; cells are monotone maps ``[n] -> [p]``."""
    return from_vertex_tuples([monotone_maps(n, p) for n in range(level + 1)])


def constant(points: Iterable[Cell], level: int) -> TruncatedSimplicialSet:
    """The discrete simplicial set on ``points``: every face and degeneracy is the identity."""
    pts = tuple(points)
    faces = {(n, i): {x: x for x in pts} for n in range(1, level + 1) for i in range(n + 1)}
    degens = {(n, i): {x: x for x in pts} for n in range(1, level + 1) for i in range(n)}
    return TruncatedSimplicialSet([pts] * (level + 1), faces, degens)


def point(level: int) -> TruncatedSimplicialSet:
    return constant(["*"], level)


def empty(level: int) -> TruncatedSimplicialSet:
    return constant([], level)


def sk(x: TruncatedSimplicialSet, n: int) -> TruncatedSimplicialSet:
    """Restriction to degrees ``<= n``."""
    if not 0 <= n <= x.level:
        raise ValueError(f"cannot take sk_{n} of an object truncated at level {x.level}")
    return TruncatedSimplicialSet(
        x.cells[:n + 1],
        {k: v for k, v in x.faces.items() if k[0] <= n},
        {k: v for k, v in x.degeneracies.items() if k[0] <= n},
    )


def product(a: TruncatedSimplicialSet, b: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    level = min(a.level, b.level)
    cells = [tuple(itertools.product(a.cells[n], b.cells[n])) for n in range(level + 1)]
    faces = {(n, i): {(x, y): (a.face(n, i, x), b.face(n, i, y)) for x, y in cells[n]}
             for n in range(1, level + 1) for i in range(n + 1)}
    degens = {(n, i): {(x, y): (a.degen(n, i, x), b.degen(n, i, y)) for x, y in cells[n - 1]}
              for n in range(1, level + 1) for i in range(n)}
    return TruncatedSimplicialSet(cells, faces, degens)


def disjoint_union(a: TruncatedSimplicialSet, b: TruncatedSimplicialSet) -> TruncatedSimplicialSet:
    """Cells are tagged ``(0, x)`` and ``(1, y)``."""
    level = min(a.level, b.level)

    def tag(t, table):
        return {(t, x): (t, y) for x, y in table.items()}

    cells = [tuple((0, x) for x in a.cells[n]) + tuple((1, y) for y in b.cells[n]) for n in range(level + 1)]
    faces = {k: {**tag(0, a.faces[k]), **tag(1, b.faces[k])} for k in a.faces if k[0] <= level}
    degens = {k: {**tag(0, a.degeneracies[k]), **tag(1, b.degeneracies[k])} for k in a.degeneracies if k[0] <= level}
    return TruncatedSimplicialSet(cells, faces, degens)


def identity_map(x: TruncatedSimplicialSet) -> SimplicialMap:
    return SimplicialMap(x, x, [{c: c for c in cs} for cs in x.cells])


def to_point(x: TruncatedSimplicialSet, level: int | None = None) -> SimplicialMap:
    return SimplicialMap(x, point(x.level if level is None else level), [{c: "*" for c in cs} for cs in x.cells])


# validation ----------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    identity: str
    degree: int
    cell: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"identity": self.identity, "degree": self.degree, "cell": self.cell, "detail": self.detail}


def _table_problems(x: TruncatedSimplicialSet) -> list[Violation]:
    out = []
    for n in range(1, x.level + 1):
        src, tgt = x.cells[n], set(x.cells[n - 1])
        for i in range(n + 1):
            table = x.faces.get((n, i))
            if table is None:
                out.append(Violation("table", n, "", f"missing d_{i}"))
                continue
            for c in src:
                if c not in table or table[c] not in tgt:
                    out.append(Violation("table", n, cell_str(c), f"d_{i} undefined or out of range"))
        top = set(src)
        for i in range(n):
            table = x.degeneracies.get((n, i))
            if table is None:
                out.append(Violation("table", n, "", f"missing s_{i}"))
                continue
            for c in x.cells[n - 1]:
                if c not in table or table[c] not in top:
                    out.append(Violation("table", n, cell_str(c), f"s_{i} undefined or out of range"))
    for n, cs in enumerate(x.cells):
        if len(set(cs)) != len(cs):
            out.append(Violation("table", n, "", "duplicate cell id"))
    return out


def validate(x: TruncatedSimplicialSet) -> list[Violation]:
    """Every violated simplicial identity; the empty list means ``x`` is valid."""
    out = _table_problems(x)
    if out:
        return out
    d, s = x.face, x.degen
    for n in range(x.level + 1):
        for c in x.cells[n]:
            cs = cell_str(c)
            # d_i d_j = d_{j-1} d_i  (i < j), on n-cells
            for j in range(n + 1):
                for i in range(j):
                    if n >= 2 and d(n - 1, i, d(n, j, c)) != d(n - 1, j - 1, d(n, i, c)):
                        out.append(Violation("d_i d_j = d_(j-1) d_i", n, cs, f"i={i} j={j}"))
            if n + 1 > x.level:
                continue
            # identities involving s_j: (n+1)-cells built from the n-cell c
            for j in range(n + 1):
                sc = s(n + 1, j, c)
                for i in range(n + 2):
                    lhs = d(n + 1, i, sc)
                    if i < j:
                        rhs, name = s(n, j - 1, d(n, i, c)), "d_i s_j = s_(j-1) d_i"
                    elif i in (j, j + 1):
                        rhs, name = c, "d_j s_j = id = d_(j+1) s_j"
                    else:
                        rhs, name = s(n, j, d(n, i - 1, c)), "d_i s_j = s_j d_(i-1)"
                    if lhs != rhs:
                        out.append(Violation(name, n + 1, cs, f"i={i} j={j}"))
                if n + 2 <= x.level:
                    for i in range(j + 1):
                        if s(n + 2, i, sc) != s(n + 2, j + 1, s(n + 1, i, c)):
                            out.append(Violation("s_i s_j = s_(j+1) s_i", n + 2, cs, f"i={i} j={j}"))
    return out


def validate_map(f: SimplicialMap) -> list[Violation]:
    """Typing and commutation failures of ``f`` with faces and degeneracies."""
    out = []
    x, y = f.source, f.target
    for n in range(f.level + 1):
        tgt = set(y.cells[n])
        comp = f.components[n]
        for c in x.cells[n]:
            if c not in comp or comp[c] not in tgt:
                out.append(Violation("map table", n, cell_str(c), "undefined or out of range"))
    if out:
        return out
    for n in range(1, f.level + 1):
        for c in x.cells[n]:
            for i in range(n + 1):
                if y.face(n, i, f(n, c)) != f(n - 1, x.face(n, i, c)):
                    out.append(Violation("f d_i = d_i f", n, cell_str(c), f"i={i}"))
        for c in x.cells[n - 1]:
            for i in range(n):
                if y.degen(n, i, f(n - 1, c)) != f(n, x.degen(n, i, c)):
                    out.append(Violation("f s_i = s_i f", n, cell_str(c), f"i={i}"))
    return out
