"""Finite simplicial sets, Eilenberg-Zilber normal forms and ``Hom_Delta``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import (Cell, Monotone, SimplicialMap, TruncatedSimplicialSet, cell_str, sk, standard_simplex)

NormalForm = tuple[Monotone, Cell]  # (surjection alpha: [k] ->> [l], nondegenerate l-cell)


def _compose(beta: Monotone, alpha: Monotone) -> Monotone:
    """``beta o alpha`` for monotone maps listed as value tuples."""
    return tuple(beta[a] for a in alpha)


def normal_form(x: TruncatedSimplicialSet, k: int, c: Cell) -> NormalForm:
    """Write the ``k``-cell ``c`` as ``alpha^*(b)`` with ``b`` nondegenerate."""
    for i in range(k):
        below = x.face(k, i, c)
        if x.degen(k, i, below) == c:
            beta, b = normal_form(x, k - 1, below)
            sigma = tuple(t if t <= i else t - 1 for t in range(k + 1))
            return _compose(beta, sigma), b
    return tuple(range(k + 1)), c


def is_degenerate(x: TruncatedSimplicialSet, k: int, c: Cell) -> bool:
    return any(x.degen(k, i, x.face(k, i, c)) == c for i in range(k))


@dataclass(frozen=True)
class Decomposition:
    """Cells of one degree grouped by their normal form ``(alpha, b)``."""

    degree: int
    blocks: Mapping[NormalForm, tuple[Cell, ...]]

    def nondegenerate(self) -> list[Cell]:
        ident = tuple(range(self.degree + 1))
        return [b for (alpha, b) in self.blocks if alpha == ident]

    def degenerate(self) -> list[Cell]:
        ident = tuple(range(self.degree + 1))
        return [c for (alpha, _), cs in self.blocks.items() if alpha != ident for c in cs]

    def is_partition(self) -> bool:
        """Every block is a single cell (uniqueness of the normal form)."""
        return all(len(cs) == 1 for cs in self.blocks.values())

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "blocks": [{"alpha": list(a), "cell": cell_str(b), "members": [cell_str(c) for c in cs]}
                       for (a, b), cs in self.blocks.items()],
        }


def nondegenerate_decomposition(x: TruncatedSimplicialSet, k: int) -> Decomposition:
    """Partition ``x_k`` into blocks ``alpha^*(N x_l)`` for surjections ``alpha: [k] ->> [l]``."""
    if not 0 <= k <= x.level:
        raise ValueError(f"degree {k} outside 0..{x.level}")
    blocks: dict[NormalForm, list[Cell]] = {}
    for c in x.cells[k]:
        blocks.setdefault(normal_form(x, k, c), []).append(c)
    return Decomposition(k, {key: tuple(v) for key, v in blocks.items()})


def is_split(x: TruncatedSimplicialSet) -> bool:
    """Each ``x_k`` is the disjoint union of the images ``alpha^*(N x_l)``."""
    for k in range(x.level + 1):
        dec = nondegenerate_decomposition(x, k)
        if not dec.is_partition():
            return False
        for (alpha, b), (c,) in dec.blocks.items():
            if x.act(b, max(alpha), alpha) != c:
                return False
    return True


@dataclass(frozen=True)
class FiniteSimplicialSet:
    """A simplicial set equal to its ``n``-skeleton, stored through degree ``n``."""

    sset: TruncatedSimplicialSet

    @property
    def generation_level(self) -> int:
        return self.sset.level

    def nondegenerate(self, k: int) -> list[Cell]:
        return [c for c in self.sset.cells[k] if not is_degenerate(self.sset, k, c)]

    def normal_form(self, k: int, c: Cell) -> NormalForm:
        return normal_form(self.sset, k, c)

    def count_nondegenerate(self) -> int:
        return sum(len(self.nondegenerate(k)) for k in range(self.generation_level + 1))

    @classmethod
    def from_truncated(cls, x: TruncatedSimplicialSet, generation_level: int | None = None) -> "FiniteSimplicialSet":
        n = x.level if generation_level is None else generation_level
        for k in range(n + 1, x.level + 1):
            nd = [c for c in x.cells[k] if not is_degenerate(x, k, c)]
            if nd:
                raise ValueError(f"not generated in degrees <= {n}: nondegenerate {k}-cell {cell_str(nd[0])}")
        return cls(sk(x, n))

    def skeleton(self, n: int) -> "FiniteSimplicialSet":
        """``Sk_n`` of this simplicial set."""
        return FiniteSimplicialSet(sk(self.sset, min(n, self.generation_level)))


def simplex(p: int) -> FiniteSimplicialSet:
    return FiniteSimplicialSet(standard_simplex(p, p))


def boundary(p: int) -> FiniteSimplicialSet:
    """``partial Delta[p]`` (for ``p >= 1``)."""
    if p < 1:
        raise ValueError("the boundary of Delta[0] is empty")
    return FiniteSimplicialSet(standard_simplex(p, p - 1))


def _face_index(x: TruncatedSimplicialSet, k: int) -> dict[tuple[Cell, ...], list[Cell]]:
    idx: dict[tuple[Cell, ...], list[Cell]] = {}
    for c in x.cells[k]:
        idx.setdefault(tuple(x.face(k, i, c) for i in range(k + 1)), []).append(c)
    return idx


def hom_delta(a: FiniteSimplicialSet | TruncatedSimplicialSet, x: TruncatedSimplicialSet) -> list[SimplicialMap]:
    """All simplicial maps ``a -> x``.

    Images of nondegenerate cells are chosen degree by degree subject to the
    face conditions; degenerate cells follow from their normal forms.  A bare
    truncated set is read as generated in degrees up to its level.
    """
    if isinstance(a, TruncatedSimplicialSet):
        a = FiniteSimplicialSet(a)
    n = a.generation_level
    if x.level < n:
        raise ValueError(f"target is truncated at {x.level}, below the generation level {n}")
    A = a.sset
    nforms = [{c: normal_form(A, k, c) for c in A.cells[k]} for k in range(n + 1)]
    nd = [(k, c) for k in range(n + 1) for c in A.cells[k] if nforms[k][c][0] == tuple(range(k + 1))]
    indexes = [None] + [_face_index(x, k) for k in range(1, n + 1)]
    img: dict[tuple[int, Cell], Cell] = {}
    out: list[SimplicialMap] = []

    def image_of(k: int, c: Cell) -> Cell:
        alpha, b = nforms[k][c]
        lvl = max(alpha)
        return x.act(img[(lvl, b)], lvl, alpha)

    def finish() -> None:
        comps = [{c: image_of(k, c) for c in A.cells[k]} for k in range(n + 1)]
        out.append(SimplicialMap(A, sk(x, n), comps))

    def rec(pos: int) -> None:
        if pos == len(nd):
            finish()
            return
        k, b = nd[pos]
        if k == 0:
            options = x.cells[0]
        else:
            want = tuple(image_of(k - 1, A.face(k, i, b)) for i in range(k + 1))
            options = indexes[k].get(want, ())
        for c in options:
            img[(k, b)] = c
            rec(pos + 1)
        img.pop((k, b), None)

    rec(0)
    return out


def pushout(i: SimplicialMap, j: SimplicialMap) -> tuple[TruncatedSimplicialSet, SimplicialMap, SimplicialMap]:
    """Degreewise pushout of ``A <-i- C -j-> B``; returns ``(P, A -> P, B -> P)``.

    Cells of ``P`` are tagged ``("a", x)`` or ``("b", y)``; each class is named by
    its first member, listing ``A`` before ``B``.
    """
    if i.source is not j.source and i.source != j.source:
        raise ValueError("pushout legs must share their source")
    A, B, C = i.target, j.target, i.source
    level = min(A.level, B.level, C.level)
    cells, rep = [], []
    for k in range(level + 1):
        members = [("a", c) for c in A.cells[k]] + [("b", c) for c in B.cells[k]]
        parent = {m: m for m in members}
        order = {m: t for t, m in enumerate(members)}

        def find(m):
            while parent[m] != m:
                parent[m] = parent[parent[m]]
                m = parent[m]
            return m

        for c in C.cells[k]:
            ra, rb = find(("a", i(k, c))), find(("b", j(k, c)))
            if ra != rb:
                lo, hi = sorted((ra, rb), key=order.__getitem__)
                parent[hi] = lo
        r = {m: find(m) for m in members}
        rep.append(r)
        cells.append(tuple(m for m in members if r[m] == m))
    faces, degens = {}, {}

    def lift(t, k, c, op):
        src = A if t == "a" else B
        return rep[k][(t, op(src, c))]

    for k in range(1, level + 1):
        for f in range(k + 1):
            faces[(k, f)] = {m: lift(m[0], k - 1, m[1], lambda s, c: s.face(k, f, c)) for m in cells[k]}
        for g in range(k):
            degens[(k, g)] = {m: lift(m[0], k, m[1], lambda s, c: s.degen(k, g, c)) for m in cells[k - 1]}
    P = TruncatedSimplicialSet(cells, faces, degens)
    to_p_a = SimplicialMap(sk(A, level), P, [{c: rep[k][("a", c)] for c in A.cells[k]} for k in range(level + 1)])
    to_p_b = SimplicialMap(sk(B, level), P, [{c: rep[k][("b", c)] for c in B.cells[k]} for k in range(level + 1)])
    return P, to_p_a, to_p_b
