"""Homological descent for the rational linearization of finite sets.

The functor ``E`` sends a finite set ``S`` to ``Q^S`` in degree 0; direct image
along a map is summation, the transfer ``p^*`` sums over a fiber.  A simplicial
finite set is sent to its Moore complex ``sum (-1)^i (d_i)_*``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .qlinalg import ChainMap, QComplex, QMatrix, homology_dims, induced_homology_rank
from .simplicial import (SetMap, SimplicialMap, TruncatedSimplicialSet, constant, from_vertex_tuples,
                         is_hypercover, sk, surjective, validate)

FiniteSetMap = SetMap


def cech_nerve(p: SetMap, N: int) -> TruncatedSimplicialSet:
    """``cosk_0^Y(X)``: degree ``n`` holds the ``(n+1)``-tuples with one common image."""
    fib = p.fibers()
    layers = []
    for n in range(N + 1):
        layers.append([t for y in p.target for t in itertools.product(fib[y], repeat=n + 1)])
    return from_vertex_tuples(layers)


def cech_augmentation(p: SetMap, N: int) -> SimplicialMap:
    """The nerve over the constant simplicial set on ``Y``."""
    nerve = cech_nerve(p, N)
    return SimplicialMap(nerve, constant(p.target, N), [{t: p(t[0]) for t in cells} for cells in nerve.cells])


def _pushforward(source, target, assignment, sign=1) -> dict:
    """Entries of ``f_*`` as ``{row: {col: value}}``."""
    tidx = {c: i for i, c in enumerate(target)}
    data: dict[int, dict[int, int]] = {}
    for j, c in enumerate(source):
        r = data.setdefault(tidx[assignment[c]], {})
        r[j] = r.get(j, 0) + sign
    return data


def _moore_differential(x: TruncatedSimplicialSet, n: int) -> QMatrix:
    src, tgt = x.cells[n], x.cells[n - 1]
    tidx = {c: i for i, c in enumerate(tgt)}
    data: dict[int, dict[int, int]] = {}
    for i in range(n + 1):
        table = x.faces[(n, i)]
        sign = -1 if i % 2 else 1
        for j, c in enumerate(src):
            r = data.setdefault(tidx[table[c]], {})
            r[j] = r.get(j, 0) + sign
    return QMatrix(len(tgt), len(src), data)


def linearize(x: TruncatedSimplicialSet, augment: SetMap | None = None) -> QComplex:
    """``C_n = Q^{x_n}`` with ``d = sum (-1)^i (d_i)_*``; optional ``C_{-1} = Q^Y`` via ``augment: x_0 -> Y``."""
    problems = validate(x)
    if problems:
        raise ValueError(f"invalid simplicial data: {problems[0]}")
    diffs = {n: _moore_differential(x, n) for n in range(1, x.level + 1)}
    dims = [len(c) for c in x.cells]
    if augment is None:
        return QComplex(0, dims, diffs)
    if set(augment.source) != set(x.cells[0]):
        raise ValueError("augmentation must be defined on the vertices")
    diffs[0] = QMatrix(len(augment.target), dims[0], _pushforward(x.cells[0], augment.target, augment.assignment))
    return QComplex(-1, [len(augment.target)] + dims, diffs)


def augmented_cech_complex(p: SetMap, N: int) -> QComplex:
    """The nerve's Moore complex augmented by ``(d_0)_* = p_*`` onto ``C_{-1} = Q^Y``."""
    nerve = cech_nerve(p, N)
    return linearize(nerve, SetMap(nerve.cells[0], p.target, {t: p(t[0]) for t in nerve.cells[0]}))


def contracting_homotopy(p: SetMap, N: int) -> dict[int, QMatrix]:
    """``h_n = ((-1)^(n+1)/d) (d_{n+1})^*`` for ``-1 <= n < N``.

    The transfer of the last face sends a tuple ``t`` to the sum of its ``d``
    extensions ``(t, x)`` by one more point of the same fiber.
    """
    fib = p.fibers()
    sizes = {len(v) for v in fib.values()}
    if len(sizes) != 1 or 0 in sizes:
        raise ValueError(f"fibers must all have the same positive size, got sizes {sorted(sizes)}")
    d = sizes.pop()
    nerve = cech_nerve(p, N)
    layers = [list(p.target)] + [list(c) for c in nerve.cells]  # layers[n+1] = degree n
    h = {}
    for n in range(-1, N):
        src, tgt = layers[n + 1], layers[n + 2]
        tidx = {c: i for i, c in enumerate(tgt)}
        coeff = Fraction((-1) ** (n + 1), d)
        data: dict[int, dict[int, Fraction]] = {}
        for j, t in enumerate(src):
            y = t if n == -1 else p(t[0])
            prefix = () if n == -1 else t
            for x in fib[y]:
                data.setdefault(tidx[prefix + (x,)], {})[j] = coeff
        h[n] = QMatrix(len(tgt), len(src), data)
    return h


@dataclass(frozen=True)
class AcyclicityReport:
    homology: Mapping[int, int]
    checked: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return all(self.homology[n] == 0 for n in self.checked)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"homology": {str(n): self.homology[n] for n in sorted(self.homology)}, "checked": list(self.checked)}


def verify_cech_acyclic(p: SetMap, N: int) -> AcyclicityReport:
    """Augmented Cech homology in degrees ``-1..N-1`` (degree ``N`` is a truncation artifact)."""
    c = augmented_cech_complex(p, N)
    return AcyclicityReport(homology_dims(c), tuple(range(-1, N)))


def linearize_map(f: SimplicialMap, source: QComplex | None = None, target: QComplex | None = None) -> ChainMap:
    source = linearize(f.source) if source is None else source
    target = linearize(sk(f.target, f.level)) if target is None else target
    comps = {n: QMatrix(len(f.target.cells[n]), len(f.source.cells[n]),
                        _pushforward(f.source.cells[n], f.target.cells[n], f.components[n]))
             for n in range(f.level + 1)}
    return ChainMap(source, target, comps)


@dataclass(frozen=True)
class TotalComplexes:
    source: QComplex
    target: QComplex
    map: ChainMap


def total_complex(f: SimplicialMap) -> TotalComplexes:
    """Total complexes of ``i -> E(X_i)`` and ``i -> E(Y_i)`` and the induced chain map.

    ``E`` of a finite set sits in a single degree, so the double complex has one
    row and its total complex is the Moore complex.
    """
    if f.target.level < f.level:
        raise ValueError("level mismatch between source and target")
    fm = linearize_map(f)
    return TotalComplexes(fm.source, fm.target, fm)


@dataclass(frozen=True)
class DescentReport:
    hypercover: object
    source_homology: Mapping[int, int]
    target_homology: Mapping[int, int]
    induced_rank: Mapping[int, int]
    checked: tuple[int, ...]

    @property
    def iso_degrees(self) -> list[int]:
        return [n for n in self.checked
                if self.source_homology[n] == self.target_homology[n] == self.induced_rank[n]]

    @property
    def ok(self) -> bool:
        return self.hypercover.ok and len(self.iso_degrees) == len(self.checked)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "hypercover": self.hypercover.ok,
            "hypercover_first_failure": self.hypercover.first_failure(),
            "degrees": {str(n): {"source": self.source_homology[n], "target": self.target_homology[n],
                                 "induced_rank": self.induced_rank[n], "iso": n in self.iso_degrees}
                        for n in self.checked},
        }


def verify_descent(f: SimplicialMap, N: int | None = None) -> DescentReport:
    """Compare total-complex homology of ``X`` and ``Y`` along ``f`` in degrees ``< N``.

    A map failing the hypercover condition is reported, not rejected.
    """
    N = f.level if N is None else N
    hyp = is_hypercover(f, surjective(), N)
    tc = total_complex(f)
    hs, ht = homology_dims(tc.source), homology_dims(tc.target)
    checked = tuple(range(0, N))
    ranks = {n: induced_homology_rank(tc.map, n) for n in checked}
    return DescentReport(hyp, hs, ht, ranks, checked)
