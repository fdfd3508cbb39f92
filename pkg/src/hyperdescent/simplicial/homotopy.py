"""Explicit simplicial homotopies between coskeleton maps."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (SetMap, SimplicialMap, TruncatedSimplicialSet, Violation, cell_str, product,
                   standard_simplex, validate_map)
from .coskeleton import cosk_map, point_base, relative_cosk, relative_cosk_map, subsets


@dataclass(frozen=True)
class HomotopyReport:
    violations: tuple[Violation, ...]
    endpoint_failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.endpoint_failures

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"violations": [v.to_json() for v in self.violations], "endpoint_failures": list(self.endpoint_failures)}


@dataclass(frozen=True)
class Homotopy:
    """A map ``h: A x Delta[1] -> B`` meant to join ``start`` to ``end``."""

    map: SimplicialMap
    start: SimplicialMap
    end: SimplicialMap

    @property
    def level(self) -> int:
        return self.map.level

    def at(self, p: int, phi: tuple[int, ...]) -> SetMap:
        """``h_p(phi)``: the degree-``p`` map for a fixed ``phi: [p] -> [1]``."""
        src = self.start.source.cells[p]
        return SetMap(src, self.start.target.cells[p], {c: self.map(p, (c, phi)) for c in src})

    def endpoint(self, i: int) -> SimplicialMap:
        return SimplicialMap(self.start.source, self.start.target,
                             [self.at(p, (i,) * (p + 1)).assignment for p in range(self.level + 1)])

    def verify(self) -> HomotopyReport:
        violations = tuple(validate_map(self.map))
        bad = []
        for i, expected in ((0, self.start), (1, self.end)):
            got = self.endpoint(i)
            for p in range(self.level + 1):
                diff = [c for c in expected.source.cells[p] if got(p, c) != expected(p, c)]
                if diff:
                    bad.append(f"endpoint {i} differs in degree {p} at {cell_str(diff[0])}")
        return HomotopyReport(violations, tuple(bad))


def interval(level: int) -> TruncatedSimplicialSet:
    return standard_simplex(1, level)


def discrete(points) -> TruncatedSimplicialSet:
    """A finite set as a 0-truncated simplicial object."""
    return TruncatedSimplicialSet([tuple(points)])


def build_homotopy_cosk0(f0: SetMap, f1: SetMap, M: int) -> Homotopy:
    """Homotopy from ``cosk_0(f0)`` to ``cosk_0(f1)`` with ``h_p(phi)_i = f_{phi(i)}``."""
    if f0.source != f1.source or f0.target != f1.target:
        raise ValueError("f0 and f1 must share source and target")
    X, Y = discrete(f0.source), discrete(f0.target)
    ends = [cosk_map(SimplicialMap(X, Y, [f.assignment]), 0, M) for f in (f0, f1)]
    src = product(ends[0].source, interval(M))
    fs = (f0, f1)
    comps = []
    for p in range(M + 1):
        table = {}
        for c, phi in src.cells[p]:
            if p == 0:
                table[(c, phi)] = fs[phi[0]](c)
            else:
                table[(c, phi)] = tuple(fs[phi[t]](c[t]) for t in range(p + 1))
        comps.append(table)
    return Homotopy(SimplicialMap(src, ends[0].target, comps), ends[0], ends[1])


def build_homotopy_coskn(f0: SimplicialMap, f1: SimplicialMap, n: int, M: int,
                         x_over: SimplicialMap | None = None, y_over: SimplicialMap | None = None) -> Homotopy:
    """Homotopy from ``Cosk_n^S(f0)`` to ``Cosk_n^S(f1)`` for maps over a base ``S``.

    Requires ``(f0)_k = (f1)_k`` for ``k < n``.  In degree ``n`` the non-constant
    ``phi`` use ``(f0)_n``; above ``n`` the homotopy is forced by the coskeleton.
    Without structure maps the base is the point.
    """
    X, Y = f0.source, f0.target
    if f1.source != X or f1.target != Y:
        raise ValueError("f0 and f1 must share source and target")
    if X.level < n:
        raise ValueError(f"maps must be given through degree {n}")
    for k in range(n):
        if dict(f0.components[k]) != dict(f1.components[k]):
            raise ValueError(f"f0 and f1 differ in degree {k} < n = {n}")
    if x_over is None:
        x_over = point_base(X, M)
    if y_over is None:
        y_over = point_base(Y, M)
    if x_over.target != y_over.target:
        raise ValueError("structure maps must land in the same base")
    for f in (f0, f1):
        for k in range(X.level + 1):
            if any(y_over(k, f(k, c)) != x_over(k, c) for c in X.cells[k]):
                raise ValueError(f"maps are not over the base in degree {k}")
    ends = [relative_cosk_map(f, x_over, y_over, n, M) for f in (f0, f1)]
    base_src = relative_cosk(x_over, n, M).source
    src = product(base_src, interval(M))
    fs = (f0, f1)

    def h_n(phi, c):
        if all(v == 1 for v in phi):
            return fs[1](n, c)
        return fs[0](n, c)

    comps = []
    for p in range(M + 1):
        table = {}
        for c, phi in src.cells[p]:
            if p < n:
                table[(c, phi)] = fs[0](p, c)
            elif p == n:
                table[(c, phi)] = h_n(phi, c)
            else:
                fam, s = c
                table[(c, phi)] = (tuple(h_n(tuple(phi[t] for t in sub), v)
                                         for sub, v in zip(subsets(p, n), fam)), s)
        comps.append(table)
    return Homotopy(SimplicialMap(src, ends[0].target, comps), ends[0], ends[1])

