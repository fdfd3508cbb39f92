"""Coskeleta computed as ``Hom(sk_n Delta[p], X)`` by backtracking.

A ``p``-cell of ``cosk_n(X)`` with ``p > n`` is a compatible family of
``n``-cells indexed by the ``(n+1)``-element subsets of ``[p]`` (in
lexicographic order); its id is the tuple of those ``n``-cells.  In degrees
``<= n`` the cells of ``X`` are reused unchanged.  Relative coskeleta over a
base ``Y`` use ids ``(family, y)`` above degree ``n``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core import Cell, SetMap, SimplicialMap, TruncatedSimplicialSet, identity_map, point, sk


@lru_cache(maxsize=None)
def subsets(p: int, n: int) -> tuple[tuple[int, ...], ...]:
    """The ``(n+1)``-element subsets of ``[p]``, lexicographically."""
    return tuple(itertools.combinations(range(p + 1), n + 1))


@lru_cache(maxsize=None)
def _subset_index(p: int, n: int) -> dict[tuple[int, ...], int]:
    return {s: k for k, s in enumerate(subsets(p, n))}


def _families(x: TruncatedSimplicialSet, n: int, p: int, candidates) -> list[tuple[Cell, ...]]:
    """All compatible families ``(x_S)`` over the ``(n+1)``-subsets ``S`` of ``[p]``.

    ``candidates(k)`` lists admissible ``n``-cells for the ``k``-th subset.
    Families agree when every pair of members has equal faces on shared
    ``n``-element subsets.
    """
    subs = subsets(p, n)
    # for each subset: its n-element faces as (position j, face subset)
    face_keys = [[(j, s[:j] + s[j + 1:]) for j in range(n + 1)] for s in subs] if n > 0 else [[] for _ in subs]
    out: list[tuple[Cell, ...]] = []
    chosen: list[Cell] = []
    fixed: dict[tuple[int, ...], Cell] = {}

    def rec(k: int) -> None:
        if k == len(subs):
            out.append(tuple(chosen))
            return
        for c in candidates(k):
            newly = []
            ok = True
            for j, t in face_keys[k]:
                fc = x.face(n, j, c)
                prev = fixed.get(t)
                if prev is None:
                    fixed[t] = fc
                    newly.append(t)
                elif prev != fc:
                    ok = False
                    break
            if ok:
                chosen.append(c)
                rec(k + 1)
                chosen.pop()
            for t in newly:
                del fixed[t]

    rec(0)
    return out


def _extend(x: TruncatedSimplicialSet, n: int, M: int, base: SimplicialMap | None) -> TruncatedSimplicialSet:
    if n < 0:
        raise ValueError("coskeleton degree must be >= 0")
    if x.level < n:
        raise ValueError(f"cosk_{n} needs the input through degree {n}; it stops at {x.level}")
    if M < n:
        raise ValueError(f"target level {M} below the coskeleton degree {n}")
    y = base.target if base is not None else None
    if y is not None and y.level < M:
        raise ValueError(f"base is truncated at {y.level}, below the requested level {M}")
    lower = sk(x, n)
    cells = list(lower.cells)
    faces = dict(lower.faces)
    degens = dict(lower.degeneracies)
    fibers = None
    if base is not None:
        fibers = {}
        for c in x.cells[n]:
            fibers.setdefault(base(n, c), []).append(c)
    for p in range(n + 1, M + 1):
        subs = subsets(p, n)
        if base is None:
            allc = x.cells[n]
            layer = _families(x, n, p, lambda k: allc)
        else:
            layer = []
            for yc in y.cells[p]:
                over = [fibers.get(y.act(yc, p, s), ()) for s in subs]
                layer.extend((fam, yc) for fam in _families(x, n, p, over.__getitem__))
        cells.append(tuple(layer))
        idx = _subset_index(p, n)
        for i in range(p + 1):
            if p - 1 == n:
                keep = idx[tuple(t for t in range(p + 1) if t != i)]
                if base is None:
                    faces[(p, i)] = {c: c[keep] for c in layer}
                else:
                    faces[(p, i)] = {c: c[0][keep] for c in layer}
                continue
            ks = [idx[tuple(t if t < i else t + 1 for t in sub)] for sub in subsets(p - 1, n)]
            if base is None:
                faces[(p, i)] = {c: tuple(c[k] for k in ks) for c in layer}
            else:
                faces[(p, i)] = {c: (tuple(c[0][k] for k in ks), y.face(p, i, c[1])) for c in layer}
        partial = TruncatedSimplicialSet(cells[:p], faces, degens)
        for i in range(p):
            table = {}
            for z in cells[p - 1]:
                fam = tuple(partial.act(z, p - 1, tuple(t if t <= i else t - 1 for t in s)) for s in subs)
                if base is None:
                    table[z] = fam
                else:
                    yz = base(p - 1, z) if p - 1 <= n else z[1]
                    table[z] = (fam, y.degen(p, i, yz))
            degens[(p, i)] = table
    return TruncatedSimplicialSet(cells, faces, degens)


def cosk(x: TruncatedSimplicialSet, n: int, M: int) -> TruncatedSimplicialSet:
    """``Cosk_n(x) = cosk_n(sk_n x)`` truncated at level ``M``."""
    return _extend(x, n, M, None)


def relative_cosk(f: SimplicialMap, n: int, M: int) -> SimplicialMap:
    """``cosk_n^Y(X) = cosk_n(X) x_{Cosk_n(Y)} Y`` with its structure map to ``Y``.

    ``n = -1`` gives ``Y`` itself.  The base must be given through level ``M``.
    """
    y = f.target
    if n == -1:
        if y.level < M:
            raise ValueError(f"base is truncated at {y.level}, below the requested level {M}")
        return identity_map(sk(y, M))
    z = _extend(f.source, n, M, f)
    comps = [dict(f.components[p]) for p in range(n + 1)]
    comps += [{c: c[1] for c in z.cells[p]} for p in range(n + 1, M + 1)]
    return SimplicialMap(z, sk(y, M), comps)


def unit(x: TruncatedSimplicialSet, n: int, M: int | None = None, base: SimplicialMap | None = None) -> SimplicialMap:
    """The canonical map ``x -> Cosk_n(x)`` (or ``x -> cosk_n^Y(x)`` when ``base`` is given)."""
    M = x.level if M is None else M
    if base is None:
        target = cosk(x, n, max(M, n))
    else:
        target = relative_cosk(base, n, max(M, n)).source
    comps = []
    for p in range(M + 1):
        if p <= n:
            comps.append({c: c for c in x.cells[p]})
            continue
        table = {}
        for c in x.cells[p]:
            fam = tuple(x.act(c, p, s) for s in subsets(p, n))
            table[c] = fam if base is None else (fam, base(p, c))
        comps.append(table)
    return SimplicialMap(sk(x, M), target, comps)


def comparison_map(x: TruncatedSimplicialSet, n: int, p: int) -> SetMap:
    """Degree-``p`` component of the canonical map ``Cosk_n(x) -> Cosk_{n-1}(x)``."""
    if n < 1:
        raise ValueError("comparison needs n >= 1")
    hi = cosk(x, n, max(p, n))
    lo = cosk(x, n - 1, max(p, n))
    if p <= n - 1:
        table = {c: c for c in hi.cells[p]}
    else:
        table = {c: tuple(hi.act(c, p, s) for s in subsets(p, n - 1)) for c in hi.cells[p]}
    return SetMap(hi.cells[p], lo.cells[p], table)


def cosk_map(f: SimplicialMap, n: int, M: int) -> SimplicialMap:
    """Functoriality: ``Cosk_n(f): Cosk_n(X) -> Cosk_n(Y)``."""
    src = cosk(f.source, n, M)
    tgt = cosk(f.target, n, M)
    comps = [dict(f.components[p]) for p in range(n + 1)]
    fn = f.components[n]
    comps += [{c: tuple(fn[v] for v in c) for c in src.cells[p]} for p in range(n + 1, M + 1)]
    return SimplicialMap(src, tgt, comps)


def relative_cosk_map(f: SimplicialMap, x_over: SimplicialMap, y_over: SimplicialMap, n: int, M: int) -> SimplicialMap:
    """``Cosk_n^S(f)`` for ``f: X -> Y`` over ``S`` (``x_over: X -> S``, ``y_over: Y -> S``)."""
    src = relative_cosk(x_over, n, M).source
    tgt = relative_cosk(y_over, n, M).source
    comps = [dict(f.components[p]) for p in range(n + 1)]
    fn = f.components[n]
    comps += [{c: (tuple(fn[v] for v in c[0]), c[1]) for c in src.cells[p]} for p in range(n + 1, M + 1)]
    return SimplicialMap(src, tgt, comps)


def point_base(x: TruncatedSimplicialSet, M: int) -> SimplicialMap:
    """Structure map of ``x`` to the point, with the point given through level ``M``."""
    return SimplicialMap(x, point(max(M, x.level)), [{c: "*" for c in cs} for cs in x.cells])
