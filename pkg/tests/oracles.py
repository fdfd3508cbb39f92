"""Independent reference computations used by the tests.

Nothing here imports the package's linear algebra or coskeleton code: ranks
use plain dense Fraction elimination and simplicial constructions are done
by brute-force enumeration over all candidate tuples.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def dense_rank(rows) -> int:
    """Rank of a dense list-of-lists matrix by textbook row reduction."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def dense_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def dense_homology(dims: dict[int, int], mats: dict[int, list]) -> dict[int, int]:
    """``dims[n] - rank d_n - rank d_{n+1}`` with ``mats[n]: C_n -> C_{n-1}`` dense."""
    def rk(n):
        m = mats.get(n)
        return dense_rank(m) if m else 0
    return {n: dims[n] - rk(n) - rk(n + 1) for n in dims}


def alternating_face_matrices(cells, face):
    """Dense Moore differentials of a simplicial set given as ``cells[n]`` and ``face(n, i, c)``."""
    mats = {}
    for n in range(1, len(cells)):
        idx = {c: k for k, c in enumerate(cells[n - 1])}
        m = [[Fraction(0)] * len(cells[n]) for _ in cells[n - 1]]
        for j, c in enumerate(cells[n]):
            for i in range(n + 1):
                m[idx[face(n, i, c)]][j] += (-1) ** i
        mats[n] = m
    return mats


def brute_cosk_count(x, n: int, p: int) -> int:
    """``|Hom(sk_n Delta[p], x)|``: all families of n-cells on (n+1)-subsets agreeing on shared faces."""
    subs = list(itertools.combinations(range(p + 1), n + 1))
    count = 0
    for fam in itertools.product(x.cells[n], repeat=len(subs)):
        seen = {}
        ok = True
        for s, c in zip(subs, fam):
            for j in range(n + 1):
                key = s[:j] + s[j + 1:]
                fc = x.faces[(n, j)][c] if n > 0 else None
                if key in seen and seen[key] != fc:
                    ok = False
                    break
                seen[key] = fc
            if not ok:
                break
        count += ok
    return count


def brute_hom_count(a, x, level: int) -> int:
    """Number of degreewise maps ``a -> x`` (degrees <= level) commuting with every face and degeneracy."""
    count = 0
    choices = [list(itertools.product(x.cells[k], repeat=len(a.cells[k]))) for k in range(level + 1)]
    for combo in itertools.product(*choices):
        f = [dict(zip(a.cells[k], combo[k])) for k in range(level + 1)]
        ok = all(f[k - 1][a.faces[(k, i)][c]] == x.faces[(k, i)][f[k][c]]
                 for k in range(1, level + 1) for i in range(k + 1) for c in a.cells[k])
        ok = ok and all(f[k][a.degeneracies[(k, i)][c]] == x.degeneracies[(k, i)][f[k - 1][c]]
                        for k in range(1, level + 1) for i in range(k) for c in a.cells[k - 1])
        count += ok
    return count


def orbit_count(perm: dict[str, list[int]]) -> int:
    """Orbits of a permutation action by union-find (Burnside's count)."""
    n = len(next(iter(perm.values())))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for p in perm.values():
        for i, j in enumerate(p):
            parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


def action_groupoid_nerve(elements, mul, perm, N: int):
    """Nerve of the action groupoid of a finite G-set, cells ``(s, g1, ..., gk)``.

    Faces: ``d0`` acts by ``g1`` and drops it, inner faces multiply adjacent
    elements (later one first), the last face drops ``gk``.  Returns
    ``(cells, face)`` for :func:`alternating_face_matrices`.
    """
    npts = len(next(iter(perm.values())))
    cells = [[(s,) + gs for s in range(npts) for gs in itertools.product(elements, repeat=k)]
             for k in range(N + 1)]

    def face(k, i, c):
        s, gs = c[0], c[1:]
        if i == 0:
            return (perm[gs[0]][s],) + gs[1:]
        if i == k:
            return (s,) + gs[:-1]
        return (s,) + gs[:i - 1] + (mul[(gs[i], gs[i - 1])],) + gs[i + 1:]

    return cells, face
