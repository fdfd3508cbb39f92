"""Exact rational linear algebra: matrices over Q, ranks, kernels, chain complexes.

Entries are :class:`fractions.Fraction`.  Matrices store only their nonzero
entries (row dictionaries); the dense row-major view is available through
:attr:`QMatrix.entries`.  Nothing here ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rat(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class QMatrix:
    """An immutable ``rows x cols`` matrix over Q."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Mapping[int, Mapping[int, object]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        clean: dict[int, dict[int, Fraction]] = {}
        for i, row in (data or {}).items():
            if not 0 <= i < rows:
                raise IndexError(f"row {i} outside 0..{rows - 1}")
            r = {}
            for j, v in row.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} outside 0..{cols - 1}")
                v = as_rat(v)
                if v:
                    r[j] = v
            if r:
                clean[i] = r
        self._data = clean

    # construction -------------------------------------------------------

    @classmethod
    def _trusted(cls, rows: int, cols: int, data: dict[int, dict[int, Fraction]]) -> "QMatrix":
        m = object.__new__(cls)
        m.rows, m.cols, m._data = rows, cols, data
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, {i: dict(enumerate(r)) for i, r in enumerate(rows)})

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence[object]) -> "QMatrix":
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls(rows, cols, {i: {j: entries[i * cols + j] for j in range(cols)} for i in range(rows)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls._trusted(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._trusted(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def column(cls, values: Sequence[object]) -> "QMatrix":
        return cls(len(values), 1, {i: {0: v} for i, v in enumerate(values)})

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[Fraction, ...]:
        """Dense row-major entries."""
        out = [ZERO] * (self.rows * self.cols)
        for i, row in self._data.items():
            for j, v in row.items():
                out[i * self.cols + j] = v
        return tuple(out)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._data.get(i, {}).get(j, ZERO)

    def row_items(self) -> Iterable[tuple[int, dict[int, Fraction]]]:
        """Nonzero rows as ``(i, {j: value})``; do not mutate the dicts."""
        return self._data.items()

    def nnz(self) -> int:
        return sum(len(r) for r in self._data.values())

    def to_rows(self) -> list[list[Fraction]]:
        e = self.entries
        return [list(e[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for i, row in self._data.items():
            for j, v in row.items():
                cols[j][i] = v
        return cols

    def is_zero(self) -> bool:
        return not self._data

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((row.get(i, ZERO) for i, row in self._data.items()), ZERO)

    # algebra ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset((i, frozenset(r.items())) for i, r in self._data.items())))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rat_str(v) for v in r) for r in self.to_rows()) if self.rows * self.cols <= 64 else f"nnz={self.nnz()}"
        return f"QMatrix({self.rows}x{self.cols}: {body})"

    def _check_same_shape(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same_shape(other)
        data = {i: dict(r) for i, r in self._data.items()}
        for i, row in other._data.items():
            tgt = data.setdefault(i, {})
            for j, v in row.items():
                s = tgt.get(j, ZERO) + v
                if s:
                    tgt[j] = s
                else:
                    tgt.pop(j, None)
            if not tgt:
                del data[i]
        return QMatrix._trusted(self.rows, self.cols, data)

    def __neg__(self) -> "QMatrix":
        return QMatrix._trusted(self.rows, self.cols, {i: {j: -v for j, v in r.items()} for i, r in self._data.items()})

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scale(self, c) -> "QMatrix":
        c = as_rat(c)
        if not c:
            return QMatrix.zeros(self.rows, self.cols)
        return QMatrix._trusted(self.rows, self.cols, {i: {j: c * v for j, v in r.items()} for i, r in self._data.items()})

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        odata = other._data
        out: dict[int, dict[int, Fraction]] = {}
        for i, row in self._data.items():
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                brow = odata.get(k)
                if brow is None:
                    continue
                for j, b in brow.items():
                    acc[j] = acc.get(j, ZERO) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return QMatrix._trusted(self.rows, other.cols, out)

    def transpose(self) -> "QMatrix":
        return QMatrix._trusted(self.cols, self.rows, {j: c for j, c in enumerate(self.columns()) if c})

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        cpos = {c: k for k, c in enumerate(cols)}
        data = {}
        for new_i, i in enumerate(rows):
            r = self._data.get(i)
            if r:
                nr = {cpos[j]: v for j, v in r.items() if j in cpos}
                if nr:
                    data[new_i] = nr
        return QMatrix._trusted(len(rows), len(cols), data)

    @staticmethod
    def block(blocks: Sequence[Sequence["QMatrix | None"]], row_dims: Sequence[int], col_dims: Sequence[int]) -> "QMatrix":
        """Assemble a block matrix; ``None`` blocks are zero."""
        roff = [0]
        for d in row_dims:
            roff.append(roff[-1] + d)
        coff = [0]
        for d in col_dims:
            coff.append(coff[-1] + d)
        data: dict[int, dict[int, Fraction]] = {}
        for bi, brow in enumerate(blocks):
            for bj, b in enumerate(brow):
                if b is None:
                    continue
                if b.shape != (row_dims[bi], col_dims[bj]):
                    raise ValueError(f"block ({bi},{bj}) has shape {b.shape}, expected {(row_dims[bi], col_dims[bj])}")
                for i, r in b._data.items():
                    tgt = data.setdefault(roff[bi] + i, {})
                    for j, v in r.items():
                        tgt[coff[bj] + j] = v
        return QMatrix._trusted(roff[-1], coff[-1], data)

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        return QMatrix.block([[self, other]], [self.rows], [self.cols, other.cols])

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        return QMatrix.block([[self], [other]], [self.rows, other.rows], [self.cols])


# elimination ------------------------------------------------------------------


def _echelon(vectors: Iterable[dict[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    """Reduce vectors to echelon form keyed by leading index (pivot normalised to 1)."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for vec in vectors:
        v = dict(vec)
        while v:
            p = min(v)
            w = pivots.get(p)
            if w is None:
                c = v[p]
                if c != ONE:
                    v = {j: x / c for j, x in v.items()}
                pivots[p] = v
                break
            c = v[p]
            for j, x in w.items():
                y = v.get(j, ZERO) - c * x
                if y:
                    v[j] = y
                else:
                    v.pop(j, None)
    return pivots


def _integral(vec: Mapping[int, Fraction]) -> dict[int, int]:
    """Clear denominators and divide out the content."""
    den = 1
    for x in vec.values():
        den = den * x.denominator // math.gcd(den, x.denominator)
    v = {j: int(x * den) for j, x in vec.items()}
    g = math.gcd(*v.values())
    return {j: x // g for j, x in v.items()} if g > 1 else v


def _int_rank(vectors: Iterable[Mapping[int, Fraction]]) -> int:
    """Rank by fraction-free elimination on integer vectors (exact, avoids Fraction overhead)."""
    pivots: dict[int, dict[int, int]] = {}
    for vec in vectors:
        if not vec:
            continue
        v = _integral(vec)
        while v:
            p = min(v)
            w = pivots.get(p)
            if w is None:
                pivots[p] = v
                break
            a, b = w[p], v[p]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            out = {j: a * x for j, x in v.items()}
            for j, x in w.items():
                y = out.get(j, 0) - b * x
                if y:
                    out[j] = y
                else:
                    out.pop(j, None)
            if out:
                g = math.gcd(*out.values())
                if g > 1:
                    out = {j: x // g for j, x in out.items()}
            v = out
    return len(pivots)


def rank(m: QMatrix) -> int:
    """Rank of ``m`` over Q."""
    if m.rows <= m.cols:
        return _int_rank(r for _, r in m.row_items())
    return _int_rank(c for c in m.columns() if c)


def rref(m: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    pivots = _echelon(r for _, r in m.row_items())
    order = sorted(pivots)
    # back-substitute from the right so every pivot column is a unit vector
    for p in reversed(order):
        w = pivots[p]
        for q in order:
            if q >= p:
                break
            v = pivots[q]
            c = v.get(p)
            if c:
                for j, x in w.items():
                    y = v.get(j, ZERO) - c * x
                    if y:
                        v[j] = y
                    else:
                        v.pop(j, None)
    data = {i: pivots[p] for i, p in enumerate(order)}
    return QMatrix._trusted(m.rows, m.cols, data), order


def kernel_basis(m: QMatrix) -> list[QMatrix]:
    """A basis of the null space of ``m``, as ``cols x 1`` column matrices."""
    r, piv = rref(m)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    rows = [dict(row) for _, row in sorted(r.row_items())]
    basis = []
    for f in free:
        vec = {f: ONE}
        for i, p in enumerate(piv):
            c = rows[i].get(f)
            if c:
                vec[p] = -c
        basis.append(QMatrix(m.cols, 1, {i: {0: v} for i, v in vec.items()}))
    return basis


def inverse(m: QMatrix) -> QMatrix:
    """Inverse of a square matrix; raises ``ValueError`` if singular."""
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse of a non-square matrix")
    aug = m.hstack(QMatrix.identity(n))
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return r.submatrix(range(n), range(n, 2 * n))


def span_rank(vectors: Iterable[dict[int, Fraction]]) -> int:
    return _int_rank(vectors)


# chain complexes ------------------------------------------------------------------


@dataclass(frozen=True)
class QComplex:
    """A bounded chain complex ``C_hi -> ... -> C_lo`` of finite-dimensional Q-spaces.

    ``differentials[n]`` is ``d_n: C_n -> C_{n-1}`` for ``lo < n <= hi``.
    """

    lo: int
    dims: tuple[int, ...]
    differentials: Mapping[int, QMatrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        for n, d in self.differentials.items():
            if not self.lo < n <= self.hi:
                raise ValueError(f"differential d_{n} outside degrees {self.lo + 1}..{self.hi}")
            if d.shape != (self.dim(n - 1), self.dim(n)):
                raise ValueError(f"d_{n} has shape {d.shape}, expected {(self.dim(n - 1), self.dim(n))}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.dims[n - self.lo]
        return 0

    def d(self, n: int) -> QMatrix:
        m = self.differentials.get(n)
        return m if m is not None else QMatrix.zeros(self.dim(n - 1), self.dim(n))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees)

    def check_square_zero(self) -> list[int]:
        """Degrees ``n`` where ``d_{n-1} d_n`` is nonzero."""
        return [n for n in self.degrees if not (self.d(n - 1) @ self.d(n)).is_zero()]


def homology_dims(c: QComplex) -> dict[int, int]:
    """``dim H_n`` for every degree of ``c``; raises if ``d o d != 0``."""
    bad = c.check_square_zero()
    if bad:
        raise ValueError(f"not a complex: d_(n-1) d_n != 0 for n in {bad}")
    ranks = {n: rank(c.d(n)) for n in range(c.lo, c.hi + 2)}
    return {n: c.dim(n) - ranks[n] - ranks[n + 1] for n in c.degrees}


@dataclass(frozen=True)
class HomotopyCheck:
    ok: bool
    failures: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_contracting_homotopy(c: QComplex, h: Mapping[int, QMatrix], degrees: Iterable[int] | None = None) -> HomotopyCheck:
    """Check ``d_{n+1} h_n + h_{n-1} d_n = id`` on ``C_n``.

    Missing ``h_n`` are zero.  ``degrees`` defaults to every degree of ``c``.
    """
    for n, hn in h.items():
        if hn.shape != (c.dim(n + 1), c.dim(n)):
            raise ValueError(f"h_{n} has shape {hn.shape}, expected {(c.dim(n + 1), c.dim(n))}")

    def hmap(n):
        m = h.get(n)
        return m if m is not None else QMatrix.zeros(c.dim(n + 1), c.dim(n))

    failures = []
    for n in (c.degrees if degrees is None else degrees):
        lhs = c.d(n + 1) @ hmap(n) + hmap(n - 1) @ c.d(n)
        if lhs != QMatrix.identity(c.dim(n)):
            failures.append(n)
    return HomotopyCheck(not failures, tuple(failures))


@dataclass(frozen=True)
class ChainMap:
    """Degreewise matrices ``f_n: source_n -> target_n``; missing degrees are zero."""

    source: QComplex
    target: QComplex
    components: Mapping[int, QMatrix]

    def f(self, n: int) -> QMatrix:
        m = self.components.get(n)
        return m if m is not None else QMatrix.zeros(self.target.dim(n), self.source.dim(n))

    def non_commuting_degrees(self) -> list[int]:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return [n for n in range(lo, hi + 1)
                if self.target.d(n) @ self.f(n) != self.f(n - 1) @ self.source.d(n)]


def induced_homology_rank(fm: ChainMap, n: int) -> int:
    """Rank of ``H_n(f): H_n(source) -> H_n(target)``."""
    cycles = kernel_basis(fm.source.d(n)) if fm.source.dim(n) else []
    fn = fm.f(n)
    images = [dict(((i, r[0]) for i, r in (fn @ z).row_items())) for z in cycles]
    boundaries = [c for c in fm.target.d(n + 1).columns() if c]
    return span_rank(images + boundaries) - span_rank(boundaries)
