"""Morphism classes of finite-set maps and the hypercover condition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .core import SetMap, SimplicialMap
from .coskeleton import relative_cosk, unit


@dataclass(frozen=True)
class MorphismClass:
    """A named class ``P`` of maps between finite sets."""

    name: str
    test: Callable[[SetMap], bool] = field(compare=False)

    def __call__(self, f: SetMap) -> bool:
        return self.test(f)


def surjective() -> MorphismClass:
    return MorphismClass("surjective", SetMap.is_surjective)


def bijective() -> MorphismClass:
    return MorphismClass("bijective", lambda f: f.is_surjective() and f.is_injective())


def fibers_of_size(d: int) -> MorphismClass:
    """Maps all of whose fibers have exactly ``d`` elements."""
    return MorphismClass(f"all-fibers-size-{d}", lambda f: all(len(v) == d for v in f.fibers().values()))


def fiber_sizes(allowed: Iterable[int]) -> MorphismClass:
    """User table: maps whose fiber cardinalities all lie in ``allowed``."""
    allowed = frozenset(allowed)
    return MorphismClass(f"fiber-sizes{sorted(allowed)}", lambda f: all(len(v) in allowed for v in f.fibers().values()))


def morphism_class(name: str, **params) -> MorphismClass:
    if name == "surjective":
        return surjective()
    if name == "bijective":
        return bijective()
    if name == "all-fibers-size-d":
        return fibers_of_size(int(params["d"]))
    if name == "user-table":
        return fiber_sizes(int(v) for v in params["fiber_sizes"])
    raise ValueError(f"unknown morphism class {name!r}")


@dataclass(frozen=True)
class DegreeVerdict:
    degree: int
    source_size: int
    target_size: int
    passed: bool

    def to_json(self) -> dict:
        return {"degree": self.degree, "source": self.source_size, "target": self.target_size, "pass": self.passed}


@dataclass(frozen=True)
class HypercoverReport:
    predicate: str
    degrees: tuple[DegreeVerdict, ...]

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.degrees)

    def __bool__(self) -> bool:
        return self.ok

    def first_failure(self) -> int | None:
        return next((v.degree for v in self.degrees if not v.passed), None)

    def to_json(self) -> dict:
        return {"predicate": self.predicate, "degrees": [v.to_json() for v in self.degrees]}


def comparison(f: SimplicialMap, n: int) -> SetMap:
    """The canonical map ``X_n -> cosk_{n-1}^Y(X)_n`` (``X_0 -> Y_0`` for ``n = 0``)."""
    if n == 0:
        return f.degree(0)
    target = relative_cosk(f, n - 1, n).source
    u = unit(f.source, n - 1, n, base=f)
    return SetMap(f.source.cells[n], target.cells[n], u.components[n])


def is_hypercover(f: SimplicialMap, p: MorphismClass, up_to: int | None = None) -> HypercoverReport:
    """Check that each comparison map ``X_n -> cosk_{n-1}^Y(X)_n`` lies in ``p``."""
    N = f.level if up_to is None else up_to
    if N > f.level:
        raise ValueError(f"map is only given through level {f.level}")
    verdicts = []
    for n in range(N + 1):
        c = comparison(f, n)
        verdicts.append(DegreeVerdict(n, len(c.source), len(c.target), p(c)))
    return HypercoverReport(p.name, tuple(verdicts))
