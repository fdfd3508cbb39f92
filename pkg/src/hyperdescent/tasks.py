"""Task vocabulary: each task maps a scene entry to one library operation.

A handler returns ``(verdict, payload)``.  The verdict is the mathematical
check the operation performs; purely descriptive tasks always pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping

from . import descent as ds
from . import motives as mo
from . import simplicial as sp
from . import weight as wt
from .qlinalg import rat_str, verify_contracting_homotopy
from .scene import Scene, SceneError


@dataclass(frozen=True)
class TaskContext:
    scene: Scene
    level: int | None = None  # global truncation override
    realization: str | None = None

    def level_of(self, params: Mapping, default: int | None = None) -> int:
        if self.level is not None:
            return self.level
        v = params.get("level", default)
        if v is None:
            raise SceneError("task needs a level")
        return int(v)

    def realizations(self, cat: mo.PresentedQCategory) -> list[mo.Realization]:
        return self.scene.realizations(cat, self.realization)


Handler = Callable[[TaskContext, Mapping], tuple[bool, dict]]


@dataclass(frozen=True)
class TaskSpec:
    handler: Handler
    refs: Mapping[str, str]  # parameter -> section (required)
    optional: Mapping[str, str] = None
    doc: str = ""


def _js(m: Mapping[int, int]) -> dict[str, int]:
    return {str(n): v for n, v in sorted(m.items())}


def _get(ctx: TaskContext, section: str, params: Mapping, key: str):
    return ctx.scene.get(section, params[key])


# simplicial tasks ------------------------------------------------------------------


def t_validate(ctx, p):
    section, x = ctx.scene.find(p["target"])
    payload: dict[str, Any] = {"kind": section}
    ok = True
    if isinstance(x, sp.TruncatedSimplicialSet):
        problems = sp.validate(x)
        ok = not problems
        payload.update(sizes=x.sizes(), violations=[v.to_json() for v in problems[:20]],
                       split=sp.is_split(x) if ok else None)
    elif isinstance(x, sp.SimplicialMap):
        problems = sp.validate_map(x)
        ok = not problems
        payload.update(level=x.level, violations=[v.to_json() for v in problems[:20]])
    elif isinstance(x, mo.PresentedQCategory):
        payload.update(objects=list(x.objects), basis=len(x.morphisms), table=len(x.table))
    elif isinstance(x, wt.MotiveComplex):
        payload.update(lo=x.lo, sizes=_js(x.sizes()),
                       realized_square_zero={r.name: not wt.realize_complex(x, r).check_square_zero()
                                             for r in ctx.realizations(x.category)})
        ok = all(payload["realized_square_zero"].values())
    elif isinstance(x, wt.SimplicialMotive):
        payload.update(sizes=[len(c) for c in x.components])
    payload["valid"] = ok
    return ok, payload


def t_sk(ctx, p):
    x = _get(ctx, "simplicial_sets", p, "of")
    n = int(p["n"])
    k = sp.sk(x, n)
    nd = sp.FiniteSimplicialSet(k)
    return True, {"sizes": k.sizes(), "nondegenerate": [len(nd.nondegenerate(i)) for i in range(k.level + 1)]}


def t_cosk(ctx, p):
    n, M = int(p["n"]), ctx.level_of(p)
    if "over" in p:
        f = _get(ctx, "simplicial_maps", p, "over")
        c = sp.relative_cosk(f, n, M).source
    else:
        c = sp.cosk(_get(ctx, "simplicial_sets", p, "of"), n, M)
    problems = sp.validate(c)
    return not problems, {"sizes": c.sizes(), "valid": not problems}


def t_hom_delta(ctx, p):
    a = _get(ctx, "simplicial_sets", p, "source")
    x = _get(ctx, "simplicial_sets", p, "target")
    fa = sp.FiniteSimplicialSet.from_truncated(a, p.get("generation_level"))
    maps = sp.hom_delta(fa, x)
    return True, {"count": len(maps), "generation_level": fa.generation_level}


def _predicate(v) -> sp.MorphismClass:
    if v is None or isinstance(v, str):
        return sp.morphism_class(v or "surjective")
    v = dict(v)
    return sp.morphism_class(v.pop("name"), **v)


def t_check_hypercover(ctx, p):
    f = _get(ctx, "simplicial_maps", p, "map")
    up_to = p.get("up_to")
    rep = sp.is_hypercover(f, _predicate(p.get("predicate")), None if up_to is None else int(up_to))
    return rep.ok, {**rep.to_json(), "first_failure": rep.first_failure()}


def t_homotopy(ctx, p):
    M = ctx.level_of(p)
    sec0, f0 = ctx.scene.find(p["f0"])
    _, f1 = ctx.scene.find(p["f1"])
    if sec0 == "set_maps":
        h = sp.build_homotopy_cosk0(f0, f1, M)
        kind = "cosk0"
    else:
        n = int(p["n"])
        x_over = ctx.scene.get("simplicial_maps", p["x_over"]) if "x_over" in p else None
        y_over = ctx.scene.get("simplicial_maps", p["y_over"]) if "y_over" in p else None
        h = sp.build_homotopy_coskn(f0, f1, n, M, x_over, y_over)
        kind = f"cosk{n}"
    rep = h.verify()
    return rep.ok, {"kind": kind, "source_sizes": h.map.source.sizes(), **rep.to_json()}


# descent tasks ---------------------------------------------------------------------


def t_cech(ctx, p):
    f = _get(ctx, "set_maps", p, "map")
    rep = ds.verify_cech_acyclic(f, ctx.level_of(p))
    return rep.ok, rep.to_json()


def t_contracting_homotopy(ctx, p):
    f = _get(ctx, "set_maps", p, "map")
    N = ctx.level_of(p)
    c = ds.augmented_cech_complex(f, N)
    h = ds.contracting_homotopy(f, N)
    chk = verify_contracting_homotopy(c, h, range(-1, N))
    return chk.ok, {"degrees": list(range(-1, N)), "failures": list(chk.failures),
                    "h_-1": [[rat_str(v) for v in row] for row in h[-1].to_rows()] if h[-1].cols <= 4 else None}


def t_descent_check(ctx, p):
    f = _get(ctx, "simplicial_maps", p, "map")
    N = p.get("level") if ctx.level is None else ctx.level
    rep = ds.verify_descent(f, None if N is None else int(N))
    return rep.ok, rep.to_json()


# weight complex tasks ------------------------------------------------------------


def _homologies(ctx, c: wt.MotiveComplex) -> dict[str, dict[str, int]]:
    return {r.name: _js(wt.realized_homology(c, r)) for r in ctx.realizations(c.category)}


def t_gamma(ctx, p):
    x = _get(ctx, "simplicial_motives", p, "motive")
    c = wt.gamma(x)
    return True, {"sizes": _js(c.sizes()), "square_zero": not c.square_nonzero(), "homology": _homologies(ctx, c)}


def t_cone(ctx, p):
    f = _get(ctx, "chain_maps", p, "map")
    c = wt.cone(f)
    rs = ctx.realizations(c.category)
    chi = {}
    ok = True
    for r in rs:
        h = wt.realized_homology(c, r)
        hy, hx = wt.realized_homology(f.target, r), wt.realized_homology(f.source, r)
        ec = wt.euler_char(c, [r]).realized_rank[r.name]
        ey = wt.euler_char(f.target, [r]).realized_rank[r.name]
        ex = wt.euler_char(f.source, [r]).realized_rank[r.name]
        bound = all(h[n] <= hy.get(n, 0) + hx.get(n - 1, 0) for n in h)
        chi[r.name] = {"cone": ec, "target": ey, "source": ex, "les_bound": bound}
        ok = ok and bound and ec == ey - ex
    return ok, {"sizes": _js(c.sizes()), "homology": _homologies(ctx, c), "euler": chi}


def t_triangle(ctx, p):
    f = _get(ctx, "chain_maps", p, "map")
    tri = wt.triangle(f)
    rep = tri.verify(ctx.realizations(f.category))
    return rep.ok, {"U_sizes": _js(tri.U.sizes()), **rep.to_json()}


def t_bar_quotient(ctx, p):
    a = _get(ctx, "actions", p, "action")
    N = ctx.level_of(p)
    c = wt.bar_quotient(a, N)
    inv = wt.invariants_motive(a)
    ok = True
    out = {}
    for r in ctx.realizations(a.category):
        h = wt.realized_homology(c, r)
        rank = inv.realized_rank(r)
        low = [h[n] for n in range(N)]
        good = bool(low) and low[0] == rank and all(v == 0 for v in low[1:])
        ok = ok and good
        out[r.name] = {"homology": low, "top": h[N], "invariant_rank": rank}
    return ok, {"level": N, "sizes": _js(c.sizes()), "realizations": out}


def t_invariants(ctx, p):
    a = _get(ctx, "actions", p, "action")
    k = wt.invariants_motive(a)
    out, ok = {}, True
    for r in ctx.realizations(a.category):
        trace = sum((r.realize(a.act[g]).trace() for g in a.group.elements), Fraction(0)) / a.group.order
        rank = k.realized_rank(r)
        out[r.name] = {"rank": rank, "character_average": rat_str(trace)}
        ok = ok and trace == rank
    return ok, {"group": a.group.name, "order": a.group.order, "realizations": out}


def t_euler(ctx, p):
    c = _get(ctx, "complexes", p, "complex")
    k = wt.euler_char(c, ctx.realizations(c.category))
    return True, {"terms": len(k.terms), "realized_rank": dict(sorted(k.realized_rank.items()))}


def t_reduce(ctx, p):
    c = _get(ctx, "complexes", p, "complex")
    rs = ctx.realizations(c.category)
    if "realization" in p:
        rs = [r for r in rs if r.name == p["realization"]]
        if not rs:
            raise SceneError(f"no realization {p['realization']!r} for this complex")
    out, ok = {}, True
    for r in rs:
        res = wt.reduce(c, r)
        replayed = wt.replay(c, res.log)
        same = all(replayed.term(n).carrier == res.reduced.term(n).carrier for n in c.degrees)
        ok = ok and res.ok and same
        out[r.name] = {**res.to_json(), "replay_matches": same}
    return ok, {"realizations": out}


def t_universal_equivalence(ctx, p):
    g, f, a, b = (ctx.scene.get("simplicial_motive_maps", p[k]) for k in ("g", "f", "a", "b"))
    N = p.get("level") if ctx.level is None else ctx.level
    rep = wt.verify_universal_equivalence(g, f, a, b, ctx.realizations(g.source.category),
                                          None if N is None else int(N))
    return rep.ok, {"degrees": list(rep.degrees), "realizations": rep.to_json()}


TASKS: dict[str, TaskSpec] = {
    "validate": TaskSpec(t_validate, {"target": ""}, doc="run the validator of any named entity"),
    "sk": TaskSpec(t_sk, {"of": "simplicial_sets"}, doc="n-skeleton sizes and nondegenerate counts"),
    "cosk": TaskSpec(t_cosk, {}, {"of": "simplicial_sets", "over": "simplicial_maps"},
                     doc="(relative) n-coskeleton through a level"),
    "hom-delta": TaskSpec(t_hom_delta, {"source": "simplicial_sets", "target": "simplicial_sets"},
                          doc="count simplicial maps"),
    "check-hypercover": TaskSpec(t_check_hypercover, {"map": "simplicial_maps"},
                                 doc="comparison maps lie in a morphism class"),
    "homotopy": TaskSpec(t_homotopy, {"f0": "", "f1": ""}, {"x_over": "simplicial_maps", "y_over": "simplicial_maps"},
                         doc="build and verify a coskeleton homotopy"),
    "cech": TaskSpec(t_cech, {"map": "set_maps"}, doc="augmented Cech nerve acyclicity"),
    "contracting-homotopy": TaskSpec(t_contracting_homotopy, {"map": "set_maps"},
                                     doc="explicit contracting homotopy for constant fiber size"),
    "descent-check": TaskSpec(t_descent_check, {"map": "simplicial_maps"},
                              doc="homology isomorphism along a hypercover"),
    "gamma": TaskSpec(t_gamma, {"motive": "simplicial_motives"}, doc="alternating-face complex"),
    "cone": TaskSpec(t_cone, {"map": "chain_maps"}, doc="mapping cone with Euler and long exact sequence checks"),
    "triangle": TaskSpec(t_triangle, {"map": "chain_maps"}, doc="distinguished triangle checks"),
    "bar-quotient": TaskSpec(t_bar_quotient, {"action": "actions"}, doc="quotient-stack bar complex"),
    "invariants": TaskSpec(t_invariants, {"action": "actions"}, doc="average projector against the character formula"),
    "euler": TaskSpec(t_euler, {"complex": "complexes"}, doc="Euler characteristic in realized ranks"),
    "reduce": TaskSpec(t_reduce, {"complex": "complexes"}, doc="Gaussian cancellation of identity blocks"),
    "universal-equivalence": TaskSpec(t_universal_equivalence,
                                      {"g": "simplicial_motive_maps", "f": "simplicial_motive_maps",
                                       "a": "simplicial_motive_maps", "b": "simplicial_motive_maps"},
                                      doc="cones of a square agree on realized homology"),
}
ALIASES = {"cech-acyclicity": "cech"}


def resolve_task(name: str) -> TaskSpec:
    spec = TASKS.get(ALIASES.get(name, name))
    if spec is None:
        raise SceneError(f"unknown task {name!r}")
    return spec


RESERVED = ("task", "id", "expect")


def task_params(entry: Mapping) -> dict:
    """Task parameters are the entry's keys other than ``task``, ``id`` and ``expect``."""
    return {k: v for k, v in entry.items() if k not in RESERVED}


def check_task(scene: Scene, entry: Mapping) -> None:
    """Fail-fast check of one task entry: known name, required and optional references resolve."""
    if not isinstance(entry, Mapping) or "task" not in entry:
        raise SceneError("each task needs a 'task' key")
    spec = resolve_task(entry["task"])
    params = task_params(entry)
    for key, section in spec.refs.items():
        if key not in params:
            raise SceneError(f"task {entry['task']!r} needs parameter {key!r}")
        if section:
            scene.get(section, params[key])
        else:
            scene.find(params[key])
    for key, section in (spec.optional or {}).items():
        if key in params:
            scene.get(section, params[key])
