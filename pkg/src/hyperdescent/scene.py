"""Scene documents: named entities plus a task list, read from YAML.

Rationals are written as integers or ``"p/q"`` strings.  Entities may refer to
each other by name in any order; every entity is built and validated before
any task runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import yaml

from . import motives as mo
from . import simplicial as sp
from . import weight as wt
from .descent import cech_augmentation, cech_nerve
from .qlinalg import QMatrix

SECTIONS = ("groups", "categories", "realizations", "actions", "sets", "set_maps", "simplicial_sets",
            "simplicial_maps", "simplicial_motives", "simplicial_motive_maps", "complexes", "chain_maps")


class SceneError(Exception):
    """A document that cannot be parsed, resolved or validated."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}" + (f", column {column}" if column is not None else "") if line is not None else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.line, self.column = line, column


def _hashable(v):
    if isinstance(v, list):
        return tuple(_hashable(x) for x in v)
    return v


def _table(v) -> dict:
    """A cell table written as a mapping or, for tuple-valued cells, a list of ``[cell, image]`` pairs."""
    items = v.items() if isinstance(v, Mapping) else v
    return {_hashable(a): _hashable(b) for a, b in items}


def _key_pair(k) -> tuple[int, int]:
    if isinstance(k, str):
        a, b = k.split(",")
        return int(a), int(b)
    a, b = k
    return int(a), int(b)


def _positions(text: str) -> dict[tuple[str, str], int]:
    """``(section, name) -> line`` for the entity definitions, from the YAML node tree."""
    node = yaml.compose(text, Loader=yaml.SafeLoader)
    out = {}
    if not isinstance(node, yaml.MappingNode):
        return out
    for k, v in node.value:
        if k.value in SECTIONS and isinstance(v, yaml.MappingNode):
            for name, _ in v.value:
                out[(k.value, name.value)] = name.start_mark.line + 1
        if k.value == "tasks" and isinstance(v, yaml.SequenceNode):
            for i, t in enumerate(v.value):
                out[("tasks", str(i))] = t.start_mark.line + 1
    return out


@dataclass
class Scene:
    doc: Mapping[str, Any]
    lines: Mapping[tuple[str, str], int] = field(default_factory=dict)
    path: str = ""
    built: dict = field(default_factory=dict)
    _building: set = field(default_factory=set)

    # loading ---------------------------------------------------------------

    @classmethod
    def from_text(cls, text: str, path: str = "") -> "Scene":
        try:
            doc = yaml.safe_load(text)
            lines = _positions(text)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark or e.context_mark
            raise SceneError(f"parse error: {e.problem or e}", mark.line + 1 if mark else None,
                             mark.column + 1 if mark else None) from None
        if not isinstance(doc, dict):
            raise SceneError("document must be a mapping")
        if doc.get("version", 1) != 1:
            raise SceneError(f"unsupported version {doc.get('version')!r}")
        unknown = set(doc) - set(SECTIONS) - {"version", "tasks", "description"}
        if unknown:
            raise SceneError(f"unknown top-level keys {sorted(unknown)}")
        scene = cls(doc, lines, path)
        scene.build_all()
        return scene

    @classmethod
    def from_path(cls, path: str | Path) -> "Scene":
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise SceneError(f"cannot read {path}: {e.strerror}") from None
        return cls.from_text(text, str(path))

    def build_all(self) -> None:
        for section in SECTIONS:
            for name in (self.doc.get(section) or {}):
                self.get(section, name)

    @property
    def tasks(self) -> list[dict]:
        tasks = self.doc.get("tasks") or []
        if not isinstance(tasks, list):
            raise SceneError("tasks must be a list")
        return tasks

    def task_line(self, i: int) -> int | None:
        return self.lines.get(("tasks", str(i)))

    # resolution --------------------------------------------------------------

    def has(self, section: str, name) -> bool:
        return name in (self.doc.get(section) or {})

    def get(self, section: str, name):
        key = (section, name)
        if key in self.built:
            return self.built[key]
        raw = (self.doc.get(section) or {})
        if name not in raw:
            raise SceneError(f"unresolved reference: no {section[:-1].replace('_', ' ')} named {name!r}")
        if key in self._building:
            raise SceneError(f"circular reference through {section}.{name}", self.lines.get((section, str(name))))
        self._building.add(key)
        try:
            value = _BUILDERS[section](self, raw[name] if raw[name] is not None else {}, str(name))
        except SceneError as e:
            if e.line is None:
                raise SceneError(f"{section}.{name}: {e}", self.lines.get((section, str(name)))) from None
            raise
        except (ValueError, KeyError, TypeError, IndexError) as e:
            msg = str(e) if not isinstance(e, KeyError) else f"missing or unknown key {e}"
            raise SceneError(f"{section}.{name}: {msg}", self.lines.get((section, str(name)))) from None
        finally:
            self._building.discard(key)
        self.built[key] = value
        return value

    def realizations(self, cat: mo.PresentedQCategory, only: str | None = None) -> list[mo.Realization]:
        out = []
        for name in (self.doc.get("realizations") or {}):
            r = self.get("realizations", name)
            if r.category is cat and (only is None or r.name == only):
                out.append(r)
        return out

    def find(self, name) -> tuple[str, Any]:
        hits = [s for s in SECTIONS if self.has(s, name)]
        if not hits:
            raise SceneError(f"unresolved reference {name!r}")
        if len(hits) > 1:
            raise SceneError(f"ambiguous name {name!r} (in {', '.join(hits)})")
        return hits[0], self.get(hits[0], name)

    # morphisms -------------------------------------------------------------------

    def morphism(self, cat: mo.PresentedQCategory, d, source: mo.AdditiveObject | None = None,
                 target: mo.AdditiveObject | None = None) -> mo.MotiveMorphism:
        if isinstance(d, str):
            if source is None or target is None or len(source) != 1 or len(target) != 1:
                raise SceneError(f"basis morphism shorthand {d!r} needs one-summand source and target")
            return mo.MotiveMorphism(cat, source, target, {(0, 0): {d: 1}})
        if "matrix" in d:
            m = mo.matrix_morphism(cat, QMatrix.from_rows(d["matrix"], d.get("cols")))
            if source is not None and m.source != source or target is not None and m.target != target:
                raise SceneError("matrix has the wrong shape for its position")
            return m
        src = _obj(d["source"]) if "source" in d else source
        tgt = _obj(d["target"]) if "target" in d else target
        if src is None or tgt is None:
            raise SceneError("morphism needs source and target")
        if d.get("identity"):
            if src != tgt:
                raise SceneError("identity needs equal source and target")
            return mo.MotiveMorphism.identity(cat, src)
        blocks = {}
        for i, j, combo in d.get("blocks", []):
            blocks[(int(i), int(j))] = {str(k): v for k, v in combo.items()}
        return mo.MotiveMorphism(cat, src, tgt, blocks)


def _obj(v) -> mo.AdditiveObject:
    if isinstance(v, str):
        return mo.AdditiveObject((v,))
    return mo.AdditiveObject(tuple(str(x) for x in v))


def _level(d, default=None) -> int:
    v = d.get("level", default)
    if v is None:
        raise SceneError("missing level")
    return int(v)


# section builders ---------------------------------------------------------------


def _group(s: Scene, d, name: str = ''):
    if "cyclic" in d:
        return mo.cyclic_group(int(d["cyclic"]))
    if "symmetric" in d:
        return mo.symmetric_group(int(d["symmetric"]))
    els = tuple(str(e) for e in d["elements"])
    mul = {}
    for g, row in zip(els, d["table"]):
        for h, gh in zip(els, row):
            mul[(g, h)] = str(gh)
    return mo.FiniteGroup(els, mul, name)


def _category(s: Scene, d, name: str = ''):
    if "group_algebra" in d:
        return mo.group_algebra_category(s.get("groups", d["group_algebra"]), str(d.get("object", "X")))
    if "scalar" in d:
        return mo.scalar_category(str(d["scalar"]))
    try:
        return mo.load_category(d)
    except mo.CategoryError as e:
        raise SceneError(f"category rejected: {e}") from None


def _realization(s: Scene, d, name: str = ''):
    cat = s.get("categories", d["category"])
    try:
        if "permutation" in d:
            p = d["permutation"]
            g = s.get("groups", p["group"])
            perm = {str(k): tuple(int(x) for x in v) for k, v in p["perm"].items()}
            r = mo.permutation_realization(cat, g, perm, name, obj=cat.objects[0])
        elif d.get("scalar"):
            r = mo.scalar_realization(cat, name)
        else:
            mats = {str(k): QMatrix.from_rows(v, cols=d["dims"][cat.source(str(k))]) for k, v in d["mats"].items()}
            r = mo.Realization(name, cat, {str(k): int(v) for k, v in d["dims"].items()}, mats)
    except mo.CategoryError as e:
        raise SceneError(f"realization rejected: {e}") from None
    return r


def _action(s: Scene, d, name: str = ''):
    g = s.get("groups", d["group"])
    cat = s.get("categories", d["category"])
    if d.get("regular"):
        return mo.regular_action(g, cat, cat.objects[0])
    carrier = _obj(d["carrier"])
    act = {str(k): s.morphism(cat, v, carrier, carrier) for k, v in d["act"].items()}
    try:
        return mo.GroupAction(g, carrier, act)
    except mo.CategoryError as e:
        raise SceneError(f"action rejected: {e}") from None


def _set(s: Scene, d, name: str = ''):
    return tuple(_hashable(x) for x in d)


def _set_map(s: Scene, d, name: str = ''):
    src = s.get("sets", d["source"]) if isinstance(d["source"], str) and s.has("sets", d["source"]) else _set(s, d["source"])
    tgt = s.get("sets", d["target"]) if isinstance(d["target"], str) and s.has("sets", d["target"]) else _set(s, d["target"])
    return sp.SetMap(src, tgt, _table(d["map"]))


def _sset(s: Scene, d, name: str = ''):
    b = d.get("builder")
    if b is None:
        cells = [tuple(_hashable(c) for c in layer) for layer in d["cells"]]
        faces = {_key_pair(k): _table(v) for k, v in (d.get("faces") or {}).items()}
        degens = {_key_pair(k): _table(v) for k, v in (d.get("degeneracies") or {}).items()}
        x = sp.TruncatedSimplicialSet(cells, faces, degens)
    elif b == "standard_simplex":
        x = sp.standard_simplex(int(d["p"]), _level(d, d["p"]))
    elif b == "boundary":
        x = sp.boundary(int(d["p"])).sset
    elif b == "constant":
        pts = s.get("sets", d["points"]) if isinstance(d["points"], str) else _set(s, d["points"])
        x = sp.constant(pts, _level(d))
    elif b == "point":
        x = sp.point(_level(d))
    elif b == "sk":
        x = sp.sk(s.get("simplicial_sets", d["of"]), int(d["n"]))
    elif b == "cosk":
        x = sp.cosk(s.get("simplicial_sets", d["of"]), int(d["n"]), _level(d))
    elif b == "relative_cosk":
        x = sp.relative_cosk(s.get("simplicial_maps", d["map"]), int(d["n"]), _level(d)).source
    elif b == "cech_nerve":
        x = cech_nerve(s.get("set_maps", d["map"]), _level(d))
    elif b == "product":
        a, c = (s.get("simplicial_sets", n) for n in d["of"])
        x = sp.product(a, c)
    elif b == "disjoint_union":
        a, c = (s.get("simplicial_sets", n) for n in d["of"])
        x = sp.disjoint_union(a, c)
    elif b == "pushout":
        x = sp.pushout(s.get("simplicial_maps", d["i"]), s.get("simplicial_maps", d["j"]))[0]
    else:
        raise SceneError(f"unknown simplicial set builder {b!r}")
    problems = sp.validate(x)
    if problems:
        raise SceneError(f"simplicial identities fail: {problems[0].to_json()}")
    return x


def _smap(s: Scene, d, name: str = ''):
    b = d.get("builder")
    if b is None:
        src = s.get("simplicial_sets", d["source"])
        tgt = s.get("simplicial_sets", d["target"])
        comps = [_table(layer) for layer in d["components"]]
        f = sp.SimplicialMap(src, tgt, comps)
    elif b == "cech_augmentation":
        f = cech_augmentation(s.get("set_maps", d["map"]), _level(d))
    elif b == "to_point":
        f = sp.to_point(s.get("simplicial_sets", d["source"]))
    elif b == "identity":
        f = sp.identity_map(s.get("simplicial_sets", d["of"]))
    elif b == "relative_cosk":
        f = sp.relative_cosk(s.get("simplicial_maps", d["map"]), int(d["n"]), _level(d))
    elif b == "compose":
        f, g = (s.get("simplicial_maps", n) for n in d["of"])
        f = g.compose(f)
    else:
        raise SceneError(f"unknown simplicial map builder {b!r}")
    problems = sp.validate_map(f)
    if problems:
        raise SceneError(f"not a simplicial map: {problems[0].to_json()}")
    return f


def _smotive(s: Scene, d, name: str = ''):
    try:
        if "bar" in d:
            return wt.bar_simplicial_motive(s.get("actions", d["bar"]), _level(d))
        cat = s.get("categories", d["category"])
        if "constant" in d:
            return wt.constant_simplicial_motive(cat, _obj(d["constant"]), _level(d))
        if "from_simplicial_set" in d:
            return wt.simplicial_motive_of(s.get("simplicial_sets", d["from_simplicial_set"]), cat, d.get("object"))
        comps = [_obj(c) for c in d["components"]]
        faces = {(n, i): s.morphism(cat, v, comps[n], comps[n - 1])
                 for (n, i), v in ((_key_pair(k), v) for k, v in (d.get("faces") or {}).items())}
        degens = {(n, i): s.morphism(cat, v, comps[n - 1], comps[n])
                  for (n, i), v in ((_key_pair(k), v) for k, v in (d.get("degeneracies") or {}).items())}
        return wt.SimplicialMotive(cat, tuple(comps), faces, degens)
    except mo.CategoryError as e:
        raise SceneError(str(e)) from None


def _smotive_map(s: Scene, d, name: str = ''):
    try:
        if "identity" in d:
            x = s.get("simplicial_motives", d["identity"])
            return wt.SimplicialMotiveMap(x, x, {n: mo.MotiveMorphism.identity(x.category, c)
                                                 for n, c in enumerate(x.components)})
        x = s.get("simplicial_motives", d["source"])
        y = s.get("simplicial_motives", d["target"])
        comps = {int(n): s.morphism(x.category, v, x.components[int(n)], y.components[int(n)])
                 for n, v in d["components"].items()}
        return wt.SimplicialMotiveMap(x, y, comps)
    except mo.CategoryError as e:
        raise SceneError(str(e)) from None


def _complex(s: Scene, d, name: str = ''):
    try:
        if "bar" in d:
            return wt.bar_quotient(s.get("actions", d["bar"]), _level(d))
        if "gamma" in d:
            return wt.gamma(s.get("simplicial_motives", d["gamma"]))
        if "cone" in d:
            return wt.cone(s.get("chain_maps", d["cone"]))
        if "invariants" in d:
            k = wt.invariants_motive(s.get("actions", d["invariants"]))
            return wt.MotiveComplex(k.category, 0, (k,))
        cat = s.get("categories", d["category"])
        lo = int(d.get("lo", 0))
        terms = []
        for t in d["terms"]:
            if isinstance(t, dict):
                carrier = _obj(t["carrier"])
                terms.append(mo.KaroubiObject(carrier, s.morphism(cat, t["idempotent"], carrier, carrier)))
            else:
                terms.append(mo.KaroubiObject.plain(cat, _obj(t)))
        carrier = lambda n: terms[n - lo].carrier if lo <= n < lo + len(terms) else mo.AdditiveObject(())
        diffs = {int(n): s.morphism(cat, v, carrier(int(n)), carrier(int(n) - 1))
                 for n, v in (d.get("differentials") or {}).items()}
        return wt.MotiveComplex(cat, lo, tuple(terms), diffs)
    except mo.CategoryError as e:
        raise SceneError(str(e)) from None


def _chain_map(s: Scene, d, name: str = ''):
    try:
        if "identity" in d:
            return wt.identity_chain_map(s.get("complexes", d["identity"]))
        if "gamma" in d:
            return wt.gamma_map(s.get("simplicial_motive_maps", d["gamma"]))
        x = s.get("complexes", d["source"])
        y = s.get("complexes", d["target"])
        comps = {int(n): s.morphism(x.category, v, x.term(int(n)).carrier, y.term(int(n)).carrier)
                 for n, v in (d.get("components") or {}).items()}
        return wt.MotiveChainMap(x, y, comps)
    except mo.CategoryError as e:
        raise SceneError(str(e)) from None


_BUILDERS: dict[str, Callable[[Scene, Any], Any]] = {
    "groups": _group,
    "categories": _category,
    "realizations": _realization,
    "actions": _action,
    "sets": _set,
    "set_maps": _set_map,
    "simplicial_sets": _sset,
    "simplicial_maps": _smap,
    "simplicial_motives": _smotive,
    "simplicial_motive_maps": _smotive_map,
    "complexes": _complex,
    "chain_maps": _chain_map,
}
