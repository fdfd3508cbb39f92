"""Batch front end: ``hyperdescent run SCENE.yaml`` writes one NDJSON report line per task.

Exit codes: 0 when every task passes, 1 when a check fails or a task errors,
2 when the document cannot be parsed, resolved or validated.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .motives import CategoryError
from .scene import Scene, SceneError
from .tasks import ALIASES, TASKS, TaskContext, check_task, resolve_task, task_params

EXIT_OK, EXIT_FAIL, EXIT_DOC = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    path: str
    level: int | None = None
    realization: str | None = None
    timing: bool = True
    jobs: int = 1


def _mismatches(expected, got, path="payload") -> list[str]:
    if isinstance(expected, Mapping):
        if not isinstance(got, Mapping):
            return [path]
        out = []
        for k, v in expected.items():
            if str(k) not in got and k not in got:
                out.append(f"{path}.{k}")
            else:
                out.extend(_mismatches(v, got[str(k)] if str(k) in got else got[k], f"{path}.{k}"))
        return out
    return [] if expected == got else [path]


def run_task(scene: Scene, index: int, cfg: RunConfig) -> dict[str, Any]:
    entry = scene.tasks[index]
    ctx = TaskContext(scene, cfg.level, cfg.realization)
    spec = resolve_task(entry["task"])
    start = time.perf_counter()
    try:
        verdict, payload = spec.handler(ctx, task_params(entry))
        expect = entry.get("expect") or {}
        want = expect.get("verdict", "pass")
        payload = {"verdict": "pass" if verdict else "fail", **payload}
        bad = [] if payload["verdict"] == want else ["verdict"]
        if "payload" in expect:
            bad += _mismatches(expect["payload"], payload)
        if bad:
            payload["expect_mismatch"] = bad
        status = "fail" if bad else "pass"
    except (SceneError, CategoryError, ValueError, KeyError) as e:
        status, payload = "error", {"error": str(e) if not isinstance(e, KeyError) else f"missing key {e}"}
    wall = round(time.perf_counter() - start, 6) if cfg.timing else None
    return {"index": index, "id": str(entry.get("id", f"task-{index}")), "task": entry["task"],
            "status": status, "payload": payload, "wall_time": wall}


_WORKER: dict[str, Any] = {}


def _init_worker(cfg: RunConfig) -> None:
    _WORKER["scene"] = Scene.from_path(cfg.path)
    _WORKER["cfg"] = cfg


def _work(index: int) -> dict[str, Any]:
    return run_task(_WORKER["scene"], index, _WORKER["cfg"])


def load(cfg: RunConfig) -> Scene:
    """Parse, resolve and validate everything; raises :class:`SceneError`."""
    scene = Scene.from_path(cfg.path)
    for i, entry in enumerate(scene.tasks):
        try:
            check_task(scene, entry)
        except SceneError as e:
            raise SceneError(f"task {i}: {e}", scene.task_line(i)) from None
    if cfg.realization is not None:
        names = list(scene.doc.get("realizations") or {})
        if cfg.realization not in names:
            raise SceneError(f"no realization named {cfg.realization!r}")
    return scene


def run(cfg: RunConfig, out) -> int:
    try:
        scene = load(cfg)
    except SceneError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOC
    n = len(scene.tasks)
    if cfg.jobs > 1 and n > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(cfg.jobs, mp_context=ctx, initializer=_init_worker, initargs=(cfg,)) as ex:
            results = list(ex.map(_work, range(n)))
    else:
        results = [run_task(scene, i, cfg) for i in range(n)]
    for r in results:
        out.write(json.dumps(r) + "\n")
    out.flush()
    return EXIT_OK if all(r["status"] == "pass" for r in results) else EXIT_FAIL


def list_tasks(path: str | None, out) -> int:
    if path is None:
        for name, spec in TASKS.items():
            out.write(f"{name}\t{spec.doc}\n")
        for alias, name in ALIASES.items():
            out.write(f"{alias}\talias of {name}\n")
        return EXIT_OK
    try:
        scene = load(RunConfig(path))
    except SceneError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOC
    for i, entry in enumerate(scene.tasks):
        out.write(f"{i}\t{entry['task']}\t{entry.get('id', f'task-{i}')}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperdescent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run the tasks of a scene document")
    r.add_argument("document", nargs="?", help="YAML scene document")
    r.add_argument("--level", type=int, help="override the truncation level of every task")
    r.add_argument("--realization", metavar="NAME", help="use only this realization")
    r.add_argument("--list-tasks", action="store_true",
                   help="print the document's tasks (or the task vocabulary) without running")
    r.add_argument("--output", metavar="PATH", help="write the NDJSON report here instead of stdout")
    r.add_argument("--no-timing", action="store_true", help="report wall_time as null")
    r.add_argument("--jobs", type=int, default=1, help="worker processes for independent tasks")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_tasks:
        return list_tasks(args.document, sys.stdout)
    if args.document is None:
        print("error: a document is required", file=sys.stderr)
        return EXIT_DOC
    if args.level is not None and args.level < 0:
        print("error: --level must be nonnegative", file=sys.stderr)
        return EXIT_DOC
    cfg = RunConfig(args.document, args.level, args.realization, not args.no_timing, max(1, args.jobs))
    if args.output:
        with open(args.output, "w") as fh:
            return run(cfg, fh)
    return run(cfg, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
