import json
import subprocess
import sys
from pathlib import Path

import pytest

from hyperdescent import cli

ROOT = Path(__file__).resolve().parent.parent
SCENES = ROOT / "scenes"

CECH = """\
version: 1
sets:
  two: [1, 2]
  pt: ["*"]
set_maps:
  fold: {source: two, target: pt, map: {1: "*", 2: "*"}}
tasks:
  - {id: fold, task: cech-acyclicity, map: fold, level: 3}
"""


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, [json.loads(line) for line in out.splitlines() if line.startswith("{")], out, err


def write(tmp_path, text, name="doc.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_single_cech_task_passes(tmp_path, capsys):
    code, rows, _, _ = run(["run", write(tmp_path, CECH)], capsys)
    assert code == cli.EXIT_OK
    assert len(rows) == 1
    assert rows[0]["id"] == "fold" and rows[0]["status"] == "pass"
    assert rows[0]["payload"]["verdict"] == "pass"
    assert isinstance(rows[0]["wall_time"], float)


def test_failed_expectation_exits_one(tmp_path, capsys):
    doc = CECH.replace("level: 3}", "level: 3, expect: {verdict: fail}}")
    code, rows, _, _ = run(["run", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_FAIL
    assert rows[0]["status"] == "fail"
    assert rows[0]["payload"]["expect_mismatch"] == ["verdict"]


def test_payload_expectation_mismatch(tmp_path, capsys):
    doc = CECH.replace("level: 3}", "level: 3, expect: {payload: {level: 7}}}")
    code, rows, _, _ = run(["run", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_FAIL
    assert rows[0]["payload"]["expect_mismatch"] == ["payload.level"]


def test_associativity_failure_names_triple(capsys):
    code, rows, _, err = run(["run", SCENES / "invalid" / "bad_associativity.yaml"], capsys)
    assert code == cli.EXIT_DOC
    assert rows == []
    assert "associativity" in err and "(a o a) o a" in err
    assert "line 4" in err


@pytest.mark.parametrize("name,fragment", [
    ("bad_syntax.yaml", "line 4, column 6"),
    ("unknown_task.yaml", "unknown task 'frobnicate'"),
    ("unresolved.yaml", "no set map named 'missing'"),
])
def test_invalid_documents_exit_two(name, fragment, capsys):
    code, rows, _, err = run(["run", SCENES / "invalid" / name], capsys)
    assert code == cli.EXIT_DOC
    assert rows == []
    assert fragment in err


def test_validation_happens_before_any_task(tmp_path, capsys):
    doc = CECH + "  - {task: cech, map: nowhere, level: 2}\n"
    code, rows, _, _ = run(["run", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_DOC and rows == []


def test_missing_document(capsys):
    code, _, _, err = run(["run"], capsys)
    assert code == cli.EXIT_DOC and "document" in err


def test_unreadable_document(tmp_path, capsys):
    code, _, _, _ = run(["run", tmp_path / "absent.yaml"], capsys)
    assert code == cli.EXIT_DOC


def test_negative_level_rejected(tmp_path, capsys):
    code, _, _, _ = run(["run", write(tmp_path, CECH), "--level", "-1"], capsys)
    assert code == cli.EXIT_DOC


def test_list_tasks_vocabulary(capsys):
    code, _, out, _ = run(["run", "--list-tasks"], capsys)
    assert code == cli.EXIT_OK
    names = {line.split("\t")[0] for line in out.splitlines()}
    for t in ["validate", "sk", "cosk", "hom-delta", "check-hypercover", "homotopy", "cech", "contracting-homotopy",
              "descent-check", "gamma", "cone", "triangle", "bar-quotient", "invariants", "euler", "reduce",
              "universal-equivalence"]:
        assert t in names


def test_list_tasks_of_document_does_not_run(tmp_path, capsys):
    code, rows, out, _ = run(["run", write(tmp_path, CECH), "--list-tasks"], capsys)
    assert code == cli.EXIT_OK
    assert rows == []
    assert out == "0\tcech-acyclicity\tfold\n"


def test_list_tasks_of_invalid_document(capsys):
    code, _, _, _ = run(["run", SCENES / "invalid" / "unknown_task.yaml", "--list-tasks"], capsys)
    assert code == cli.EXIT_DOC


def test_no_timing_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, rows, out, _ = run(["run", SCENES / "weight.yaml", "--no-timing"], capsys)
        assert code == cli.EXIT_OK
        assert all(r["wall_time"] is None for r in rows)
        outs.append(out)
    assert outs[0] == outs[1]


def test_jobs_preserve_document_order(capsys):
    _, _, serial, _ = run(["run", SCENES / "descent.yaml", "--no-timing"], capsys)
    _, rows, parallel, _ = run(["run", SCENES / "descent.yaml", "--no-timing", "--jobs", "3"], capsys)
    assert parallel == serial
    assert [r["index"] for r in rows] == list(range(len(rows)))


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "report.ndjson"
    code, rows, out, _ = run(["run", write(tmp_path, CECH), "--output", dest], capsys)
    assert code == cli.EXIT_OK and out == ""
    lines = dest.read_text().splitlines()
    assert len(lines) == 1 and json.loads(lines[0])["id"] == "fold"


def test_realization_filter(capsys):
    code, rows, _, _ = run(["run", SCENES / "quotients.yaml", "--no-timing", "--realization", "swap"], capsys)
    bar = next(r for r in rows if r["id"] == "c2-bar")
    assert list(bar["payload"]["realizations"]) == ["swap"]
    # the Euler task expects a value for the filtered-out trivial realization
    assert code == cli.EXIT_FAIL
    assert [r["id"] for r in rows if r["status"] != "pass"] == ["c2-bar-euler"]


def test_unknown_realization(capsys):
    code, _, _, err = run(["run", SCENES / "quotients.yaml", "--realization", "nope"], capsys)
    assert code == cli.EXIT_DOC and "nope" in err


def test_level_override(tmp_path, capsys):
    doc = CECH.replace("level: 3}", "level: 3}\n  - {id: growth, task: cosk, of: d, n: 0, level: 2}") \
        .replace("set_maps:", "simplicial_sets:\n  d: {builder: constant, points: two, level: 2}\nset_maps:")
    _, rows, _, _ = run(["run", write(tmp_path, doc), "--level", "4"], capsys)
    growth = next(r for r in rows if r["id"] == "growth")
    assert growth["payload"]["sizes"] == [2, 4, 8, 16, 32]


def test_task_error_reported(tmp_path, capsys):
    doc = CECH.replace('fold: {source: two, target: pt, map: {1: "*", 2: "*"}}',
                       'fold: {source: pt, target: two, map: {"*": 1}}')
    code, rows, _, _ = run(["run", write(tmp_path, doc)], capsys)
    assert code == cli.EXIT_FAIL
    assert rows[0]["status"] in ("fail", "error")


def test_nerve_hypercover_and_bar_examples(capsys):
    _, rows, _, _ = run(["run", SCENES / "descent.yaml", "--no-timing"], capsys)
    assert next(r for r in rows if r["id"] == "nerve-hypercover")["status"] == "pass"
    _, rows, _, _ = run(["run", SCENES / "quotients.yaml", "--no-timing"], capsys)
    bar = next(r for r in rows if r["id"] == "c2-bar")
    assert bar["payload"]["realizations"]["swap"]["homology"] == [1, 0, 0, 0]


def test_euler_of_cone_identity(capsys):
    _, rows, _, _ = run(["run", SCENES / "weight.yaml", "--no-timing"], capsys)
    e = next(r for r in rows if r["id"] == "euler-cone-identity")
    assert e["payload"]["realized_rank"] == {"vect": 0}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperdescent.cli", "run", "--list-tasks"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "bar-quotient" in proc.stdout
