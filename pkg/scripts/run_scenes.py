"""Rerun every scene document and compare against the stored reports.

    python3 scripts/run_scenes.py            # check, exit 1 on any difference
    python3 scripts/run_scenes.py --update   # rewrite scenes/expected/*.ndjson
"""

import argparse
import io
import sys
from pathlib import Path

from hyperdescent.cli import RunConfig, run

ROOT = Path(__file__).resolve().parent.parent
SCENES = ROOT / "scenes"
EXPECTED = SCENES / "expected"


def render(path: Path) -> tuple[int, str]:
    buf = io.StringIO()
    code = run(RunConfig(str(path), timing=False), buf)
    return code, buf.getvalue()


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--update", action="store_true", help="overwrite the expected reports")
    args = p.parse_args(argv)
    EXPECTED.mkdir(exist_ok=True)
    bad = 0
    for doc in sorted(SCENES.glob("*.yaml")):
        code, text = render(doc)
        target = EXPECTED / f"{doc.stem}.ndjson"
        if args.update:
            target.write_text(text)
            print(f"{doc.name}: exit {code}, wrote {target.relative_to(ROOT)}")
            continue
        same = target.exists() and target.read_text() == text
        print(f"{doc.name}: exit {code}, {'identical' if same else 'DIFFERS'}")
        bad += not same or code != 0
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
