"""Regenerate the CLI golden files under tests/golden/expected.

Each case in tests/golden/cases.txt is run in-process from the inputs
directory; the exit status, stdout and stderr go to ``<name>.out``.
Inspect the diff before committing.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import os
import shlex
import sys
from pathlib import Path

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def load_cases(path: Path = GOLDEN / "cases.txt") -> list[tuple[str, list[str]]]:
    cases = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, _, cmd = line.partition(":")
        cases.append((name.strip(), shlex.split(cmd)))
    return cases


def render(argv: list[str]) -> str:
    from causal_explain.cli import main

    out, err = io.StringIO(), io.StringIO()
    cwd = os.getcwd()
    os.chdir(GOLDEN / "inputs")
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = main(argv)
            except SystemExit as exc:
                code = exc.code
    finally:
        os.chdir(cwd)
    return f"exit: {code}\n--- stdout\n{out.getvalue()}--- stderr\n{err.getvalue()}"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="report differences, write nothing")
    ns = ap.parse_args()
    stale = 0
    for name, argv in load_cases():
        path = GOLDEN / "expected" / f"{name}.out"
        text = render(argv)
        if path.exists() and path.read_text() == text:
            continue
        stale += 1
        print(f"{'differs' if ns.check else 'wrote'}: {name}")
        if not ns.check:
            path.write_text(text)
    return 1 if ns.check and stale else 0


if __name__ == "__main__":
    sys.exit(main())
