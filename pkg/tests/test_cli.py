import io
import subprocess
import sys
import time
from pathlib import Path

import pytest
from hypothesis import given, settings

from causal_explain.cli import RunConfig, UsageError, main, run
from causal_explain.graph import format_graph
from conftest import dags

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
sys.path.insert(0, str(ROOT / "scripts"))

from regen_golden import load_cases, render  # noqa: E402

CASES = load_cases()


def test_every_subcommand_has_a_case():
    from causal_explain.cli import COMMANDS

    used = {argv[0] for _, argv in CASES}
    assert set(COMMANDS) <= used


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv):
    expected = (GOLDEN / "expected" / f"{name}.out").read_text()
    assert render(argv) == expected


def test_worked_examples():
    assert render(["explain", "--ci", "chain.ci", "--vars", "X,Y,Z"]).startswith(
        "exit: 0\n--- stdout\nX -> Y\nY -> Z\n"
    )
    assert render(["orient", "--ci", "collider.ci", "--vars", "X,Y,Z"]).startswith(
        "exit: 0\n--- stdout\nX -> Y\nZ -> Y\n"
    )
    assert render(["verify", "--graph", "cyc.graph", "--ci", "any.ci"]).endswith("FAIL: cyclic\n")


def test_golden_suite_is_fast():
    start = time.perf_counter()
    for _, argv in CASES:
        render(argv)
    assert time.perf_counter() - start < 10


def test_deterministic():
    for _, argv in CASES:
        assert render(argv) == render(argv)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "causal_explain", "dsep", "X", "Z", "|", "Y", "--graph", "chain.graph"],
        cwd=GOLDEN / "inputs",
        capture_output=True,
        text=True,
    )
    assert (proc.returncode, proc.stdout) == (0, "true\n")


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("X Z |\n"))
    assert main(["orient", "--ci", "-", "--vars", "X,Y,Z"]) == 0
    assert capsys.readouterr().out == "X -> Y\nZ -> Y\n"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    assert main(["count", "--graph", "x", "--full-cap", "0"]) == 2
    assert "caps must be positive" in capsys.readouterr().err
    with pytest.raises(UsageError):
        RunConfig("count", component_cap=-1)


def test_run_returns_streams():
    code, out, err = run(RunConfig("explain", ci=str(GOLDEN / "inputs" / "contra.ci"), vars=list("XYZ")))
    assert (code, out) == (1, "") and err.startswith("NO_EXPLANATION: phase IV")


@settings(max_examples=40)
@given(dags(max_vertices=5))
def test_fromdag_explain_equiv_round_trip(tmp_path_factory, g):
    d = tmp_path_factory.mktemp("rt")
    (d / "g.graph").write_text(format_graph(g))
    ci = run(RunConfig("fromdag", graph=str(d / "g.graph")))
    assert ci[0] == 0
    (d / "g.ci").write_text(ci[1])
    code, out, _ = run(RunConfig("explain", ci=str(d / "g.ci"), full_check=True))
    assert code == 0
    (d / "h.graph").write_text(out)
    code, out, _ = run(RunConfig("equiv", args=[str(d / "g.graph"), str(d / "h.graph")]))
    assert (code, out) == (0, "equivalent\n")

