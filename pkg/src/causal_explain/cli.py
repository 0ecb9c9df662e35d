"""Command-line front end.

Exit status: 0 success/true, 1 FAIL / no explanation / false, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import chordal, discovery, graph, indep, orientation
from .graph import CiStatement, Dag, GraphError, Pdag


class UsageError(Exception):
    pass


class Failure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    ci: str | None = None
    graph: str | None = None
    bk: str | None = None
    vars: list[str] | None = None
    search: str = discovery.EXHAUSTIVE
    paper_literal: bool = False
    full_check: bool = False
    format: str = "text"
    mode: str = indep.PAIRWISE
    full_cap: int = indep.DEFAULT_FULL_CAP
    component_cap: int = chordal.DEFAULT_COMPONENT_CAP
    args: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.full_cap <= 0 or self.component_cap <= 0:
            raise UsageError("caps must be positive")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _need(cfg: RunConfig, *names: str) -> None:
    for n in names:
        if getattr(cfg, n) is None:
            raise UsageError(f"{cfg.command} needs --{n}")


def _model(cfg: RunConfig) -> indep.DependencyModel:
    return indep.parse_ci(_read(cfg.ci))


def _graph(cfg: RunConfig, path: str | None = None) -> Pdag:
    g = graph.parse_graph(_read(path or cfg.graph))
    if cfg.vars:
        g = Pdag(set(g.vertices) | set(cfg.vars), g.directed, g.undirected)
    return g


def _dag(g: Pdag) -> Dag:
    try:
        return Dag.from_pdag(g)
    except GraphError as exc:
        raise Failure(f"not a DAG: {exc}") from None


def _bk(cfg: RunConfig) -> orientation.BackgroundKnowledge:
    if cfg.bk is None:
        return orientation.BackgroundKnowledge()
    return orientation.parse_background(_read(cfg.bk))


def _vertices(cfg: RunConfig, m: indep.DependencyModel) -> list[str]:
    return list(cfg.vars) if cfg.vars else list(m.variables)


def _emit(cfg: RunConfig, g: Pdag) -> str:
    return graph.format_dot(g) if cfg.format == "dot" else graph.format_graph(g)


def _opts(cfg: RunConfig) -> dict:
    return dict(
        search=cfg.search,
        paper_literal=cfg.paper_literal,
        full_check=cfg.full_check,
        cap=cfg.full_cap,
    )


def _oriented_input(cfg: RunConfig) -> Pdag:
    """Maximally oriented graph from a CI file or a pattern file."""
    if cfg.ci is not None:
        m = _model(cfg)
        return orientation.common_orientations(m, _vertices(cfg, m), _bk(cfg), **_opts(cfg))
    _need(cfg, "graph")
    g = orientation.max_orient(_graph(cfg))
    k = _bk(cfg)
    if k:
        g = orientation.incorporate_background(g, k, cfg.paper_literal)
    return g


def _split_query(tokens: list[str]) -> tuple[str, str, str]:
    if "|" in tokens:
        i = tokens.index("|")
        left, right = tokens[:i], tokens[i + 1:]
    else:
        left, right = tokens, []
    if len(left) != 2 or len(right) > 1:
        raise UsageError("query must look like: A B | S")
    return left[0], left[1], right[0] if right else ""


def _set(tok: str) -> frozenset[str]:
    return frozenset(x for x in tok.split(",") if x)


def run(cfg: RunConfig) -> tuple[int, str, str]:
    """Execute one subcommand; returns (exit status, stdout, stderr)."""
    try:
        return 0, _dispatch(cfg), ""
    except Failure as exc:
        return 1, "", f"FAIL: {exc}\n"
    except orientation.NoExplanation as exc:
        return 1, "", f"NO_EXPLANATION: phase {exc.phase}: {exc.reason}\n"
    except orientation.BackgroundConflict as exc:
        return 1, "", f"FAIL: {exc}\n"
    except (UsageError, graph.GraphParseError, indep.CiParseError) as exc:
        return 2, "", f"error: {exc}\n"
    except (GraphError, ValueError) as exc:
        return 2, "", f"error: {exc}\n"


def _dispatch(cfg: RunConfig) -> str:
    c = cfg.command
    if c == "skeleton":
        _need(cfg, "ci")
        m = _model(cfg)
        skel, seps = discovery.build_skeleton(m, _vertices(cfg, m), cfg.search)
        out = _emit(cfg, skel)
        if cfg.format == "text":
            for pair in seps:
                a, b = sorted(pair)
                out += f"# sep {a} {b} | {','.join(sorted(seps[pair]))}".rstrip() + "\n"
        return out
    if c == "pattern":
        if cfg.ci is not None:
            m = _model(cfg)
            try:
                g = discovery.phase1(m, _vertices(cfg, m), cfg.search)
            except discovery.NoPatternError as exc:
                raise Failure(str(exc)) from None
            return _emit(cfg, g)
        _need(cfg, "graph")
        return _emit(cfg, graph.pattern_of(_dag(_graph(cfg))))
    if c == "orient":
        return _emit(cfg, _oriented_input(cfg))
    if c == "extend":
        g = _oriented_input(cfg)
        try:
            return _emit(cfg, orientation.extend_to_dag(g))
        except orientation.ExtensionError as exc:
            raise Failure(str(exc)) from None
    if c == "explain":
        _need(cfg, "ci")
        m = _model(cfg)
        return _emit(cfg, orientation.explain(m, _vertices(cfg, m), _bk(cfg), **_opts(cfg)))
    if c == "verify":
        _need(cfg, "graph", "ci")
        verdict = orientation.verify_explanation(
            _graph(cfg), _model(cfg), full=cfg.full_check, cap=cfg.full_cap
        )
        if not verdict:
            raise Failure(verdict.detail)
        return "PASS\n"
    if c == "count":
        return f"{chordal.count_extensions(_oriented_input(cfg), cfg.component_cap)}\n"
    if c == "witness":
        if len(cfg.args) != 2:
            raise UsageError("witness needs two vertex names")
        a, b = cfg.args
        g = _oriented_input(cfg)
        try:
            w1, w2 = chordal.witness_extensions(g, a, b)
        except chordal.NotMaximalError as exc:
            raise Failure(str(exc)) from None
        if cfg.format == "dot":
            return graph.format_dot(w1.dag, "witness1") + graph.format_dot(w2.dag, "witness2")
        return (
            f"# witness {a} -> {b}\n{graph.format_graph(w1.dag)}"
            f"# witness {b} -> {a}\n{graph.format_graph(w2.dag)}"
        )
    if c == "dsep":
        _need(cfg, "graph")
        a, b, s = _split_query(cfg.args)
        st = CiStatement(_set(a), _set(b), _set(s))
        g = _dag(_graph(cfg))
        if graph.d_separated(g, st.a_set, st.b_set, st.s_set):
            return "true\n"
        raise Failure(f"{st} is not entailed")
    if c == "equiv":
        if len(cfg.args) != 2:
            raise UsageError("equiv needs two graph files")
        g1 = _dag(_graph(cfg, cfg.args[0]))
        g2 = _dag(_graph(cfg, cfg.args[1]))
        if graph.markov_equivalent(g1, g2):
            return "equivalent\n"
        raise Failure("not Markov equivalent")
    if c == "fromdag":
        _need(cfg, "graph")
        m = indep.from_dag(_dag(_graph(cfg)), cfg.mode, cfg.full_cap)
        return indep.serialize_ci(m, declare_vars=True)
    raise UsageError(f"unknown command {c}")


COMMANDS = {
    "skeleton": "adjacencies and separating sets from a CI file",
    "pattern": "pattern from a CI file (or of a DAG given with --graph)",
    "orient": "orientations common to every explanation",
    "extend": "one consistent DAG extension of the oriented graph",
    "verify": "check that a DAG explains a CI file exactly",
    "explain": "find a DAG explaining a CI file",
    "count": "number of consistent DAG extensions",
    "witness": "two extensions disagreeing on edge A B",
    "dsep": "test A B | S by d-separation",
    "equiv": "test Markov equivalence of two DAG files",
    "fromdag": "CI file listing the facts a DAG entails",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="causal-explain", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("args", nargs="*", help="positional operands (witness, dsep, equiv)")
        sp.add_argument("--ci", help="CI statement file ('-' for stdin)")
        sp.add_argument("--graph", help="graph file ('-' for stdin)")
        sp.add_argument("--bk", help="background knowledge file")
        sp.add_argument("--vars", help="comma-separated vertex list; overrides inference")
        sp.add_argument("--search", choices=[discovery.EXHAUSTIVE, discovery.NEIGHBORHOOD],
                        default=discovery.EXHAUSTIVE)
        sp.add_argument("--paper-literal", action="store_true",
                        help="only check forbidden edges, never orient them")
        sp.add_argument("--full-check", action="store_true",
                        help="verify by comparing every entailed fact")
        sp.add_argument("--format", choices=["text", "dot"], default="text")
        sp.add_argument("--mode", choices=[indep.PAIRWISE, indep.FULL], default=indep.PAIRWISE)
        sp.add_argument("--full-cap", type=int, default=indep.DEFAULT_FULL_CAP)
        sp.add_argument("--component-cap", type=int, default=chordal.DEFAULT_COMPONENT_CAP)
    return p


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=ns.command,
            ci=ns.ci,
            graph=ns.graph,
            bk=ns.bk,
            vars=[v for v in ns.vars.split(",") if v] if ns.vars else None,
            search=ns.search,
            paper_literal=ns.paper_literal,
            full_check=ns.full_check,
            format=ns.format,
            mode=ns.mode,
            full_cap=ns.full_cap,
            component_cap=ns.component_cap,
            args=ns.args,
        )
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    code, out, err = run(cfg)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
