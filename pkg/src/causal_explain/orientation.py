"""Orientation rules, background knowledge, DAG extension and verification.

The four rules, for an undirected edge x—y that gets oriented x→y:

* R1: some a→x with a not adjacent to y.
* R2: some x→b→y.
* R3: two non-adjacent c, d with x—c, x—d, c→y and d→y.
* R4: some x—c, c→d, d→y with c not adjacent to y and d adjacent to x.

Each is sound: orienting y→x instead would create a new unshielded collider
or a directed cycle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .discovery import EXHAUSTIVE, NoPatternError, phase1
from .graph import (
    CiStatement,
    Dag,
    GraphError,
    Pdag,
    check_name,
    d_separated,
    has_partially_directed_cycle,
)
from .indep import DEFAULT_FULL_CAP, FULL, DependencyModel, all_statements


class Rule(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"


PATTERN_RULES = (Rule.R1, Rule.R2, Rule.R3)
ALL_RULES = (Rule.R1, Rule.R2, Rule.R3, Rule.R4)


@dataclass(frozen=True)
class RuleFiring:
    rule: Rule
    tail: str
    head: str
    witnesses: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.rule.value}: {self.tail} -> {self.head} via {','.join(self.witnesses)}"


class ExtensionError(RuntimeError):
    """Orienting a graph produced a directed cycle.

    Only raised when the input was not maximally oriented.
    """


class BackgroundConflict(ValueError):
    def __init__(self, reason: str, step: str):
        super().__init__(f"{reason} ({step})")
        self.reason = reason
        self.step = step


class NoExplanation(ValueError):
    def __init__(self, phase: str, reason: str):
        super().__init__(f"no explanation (phase {phase}): {reason}")
        self.phase = phase
        self.reason = reason


# -- rules ---------------------------------------------------------------------


def _witnesses(g: Pdag, rule: Rule, x: str, y: str) -> Iterator[tuple[str, ...]]:
    """Premises of ``rule`` for orienting the undirected edge x—y as x→y."""
    if rule is Rule.R1:
        for a in sorted(g.parents(x)):
            if not g.is_adjacent(a, y):
                yield (a,)
    elif rule is Rule.R2:
        for b in sorted(g.children(x) & g.parents(y)):
            yield (b,)
    elif rule is Rule.R3:
        for c, d in combinations(sorted(g.neighbors(x) & g.parents(y)), 2):
            if not g.is_adjacent(c, d):
                yield (c, d)
    elif rule is Rule.R4:
        ds = g.parents(y) & g.adjacents(x)
        for c in sorted(g.neighbors(x)):
            if c == y or g.is_adjacent(c, y):
                continue
            for d in sorted(g.children(c) & ds):
                yield (c, d)
    else:  # pragma: no cover
        raise ValueError(rule)


def rule_matches(g: Pdag, rule: Rule) -> Iterator[RuleFiring]:
    """Every instance of ``rule`` in ``g``, lexicographically by (tail, head)."""
    candidates = sorted(
        [(a, b) for a, b in g.undirected_pairs()] + [(b, a) for a, b in g.undirected_pairs()]
    )
    for x, y in candidates:
        for w in _witnesses(g, rule, x, y):
            yield RuleFiring(rule, x, y, w)


def apply_rule(g: Pdag, rule: Rule) -> tuple[Pdag, RuleFiring] | None:
    for firing in rule_matches(g, rule):
        return g.orient(firing.tail, firing.head), firing
    return None


def close_under(
    g: Pdag, rules: Iterable[Rule] = PATTERN_RULES, trace: list | None = None
) -> Pdag:
    """Apply ``rules`` until none matches. Firings are appended to ``trace``."""
    rules = tuple(rules)
    while True:
        for rule in rules:
            step = apply_rule(g, rule)
            if step is not None:
                g, firing = step
                if trace is not None:
                    trace.append(firing)
                break
        else:
            return g


def max_orient(pattern: Pdag) -> Pdag:
    """Completed pattern: orientations shared by every member of the class."""
    return close_under(pattern, PATTERN_RULES)


# -- background knowledge -----------------------------------------------------


@dataclass(frozen=True)
class BackgroundKnowledge:
    forbidden: frozenset[tuple[str, str]] = field(default_factory=frozenset)
    required: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "forbidden", frozenset(tuple(e) for e in self.forbidden))
        object.__setattr__(self, "required", frozenset(tuple(e) for e in self.required))
        for a, b in self.forbidden | self.required:
            check_name(a)
            check_name(b)
            if a == b:
                raise ValueError(f"edge {a} -> {b} is a self-loop")
        both = self.forbidden & self.required
        if both:
            a, b = min(both)
            raise ValueError(f"{a} -> {b} is both required and forbidden")
        for a, b in self.required:
            if (b, a) in self.required:
                a, b = sorted((a, b))
                raise ValueError(f"both {a} -> {b} and {b} -> {a} are required")

    def __bool__(self) -> bool:
        return bool(self.forbidden or self.required)


def parse_background(text: str) -> BackgroundKnowledge:
    """Lines ``require A -> B`` / ``forbid A -> B``; ``#`` comments."""
    forbidden, required = set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 4 or toks[0] not in ("require", "forbid") or toks[2] != "->":
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
        (required if toks[0] == "require" else forbidden).add((toks[1], toks[3]))
    try:
        return BackgroundKnowledge(frozenset(forbidden), frozenset(required))
    except (ValueError, GraphError) as exc:
        raise ValueError(f"background knowledge: {exc}") from None


def format_background(k: BackgroundKnowledge) -> str:
    lines = [f"require {a} -> {b}" for a, b in sorted(k.required)]
    lines += [f"forbid {a} -> {b}" for a, b in sorted(k.forbidden)]
    return "".join(line + "\n" for line in lines)


def _check_background(g: Pdag, k: BackgroundKnowledge, step: str) -> None:
    for a, b in sorted(k.forbidden):
        if a in g and b in g and g.has_directed(a, b):
            raise BackgroundConflict(f"forbidden edge {a} -> {b} is oriented", step)
    for a, b in sorted(k.required):
        if a not in g or b not in g or not g.is_adjacent(a, b):
            raise BackgroundConflict(f"required edge {a} -> {b} joins non-adjacent vertices", step)
        if g.has_directed(b, a):
            raise BackgroundConflict(f"required edge {a} -> {b} is oriented {b} -> {a}", step)


def incorporate_background(
    g: Pdag, k: BackgroundKnowledge, paper_literal: bool = False, trace: list | None = None
) -> Pdag:
    """Maximally oriented graph of ``g`` with respect to ``k``.

    Required edges are oriented one at a time in lexicographic order, each
    followed by closure under all four rules. Unless ``paper_literal`` is
    set, an adjacent undirected forbidden pair (a, b) is then oriented b→a
    the same way. Raises :class:`BackgroundConflict` on the first violated
    constraint.
    """
    _check_background(g, k, "initial check")
    for a, b in sorted(k.required):
        _check_background(g, k, f"before require {a} -> {b}")
        if g.has_undirected(a, b):
            if trace is not None:
                trace.append(("require", a, b))
            g = close_under(g.orient(a, b), ALL_RULES, trace)
            _check_background(g, k, f"after require {a} -> {b}")
    if not paper_literal:
        for a, b in sorted(k.forbidden):
            if a in g and b in g and g.has_undirected(a, b):
                if trace is not None:
                    trace.append(("forbid", a, b))
                g = close_under(g.orient(b, a), ALL_RULES, trace)
                _check_background(g, k, f"after forbid {a} -> {b}")
    return g


# -- phase III ------------------------------------------------------------------


def _orient_all(g: Pdag, check: bool) -> Pdag:
    while g.undirected:
        a, b = g.undirected_pairs()[0]
        g = close_under(g.orient(a, b), ALL_RULES)
        # only directed cycles: with background knowledge the graph need not be a chain graph
        if check and has_partially_directed_cycle(Pdag(g.vertices, g.directed)):
            raise ExtensionError(f"orienting {a} -> {b} produced a directed cycle; input was not maximally oriented")
    return g


def extend_to_dag(g: Pdag) -> Dag:
    """Consistent DAG extension of a maximally oriented graph, without backtracking.

    The smallest undirected edge {a, b} is oriented a→b (a < b), then the
    graph is closed under all four rules; repeat until nothing is undirected.
    """
    return Dag.from_pdag(_orient_all(g, check=True))


# -- phase IV -------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    ok: bool
    check: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "PASS" if self.ok else f"FAIL: {self.detail}"


def _vertex_check(g: Pdag, m: DependencyModel) -> None:
    missing = set(m.variables) - set(g.vertices)
    if missing:
        raise GraphError(f"model mentions vertices absent from graph: {', '.join(sorted(missing))}")


def _equivalence_mismatch(
    g: Dag, m: DependencyModel, cap: int = DEFAULT_FULL_CAP
) -> CiStatement | None:
    if m.scope == FULL and len(g.vertices) > cap:
        raise ValueError(f"full equivalence limited to {cap} vertices, graph has {len(g.vertices)}")
    for st in all_statements(g.vertices, m.scope):
        if m.holds(st) != d_separated(g, st.a_set, st.b_set, st.s_set):
            return st
    return None


def full_equivalence_check(g: Dag, m: DependencyModel, cap: int = DEFAULT_FULL_CAP) -> bool:
    """True iff ``m`` lists exactly the facts ``g`` entails, within ``m.scope``."""
    _vertex_check(g, m)
    return _equivalence_mismatch(g, m, cap) is None


def verify_explanation(
    g: Pdag, m: DependencyModel, full: bool = False, cap: int = DEFAULT_FULL_CAP
) -> Verdict:
    """Check that ``g`` is a complete causal explanation of ``m``.

    S1 acyclicity, S2 every listed fact is entailed, S3 every vertex is
    independent of its predecessors given its parents (in a topological order)
    according to ``m``. With ``full`` the S2/S3 pair is replaced by the exact
    two-way comparison of ``m`` against the graph's entailed facts.
    """
    if g.undirected:
        return Verdict(False, "S1", "graph has undirected edges")
    if has_partially_directed_cycle(g):
        return Verdict(False, "S1", "cyclic")
    _vertex_check(g, m)
    dag = Dag.from_pdag(g)
    if full:
        bad = _equivalence_mismatch(dag, m, cap)
        if bad is None:
            return Verdict(True)
        if m.holds(bad):
            return Verdict(False, "full", f"listed but not entailed: {bad}")
        return Verdict(False, "full", f"entailed but not listed: {bad}")
    for st in m.statements:
        if not d_separated(dag, st.a_set, st.b_set, st.s_set):
            return Verdict(False, "S2", f"not entailed: {st}")
    order = dag.topological_order()
    for i, v in enumerate(order):
        pa = dag.parents(v)
        rest = frozenset(order[:i]) - pa
        if not rest:
            continue
        st = CiStatement(frozenset([v]), rest, pa)
        if not m.implies(st):
            return Verdict(False, "S3", f"local Markov fact not listed: {st}")
    return Verdict(True)


# -- end-to-end -----------------------------------------------------------------


def _oriented(m, vertices, k, search, paper_literal) -> Pdag:
    try:
        g = phase1(m, vertices, search)
    except NoPatternError as exc:
        raise NoExplanation("I", str(exc)) from None
    g = max_orient(g)
    if k:
        try:
            g = incorporate_background(g, k, paper_literal)
        except BackgroundConflict as exc:
            raise NoExplanation("II", str(exc)) from None
    return g


def _extend_and_verify(g, m, full_check, cap) -> Dag:
    # on inputs with no explanation the result may be cyclic; verification rejects it
    oriented = _orient_all(g, check=False)
    verdict = verify_explanation(oriented, m, full=full_check, cap=cap)
    if not verdict:
        raise NoExplanation("IV", verdict.detail)
    return Dag.from_pdag(oriented)


def explain(
    m: DependencyModel,
    vertices: Iterable[str] | None = None,
    k: BackgroundKnowledge | None = None,
    *,
    search: str = EXHAUSTIVE,
    paper_literal: bool = False,
    full_check: bool = False,
    cap: int = DEFAULT_FULL_CAP,
) -> Dag:
    """A DAG whose entailed facts are exactly ``m`` and which respects ``k``.

    Raises :class:`NoExplanation` naming the phase that failed.
    """
    k = k or BackgroundKnowledge()
    g = _oriented(m, vertices, k, search, paper_literal)
    return _extend_and_verify(g, m, full_check, cap)


def common_orientations(
    m: DependencyModel,
    vertices: Iterable[str] | None = None,
    k: BackgroundKnowledge | None = None,
    *,
    search: str = EXHAUSTIVE,
    paper_literal: bool = False,
    full_check: bool = False,
    cap: int = DEFAULT_FULL_CAP,
) -> Pdag:
    """Orientations shared by every explanation of ``m`` consistent with ``k``."""
    k = k or BackgroundKnowledge()
    g = _oriented(m, vertices, k, search, paper_literal)
    _extend_and_verify(g, m, full_check, cap)
    return g
