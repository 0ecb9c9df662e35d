"""Dependency models: lists of conditional independence statements."""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

from .graph import CiStatement, Dag, GraphError, check_name, d_separated, iter_subsets

PAIRWISE = "pairwise"
FULL = "full"
DEFAULT_FULL_CAP = 8


class CiParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DependencyModel:
    """An exact list of independence facts with a membership index.

    ``scope`` says which statements the list speaks for. A ``pairwise`` model
    lists singleton-vs-singleton facts only and is silent about set-valued
    ones; a ``full`` model lists every fact it asserts. A model whose
    statements are all singleton pairs defaults to ``pairwise``.
    """

    def __init__(
        self,
        statements: Iterable[CiStatement] = (),
        scope: str | None = None,
        variables: Iterable[str] = (),
    ):
        seen: dict[CiStatement, None] = {}
        for st in statements:
            seen.setdefault(st.canonical(), None)
        self.statements: tuple[CiStatement, ...] = tuple(seen)
        self._index = frozenset(self.statements)
        if scope is None:
            scope = PAIRWISE if all(st.is_pairwise for st in self.statements) else FULL
        if scope not in (PAIRWISE, FULL):
            raise ValueError(f"unknown scope {scope!r}")
        if scope == PAIRWISE and not all(st.is_pairwise for st in self.statements):
            raise ValueError("pairwise model holds a set-valued statement")
        self.scope = scope
        names = set(variables)
        for st in self.statements:
            names |= st.variables
        self.variables: tuple[str, ...] = tuple(sorted(names))

    def __len__(self) -> int:
        return len(self.statements)

    def __iter__(self) -> Iterator[CiStatement]:
        return iter(self.statements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependencyModel):
            return NotImplemented
        return self._index == other._index and self.scope == other.scope

    def __repr__(self) -> str:
        return f"DependencyModel({[str(s) for s in self.statements]}, scope={self.scope!r})"

    def holds(self, stmt: CiStatement) -> bool:
        """Literal membership; the two sides may be given in either order."""
        return stmt.canonical() in self._index

    def implies(self, stmt: CiStatement) -> bool:
        """Membership, reading a set-valued query against a pairwise model.

        A pairwise model answers ``A ⟂ B | S`` with the conjunction of
        ``a ⟂ b | S`` over a in A, b in B, which is exact for models that are
        the entailment lists of DAGs.
        """
        if self.scope == FULL or stmt.is_pairwise:
            return self.holds(stmt)
        return all(
            self.holds(CiStatement.of(a, b, stmt.s_set))
            for a, b in product(sorted(stmt.a_set), sorted(stmt.b_set))
        )

    def with_statements(self, add=(), remove=()) -> DependencyModel:
        drop = {s.canonical() for s in remove}
        kept = [s for s in self.statements if s not in drop]
        return DependencyModel([*kept, *add], self.scope, self.variables)


def holds(m: DependencyModel, stmt: CiStatement) -> bool:
    return m.holds(stmt)


class SepsetMap(Mapping):
    """Separating sets keyed by unordered vertex pair."""

    def __init__(self, entries: Mapping | Iterable = ()):
        data = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for pair, sep in items:
            pair = frozenset(pair)
            sep = frozenset(sep)
            if len(pair) != 2:
                raise ValueError(f"bad pair {sorted(pair)}")
            if sep & pair:
                raise ValueError(f"separating set for {sorted(pair)} contains an endpoint")
            data[pair] = sep
        self._data = data

    def __getitem__(self, pair) -> frozenset[str]:
        return self._data[frozenset(pair)]

    def __iter__(self):
        return iter(sorted(self._data, key=sorted))

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, pair) -> bool:
        return frozenset(pair) in self._data

    def sep(self, a: str, b: str) -> frozenset[str]:
        return self._data[frozenset((a, b))]

    def __repr__(self) -> str:
        body = ", ".join(f"{'/'.join(sorted(p))}: {sorted(s)}" for p, s in self.items())
        return f"SepsetMap({body})"


def _disjoint_pairs(vertices: list[str]) -> Iterator[tuple[frozenset, frozenset, frozenset]]:
    # assign each vertex to A, B, S or nothing; keep the canonical (A, B) order
    for labels in product(range(4), repeat=len(vertices)):
        a = frozenset(v for v, t in zip(vertices, labels) if t == 1)
        b = frozenset(v for v, t in zip(vertices, labels) if t == 2)
        if not a or not b or sorted(b) < sorted(a):
            continue
        s = frozenset(v for v, t in zip(vertices, labels) if t == 3)
        yield a, b, s


def from_dag(g: Dag, mode: str = PAIRWISE, cap: int = DEFAULT_FULL_CAP) -> DependencyModel:
    """The list of exactly the independence facts ``g`` entails."""
    vs = list(g.vertices)
    out = []
    if mode == PAIRWISE:
        for x, y in combinations(vs, 2):
            rest = [v for v in vs if v not in (x, y)]
            for s in iter_subsets(rest):
                if d_separated(g, {x}, {y}, s):
                    out.append(CiStatement.of(x, y, s))
    elif mode == FULL:
        if len(vs) > cap:
            raise ValueError(f"full mode limited to {cap} vertices, graph has {len(vs)}")
        for a, b, s in _disjoint_pairs(vs):
            if d_separated(g, a, b, s):
                out.append(CiStatement(a, b, s))
        out.sort(key=CiStatement.sort_key)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return DependencyModel(out, scope=mode, variables=vs)


def all_statements(vertices: Iterable[str], scope: str) -> Iterator[CiStatement]:
    """Every well-formed statement a model of the given scope could list."""
    vs = sorted(vertices)
    if scope == PAIRWISE:
        for x, y in combinations(vs, 2):
            for s in iter_subsets(v for v in vs if v not in (x, y)):
                yield CiStatement.of(x, y, s)
    else:
        for a, b, s in _disjoint_pairs(vs):
            yield CiStatement(a, b, s)


# -- text format -----------------------------------------------------------

_VARS_PRAGMA = "# vars:"


def _parse_set(tok: str, lineno: int) -> frozenset[str]:
    names = tok.split(",")
    try:
        return frozenset(check_name(n) for n in names)
    except GraphError as exc:
        raise CiParseError(lineno, str(exc)) from None


def parse_ci(text: str, scope: str | None = None) -> DependencyModel:
    """Read ``ASET BSET | SSET`` lines.

    A comment of the form ``# vars: X,Y,Z`` declares vertices that may not
    occur in any statement.
    """
    stmts = []
    declared: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.strip().startswith(_VARS_PRAGMA):
            body = raw.strip()[len(_VARS_PRAGMA):].strip()
            if body:
                declared.extend(_parse_set(body, lineno))
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("|") > 1:
            raise CiParseError(lineno, "more than one '|'")
        left, _, right = line.partition("|")
        sides = left.split()
        if len(sides) != 2:
            raise CiParseError(lineno, f"expected two sets before '|', got {left.strip()!r}")
        cond = right.split()
        if len(cond) > 1:
            raise CiParseError(lineno, "conditioning set must not contain spaces")
        a = _parse_set(sides[0], lineno)
        b = _parse_set(sides[1], lineno)
        s = _parse_set(cond[0], lineno) if cond else frozenset()
        try:
            stmts.append(CiStatement(a, b, s))
        except GraphError as exc:
            raise CiParseError(lineno, str(exc)) from None
    try:
        return DependencyModel(stmts, scope, declared)
    except ValueError as exc:
        raise CiParseError(0, str(exc)) from None


def serialize_ci(m: DependencyModel, declare_vars: bool = False) -> str:
    lines = []
    if declare_vars:
        lines.append(f"{_VARS_PRAGMA} {','.join(m.variables)}")
    for st in m.statements:
        j = ",".join
        lines.append(f"{j(sorted(st.a_set))} {j(sorted(st.b_set))} | {j(sorted(st.s_set))}".rstrip())
    return "".join(line + "\n" for line in lines)
