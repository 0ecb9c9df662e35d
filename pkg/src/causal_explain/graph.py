"""Partially directed graphs and the structural predicates built on them.

A :class:`Pdag` is immutable. DAGs, patterns and skeletons are all Pdags with
extra constraints; :class:`Dag` is a thin checked wrapper.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

_NAME_RE = re.compile(r"^[^\s;|,#\->]+$")


class GraphError(ValueError):
    """Malformed graph, unknown vertex or invalid query."""


class GraphParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def check_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise GraphError(f"invalid vertex name {name!r}")
    return name


class Pdag:
    """Graph with directed and undirected edges, at most one edge per pair.

    Vertices are kept in lexicographic order and every iteration over the
    graph follows that order.
    """

    __slots__ = ("vertices", "directed", "undirected", "_pa", "_ch", "_und", "_adj")

    def __init__(
        self,
        vertices: Iterable[str] = (),
        directed: Iterable[tuple[str, str]] = (),
        undirected: Iterable[Iterable[str]] = (),
    ):
        directed = frozenset((a, b) for a, b in directed)
        undirected = frozenset(frozenset(e) for e in undirected)
        names = set(vertices)
        for a, b in directed:
            names.update((a, b))
        for e in undirected:
            names.update(e)
        for v in names:
            check_name(v)
        self.vertices: tuple[str, ...] = tuple(sorted(names))
        pa: dict[str, set[str]] = {v: set() for v in self.vertices}
        ch: dict[str, set[str]] = {v: set() for v in self.vertices}
        und: dict[str, set[str]] = {v: set() for v in self.vertices}
        seen: set[frozenset[str]] = set()
        for a, b in directed:
            if a == b:
                raise GraphError(f"self-loop on {a}")
            pair = frozenset((a, b))
            if pair in seen:
                raise GraphError(f"more than one edge between {a} and {b}")
            seen.add(pair)
            pa[b].add(a)
            ch[a].add(b)
        for e in undirected:
            if len(e) != 2:
                raise GraphError(f"bad undirected edge {sorted(e)}")
            if e in seen:
                a, b = sorted(e)
                raise GraphError(f"more than one edge between {a} and {b}")
            seen.add(e)
            a, b = tuple(e)
            und[a].add(b)
            und[b].add(a)
        self.directed: frozenset[tuple[str, str]] = directed
        self.undirected: frozenset[frozenset[str]] = undirected
        self._pa = {v: frozenset(s) for v, s in pa.items()}
        self._ch = {v: frozenset(s) for v, s in ch.items()}
        self._und = {v: frozenset(s) for v, s in und.items()}
        self._adj = {v: self._pa[v] | self._ch[v] | self._und[v] for v in self.vertices}

    # -- basic queries -------------------------------------------------
    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pdag):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.directed == other.directed
            and self.undirected == other.undirected
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.directed, self.undirected))

    def __repr__(self) -> str:
        edges = [f"{a}->{b}" for a, b in sorted(self.directed)]
        edges += [f"{a}--{b}" for a, b in sorted(tuple(sorted(e)) for e in self.undirected)]
        return f"Pdag({', '.join(edges) or ' '.join(self.vertices)})"

    def _check(self, v: str) -> None:
        if v not in self._adj:
            raise GraphError(f"vertex not in graph: {v}")

    def parents(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._pa[v]

    def children(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._ch[v]

    def neighbors(self, v: str) -> frozenset[str]:
        """Vertices joined to ``v`` by an undirected edge."""
        self._check(v)
        return self._und[v]

    def adjacents(self, v: str) -> frozenset[str]:
        self._check(v)
        return self._adj[v]

    def is_adjacent(self, a: str, b: str) -> bool:
        return b in self._adj[a]

    def has_directed(self, a: str, b: str) -> bool:
        return b in self._ch[a]

    def has_undirected(self, a: str, b: str) -> bool:
        return b in self._und[a]

    def edge_pairs(self) -> list[tuple[str, str]]:
        """Adjacent pairs (a, b) with a < b, sorted."""
        return sorted(
            (a, b) for a in self.vertices for b in self._adj[a] if a < b
        )

    def undirected_pairs(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.undirected)  # type: ignore[misc]

    @property
    def is_directed(self) -> bool:
        return not self.undirected

    # -- derived graphs ------------------------------------------------
    def orient(self, a: str, b: str) -> Pdag:
        """Copy with the undirected edge a—b replaced by a→b."""
        if not self.has_undirected(a, b):
            raise GraphError(f"{a} -- {b} is not an undirected edge")
        e = frozenset((a, b))
        return Pdag(self.vertices, self.directed | {(a, b)}, self.undirected - {e})

    def orient_many(self, arcs: Iterable[tuple[str, str]]) -> Pdag:
        arcs = set(arcs)
        drop = {frozenset(arc) for arc in arcs}
        if not drop <= self.undirected:
            raise GraphError("can only orient undirected edges")
        return Pdag(self.vertices, self.directed | arcs, self.undirected - drop)

    def skeleton(self) -> Pdag:
        return Pdag(self.vertices, (), [frozenset(p) for p in self.edge_pairs()])

    def same_adjacencies(self, other: Pdag) -> bool:
        return self.vertices == other.vertices and self._adj == other._adj


class Dag(Pdag):
    """A Pdag with no undirected edges and no directed cycle."""

    __slots__ = ()

    def __init__(self, vertices: Iterable[str] = (), directed: Iterable[tuple[str, str]] = ()):
        super().__init__(vertices, directed, ())
        if has_partially_directed_cycle(self):
            raise GraphError("graph has a directed cycle")

    @classmethod
    def from_pdag(cls, g: Pdag) -> Dag:
        if g.undirected:
            raise GraphError("graph has undirected edges")
        return cls(g.vertices, g.directed)

    def topological_order(self) -> list[str]:
        """Kahn's algorithm, smallest available name first."""
        import heapq

        indeg = {v: len(self._pa[v]) for v in self.vertices}
        heap = [v for v in self.vertices if indeg[v] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            v = heapq.heappop(heap)
            out.append(v)
            for c in self._ch[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    heapq.heappush(heap, c)
        return out

    def ancestors(self, vs: Iterable[str]) -> set[str]:
        """Ancestors of ``vs`` including ``vs`` themselves."""
        return ancestors(self, vs)

    def descendants(self, v: str) -> set[str]:
        seen = {v}
        stack = [v]
        while stack:
            for c in self._ch[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen


@dataclass(frozen=True)
class CiStatement:
    """``a_set`` is independent of ``b_set`` given ``s_set``."""

    a_set: frozenset[str]
    b_set: frozenset[str]
    s_set: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("a_set", "b_set", "s_set"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.a_set or not self.b_set:
            raise GraphError("independence statement needs nonempty sides")
        if (
            self.a_set & self.b_set
            or self.a_set & self.s_set
            or self.b_set & self.s_set
        ):
            raise GraphError("sets not disjoint")
        for v in self.a_set | self.b_set | self.s_set:
            check_name(v)

    @classmethod
    def of(cls, a, b, s=()) -> CiStatement:
        """Build from names or iterables of names."""
        as_set = lambda x: frozenset([x]) if isinstance(x, str) else frozenset(x)
        return cls(as_set(a), as_set(b), as_set(s))

    def canonical(self) -> CiStatement:
        if sorted(self.b_set) < sorted(self.a_set):
            return CiStatement(self.b_set, self.a_set, self.s_set)
        return self

    @property
    def is_pairwise(self) -> bool:
        return len(self.a_set) == 1 and len(self.b_set) == 1

    @property
    def variables(self) -> frozenset[str]:
        return self.a_set | self.b_set | self.s_set

    def sort_key(self):
        return (sorted(self.a_set), sorted(self.b_set), len(self.s_set), sorted(self.s_set))

    def __str__(self) -> str:
        j = ",".join
        return f"{j(sorted(self.a_set))} {j(sorted(self.b_set))} | {j(sorted(self.s_set))}".rstrip()


# -- module-level predicates ---------------------------------------------


def parents(g: Pdag, v: str) -> frozenset[str]:
    return g.parents(v)


def adjacents(g: Pdag, v: str) -> frozenset[str]:
    return g.adjacents(v)


def unshielded_colliders(g: Pdag) -> set[tuple[str, str, str]]:
    """Triples (a, b, c) with a→b←c, a and c non-adjacent, a < c."""
    out = set()
    for b in g.vertices:
        for a, c in combinations(sorted(g.parents(b)), 2):
            if not g.is_adjacent(a, c):
                out.add((a, b, c))
    return out


def pattern_of(g: Pdag) -> Pdag:
    """Same adjacencies; only edges into unshielded colliders stay directed."""
    keep = set()
    for a, b, c in unshielded_colliders(g):
        keep.add((a, b))
        keep.add((c, b))
    rest = [frozenset(p) for p in g.edge_pairs() if (p not in keep and p[::-1] not in keep)]
    return Pdag(g.vertices, keep, rest)


def markov_equivalent(g1: Dag, g2: Dag) -> bool:
    if g1.vertices != g2.vertices:
        raise GraphError("vertex sets differ")
    return pattern_of(g1) == pattern_of(g2)


def has_partially_directed_cycle(g: Pdag) -> bool:
    """True iff some cycle uses at least one directed edge forwards.

    Such a cycle exists exactly when, for some arc u→v, u is reachable from v
    along arcs followed forwards and undirected edges.
    """
    for u, v in sorted(g.directed):
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            if x == u:
                return True
            for y in g._ch[x] | g._und[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return False


def is_chain_graph(g: Pdag) -> bool:
    return not has_partially_directed_cycle(g)


def ancestors(g: Pdag, vs: Iterable[str]) -> set[str]:
    seen = set(vs)
    stack = list(seen)
    while stack:
        for p in g._pa[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def d_separated(g: Dag, a_set, b_set, s_set=()) -> bool:
    """Decide ``a_set ⟂ b_set | s_set`` in ``g`` by moralizing the ancestral graph."""
    a_set, b_set, s_set = (
        frozenset([x]) if isinstance(x, str) else frozenset(x) for x in (a_set, b_set, s_set)
    )
    for v in a_set | b_set | s_set:
        g._check(v)
    if a_set & b_set or a_set & s_set or b_set & s_set:
        raise GraphError("sets not disjoint")
    if g.undirected:
        raise GraphError("d-separation needs a directed graph")
    keep = ancestors(g, a_set | b_set | s_set)
    moral: dict[str, set[str]] = {v: set() for v in keep}
    for v in keep:
        pa = g._pa[v]
        for p in pa:
            moral[v].add(p)
            moral[p].add(v)
        for p, q in combinations(pa, 2):
            moral[p].add(q)
            moral[q].add(p)
    seen = set(a_set)
    queue = deque(a_set)
    while queue:
        x = queue.popleft()
        if x in b_set:
            return False
        for y in moral[x]:
            if y not in seen and y not in s_set:
                seen.add(y)
                queue.append(y)
    return True


def is_consistent_dag_extension(g: Pdag, h: Pdag) -> bool:
    if g.vertices != h.vertices:
        raise GraphError("vertex sets differ")
    if g.undirected or not g.same_adjacencies(h):
        return False
    if not h.directed <= g.directed:
        return False
    if has_partially_directed_cycle(g):
        return False
    return pattern_of(g) == pattern_of(h)


# -- text format -----------------------------------------------------------


def parse_graph(text: str) -> Pdag:
    """Read the line-oriented graph format (``node X``, ``A -> B``, ``A -- B``)."""
    vertices: list[str] = []
    directed: list[tuple[str, str]] = []
    undirected: list[frozenset[str]] = []
    pairs: set[frozenset[str]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        is_node = toks[0] == "node" and len(toks) == 2
        if not is_node and (len(toks) != 3 or toks[1] not in ("->", "--")):
            raise GraphParseError(lineno, f"cannot parse {line!r}")
        try:
            if is_node:
                vertices.append(check_name(toks[1]))
                continue
            a, op, b = check_name(toks[0]), toks[1], check_name(toks[2])
        except GraphError as exc:
            raise GraphParseError(lineno, str(exc)) from None
        if a == b:
            raise GraphParseError(lineno, f"self-loop on {a}")
        pair = frozenset((a, b))
        if pair in pairs:
            raise GraphParseError(lineno, f"duplicate or conflicting edge {a} {op} {b}")
        pairs.add(pair)
        if op == "->":
            directed.append((a, b))
        else:
            undirected.append(pair)
    return Pdag(vertices, directed, undirected)


def _edge_lines(g: Pdag) -> list[str]:
    lines = []
    for a, b in g.edge_pairs():
        if g.has_directed(a, b):
            lines.append((a, b, f"{a} -> {b}"))
        elif g.has_directed(b, a):
            lines.append((b, a, f"{b} -> {a}"))
        else:
            lines.append((a, b, f"{a} -- {b}"))
    return [s for _, _, s in sorted(lines)]


def format_graph(g: Pdag) -> str:
    isolated = [f"node {v}" for v in g.vertices if not g.adjacents(v)]
    return "".join(line + "\n" for line in isolated + _edge_lines(g))


def format_dot(g: Pdag, name: str = "G") -> str:
    out = [f"digraph {name} {{"]
    out += [f'  "{v}";' for v in g.vertices]
    for a, b in g.edge_pairs():
        if g.has_directed(a, b):
            out.append(f'  "{a}" -> "{b}";')
        elif g.has_directed(b, a):
            out.append(f'  "{b}" -> "{a}";')
        else:
            out.append(f'  "{a}" -> "{b}" [dir=none];')
    out.append("}")
    return "\n".join(out) + "\n"


def iter_subsets(items, max_size=None) -> Iterator[tuple[str, ...]]:
    """Subsets by increasing size, each size in lexicographic order."""
    items = sorted(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        yield from combinations(items, k)
