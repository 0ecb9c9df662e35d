"""Chordal graphs, join trees and the orderings used to orient them.

Every consistent DAG extension of a maximally oriented graph is obtained by
orienting its undirected part without creating a cycle or a new unshielded
collider. Join trees give a constructive handle on those orientations: a
tree order on the cliques induces a vertex partial order whose linear
extensions orient the chordal part collider-free.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .graph import (
    Dag,
    GraphError,
    Pdag,
    has_partially_directed_cycle,
    is_consistent_dag_extension,
    pattern_of,
)
from .orientation import ALL_RULES, max_orient, rule_matches

DEFAULT_COMPONENT_CAP = 12


class NotChordalError(GraphError):
    pass


class NotMaximalError(GraphError):
    """Input was expected to be maximally oriented but is not."""


class UndirectedView(Pdag):
    """A Pdag restricted to undirected edges."""

    __slots__ = ()

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[Iterable[str]] = ()):
        super().__init__(vertices, (), edges)

    @classmethod
    def of(cls, g: Pdag) -> UndirectedView:
        """The undirected-edge subgraph of ``g`` on all of its vertices."""
        return cls(g.vertices, g.undirected)

    def induced(self, vs: Iterable[str]) -> UndirectedView:
        vs = set(vs)
        return UndirectedView(vs, [e for e in self.undirected if e <= vs])

    def components(self) -> list[tuple[str, ...]]:
        seen: set[str] = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                for w in self.neighbors(stack.pop()):
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(tuple(sorted(comp)))
        return out


# -- chordality -------------------------------------------------------------------


def maximum_cardinality_search(h: UndirectedView) -> list[str]:
    """Visit order: always the vertex with most visited neighbours (ties by name)."""
    weight = {v: 0 for v in h.vertices}
    left = set(h.vertices)
    order = []
    while left:
        v = min(left, key=lambda x: (-weight[x], x))
        left.remove(v)
        order.append(v)
        for w in h.neighbors(v):
            if w in left:
                weight[w] += 1
    return order


def perfect_elimination_order(h: UndirectedView) -> list[str] | None:
    """Reverse MCS order if it is a perfect elimination order, else ``None``."""
    peo = maximum_cardinality_search(h)[::-1]
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [w for w in h.neighbors(v) if pos[w] > pos[v]]
        for x, y in combinations(later, 2):
            if not h.is_adjacent(x, y):
                return None
    return peo


def is_chordal(h: UndirectedView) -> bool:
    return perfect_elimination_order(h) is not None


def maximal_cliques(h: UndirectedView) -> list[frozenset[str]]:
    peo = perfect_elimination_order(h)
    if peo is None:
        raise NotChordalError("graph is not chordal")
    pos = {v: i for i, v in enumerate(peo)}
    cands = [
        frozenset([v, *(w for w in h.neighbors(v) if pos[w] > pos[v])]) for v in peo
    ]
    cliques = {c for c in cands if not any(c < d for d in cands)}
    return sorted(cliques, key=lambda c: sorted(c))


# -- join trees -----------------------------------------------------------------


@dataclass(frozen=True)
class JoinTree:
    """Clique forest; ``edges`` are index pairs (i, j) with i < j."""

    cliques: tuple[frozenset[str], ...]
    edges: tuple[tuple[int, int], ...]

    def label(self, i: int, j: int) -> frozenset[str]:
        return self.cliques[i] & self.cliques[j]

    def neighbors(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})

    def path(self, i: int, j: int) -> list[int] | None:
        prev = {i: None}
        stack = [i]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        if j not in prev:
            return None
        out = [j]
        while out[-1] != i:
            out.append(prev[out[-1]])
        return out[::-1]

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for i in range(len(self.cliques)):
            if i not in seen:
                comp = sorted(k for k in range(len(self.cliques)) if self.path(i, k) is not None)
                seen.update(comp)
                out.append(comp)
        return out

    def has_running_intersection(self) -> bool:
        for i, j in combinations(range(len(self.cliques)), 2):
            shared = self.label(i, j)
            if not shared:
                continue
            p = self.path(i, j)
            if p is None:
                return False
            for x, y in zip(p, p[1:]):
                if not shared <= self.label(x, y):
                    return False
        return True

    def containing(self, *vs: str) -> list[int]:
        return [i for i, c in enumerate(self.cliques) if set(vs) <= c]


def build_join_tree(h: UndirectedView) -> JoinTree:
    """Maximum-weight spanning forest of the clique graph, weights |Ci ∩ Cj|."""
    cliques = tuple(maximal_cliques(h))
    parent = list(range(len(cliques)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cand = sorted(
        (-len(cliques[i] & cliques[j]), i, j)
        for i, j in combinations(range(len(cliques)), 2)
        if cliques[i] & cliques[j]
    )
    edges = []
    for _, i, j in cand:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j))
    return JoinTree(cliques, tuple(sorted(edges)))


def all_join_trees(h: UndirectedView) -> list[JoinTree]:
    """Every join tree of ``h`` (spanning forests with running intersection)."""
    cliques = tuple(maximal_cliques(h))
    cand = [(i, j) for i, j in combinations(range(len(cliques)), 2) if cliques[i] & cliques[j]]
    n_trees = len(JoinTree(cliques, tuple(cand)).components())
    out = []
    for edges in combinations(cand, len(cliques) - n_trees):
        t = JoinTree(cliques, edges)
        if len(t.components()) == n_trees and t.has_running_intersection():
            out.append(t)
    return out


@dataclass(frozen=True)
class TreeOrder:
    """Rooted version of a join tree: ``parent[i]`` is None for roots.

    Clique i precedes clique j when i lies on the path from j's root to j.
    """

    roots: tuple[int, ...]
    parent: tuple[int | None, ...]

    def precedes(self, i: int, j: int) -> bool:
        x = self.parent[j]
        while x is not None:
            if x == i:
                return True
            x = self.parent[x]
        return False

    def pairs(self) -> set[tuple[int, int]]:
        n = len(self.parent)
        return {(i, j) for i in range(n) for j in range(n) if self.precedes(i, j)}


def tree_order(t: JoinTree, roots: Iterable[int] = ()) -> TreeOrder:
    """Root each tree of ``t``; unnamed components are rooted at their first clique."""
    roots = list(roots)
    comps = t.components()
    chosen = []
    for comp in comps:
        mine = [r for r in roots if r in comp]
        if len(mine) > 1:
            raise ValueError(f"several roots given for one tree: {mine}")
        chosen.append(mine[0] if mine else comp[0])
    stray = set(roots) - set(chosen)
    if stray:
        raise ValueError(f"root index out of range: {sorted(stray)}")
    parent: list[int | None] = [None] * len(t.cliques)
    for r in chosen:
        stack = [r]
        seen = {r}
        while stack:
            x = stack.pop()
            for y in t.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    stack.append(y)
    return TreeOrder(tuple(sorted(chosen)), tuple(parent))


# -- vertex orders ----------------------------------------------------------------


def _closure(vertices: Sequence[str], pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    succ = {v: set() for v in vertices}
    for a, b in pairs:
        succ[a].add(b)
    for k in vertices:
        for i in vertices:
            if k in succ[i]:
                succ[i] |= succ[k]
    return frozenset((a, b) for a in vertices for b in succ[a])


@dataclass(frozen=True)
class VertexOrder:
    """A strict order over ``vertices``, stored transitively closed."""

    vertices: tuple[str, ...]
    relation: frozenset[tuple[str, str]]

    @classmethod
    def from_pairs(cls, vertices: Iterable[str], pairs: Iterable[tuple[str, str]]) -> VertexOrder:
        vs = tuple(sorted(set(vertices)))
        rel = _closure(vs, pairs)
        bad = sorted(a for a, b in rel if a == b)
        if bad:
            raise ValueError(f"order is cyclic through {bad[0]}")
        return cls(vs, rel)

    @classmethod
    def from_sequence(cls, seq: Sequence[str]) -> VertexOrder:
        return cls.from_pairs(seq, combinations(seq, 2))

    def precedes(self, a: str, b: str) -> bool:
        return (a, b) in self.relation

    @property
    def is_total(self) -> bool:
        n = len(self.vertices)
        return len(self.relation) == n * (n - 1) // 2

    def sequence(self) -> list[str]:
        if not self.is_total:
            raise ValueError("order is not total")
        rank = {v: 0 for v in self.vertices}
        for a, _ in self.relation:
            rank[a] += 1
        return sorted(self.vertices, key=lambda v: -rank[v])

    def extends(self, other: VertexOrder) -> bool:
        return other.relation <= self.relation

    def linear_extension(self, extra: Iterable[tuple[str, str]] = ()) -> VertexOrder | None:
        """Total order containing this one plus ``extra``; smallest name first.

        Returns ``None`` when ``extra`` contradicts the order.
        """
        succ = {v: set() for v in self.vertices}
        indeg = {v: 0 for v in self.vertices}
        for a, b in set(self.relation) | set(extra):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
        heap = [v for v in self.vertices if indeg[v] == 0]
        heapq.heapify(heap)
        seq = []
        while heap:
            v = heapq.heappop(heap)
            seq.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        if len(seq) != len(self.vertices):
            return None
        return VertexOrder.from_sequence(seq)


def induced_vertex_order(t: JoinTree, pi: TreeOrder) -> VertexOrder:
    """Vertex partial order induced by a tree order.

    For each tree edge with parent Ci and child Cj, every vertex of Ci∩Cj
    precedes every vertex of Cj∖Ci; the result is closed transitively.
    Vertices sharing the root clique stay incomparable.
    """
    if len(pi.parent) != len(t.cliques):
        raise ValueError("tree order does not match join tree")
    tree_edges = set(t.edges)
    pairs = []
    for j, i in enumerate(pi.parent):
        if i is None:
            if j not in pi.roots:
                raise ValueError(f"clique {j} has no parent and is not a root")
            continue
        if (min(i, j), max(i, j)) not in tree_edges:
            raise ValueError(f"cliques {i} and {j} are not adjacent in the join tree")
        ci, cj = t.cliques[i], t.cliques[j]
        pairs += [(b, c) for b in ci & cj for c in cj - ci]
    if len(tree_edges) != sum(p is not None for p in pi.parent):
        raise ValueError("tree order does not use every join tree edge")
    vertices = set().union(*t.cliques) if t.cliques else set()
    return VertexOrder.from_pairs(vertices, pairs)


def consistent_ordering(h: UndirectedView, roots: Iterable[int] = ()) -> VertexOrder | None:
    """Total order whose orientation of ``h`` has no unshielded collider.

    ``None`` when ``h`` is not chordal (no such order exists then).
    """
    if not is_chordal(h):
        return None
    t = build_join_tree(h)
    order = induced_vertex_order(t, tree_order(t, roots))
    return order.linear_extension()


def orient_by_order(h: UndirectedView, alpha: VertexOrder) -> Dag:
    if not alpha.is_total or not set(h.vertices) <= set(alpha.vertices):
        raise ValueError("need a total order over every vertex")
    arcs = [(a, b) if alpha.precedes(a, b) else (b, a) for a, b in h.undirected_pairs()]
    return Dag(h.vertices, arcs)


# -- extensions of maximally oriented graphs ----------------------------------------


def _chain_components(g: Pdag) -> tuple[Pdag, list[tuple[str, ...]]]:
    """Completed pattern of ``g`` and the components of its undirected part.

    Orientations of different components never interact, so each can be
    handled alone.
    """
    if has_rule_match(g) or _has_cycle(g):
        raise NotMaximalError("graph is not closed under the orientation rules")
    completed = max_orient(pattern_of(g))
    if not completed.directed <= g.directed or not g.same_adjacencies(completed):
        raise NotMaximalError("graph does not extend its completed pattern")
    comps = [c for c in UndirectedView.of(completed).components() if len(c) > 1]
    return completed, comps


def _component_ok(g: Pdag, comp: Sequence[str], arcs: Iterable[tuple[str, str]]) -> bool:
    """Orienting undirected edges of ``g`` inside ``comp`` as ``arcs`` is cycle- and collider-free."""
    inside = set(comp)
    new = list(arcs)
    pa = {v: set(g.parents(v)) for v in inside}
    for a, b in new:
        pa[b].add(a)
    # cycle check restricted to the component
    indeg = {v: len(pa[v] & inside) for v in inside}
    ready = [v for v in inside if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for w in inside:
            if v in pa[w]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
    if seen != len(inside):
        return False
    for a, b in new:
        for z in pa[b]:
            if z != a and not g.is_adjacent(a, z):
                return False
    return True


def _undirected_in(g: Pdag, comp: Sequence[str]) -> list[tuple[str, str]]:
    inside = set(comp)
    return [(a, b) for a, b in g.undirected_pairs() if a in inside and b in inside]


def count_extensions(g: Pdag, cap: int = DEFAULT_COMPONENT_CAP) -> int:
    """Number of consistent DAG extensions of a maximally oriented graph.

    Product over the chain components of the completed pattern; each factor
    counts, by enumeration, the orientations of that component's undirected
    edges that stay acyclic and collider-free.
    """
    _, comps = _chain_components(g)
    total = 1
    for comp in comps:
        edges = _undirected_in(g, comp)
        if len(edges) > cap:
            raise ValueError(f"component {','.join(comp)} has {len(edges)} undirected edges (cap {cap})")
        n = 0
        for flips in product((False, True), repeat=len(edges)):
            arcs = [(b, a) if f else (a, b) for (a, b), f in zip(edges, flips)]
            if _component_ok(g, comp, arcs):
                n += 1
        total *= n
    return total


def clique_precedence(t: JoinTree, arcs: set[tuple[str, str]]) -> set[tuple[int, int]]:
    """Clique precedence forced by existing orientations, transitively closed.

    Ci directly precedes an adjacent Cj when every separator vertex points
    into every vertex of Cj outside the separator, but not likewise into Ci.
    """

    def all_out(src: frozenset, dst: frozenset) -> bool:
        return all((a, b) in arcs for a in src for b in dst)

    gamma = set()
    for i, j in t.edges:
        lam = t.label(i, j)
        for x, y in ((i, j), (j, i)):
            cx, cy = t.cliques[x], t.cliques[y]
            if lam and all_out(lam, cy - lam) and not all_out(lam, cx - lam):
                gamma.add((x, y))
    eps = set(gamma)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(eps), list(eps)):
            if b == c and (a, d) not in eps:
                eps.add((a, d))
                changed = True
    return eps


def _root_candidates(t: JoinTree, eps: set[tuple[int, int]], a: str | None, b: str | None) -> list[int]:
    """Roots suggested by the case analysis, most specific first."""
    minimal = [i for i in range(len(t.cliques)) if not any(y == i for _, y in eps)]
    if a is None:
        return minimal
    split = [i for i, c in enumerate(t.cliques) if (a in c) != (b in c)]
    if not split:
        return minimal
    both = t.containing(a, b)
    return [j for j in both if j in minimal] + [j for j in both if j not in minimal]


@dataclass(frozen=True)
class Witness:
    """One consistent extension plus how its component ordering was found."""

    dag: Dag
    roots: dict
    route: str


def _orient_component(
    g: Pdag, completed: Pdag, comp: Sequence[str], forced: tuple[str, str] | None, strict: bool
) -> tuple[list[tuple[str, str]], int, str]:
    inside = set(comp)
    h = UndirectedView(comp, [e for e in completed.undirected if e <= inside])
    if not is_chordal(h):
        raise NotMaximalError(f"component {','.join(comp)} is not chordal")
    # orientations g added inside the component, e.g. from background knowledge
    arcs = {(x, y) for x, y in g.directed if x in inside and y in inside and h.is_adjacent(x, y)}
    extra = arcs | ({forced} if forced else set())
    first = build_join_tree(h)
    trees = [first] if strict else [first, *(t for t in all_join_trees(h) if t != first)]
    for n, t in enumerate(trees):
        preferred = _root_candidates(t, clique_precedence(t, arcs), *(forced or (None, None)))
        roots = preferred if strict else preferred + [
            i for i in range(len(t.cliques)) if i not in preferred
        ]
        for r in roots:
            total = induced_vertex_order(t, tree_order(t, [r])).linear_extension(extra)
            if total is None:
                continue
            new = [
                (x, y) if total.precedes(x, y) else (y, x) for x, y in _undirected_in(g, comp)
            ]
            if _component_ok(g, comp, new):
                return new, r, "preferred" if n == 0 and r in preferred else "search"
    raise NotMaximalError(f"no consistent orientation found for component {','.join(comp)}")


def witness_extensions(g: Pdag, a: str, b: str, strict: bool = False) -> tuple[Witness, Witness]:
    """Two consistent DAG extensions of ``g``, one with a→b and one with b→a.

    Each chain component of the completed pattern is rooted at a clique picked
    by the case analysis on how a and b sit in the cliques; the induced vertex
    order, together with the orientations ``g`` already has, is extended to a
    total order and used to orient the component. Unless ``strict``, other
    roots are tried if the preferred ones do not give a valid orientation.
    """
    if not g.has_undirected(a, b):
        raise GraphError(f"{a} -- {b} is not an undirected edge")
    completed, comps = _chain_components(g)
    out = []
    for forced in ((a, b), (b, a)):
        arcs = set(g.directed)
        roots, routes = {}, set()
        for comp in comps:
            if not _undirected_in(g, comp):
                continue
            here = forced if a in comp and b in comp else None
            new, root, route = _orient_component(g, completed, comp, here, strict)
            arcs.update(new)
            roots[comp] = root
            routes.add(route)
        dag = Dag(g.vertices, arcs)
        if not is_consistent_dag_extension(dag, g):
            raise NotMaximalError("constructed orientation is not a consistent extension")
        out.append(Witness(dag, roots, "search" if "search" in routes else "preferred"))
    return out[0], out[1]


def has_rule_match(g: Pdag) -> bool:
    return any(next(rule_matches(g, r), None) is not None for r in ALL_RULES)


def _has_cycle(g: Pdag) -> bool:
    return bool(g.directed) and has_partially_directed_cycle(Pdag(g.vertices, g.directed))
