"""Skeleton and collider recovery from a dependency model."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .graph import CiStatement, Pdag, iter_subsets
from .indep import DependencyModel, SepsetMap

EXHAUSTIVE = "exhaustive"
NEIGHBORHOOD = "neighborhood"


class NoPatternError(ValueError):
    """The model's independence facts cannot come from any DAG pattern."""


def _vertex_list(m: DependencyModel, vertices: Iterable[str] | None) -> list[str]:
    if vertices is None:
        return list(m.variables)
    vs = sorted(set(vertices))
    unknown = set(m.variables) - set(vs)
    if unknown:
        raise ValueError(f"statement references unknown vertex: {', '.join(sorted(unknown))}")
    return vs


def build_skeleton(
    m: DependencyModel, vertices: Iterable[str] | None = None, search: str = EXHAUSTIVE
) -> tuple[Pdag, SepsetMap]:
    """Undirected graph joining every pair no listed statement separates.

    Separating sets are tried smallest first, lexicographic within a size;
    the first hit becomes the recorded sepset.

    ``search="neighborhood"`` follows the PC schedule instead: sizes grow in
    rounds and each pair only conditions on current neighbours of one
    endpoint, so fewer statements are consulted.
    """
    vs = _vertex_list(m, vertices)
    if search == EXHAUSTIVE:
        seps = {}
        for a, b in combinations(vs, 2):
            rest = [v for v in vs if v not in (a, b)]
            for s in iter_subsets(rest):
                if m.holds(CiStatement.of(a, b, s)):
                    seps[frozenset((a, b))] = frozenset(s)
                    break
        edges = [frozenset(p) for p in combinations(vs, 2) if frozenset(p) not in seps]
        return Pdag(vs, (), edges), SepsetMap(seps)
    if search != NEIGHBORHOOD:
        raise ValueError(f"unknown search mode {search!r}")
    return _pc_skeleton(m, vs)


def _pc_skeleton(m: DependencyModel, vs: list[str]) -> tuple[Pdag, SepsetMap]:
    adj = {v: set(vs) - {v} for v in vs}
    seps: dict[frozenset, frozenset] = {}
    size = 0
    while any(len(adj[v]) - 1 >= size for v in vs):
        for a, b in combinations(vs, 2):
            if b not in adj[a]:
                continue
            found = None
            for x, y in ((a, b), (b, a)):
                for s in iter_subsets(adj[x] - {y}, size):
                    if len(s) == size and m.holds(CiStatement.of(a, b, s)):
                        found = frozenset(s)
                        break
                if found is not None:
                    break
            if found is not None:
                adj[a].discard(b)
                adj[b].discard(a)
                seps[frozenset((a, b))] = found
        size += 1
    edges = [frozenset((a, b)) for a in vs for b in adj[a] if a < b]
    return Pdag(vs, (), edges), SepsetMap(seps)


def orient_colliders(skeleton: Pdag, seps: SepsetMap) -> Pdag:
    """Orient a→b←c for every unshielded triple whose middle is not in Sep(a, c)."""
    if skeleton.directed:
        raise ValueError("skeleton must be undirected")
    arcs: set[tuple[str, str]] = set()
    for b in skeleton.vertices:
        for a, c in combinations(sorted(skeleton.adjacents(b)), 2):
            if skeleton.is_adjacent(a, c):
                continue
            if (a, c) not in seps:
                raise ValueError(f"no separating set recorded for {a} and {c}")
            if b not in seps.sep(a, c):
                arcs.add((a, b))
                arcs.add((c, b))
    clash = sorted((a, b) for a, b in arcs if (b, a) in arcs and a < b)
    if clash:
        a, b = clash[0]
        raise NoPatternError(f"model has no pattern: colliders demand both {a} -> {b} and {b} -> {a}")
    return skeleton.orient_many(arcs)


def phase1(
    m: DependencyModel, vertices: Iterable[str] | None = None, search: str = EXHAUSTIVE
) -> Pdag:
    skeleton, seps = build_skeleton(m, vertices, search)
    return orient_colliders(skeleton, seps)
