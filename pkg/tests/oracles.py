"""Brute-force reference implementations used only by the tests.

Nothing here calls into the orientation rules, pattern construction or the
moralization-based d-separation being tested; graphs are plain edge lists.
"""

from __future__ import annotations

import random
from itertools import combinations, product

NAMES = "ABCDEFGH"


def is_acyclic(vertices, arcs) -> bool:
    succ = {v: [] for v in vertices}
    for a, b in arcs:
        succ[a].append(b)
    state = {v: 0 for v in vertices}

    def visit(v):
        state[v] = 1
        for w in succ[v]:
            if state[w] == 1 or (state[w] == 0 and not visit(w)):
                return False
        state[v] = 2
        return True

    return all(state[v] or visit(v) for v in vertices)


def all_dags(n: int):
    """Every labelled DAG on the first n names, as (vertices, frozenset of arcs)."""
    vs = NAMES[:n]
    pairs = list(combinations(vs, 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        arcs = frozenset(
            (a, b) if c == 1 else (b, a) for (a, b), c in zip(pairs, choice) if c
        )
        if is_acyclic(vs, arcs):
            yield tuple(vs), arcs


def random_dag(rng: random.Random, n: int, p: float = 0.5):
    vs = list(NAMES[:n])
    perm = vs[:]
    rng.shuffle(perm)
    arcs = frozenset(
        (perm[i], perm[j]) for i, j in combinations(range(n), 2) if rng.random() < p
    )
    return tuple(vs), arcs


def adjacency(arcs):
    adj = {}
    for a, b in arcs:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return adj


def colliders(vertices, arcs):
    adj = adjacency(arcs)
    pa = {v: {a for a, b in arcs if b == v} for v in vertices}
    return {
        (a, v, c)
        for v in vertices
        for a, c in combinations(sorted(pa[v]), 2)
        if c not in adj.get(a, ())
    }


def descendants(vertices, arcs, v):
    out = {v}
    changed = True
    while changed:
        changed = False
        for a, b in arcs:
            if a in out and b not in out:
                out.add(b)
                changed = True
    return out


def path_dsep(vertices, arcs, x, y, given) -> bool:
    """x and y are d-separated by ``given`` iff no simple path is active."""
    adj = adjacency(arcs)
    given = set(given)
    desc = {v: descendants(vertices, arcs, v) for v in vertices}

    def active(path):
        for i in range(1, len(path) - 1):
            a, m, b = path[i - 1], path[i], path[i + 1]
            if (a, m) in arcs and (b, m) in arcs:
                if not desc[m] & given:
                    return False
            elif m in given:
                return False
        return True

    def walk(path):
        last = path[-1]
        if last == y:
            return active(path)
        for w in sorted(adj.get(last, ())):
            if w not in path and walk(path + [w]):
                return True
        return False

    return not walk([x])


def set_dsep(vertices, arcs, a_set, b_set, given) -> bool:
    return all(path_dsep(vertices, arcs, x, y, given) for x in a_set for y in b_set)


def ci_signature(vertices, arcs):
    """All singleton facts x ⟂ y | S entailed, by path search."""
    out = set()
    for x, y in combinations(vertices, 2):
        rest = [v for v in vertices if v not in (x, y)]
        for k in range(len(rest) + 1):
            for s in combinations(rest, k):
                if path_dsep(vertices, arcs, x, y, s):
                    out.add((x, y, s))
    return frozenset(out)


def class_members(vertices, arcs):
    """All DAGs with the same skeleton and the same unshielded colliders.

    Backtracking over edge orientations, pruning partial assignments that
    already contain a cycle or a collider the original lacks.
    """
    target = colliders(vertices, arcs)
    adj = adjacency(arcs)
    edges = sorted(tuple(sorted(e)) for e in arcs)
    out = []

    def reaches(assigned, src, dst):
        stack, seen = [src], {src}
        while stack:
            v = stack.pop()
            if v == dst:
                return True
            for a, b in assigned:
                if a == v and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return False

    def rec(i, assigned):
        if i == len(edges):
            if colliders(vertices, assigned) == target:
                out.append(frozenset(assigned))
            return
        a, b = edges[i]
        for x, y in ((a, b), (b, a)):
            if reaches(assigned, y, x):
                continue
            bad = False
            for z, w in assigned:
                if w == y and z not in adj.get(x, ()) and z != x:
                    trip = (min(x, z), y, max(x, z))
                    if trip not in target:
                        bad = True
                        break
            if bad:
                continue
            assigned.add((x, y))
            rec(i + 1, assigned)
            assigned.discard((x, y))

    rec(0, set())
    return out


def k_consistent(members, required=(), forbidden=()):
    return [
        m for m in members
        if all(e in m for e in required) and not any(e in m for e in forbidden)
    ]


def common_arcs(members):
    it = iter(members)
    first = set(next(it))
    for m in it:
        first &= m
    return frozenset(first)


def chordal_by_cycles(vertices, edges) -> bool:
    """No chordless cycle of length ≥ 4, by enumerating vertex subsets."""
    adj = adjacency(edges)
    for k in range(4, len(vertices) + 1):
        for sub in combinations(vertices, k):
            s = set(sub)
            # a chordless cycle on s: induced subgraph is connected and 2-regular
            if all(len(adj.get(v, set()) & s) == 2 for v in sub):
                start = sub[0]
                seen, stack = {start}, [start]
                while stack:
                    for w in adj.get(stack.pop(), set()) & s:
                        if w not in seen:
                            seen.add(w)
                            stack.append(w)
                if seen == s:
                    return False
    return True


def maximal_cliques_brute(vertices, edges):
    adj = adjacency(edges)
    cliques = []
    for k in range(1, len(vertices) + 1):
        for sub in combinations(vertices, k):
            if all(b in adj.get(a, ()) for a, b in combinations(sub, 2)):
                cliques.append(frozenset(sub))
    return {c for c in cliques if not any(c < d for d in cliques)}
