"""Number of labelled DAGs and Markov equivalence classes for small vertex counts.

Classes are grouped by (skeleton, unshielded colliders); each class size is
compared with count_extensions on the completed pattern.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from itertools import combinations, product

from causal_explain import Dag, count_extensions, max_orient, pattern_of
from causal_explain.graph import unshielded_colliders


@dataclass
class Config:
    max_vertices: int = 5
    names: str = "ABCDEFGH"


def labelled_dags(n: int, names: str):
    vs = names[:n]
    pairs = list(combinations(vs, 2))
    for choice in product((0, 1, 2), repeat=len(pairs)):
        arcs = [(a, b) if c == 1 else (b, a) for (a, b), c in zip(pairs, choice) if c]
        try:
            yield Dag(vs, arcs)
        except ValueError:
            continue


def table(cfg: Config) -> list[tuple[int, int, int, int]]:
    rows = []
    for n in range(1, cfg.max_vertices + 1):
        groups: dict = {}
        for g in labelled_dags(n, cfg.names):
            key = (frozenset(map(frozenset, g.edge_pairs())), frozenset(unshielded_colliders(g)))
            groups.setdefault(key, []).append(g)
        mismatches = sum(
            count_extensions(max_orient(pattern_of(members[0]))) != len(members)
            for members in groups.values()
        )
        rows.append((n, sum(map(len, groups.values())), len(groups), mismatches))
    return rows


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=Config.max_vertices)
    cfg = Config(max_vertices=ap.parse_args(argv).max_vertices)
    print(f"{'n':>2} {'dags':>8} {'classes':>8} {'count mismatches':>17}")
    bad = 0
    for n, dags, classes, mism in table(cfg):
        print(f"{n:>2} {dags:>8} {classes:>8} {mism:>17}")
        bad += mism
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
