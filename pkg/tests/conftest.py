import os
import sys

import hypothesis
import hypothesis.strategies as st
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from causal_explain.graph import Dag, Pdag  # noqa: E402
from oracles import NAMES  # noqa: E402

hypothesis.settings.register_profile("default", max_examples=200, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=20, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def dags(draw, min_vertices=1, max_vertices=5):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = list(NAMES[:n])
    order = draw(st.permutations(vs))
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                arcs.append((order[i], order[j]))
    return Dag(vs, arcs)


@st.composite
def undirected_graphs(draw, min_vertices=0, max_vertices=6):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = list(NAMES[:n])
    edges = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return vs, edges


def P(*edges, vertices=()):
    """Small graph literal: ``P("X->Y", "Y--Z")``."""
    directed, undirected = [], []
    for e in edges:
        if "->" in e:
            a, b = e.split("->")
            directed.append((a.strip(), b.strip()))
        else:
            a, b = e.split("--")
            undirected.append((a.strip(), b.strip()))
    return Pdag(vertices, directed, undirected)


def D(*edges, vertices=()):
    return Dag.from_pdag(P(*edges, vertices=vertices))


@pytest.fixture
def chain():
    return D("X->Y", "Y->Z")


@pytest.fixture
def collider():
    return D("X->Y", "Z->Y")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
