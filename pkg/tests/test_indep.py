from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from causal_explain.graph import CiStatement, Dag, d_separated, pattern_of
from causal_explain.indep import (
    FULL,
    PAIRWISE,
    CiParseError,
    DependencyModel,
    SepsetMap,
    from_dag,
    holds,
    parse_ci,
    serialize_ci,
)
from conftest import D, dags
from oracles import all_dags, path_dsep

S = CiStatement.of


def test_holds_examples():
    m = DependencyModel([S("X", "Z", "Y")])
    assert holds(m, S("X", "Z", "Y"))
    assert holds(m, S("Z", "X", "Y"))
    assert not holds(m, S("X", "Z"))


def test_duplicates_collapse():
    m = DependencyModel([S("X", "Z", "Y"), S("Z", "X", "Y")])
    assert len(m) == 1


def test_scope_inference():
    assert DependencyModel([S("X", "Z")]).scope == PAIRWISE
    assert DependencyModel([S(["X", "W"], "Z")]).scope == FULL
    with pytest.raises(ValueError):
        DependencyModel([S(["X", "W"], "Z")], scope=PAIRWISE)


def test_implies_decomposes_set_queries_in_pairwise_models():
    m = DependencyModel([S("A", "C", "B"), S("A", "D", "B")])
    assert m.implies(S("A", ["C", "D"], "B"))
    assert not m.implies(S("A", ["C", "E"], "B"))
    full = DependencyModel([S("A", "C", "B"), S("A", "D", "B")], scope=FULL)
    assert not full.implies(S("A", ["C", "D"], "B"))


class TestFromDag:
    def _brute(self, g):
        # every (x, y, S) triple checked with the path-based oracle
        vs = g.vertices
        out = set()
        for x, y in combinations(vs, 2):
            rest = [v for v in vs if v not in (x, y)]
            for k in range(len(rest) + 1):
                for s in combinations(rest, k):
                    if path_dsep(vs, g.directed, x, y, s):
                        out.add(S(x, y, s))
        return out

    def test_chain(self, chain):
        assert set(from_dag(chain)) == self._brute(chain) == {S("X", "Z", "Y")}

    def test_collider(self, collider):
        assert set(from_dag(collider)) == self._brute(collider) == {S("X", "Z")}

    def test_single_edge(self):
        assert len(from_dag(D("X->Y"))) == 0

    def test_full_chain(self, chain):
        m = from_dag(chain, FULL)
        assert m.scope == FULL and set(m) == {S("X", "Z", "Y")}

    def test_full_empty_graph_has_set_statements(self):
        m = from_dag(Dag(["A", "B", "C"]), FULL)
        assert m.holds(S(["A", "B"], "C"))
        assert m.holds(S("A", "B", "C"))

    def test_full_cap(self):
        with pytest.raises(ValueError, match="limited"):
            from_dag(Dag(list("ABCDEFGHI")), FULL)
        assert len(from_dag(Dag(list("ABC")), FULL, cap=3)) > 0

    @given(dags(max_vertices=5))
    def test_matches_d_separation(self, g):
        m = from_dag(g)
        vs = g.vertices
        for x, y in combinations(vs, 2):
            rest = [v for v in vs if v not in (x, y)]
            for k in range(len(rest) + 1):
                for s in combinations(rest, k):
                    assert m.holds(S(x, y, s)) == d_separated(g, {x}, {y}, s)

    def test_equal_for_equivalent_dags(self):
        by_pattern = {}
        for vs, arcs in all_dags(4):
            g = Dag(vs, arcs)
            by_pattern.setdefault(pattern_of(g), []).append(from_dag(g))
        for models in by_pattern.values():
            assert all(m == models[0] for m in models)
            assert serialize_ci(models[0]) == serialize_ci(models[-1])


class TestText:
    def test_basic_lines(self):
        assert set(parse_ci("X Z | Y\n")) == {S("X", "Z", "Y")}
        assert set(parse_ci("A,B C |\n")) == {S(["A", "B"], "C")}
        assert set(parse_ci("A,B C\n")) == {S(["A", "B"], "C")}

    def test_comments_and_blanks(self):
        m = parse_ci("# header\n\nX Z | Y  # note\n")
        assert len(m) == 1

    @pytest.mark.parametrize(
        "text, msg",
        [
            ("X X | Y\n", "sets not disjoint"),
            ("X Z | X\n", "sets not disjoint"),
            ("X | Y\n", "expected two sets"),
            ("X Z | Y | W\n", "more than one"),
            ("X Z | Y W\n", "spaces"),
            ("X Z,, | Y\n", "invalid vertex"),
        ],
    )
    def test_errors(self, text, msg):
        with pytest.raises(CiParseError, match=msg) as info:
            parse_ci("# ok\n" + text)
        assert info.value.lineno == 2

    def test_vars_pragma(self):
        m = parse_ci("# vars: W,X,Y,Z\nX Z | Y\n")
        assert m.variables == ("W", "X", "Y", "Z")

    @given(dags(max_vertices=4), st.sampled_from([PAIRWISE, FULL]), st.booleans())
    def test_round_trip(self, g, mode, declare):
        m = from_dag(g, mode)
        text = serialize_ci(m, declare_vars=declare)
        again = parse_ci(text, scope=mode)
        assert again == m
        assert serialize_ci(again, declare_vars=declare) == text


def test_sepset_map():
    seps = SepsetMap({("X", "Z"): {"Y"}})
    assert seps.sep("Z", "X") == {"Y"}
    assert ("Z", "X") in seps and ("X", "Y") not in seps
    with pytest.raises(ValueError):
        SepsetMap({("X", "Z"): {"X"}})
