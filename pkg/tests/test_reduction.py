from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import pytest

from _reference import nx_graph, ref_block_welfare
from maxswp.graph import Graph, is_connected_induced
from maxswp.reduction import (
    XsatError, XsatInstance, assignment_to_partition, build_gadget, enumerate_instances, find_unsatisfiable,
    format_xsat, parse_xsat, verify_threshold,
)
from maxswp.welfare import welfare

TRIPLE = XsatInstance(3, ((0, 1, 2),) * 3)


def ring_instance(n: int) -> XsatInstance:
    """Clauses {i, i+1, i+2} mod n: every variable occurs exactly three times."""
    return XsatInstance(n, tuple((i, (i + 1) % n, (i + 2) % n) for i in range(n)))


def test_instance_validation():
    with pytest.raises(XsatError, match="occurs 1 times"):
        XsatInstance(3, ((0, 1, 2),))
    with pytest.raises(XsatError, match="repeats"):
        XsatInstance(1, ((0, 0, 0),))
    with pytest.raises(XsatError, match="2 literals, expected 3"):
        XsatInstance(3, ((0, 1),) * 3)
    with pytest.raises(XsatError, match="unknown"):
        XsatInstance(3, ((0, 1, 3),) * 3)
    with pytest.raises(XsatError):
        XsatInstance(0, ())
    assert XsatInstance(3, ((2, 0, 1),) * 3).clauses == ((0, 1, 2),) * 3


def test_parse_and_format_roundtrip():
    inst = ring_instance(7)
    assert parse_xsat(format_xsat(inst)) == inst
    text = "c comment\n# another\np xsat 3 3\n1 2 3\n3 2 1\n1 3 2\n"
    assert parse_xsat(text) == TRIPLE
    for bad, msg in [
        ("1 2 3\n", "header"),
        ("p xsat 3 2\n1 2 3\n1 2 3\n", "occurs 2"),
        ("p xsat 3 3\n1 2 3\n1 2 3\n", "declares 3"),
        ("p xsat 3 3\n1 2 3\n1 2 x\n1 2 3\n", "line 3"),
        ("p xsat 3 3\n1 2 3\n1 2\n1 2 3\n", "exactly 3"),
        ("p cnf 3 3\n", "header"),
        ("", "missing"),
    ]:
        with pytest.raises(XsatError, match=msg):
            parse_xsat(bad)


@pytest.mark.parametrize("inst", [TRIPLE, ring_instance(4), ring_instance(5), ring_instance(9)])
def test_gadget_structure(inst):
    g = build_gadget(inst)
    n = inst.n_vars
    assert g.graph.n == 5 * n and g.graph.m == 10 * n
    assert set(g.graph.degrees().tolist()) == {4}
    for i in range(n):
        a, b, c = g.literal[i].tolist()
        assert g.graph.has_edge(a, b) and g.graph.has_edge(a, c) and g.graph.has_edge(b, c)
    tt = nx.Graph([(0, 1)] + [(a, b) for b in (2, 3, 4) for a in (0, 1)])
    for c in range(n):
        sub, _ = g.graph.induced(g.clause_gadget(c))
        assert sub.n == 5 and sub.m == 7
        assert nx.is_isomorphic(nx.Graph(sub.edge_list()), tt)
        s1, s2 = g.clause[c].tolist()
        for v in g.occurrence[c].tolist():
            assert g.graph.has_edge(v, s1) and g.graph.has_edge(v, s2)


def test_occurrences_follow_clause_order():
    g = build_gadget(ring_instance(5))
    # variable 0 occurs in clauses 0, 3, 4 (in that order)
    occ = [int(g.occurrence[c, list(cl).index(0)]) for c, cl in enumerate(g.instance.clauses) if 0 in cl]
    assert occ == g.literal[0].tolist()
    assert g.label(0) == "x1^1" and g.label(15) == "S1^1" and g.label(16) == "S1^2"
    assert g.label_map()["2"] == "x1^3"


@pytest.mark.parametrize("assignment", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
def test_forward_partition_reaches_threshold(assignment):
    g = build_gadget(TRIPLE)
    part = assignment_to_partition(g, [bool(a) for a in assignment])
    h = nx_graph(g.graph.n, g.graph.edge_list())
    assert welfare(g.graph, part) == Fraction(41, 4)
    assert sum((ref_block_welfare(h, b) for b in part.blocks), Fraction(0)) == Fraction(41, 4)
    sizes = sorted(len(b) for b in part.blocks)
    assert sizes == [3, 4, 4, 4]


def test_forward_partition_on_larger_instances():
    for n in (6, 9):
        inst = ring_instance(n)
        sat = list(inst.satisfying_assignments())
        assert sat, n
        g = build_gadget(inst)
        for a in sat:
            assert welfare(g.graph, assignment_to_partition(g, a)) == Fraction(41 * n, 12)


def test_bad_assignment_names_clause():
    g = build_gadget(TRIPLE)
    with pytest.raises(XsatError, match="clause 1 .*2 true"):
        assignment_to_partition(g, [True, True, False])
    with pytest.raises(XsatError, match="clause 1 .*0 true"):
        assignment_to_partition(g, [False, False, False])
    with pytest.raises(XsatError, match="1 values, expected 3"):
        assignment_to_partition(g, [True])


def test_unsatisfiable_instances_are_found():
    assert len(list(enumerate_instances(3))) == 1
    assert TRIPLE.is_satisfiable()
    unsat = find_unsatisfiable(4)
    assert [u.clauses for u in unsat] == [((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))]
    # independent check over all 16 assignments
    u = unsat[0]
    for bits in itertools.product((0, 1), repeat=4):
        assert any(sum(bits[x] for x in c) != 1 for c in u.clauses)


def test_verify_satisfiable_triple():
    g = build_gadget(TRIPLE)
    rep = verify_threshold(g, [True, False, False])
    assert rep.exact and rep.optimum == Fraction(41, 4)
    assert rep.optimum_equals_threshold and rep.assignment_certified
    assert welfare(g.graph, rep.optimum_blocks) == rep.optimum


def test_verify_large_gadget_is_forward_only():
    inst = ring_instance(5)
    a = next(inst.satisfying_assignments(), None)
    rep = verify_threshold(build_gadget(inst), a)
    assert not rep.exact and rep.optimum is None
    assert "forward" in rep.note
    if a is not None:
        assert rep.assignment_certified


def test_blocks_with_high_average_are_triangle_family():
    # every connected subset of size <= 8 in small gadgets: average welfare at most 11/16,
    # and at least 2/3 only for triangles, double and triple triangles
    g = build_gadget(TRIPLE).graph
    h = nx_graph(g.n, g.edge_list())
    family = {"tri": nx.complete_graph(3), "dbl": nx.Graph([(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]),
              "tpl": nx.Graph([(0, 1)] + [(a, b) for b in (2, 3, 4) for a in (0, 1)])}
    seen = 0
    for size in range(2, 9):
        for c in itertools.combinations(range(g.n), size):
            if not is_connected_induced(g, c):
                continue
            sub = h.subgraph(c)
            seen += 1
            avg = ref_block_welfare(h, c) / size
            assert avg <= Fraction(11, 16)
            if avg >= Fraction(2, 3):
                assert any(nx.is_isomorphic(sub, f) for f in family.values())
    assert seen > 1000


def test_gadget_is_a_simple_graph():
    g = build_gadget(ring_instance(6))
    assert isinstance(g.graph, Graph)
    assert g.threshold() == Fraction(41 * 6, 12)
