import math

import pytest
from hypothesis import given

from csr.errors import BudgetExceeded, InvalidWalk, MalformedInstance
from csr.model import difference
from csr.oracle import (
    build_solution_graph,
    default_budget,
    enumerate_solutions,
    extreme_solution,
    is_reconfigurable,
    shortest_reconfiguration,
    shortest_walk,
    validate_walk,
    walk_length,
)

from helpers import all_states, brute_opt, brute_reconfigurable, instances, make_csp, make_inst

XOR = {(0, 1), (1, 0)}
NEQ3 = {(a, b) for a in range(3) for b in range(3) if a != b}


def tuples(csp, sols):
    return [tuple(f[v] for v in csp.vertices) for f in sols]


def test_enumerate_examples():
    csp = make_csp(2, "vw", [("vw", XOR)])
    assert tuples(csp, enumerate_solutions(csp)) == [(0, 1), (1, 0)]
    assert enumerate_solutions(make_csp(2, "vw", [("vw", set())])) == []
    tri = make_csp(3, "abc", [("ab", NEQ3), ("bc", NEQ3), ("ac", NEQ3)])
    assert len(enumerate_solutions(tri)) == 6


def test_enumerate_budget_is_never_truncated():
    csp = make_csp(3, "abc", [])
    with pytest.raises(BudgetExceeded):
        enumerate_solutions(csp, limit=26)
    assert len(enumerate_solutions(csp, limit=27)) == 27


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("CSR_BUDGET", "5")
    assert default_budget() == 5
    with pytest.raises(BudgetExceeded):
        enumerate_solutions(make_csp(2, "abc", []))
    monkeypatch.setenv("CSR_BUDGET", "nope")
    with pytest.raises(MalformedInstance):
        default_budget()


def test_solution_graph_examples():
    k2 = build_solution_graph(make_csp(2, "vw", [("vw", XOR)]))
    assert len(k2.solutions) == 2 and k2.edges == ()
    free = build_solution_graph(make_csp(2, "v", []))
    assert len(free.solutions) == 2 and len(free.edges) == 1
    p3 = build_solution_graph(make_csp(3, ("v1", "v2", "v3"), [(("v1", "v2"), NEQ3), (("v2", "v3"), NEQ3)]))
    assert len(p3.solutions) == 12
    assert len(set(p3.components())) == 1


def test_solution_graph_weights_and_emit():
    csp = make_csp(2, "ab", [])
    sg = build_solution_graph(csp, {"a": 3, "b": 5})
    for i, j, w in sg.edges:
        (v,) = difference(sg.solutions[i], sg.solutions[j])
        assert w == {"a": 3, "b": 5}[v]
    text = sg.emit().splitlines()
    assert text[0] == "p sol 4 4"
    assert len(text) == 5


def test_reconfigurable_examples():
    xor = make_inst(2, "vw", [("vw", XOR)], (0, 1), (1, 0))
    assert not is_reconfigurable(xor)
    same = make_inst(2, "vw", [("vw", XOR)], (0, 1), (0, 1))
    assert is_reconfigurable(same)
    p3 = make_inst(3, ("v1", "v2", "v3"), [(("v1", "v2"), NEQ3), (("v2", "v3"), NEQ3)], (0, 1, 0), (2, 0, 1))
    assert is_reconfigurable(p3)


def test_shortest_examples():
    same = make_inst(2, "vw", [("vw", XOR)], (0, 1), (0, 1))
    assert shortest_reconfiguration(same) == 0
    flip = make_inst(2, "v", [], (0,), (1,), {"v": 5})
    assert shortest_reconfiguration(flip) == 5
    xor = make_inst(2, "vw", [("vw", XOR)], (0, 1), (1, 0))
    assert shortest_reconfiguration(xor) == math.inf
    assert shortest_walk(xor) is None


def test_walk_validation_rejects_bad_walks():
    inst = make_inst(2, "ab", [], (0, 0), (1, 1))
    walk = shortest_walk(inst)
    assert validate_walk(inst, walk)
    assert walk_length(inst, walk) == 2
    with pytest.raises(InvalidWalk):
        validate_walk(inst, [walk[0], walk[-1]])
    with pytest.raises(InvalidWalk):
        validate_walk(inst, walk[:-1])
    with pytest.raises(InvalidWalk):
        validate_walk(inst, [])


def test_extreme_solutions_match_enumeration():
    tri = make_csp(3, "abc", [("ab", NEQ3), ("bc", NEQ3)])
    sols = enumerate_solutions(tri)
    assert extreme_solution(tri) == sols[0]
    assert extreme_solution(tri, last=True) == sols[-1]
    assert extreme_solution(make_csp(2, "ab", [("ab", set())])) is None


def test_determinism():
    inst = make_inst(3, "abcd", [("ab", NEQ3), ("bc", NEQ3), ("cd", NEQ3)], (0, 1, 0, 1), (1, 2, 1, 0))
    assert shortest_walk(inst) == shortest_walk(inst)
    assert build_solution_graph(inst.csp) == build_solution_graph(inst.csp)


@given(instances(max_n=4, max_k=3, max_arity=3))
def test_oracle_matches_brute_force(inst):
    assert tuples(inst.csp, enumerate_solutions(inst.csp)) == all_states(inst.csp)
    assert is_reconfigurable(inst) == brute_reconfigurable(inst)
    assert shortest_reconfiguration(inst) == brute_opt(inst)


@given(instances(max_n=4, max_k=3, max_arity=2))
def test_edges_are_single_changes_and_symmetric(inst):
    sg = build_solution_graph(inst.csp)
    adj = sg.adjacency()
    for i, j, _ in sg.edges:
        assert i < j
        assert len(difference(sg.solutions[i], sg.solutions[j])) == 1
        assert i in adj[j] and j in adj[i]


@given(instances(max_n=4, max_k=3, max_arity=2))
def test_unit_length_bounds_difference(inst):
    opt = shortest_reconfiguration(inst)
    assert opt >= len(difference(inst.source, inst.target))
    walk = shortest_walk(inst)
    if walk is not None:
        validate_walk(inst, walk)
        assert walk_length(inst, walk) == opt


def test_edgeless_length_equals_difference():
    inst = make_inst(3, "abcd", [], (0, 1, 2, 0), (2, 1, 0, 1))
    assert shortest_reconfiguration(inst) == 3
