import random
from itertools import product

import pytest
from hypothesis import given

from csr.errors import BudgetExceeded, MalformedInstance
from csr.model import Hypergraph, primal_graph, restrict
from csr.oracle import build_solution_graph, shortest_reconfiguration
from csr.structural import (
    TreeDepthDecomposition,
    build_csg,
    compute_treedepth_decomposition,
    find_vertex_cover,
    id_tuples,
    is_vertex_cover,
    kernelize_td,
    kernelize_vc_weighted,
    merge_cover_hyperedges,
    minimum_vertex_cover,
    solve_vc_csg,
    substitute,
    td_kernel_bound,
    td_preprocess,
    unary_satisfiable,
    vc_csg,
    vc_kernel_bound,
)

from helpers import all_states, brute_labels, brute_opt, brute_reconfigurable, instances, make_csp, make_inst

XOR = {(0, 1), (1, 0)}
NEQ2 = XOR
NEQ3 = {(a, b) for a in range(3) for b in range(3) if a != b}


def graph(vertices, edges):
    return Hypergraph(tuple(vertices), tuple(tuple(e) for e in edges))


def test_vertex_cover_examples():
    assert minimum_vertex_cover(graph("abc", [])) == frozenset()
    assert len(minimum_vertex_cover(graph("abc", ["ab", "bc", "ac"]))) == 2
    assert find_vertex_cover(graph("abc", ["ab", "bc", "ac"]), 1) is None
    star = graph("cxyz", ["cx", "cy", "cz"])
    assert minimum_vertex_cover(star) == {"c"}
    assert is_vertex_cover(star, {"x", "y", "z"})
    assert not is_vertex_cover(star, {"x"})


def test_substitute_examples():
    csp = make_csp(2, "vw", [("vw", XOR)])
    assert substitute(csp, {}) == csp
    out = substitute(csp, {"v": 0})
    assert out.vertices == ("w",)
    assert [(c.scope, c.allowed) for c in out.constraints] == [(("w",), {(1,)})]
    bad = substitute(make_csp(2, "vwu", [("vw", {(1, 1)})]), {"v": 0})
    assert not unary_satisfiable(bad)
    with pytest.raises(MalformedInstance):
        substitute(csp, {"zz": 0})


@given(instances(max_n=4, max_k=3, max_arity=3))
def test_substitution_bijection(inst):
    csp = inst.csp
    keys = csp.vertices[: max(1, csp.n // 2)]
    sols = [dict(zip(csp.vertices, s)) for s in all_states(csp)]
    for h in product(range(csp.k), repeat=len(keys)):
        h = dict(zip(keys, h))
        sub = substitute(csp, h)
        rest = sub.vertices
        expected = sorted(tuple(f[v] for v in rest) for f in sols if restrict(f, keys) == h)
        assert all_states(sub) == expected


def _star(k, leaves, rel, source, target):
    names = [f"l{i}" for i in range(leaves)]
    cons = [(("c", x), rel) for x in names]
    return make_inst(k, ["c"] + names, cons, source, target)


def test_csg_on_coloured_star():
    inst = _star(3, 3, NEQ3, (0, 1, 1, 2), (1, 0, 2, 0))
    csg = vc_csg(inst, {"c"})
    assert len(csg.nodes) == 3
    assert len(csg.edges) == 3
    assert solve_vc_csg(inst, {"c"}) == brute_reconfigurable(inst) is True


def test_csg_on_two_colouring_edge():
    inst = make_inst(2, "vw", [("vw", NEQ2)], (0, 1), (1, 0))
    csg = vc_csg(inst, {"v"})
    assert len(csg.nodes) == 2 and csg.edges == ()
    assert not solve_vc_csg(inst, {"v"})
    same = make_inst(2, "vw", [("vw", NEQ2)], (0, 1), (0, 1))
    assert solve_vc_csg(same, {"v"})


def test_csg_errors():
    inst = make_inst(2, "vw", [("vw", NEQ2)], (0, 1), (1, 0))
    with pytest.raises(MalformedInstance):
        solve_vc_csg(inst, set())
    big = make_inst(3, "abcd", [("ab", NEQ3), ("cd", NEQ3)], (0, 1, 0, 1), (0, 1, 0, 1))
    with pytest.raises(BudgetExceeded):
        solve_vc_csg(big, {"a", "c"}, limit=8)


@given(instances(max_n=5, max_k=3, max_arity=3))
def test_vc_csg_matches_brute_force(inst):
    assert solve_vc_csg(inst) == brute_reconfigurable(inst)


@given(instances(max_n=5, max_k=3, max_arity=2))
def test_csg_classes_are_connected(inst):
    csp = inst.csp
    cover = minimum_vertex_cover(primal_graph(csp.graph))
    keys = [v for v in csp.vertices if v in cover]
    labels = brute_labels(csp)
    pos = [csp.vertices.index(v) for v in keys]
    classes = {}
    for s, comp in labels.items():
        classes.setdefault(tuple(s[p] for p in pos), set()).add(comp)
    for comps in classes.values():
        assert len(comps) == 1


def test_merge_cover_hyperedges_keeps_solutions():
    rng = random.Random(2)
    for _ in range(30):
        inst = _star(2, 3, {t for t in product(range(2), repeat=2) if rng.random() < 0.7} | {(0, 0)}, (0,) * 4, (0,) * 4)
        merged = merge_cover_hyperedges(inst.csp, {"c"})
        assert all_states(merged) == all_states(inst.csp)
        assert all(len(c.scope) == 2 for c in merged.constraints)


def test_vc_kernel_bounds():
    assert vc_kernel_bound(2, 1) == 64
    assert vc_kernel_bound(2, 2) == 1024


def test_vc_kernel_on_pendant_twins():
    inst = _star(2, 70, {(0, 0), (0, 1), (1, 0)}, (0,) + (1,) * 35 + (0,) * 35, (0,) + (0,) * 70)
    out = kernelize_vc_weighted(inst, {"c"})
    assert out.csp.n - 1 <= 64
    assert out.csp.n == 3  # one twin class per endpoint pattern
    assert shortest_reconfiguration(out) == 35


def test_vc_kernel_without_twins_is_unchanged():
    inst = make_inst(2, "ab", [("ab", XOR)], (0, 1), (0, 1))
    out = kernelize_vc_weighted(inst, {"a"})
    assert out.csp.vertices == inst.csp.vertices
    assert all_states(out.csp) == all_states(inst.csp)


@given(instances(max_n=5, max_k=2, max_arity=2, min_k=2))
def test_vc_kernel_preserves_opt(inst):
    out = kernelize_vc_weighted(inst)
    assert brute_opt(out) == brute_opt(inst)


def test_treedepth_examples():
    assert compute_treedepth_decomposition(graph("a", [])).depth() == 1
    assert compute_treedepth_decomposition(graph("abcd", ["ab", "bc", "cd"])).depth() == 3
    for m in range(1, 6):
        vs = [f"k{i}" for i in range(m)]
        edges = [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:]]
        td = compute_treedepth_decomposition(graph(vs, edges))
        assert td.depth() == m and td.exact


def test_treedepth_heuristic_is_valid():
    vs = [f"p{i}" for i in range(20)]
    g = graph(vs, [(vs[i], vs[i + 1]) for i in range(19)])
    td = compute_treedepth_decomposition(g)
    assert not td.exact
    assert td.validate(g)


def test_invalid_decomposition_rejected():
    g = graph("abc", ["ab", "bc"])
    bad = TreeDepthDecomposition({"a": None, "b": None, "c": "b"}, ("a", "b", "c"))
    with pytest.raises(MalformedInstance):
        bad.validate(g)


def test_td_preprocess_on_triangle():
    cons = [("ab", NEQ3), ("bc", NEQ3), ("ac", NEQ3)]
    inst = make_inst(3, "abc", cons, (0, 1, 2), (0, 1, 2))
    td = TreeDepthDecomposition({"a": None, "b": "a", "c": "b"}, ("a", "b", "c"))
    out = td_preprocess(inst, td)
    big = out.csp.constraint_on("abc")
    # ab has bottommost vertex b, so it lands on X_b; X_c carries ac and bc
    assert big.allowed == {t for t in product(range(3), repeat=3) if t[2] not in t[:2]}
    assert out.csp.constraint_on("a").is_trivial(3)
    assert out.csp.constraint_on("ab").allowed == NEQ3
    assert all_states(out.csp) == all_states(inst.csp)
    again = td_preprocess(out, td)
    assert again.csp == out.csp


@given(instances(max_n=5, max_k=2, max_arity=3, min_k=2))
def test_td_preprocess_keeps_solutions(inst):
    td = compute_treedepth_decomposition(inst.csp.graph)
    assert all_states(td_preprocess(inst, td).csp) == all_states(inst.csp)


def test_id_tuples_examples():
    inst = _star(2, 3, {(0, 0), (0, 1), (1, 0)}, (0, 1, 1, 0), (0, 1, 1, 1))
    td = compute_treedepth_decomposition(inst.csp.graph)
    pre = td_preprocess(inst, td)
    leaf = id_tuples(pre, td, "l0")
    assert len(leaf.n) == len(leaf.a) == len(leaf.c) == 1
    assert id_tuples(pre, td, "l0") == id_tuples(pre, td, "l1")
    assert id_tuples(pre, td, "l0").a != id_tuples(pre, td, "l2").a


def test_id_tuples_equal_for_isomorphic_subtrees():
    # centre r with two pendant paths a1-a2 and b1-b2
    cons = [("r", "a1"), ("a1", "a2"), ("r", "b1"), ("b1", "b2")]
    cons = [(c, {(0, 1), (1, 0), (1, 1)}) for c in cons]
    inst = make_inst(2, ("r", "a1", "a2", "b1", "b2"), cons, (1, 0, 1, 0, 1), (1, 1, 1, 1, 1))
    td = TreeDepthDecomposition({"r": None, "a1": "r", "a2": "a1", "b1": "r", "b2": "b1"}, inst.csp.vertices)
    pre = td_preprocess(inst, td)
    assert id_tuples(pre, td, "a1") == id_tuples(pre, td, "b1")
    out, td2 = kernelize_td(inst, td)
    assert out.csp.vertices == ("r", "a1", "a2")
    assert brute_reconfigurable(out) == brute_reconfigurable(inst)


def test_td_kernel_bound_values():
    assert td_kernel_bound(1, 2) == 1
    assert td_kernel_bound(2, 2) == 32
    with pytest.raises(ValueError):
        td_kernel_bound(0, 2)


def test_td_kernel_on_boolean_star():
    rel = {(0, 0), (0, 1), (1, 1)}
    inst = _star(2, 12, rel, (0,) + (0, 1) * 6, (1,) + (1,) * 12)
    td = compute_treedepth_decomposition(inst.csp.graph)
    trace = []
    out, td2 = kernelize_td(inst, td, trace=trace)
    assert out.csp.n <= td_kernel_bound(2, 2)
    assert out.csp.n == 3
    assert td2.validate(out.csp.graph)
    assert brute_reconfigurable(out) == brute_reconfigurable(inst)
    assert trace


@given(instances(max_n=6, max_k=2, max_arity=2, min_k=2))
def test_td_kernel_preserves_answer(inst):
    td = compute_treedepth_decomposition(inst.csp.graph)
    out, _ = kernelize_td(inst, td)
    assert brute_reconfigurable(out) == brute_reconfigurable(inst)


def test_build_csg_generic_solver_hook():
    inst = make_inst(2, "vw", [("vw", {(0, 0), (0, 1), (1, 1)})], (0, 0), (1, 1))
    csg = build_csg(inst.csp, ["v"], inst.source, inst.target, unary_satisfiable)
    assert csg.connected()
    assert build_solution_graph(inst.csp).components() == [0, 0, 0]
