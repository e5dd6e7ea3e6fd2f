"""Implication graphs over Boolean values and the deciders built on them.

A literal ``(v, i)`` reads "v takes value i". Instances handed to the internal
helpers must only use values 0 and 1 in their constraints and have arity at
most two; the public entry points check that.
"""

from dataclasses import dataclass

from .errors import MalformedInstance, NotBinary, WrongAlgorithm
from .graphs import nodes_on_cycles, reachable, strongly_connected_components
from .model import ReconfigInstance, project_csp, relabel_assignment, relabel_values, restrict, vertex_lists
from .structural import build_csg, substitute


def _require_boolean(csp):
    if csp.k != 2:
        raise WrongAlgorithm(f"needs a two-value domain, got k={csp.k}")
    if csp.max_arity > 2:
        raise NotBinary("needs every hyperedge to have size <= 2")


def _clauses(csp):
    clauses = []
    for c in csp.constraints:
        if c.arity == 0:
            if not c.allowed:
                clauses.append(())
        elif c.arity == 1:
            (v,) = c.scope
            for a in (0, 1):
                if (a,) not in c.allowed:
                    clauses.append(((v, 1 - a),))
        elif c.arity == 2:
            v, w = c.scope
            for a in (0, 1):
                for b in (0, 1):
                    if (a, b) not in c.allowed:
                        clauses.append(((v, 1 - a), (w, 1 - b)))
        else:
            raise NotBinary("needs every hyperedge to have size <= 2")
    return clauses


def encode_bijunctive(csp):
    """2-CNF whose models are exactly the solutions; each clause is a tuple of literals."""
    _require_boolean(csp)
    return _clauses(csp)


class _TwoSat:
    def __init__(self, vertices, clauses):
        self.vertices = tuple(vertices)
        self.empty = any(len(cl) == 0 for cl in clauses)
        succ = {(v, i): [] for v in self.vertices for i in (0, 1)}
        for cl in clauses:
            if len(cl) == 1:
                (x,) = cl
                succ[(x[0], 1 - x[1])].append(x)
            elif len(cl) == 2:
                x, y = cl
                succ[(x[0], 1 - x[1])].append(y)
                succ[(y[0], 1 - y[1])].append(x)
        self.succ = succ
        comp = {}
        for n, members in enumerate(strongly_connected_components(list(succ), succ)):
            for lit in members:
                comp[lit] = n
        self.satisfiable = not self.empty and all(comp[(v, 0)] != comp[(v, 1)] for v in self.vertices)

    def can_take(self, v, i):
        """Whether some model sets ``v`` to ``i``."""
        if not self.satisfiable:
            return False
        return (v, 1 - i) not in reachable((v, i), self.succ)


def boolean_satisfiable(csp):
    return _TwoSat(csp.vertices, _clauses(csp)).satisfiable


def boolean_sat_value(csp, v, i):
    _require_boolean(csp)
    if v not in csp.position:
        raise MalformedInstance(f"unknown vertex {v!r}")
    return _TwoSat(csp.vertices, _clauses(csp)).can_take(v, i)


@dataclass(frozen=True)
class ImplicationGraph:
    nodes: tuple
    arcs: tuple

    @property
    def succ(self):
        out = {x: [] for x in self.nodes}
        for a, b in self.arcs:
            out[a].append(b)
        return out

    def emit(self):
        return "".join(f"{a[0]}:{a[1]} -> {b[0]}:{b[1]}\n" for a, b in self.arcs)


def _implication_graph(csp):
    sat = _TwoSat(csp.vertices, _clauses(csp))
    nodes = [(v, i) for v in csp.vertices for i in (0, 1) if sat.can_take(v, i)]
    present = set(nodes)
    arcs = []
    for c in csp.constraints:
        if c.arity != 2:
            continue
        v, w = c.scope
        for i in (0, 1):
            for j in (0, 1):
                if (i, j) in c.allowed:
                    continue
                for a, b in (((v, i), (w, 1 - j)), ((w, j), (v, 1 - i))):
                    if a in present and b in present:
                        arcs.append((a, b))
    return ImplicationGraph(tuple(nodes), tuple(dict.fromkeys(arcs)))


def build_implication_graph(csp):
    _require_boolean(csp)
    return _implication_graph(csp)


def fixed_vertices(graph):
    """Vertices owning a literal that lies on a directed cycle."""
    return frozenset(v for v, _ in nodes_on_cycles(list(graph.nodes), graph.succ))


def _freeze_loop(csp, source, target, graph_of):
    """Substitute cycle-fixed vertices until none remain.

    Returns ``(csp, source, target)`` or None when some fixed vertex has
    different source and target values.
    """
    for _ in range(csp.n + 1):
        fixed = fixed_vertices(graph_of(csp))
        if not fixed:
            return csp, source, target
        h = restrict(source, fixed)
        if h != restrict(target, fixed):
            return None
        csp = substitute(csp, h)
        keep = csp.vertices
        source, target = restrict(source, keep), restrict(target, keep)
    raise AssertionError("fixed-vertex elimination did not terminate")


def decide_boolean(inst):
    """Reconfigurability for two-value domains and arity at most two."""
    csp = inst.csp
    if csp.k != 2:
        raise WrongAlgorithm(f"boolean decider needs k=2, got k={csp.k}")
    if csp.max_arity > 2:
        raise WrongAlgorithm("boolean decider needs every hyperedge to have size <= 2")
    return _freeze_loop(csp, inst.source, inst.target, _implication_graph) is not None


def _boolean_maps(csp, lists):
    """Per-vertex value permutations sending each short list into {0, 1}."""
    maps = {}
    for v in csp.vertices:
        values = sorted(lists[v])
        if len(values) > 2:
            continue
        rest = [x for x in range(csp.k) if x not in values]
        perm = {}
        for new, old in enumerate(values + rest):
            perm[old] = new
        maps[v] = perm
    return maps


def nb_preprocess(inst):
    """Eliminate fixed Boolean vertices; None means the answer is already no.

    Every round recomputes the lists, renames Boolean lists into {0, 1},
    restricts to the Boolean vertices and substitutes the vertices whose
    literals sit on implication cycles.
    """
    csp, source, target = inst.csp, dict(inst.source), dict(inst.target)
    for _ in range(csp.n + 1):
        lists = vertex_lists(csp)
        maps = _boolean_maps(csp, lists)
        csp = relabel_values(csp, maps)
        source = relabel_assignment(source, maps)
        target = relabel_assignment(target, maps)
        boolean = [v for v in csp.vertices if v in maps]
        restricted = project_csp(csp, boolean)
        fixed = fixed_vertices(_implication_graph(restricted))
        if not fixed:
            return ReconfigInstance(csp, source, target), frozenset(boolean)
        h = restrict(source, fixed)
        if h != restrict(target, fixed):
            return None
        csp = substitute(csp, h)
        source, target = restrict(source, csp.vertices), restrict(target, csp.vertices)
    raise AssertionError("fixed-vertex elimination did not terminate")


def nb_partition_solve(inst, limit=None):
    """Reconfigurability via a contracted solution graph over the non-Boolean vertices."""
    if inst.csp.max_arity > 2:
        raise WrongAlgorithm("nb algorithm needs every hyperedge to have size <= 2")
    done = nb_preprocess(inst)
    if done is None:
        return False
    reduced, boolean = done
    keys = [v for v in reduced.csp.vertices if v not in boolean]
    csg = build_csg(reduced.csp, keys, reduced.source, reduced.target, boolean_satisfiable, limit)
    return csg.connected()


def count_non_boolean(csp):
    return sum(1 for values in vertex_lists(csp).values() if len(values) > 2)


def nb_implication_graph(inst):
    """Implication graph of the Boolean part left after preprocessing, or None on early no."""
    done = nb_preprocess(inst)
    if done is None:
        return None
    reduced, boolean = done
    return _implication_graph(project_csp(reduced.csp, boolean))
