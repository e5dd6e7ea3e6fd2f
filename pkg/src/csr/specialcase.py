"""List-homomorphism recognition and the three-value polynomial decider."""

from dataclasses import dataclass

from .errors import NotBinary, WrongAlgorithm
from .graphs import undirected_components
from .model import ReconfigInstance, project_csp, restrict, vertex_lists
from .oracle import is_reconfigurable


@dataclass(frozen=True)
class LhrForm:
    values: tuple  # V(H), equal to the domain indices
    h_edges: frozenset  # frozenset({a, b}) pairs
    lists: dict

    def adjacent(self, a, b):
        return frozenset((a, b)) in self.h_edges

    def constraint_rows(self, v, w):
        return frozenset(
            (a, b) for a in self.lists[v] for b in self.lists[w] if self.adjacent(a, b)
        )


def detect_lhr(csp):
    """Return the list-homomorphism form of a 2-uniform instance, or None."""
    if any(c.arity != 2 for c in csp.constraints):
        raise NotBinary("list-homomorphism detection needs a 2-uniform instance")
    edges = set()
    for c in csp.constraints:
        for a, b in c.allowed:
            if a == b:
                return None
            edges.add(frozenset((a, b)))
    form = LhrForm(tuple(range(csp.k)), frozenset(edges), vertex_lists(csp))
    for c in csp.constraints:
        if c.allowed != form.constraint_rows(*c.scope):
            return None
    return form


def _h_components(form, values):
    pairs = [tuple(e) for e in form.h_edges if e <= values]
    label, comps = undirected_components(sorted(values), pairs)
    return label, comps


def solve_lhr_k3_detail(inst, form=None, limit=None):
    """Decide a list-homomorphism instance with at most three values.

    Returns the answer and the branch used for each connected component of G.
    """
    csp = inst.csp
    if csp.k > 3:
        raise WrongAlgorithm(f"three-value decider needs |V(H)| <= 3, got {csp.k}")
    if form is None:
        form = detect_lhr(csp)
        if form is None:
            raise WrongAlgorithm("instance is not in list-homomorphism form")
    label, comps = _h_components(form, frozenset(form.values))
    branches = []
    answer = True
    for comp in csp.graph.components():
        if len(comp) == 1:
            branches.append("isolated")
            continue
        cs = label[inst.source[comp[0]]]
        ct = label[inst.target[comp[0]]]
        if cs != ct:
            branches.append("component-mismatch")
            answer = False
            continue
        part = comps[cs]
        complete = all(form.adjacent(a, b) for a in part for b in part if a != b)
        if complete:
            branches.append("complete")
            sub = project_csp(csp, comp)
            sub_inst = ReconfigInstance(sub, restrict(inst.source, comp), restrict(inst.target, comp))
            if not is_reconfigurable(sub_inst, limit):
                answer = False
            continue
        middle = next(a for a in part if all(form.adjacent(a, b) for b in part if b != a))
        branches.append("path")
        ends_s = {v for v in comp if inst.source[v] != middle}
        ends_t = {v for v in comp if inst.target[v] != middle}
        if ends_s != ends_t:
            answer = False
    return answer, branches


def solve_lhr_k3(inst, form=None, limit=None):
    return solve_lhr_k3_detail(inst, form, limit)[0]


def path_end_vertices(inst, form, which="source"):
    """Vertices sent to an end of the three-vertex path H by the chosen endpoint."""
    f = inst.source if which == "source" else inst.target
    degree = {a: sum(1 for b in form.values if b != a and form.adjacent(a, b)) for a in form.values}
    middle = [a for a, d in degree.items() if d == 2]
    if len(middle) != 1 or len(form.h_edges) != 2:
        raise WrongAlgorithm("underlying graph is not a path on three values")
    return {v for v in inst.csp.vertices if f[v] != middle[0]}
