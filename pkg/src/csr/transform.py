"""Instance compilers for the hardness constructions.

Each function maps a source instance to a reconfiguration instance whose
answer equals the source answer; the tests check that with independent brute
force on the source problem.
"""

from dataclasses import dataclass
from itertools import product

from .errors import MalformedInstance, NotBinary, WrongAlgorithm
from .model import Constraint, CspInstance, Domain, ReconfigInstance, relabel_assignment, relabel_values, vertex_lists


def lcr4_value_maps(csp):
    """Per-vertex swaps moving the fourth value onto the smallest unused one."""
    if csp.k != 4:
        raise WrongAlgorithm(f"expects a four-value domain, got k={csp.k}")
    maps = {}
    for v, values in vertex_lists(csp).items():
        if 3 not in values:
            continue
        free = [i for i in range(3) if i not in values]
        if not free:
            raise WrongAlgorithm(f"list of {v!r} uses all four values")
        i = free[0]
        perm = {x: x for x in range(4)}
        perm[i], perm[3] = 3, i
        maps[v] = perm
    return maps


def lcr4_to_2csr3(inst):
    csp = inst.csp
    if csp.max_arity > 2:
        raise NotBinary("expects hyperedges of size at most two")
    maps = lcr4_value_maps(csp)
    moved = relabel_values(csp, maps)
    domain = Domain(csp.domain.labels[:3])
    out = CspInstance(domain, moved.vertices, moved.constraints)
    return ReconfigInstance(
        out,
        relabel_assignment(inst.source, maps),
        relabel_assignment(inst.target, maps),
        inst.weights,
    )


def pad_complete(inst):
    """Join every non-adjacent pair by an edge with the trivial constraint."""
    csp = inst.csp
    if csp.max_arity > 2:
        raise NotBinary("padding expects hyperedges of size at most two")
    full = frozenset(product(range(csp.k), repeat=2))
    present = {frozenset(c.scope) for c in csp.constraints if c.arity == 2}
    extra = []
    vs = csp.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if frozenset((vs[i], vs[j])) not in present:
                extra.append(Constraint((vs[i], vs[j]), full))
    out = CspInstance.build(csp.domain, vs, list(csp.constraints) + extra)
    return ReconfigInstance(out, inst.source, inst.target, inst.weights)


def _fresh_name(taken, base):
    if base not in taken:
        return base
    n = 1
    while f"{base}_{n}" in taken:
        n += 1
    return f"{base}_{n}"


def hitting_set_gadget(inst, name="u"):
    """Add one vertex to every hyperedge, frozen at the value labelled ``1``.

    The new vertex is called ``name`` (suffixed if taken) and is listed first.
    """
    csp = inst.csp
    if csp.max_arity > 2:
        raise NotBinary("gadget expects hyperedges of size at most two")
    if "1" not in csp.domain.labels:
        raise MalformedInstance("gadget needs a value labelled '1'")
    one = csp.domain.index("1")
    u = _fresh_name(set(csp.vertices), name)
    vertices = (u,) + csp.vertices
    constraints = []
    for c in csp.constraints:
        rows = frozenset((one,) + t for t in c.allowed)
        constraints.append(Constraint((u,) + c.scope, rows))
    out = CspInstance.build(csp.domain, vertices, constraints)
    source = {u: one, **inst.source}
    target = {u: one, **inst.target}
    weights = {u: 1, **inst.weights}
    return ReconfigInstance(out, source, target, weights)


@dataclass(frozen=True)
class KKCliqueInstance:
    """Graph on ``(group, index)`` pairs with ``1 <= group, index <= kappa``."""

    kappa: int
    edges: frozenset  # frozenset({(i, p), (j, q)})

    def __post_init__(self):
        if self.kappa < 2:
            raise MalformedInstance("kappa must be at least 2")
        edges = set()
        for e in self.edges:
            a, b = tuple(e)
            for i, p in (a, b):
                if not (1 <= i <= self.kappa and 1 <= p <= self.kappa):
                    raise MalformedInstance(f"vertex {(i, p)!r} is outside the partition")
            if a[0] == b[0]:
                raise MalformedInstance(f"edge {a!r}-{b!r} stays inside one group")
            edges.add(frozenset(((int(a[0]), int(a[1])), (int(b[0]), int(b[1])))))
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def from_matrix(cls, kappa, adjacent):
        """``adjacent(i, p, j, q)`` decides each cross-group pair."""
        edges = set()
        for i in range(1, kappa + 1):
            for j in range(i + 1, kappa + 1):
                for p in range(1, kappa + 1):
                    for q in range(1, kappa + 1):
                        if adjacent(i, p, j, q):
                            edges.add(frozenset(((i, p), (j, q))))
        return cls(kappa, frozenset(edges))

    def has_edge(self, a, b):
        return frozenset((a, b)) in self.edges


def kk_clique_to_2csr(src):
    kappa = src.kappa
    k = kappa + 1
    domain = Domain.of_size(k)
    full = set(product(range(k), repeat=2))
    vs = [f"v{i}" for i in range(1, kappa + 1)]
    vertices = tuple(vs) + ("w1", "w2")
    constraints = []
    for i in range(1, kappa + 1):
        for j in range(i + 1, kappa + 1):
            rows = {(p, q) for p in range(1, k) for q in range(1, k) if src.has_edge((i, p), (j, q))}
            rows |= {(0, x) for x in range(k)} | {(x, 0) for x in range(k)}
            constraints.append(Constraint((vs[i - 1], vs[j - 1]), frozenset(rows)))
    for v in vs:
        constraints.append(Constraint((v, "w1"), frozenset(full - {(0, 0)})))
    constraints.append(Constraint(("w1", "w2"), frozenset({(0, 1), (0, 2), (1, 2), (2, 1)})))
    csp = CspInstance.build(domain, vertices, constraints)
    source = {v: 0 for v in vs}
    target = {v: 0 for v in vs}
    source.update(w1=1, w2=2)
    target.update(w1=2, w2=1)
    return ReconfigInstance(csp, source, target)


@dataclass(frozen=True)
class LabeledCliqueInstance:
    vertices: tuple
    edges: frozenset
    source: tuple
    target: tuple

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        if len(set(vertices)) != len(vertices) or not vertices:
            raise MalformedInstance("graph vertices must be distinct and non-empty")
        edges = set()
        for e in self.edges:
            a, b = (str(x) for x in tuple(e))
            if a == b or a not in vertices or b not in vertices:
                raise MalformedInstance(f"bad edge {a!r}-{b!r}")
            edges.add(frozenset((a, b)))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "source", tuple(str(x) for x in self.source))
        object.__setattr__(self, "target", tuple(str(x) for x in self.target))
        if len(self.source) != len(self.target) or not self.source:
            raise MalformedInstance("labeled cliques must have the same positive size")
        for clique in (self.source, self.target):
            if not self.is_labeled_clique(clique):
                raise MalformedInstance(f"{clique!r} is not a labeled clique")

    @property
    def tau(self):
        return len(self.source)

    def is_labeled_clique(self, clique):
        if len(set(clique)) != len(clique):
            return False
        if any(x not in self.vertices for x in clique):
            return False
        return all(
            frozenset((clique[i], clique[j])) in self.edges
            for i in range(len(clique))
            for j in range(i + 1, len(clique))
        )


def labeled_clique_to_hr(src):
    domain = Domain(src.vertices)
    idx = {x: i for i, x in enumerate(src.vertices)}
    rows = set()
    for e in src.edges:
        a, b = tuple(e)
        rows.add((idx[a], idx[b]))
        rows.add((idx[b], idx[a]))
    vs = tuple(f"v{i}" for i in range(1, src.tau + 1))
    constraints = [
        Constraint((vs[i], vs[j]), frozenset(rows))
        for i in range(len(vs))
        for j in range(i + 1, len(vs))
    ]
    csp = CspInstance.build(domain, vs, constraints)
    source = {v: idx[x] for v, x in zip(vs, src.source)}
    target = {v: idx[x] for v, x in zip(vs, src.target)}
    return ReconfigInstance(csp, source, target)


@dataclass(frozen=True)
class RWordSystem:
    letters: tuple
    arcs: tuple  # (x, y) pairs; repeats allowed
    source: tuple
    target: tuple

    def __post_init__(self):
        letters = tuple(str(x) for x in self.letters)
        if not letters or len(set(letters)) != len(letters):
            raise MalformedInstance("letters must be distinct and non-empty")
        arcs = tuple((str(a), str(b)) for a, b in self.arcs)
        for a, b in arcs:
            if a not in letters or b not in letters:
                raise MalformedInstance(f"arc {a!r}->{b!r} uses an unknown letter")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "source", tuple(str(x) for x in self.source))
        object.__setattr__(self, "target", tuple(str(x) for x in self.target))
        if len(self.source) != len(self.target):
            raise MalformedInstance("source and target words differ in length")
        if len(self.source) < 2:
            raise MalformedInstance("words must have length at least 2")
        for word in (self.source, self.target):
            if not self.is_word(word):
                raise MalformedInstance(f"{word!r} is not a walk in R")

    @property
    def length(self):
        return len(self.source)

    def is_word(self, word):
        arcs = set(self.arcs)
        if any(x not in self.letters for x in word):
            return False
        return all((word[i], word[i + 1]) in arcs for i in range(len(word) - 1))


def layer_label(letter, i):
    return f"{letter}^{i % 3}"


def rword_to_lhr_path(src):
    labels = [layer_label(x, p) for p in range(3) for x in src.letters]
    domain = Domain(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    arcs = set(src.arcs)
    rho = src.length
    vs = tuple(f"v{i}" for i in range(1, rho + 1))
    constraints = []
    for i in range(1, rho):
        rows = frozenset((idx[layer_label(x, i)], idx[layer_label(y, i + 1)]) for x, y in arcs)
        constraints.append(Constraint((vs[i - 1], vs[i]), rows))
    csp = CspInstance.build(domain, vs, constraints)
    source = {vs[i]: idx[layer_label(src.source[i], i + 1)] for i in range(rho)}
    target = {vs[i]: idx[layer_label(src.target[i], i + 1)] for i in range(rho)}
    return ReconfigInstance(csp, source, target)
