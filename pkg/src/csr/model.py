"""Hypergraph CSP instances, assignments and the mapping algebra on them.

Values are dense indices ``0..k-1``; labels only matter at the file boundary.
Every constraint scope is stored in the instance's global vertex order and a
hyperedge carries exactly one constraint, so two instances with the same
relations compare equal field by field.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import MalformedAssignment, MalformedInstance, NotBinary


@dataclass(frozen=True)
class Domain:
    labels: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise MalformedInstance("domain must contain at least one value")
        if len(set(labels)) != len(labels):
            raise MalformedInstance("domain labels must be distinct")

    @classmethod
    def of_size(cls, k):
        return cls(tuple(str(i) for i in range(k)))

    @property
    def k(self):
        return len(self.labels)

    @cached_property
    def _index(self):
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label):
        try:
            return self._index[str(label)]
        except KeyError:
            raise MalformedInstance(f"unknown value label {label!r}") from None


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    hyperedges: tuple

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise MalformedInstance("duplicate vertex id")
        object.__setattr__(self, "vertices", vertices)
        pos = self.position
        edges = []
        for edge in self.hyperedges:
            edge = tuple(edge)
            if not edge:
                raise MalformedInstance("hyperedges must be non-empty")
            if len(set(edge)) != len(edge):
                raise MalformedInstance(f"duplicate vertex inside hyperedge {edge!r}")
            for v in edge:
                if v not in pos:
                    raise MalformedInstance(f"hyperedge {edge!r} uses unknown vertex {v!r}")
            edges.append(tuple(sorted(edge, key=pos.__getitem__)))
        object.__setattr__(self, "hyperedges", tuple(edges))

    @cached_property
    def position(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self):
        adj = {v: set() for v in self.vertices}
        for edge in self.hyperedges:
            for v in edge:
                adj[v].update(edge)
        for v, nbrs in adj.items():
            nbrs.discard(v)
        return {v: frozenset(nbrs) for v, nbrs in adj.items()}

    def neighbors(self, v):
        return self.adjacency[v]

    def neighborhood(self, vertex_set):
        """Vertices outside ``vertex_set`` adjacent to some vertex inside it."""
        vertex_set = set(vertex_set)
        out = set()
        for v in vertex_set:
            out |= self.adjacency[v]
        return frozenset(out - vertex_set)

    def components(self):
        seen = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            seen.add(start)
            stack, comp = [start], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.adjacency[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(tuple(sorted(comp, key=self.position.__getitem__)))
        return comps

    def edge_set(self):
        return {frozenset(e) for e in self.hyperedges}


@dataclass(frozen=True)
class Constraint:
    """Allowed value tuples on an ordered scope.

    The empty scope is permitted: it encodes a satisfied (``{()}``) or violated
    (``{}``) check left behind when every vertex of a hyperedge was fixed.
    """

    scope: tuple
    allowed: frozenset

    def __post_init__(self):
        scope = tuple(self.scope)
        if len(set(scope)) != len(scope):
            raise MalformedInstance(f"duplicate vertex in scope {scope!r}")
        allowed = frozenset(tuple(t) for t in self.allowed)
        for t in allowed:
            if len(t) != len(scope):
                raise MalformedInstance(f"tuple {t!r} does not match scope {scope!r}")
            for x in t:
                if not isinstance(x, int) or x < 0:
                    raise MalformedInstance(f"tuple {t!r} holds a non-index value")
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "allowed", allowed)

    @property
    def arity(self):
        return len(self.scope)

    def reorder(self, new_scope):
        """Same relation with columns permuted into ``new_scope``."""
        new_scope = tuple(new_scope)
        if set(new_scope) != set(self.scope) or len(new_scope) != len(self.scope):
            raise MalformedInstance(f"{new_scope!r} is not a permutation of {self.scope!r}")
        where = {v: i for i, v in enumerate(self.scope)}
        perm = [where[v] for v in new_scope]
        return Constraint(new_scope, frozenset(tuple(t[i] for i in perm) for t in self.allowed))

    def project(self, sub_scope):
        where = {v: i for i, v in enumerate(self.scope)}
        idx = [where[v] for v in sub_scope]
        return frozenset(tuple(t[i] for i in idx) for t in self.allowed)

    def sorted_tuples(self):
        return sorted(self.allowed)

    def is_trivial(self, k):
        return len(self.allowed) == k ** self.arity


@dataclass(frozen=True)
class CspInstance:
    domain: Domain
    vertices: tuple
    constraints: tuple

    def __post_init__(self):
        vertices = tuple(self.vertices)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if len(set(vertices)) != len(vertices):
            raise MalformedInstance("duplicate vertex id")
        pos = self.position
        k = self.domain.k
        seen = set()
        for c in self.constraints:
            key = frozenset(c.scope)
            if key in seen:
                raise MalformedInstance(f"two constraints on hyperedge {c.scope!r}")
            seen.add(key)
            for v in c.scope:
                if v not in pos:
                    raise MalformedInstance(f"constraint uses unknown vertex {v!r}")
            if list(c.scope) != sorted(c.scope, key=pos.__getitem__):
                raise MalformedInstance(f"scope {c.scope!r} is not in global vertex order")
            for t in c.allowed:
                if any(x >= k for x in t):
                    raise MalformedInstance(f"tuple {t!r} uses a value outside the domain")

    @classmethod
    def build(cls, domain, vertices, constraints):
        """Canonicalise scope order and merge duplicate hyperedges by intersection."""
        if isinstance(domain, int):
            domain = Domain.of_size(domain)
        vertices = tuple(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        merged = {}
        for c in constraints:
            for v in c.scope:
                if v not in pos:
                    raise MalformedInstance(f"constraint uses unknown vertex {v!r}")
            canon = c.reorder(sorted(c.scope, key=pos.__getitem__))
            if canon.scope in merged:
                prev = merged[canon.scope]
                merged[canon.scope] = Constraint(canon.scope, prev.allowed & canon.allowed)
            else:
                merged[canon.scope] = canon
        ordered = sorted(merged.values(), key=lambda c: (len(c.scope), [pos[v] for v in c.scope]))
        return cls(domain, vertices, tuple(ordered))

    @property
    def k(self):
        return self.domain.k

    @property
    def n(self):
        return len(self.vertices)

    @cached_property
    def position(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def graph(self):
        return Hypergraph(self.vertices, tuple(c.scope for c in self.constraints if c.scope))

    @cached_property
    def incident(self):
        inc = {v: [] for v in self.vertices}
        for c in self.constraints:
            for v in c.scope:
                inc[v].append(c)
        return {v: tuple(cs) for v, cs in inc.items()}

    @cached_property
    def by_scope(self):
        return {frozenset(c.scope): c for c in self.constraints}

    @property
    def max_arity(self):
        return max((c.arity for c in self.constraints), default=0)

    def constraint_on(self, vertex_set):
        return self.by_scope.get(frozenset(vertex_set))


@dataclass(frozen=True)
class ReconfigInstance:
    csp: CspInstance
    source: dict
    target: dict
    weights: dict = None

    def __post_init__(self):
        source = check_assignment(self.csp, self.source)
        target = check_assignment(self.csp, self.target)
        if not is_solution(self.csp, source):
            raise MalformedInstance("source assignment is not a solution")
        if not is_solution(self.csp, target):
            raise MalformedInstance("target assignment is not a solution")
        if self.weights is None:
            weights = {v: 1 for v in self.csp.vertices}
        else:
            weights = dict(self.weights)
            if set(weights) != set(self.csp.vertices):
                raise MalformedInstance("weights must cover exactly the vertex set")
            for v, w in weights.items():
                if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                    raise MalformedInstance(f"weight of {v!r} must be a positive integer")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "weights", weights)

    @property
    def unit_weights(self):
        return all(w == 1 for w in self.weights.values())

    def asgn(self, v):
        return self.source[v], self.target[v]


def check_assignment(csp, f):
    """Return ``f`` as a dict in vertex order, or raise if it is not total."""
    missing = [v for v in csp.vertices if v not in f]
    if missing:
        raise MalformedAssignment(f"assignment misses vertices {missing!r}")
    extra = [v for v in f if v not in csp.position]
    if extra:
        raise MalformedAssignment(f"assignment names unknown vertices {extra!r}")
    out = {}
    for v in csp.vertices:
        x = f[v]
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < csp.k:
            raise MalformedAssignment(f"value {x!r} of {v!r} is outside the domain")
        out[v] = x
    return out


def is_solution(csp, f):
    f = check_assignment(csp, f)
    for c in csp.constraints:
        if tuple(f[v] for v in c.scope) not in c.allowed:
            return False
    return True


def difference(f, g):
    if set(f) != set(g):
        raise MalformedAssignment("assignments are defined on different vertex sets")
    return {v for v in f if f[v] != g[v]}


def restrict(f, vertex_set):
    vertex_set = set(vertex_set)
    missing = vertex_set - set(f)
    if missing:
        raise MalformedAssignment(f"cannot restrict to vertices outside the domain: {sorted(map(repr, missing))}")
    return {v: x for v, x in f.items() if v in vertex_set}


def compatible(p, q):
    """True iff ``p`` and ``q`` agree on every vertex both define."""
    if len(q) < len(p):
        p, q = q, p
    return all(q[v] == x for v, x in p.items() if v in q)


def translate_constraint(c, phi, order=None):
    """Carry ``c`` along the bijection ``phi`` from its scope onto a new scope.

    A tuple ``g`` becomes ``g o phi^-1``: the value ``g`` gave to ``v`` now sits
    at ``phi(v)``. With ``order`` (a position map) the result is put in that
    canonical column order.
    """
    if set(phi) != set(c.scope):
        raise MalformedInstance("translation map must be defined exactly on the scope")
    image = tuple(phi[v] for v in c.scope)
    if len(set(image)) != len(image):
        raise MalformedInstance("translation map is not injective")
    out = Constraint(image, c.allowed)
    if order is not None:
        out = out.reorder(sorted(image, key=order.__getitem__))
    return out


def same_relation(a, b):
    """Constraint equality that ignores column order."""
    if frozenset(a.scope) != frozenset(b.scope):
        return False
    return a.allowed == b.reorder(a.scope).allowed


def primal_graph(graph):
    pairs = set()
    for edge in graph.hyperedges:
        for i in range(len(edge)):
            for j in range(i + 1, len(edge)):
                pairs.add((edge[i], edge[j]))
    pos = graph.position
    return Hypergraph(graph.vertices, sorted(pairs, key=lambda e: (pos[e[0]], pos[e[1]])))


def induced_subhypergraph(graph, vertex_set):
    vertex_set = set(vertex_set)
    unknown = vertex_set - set(graph.vertices)
    if unknown:
        raise MalformedInstance(f"vertices {sorted(map(repr, unknown))} are not in the hypergraph")
    vertices = tuple(v for v in graph.vertices if v in vertex_set)
    edges = []
    seen = set()
    for edge in graph.hyperedges:
        clipped = tuple(v for v in edge if v in vertex_set)
        if clipped and clipped not in seen:
            seen.add(clipped)
            edges.append(clipped)
    return Hypergraph(vertices, tuple(edges))


def vertex_list(csp, v):
    """Values ``v`` takes in some allowed tuple; the full domain if ``v`` is in no hyperedge."""
    if v not in csp.position:
        raise MalformedInstance(f"unknown vertex {v!r}")
    incident = csp.incident[v]
    if not incident:
        return frozenset(range(csp.k))
    values = set()
    for c in incident:
        i = c.scope.index(v)
        values.update(t[i] for t in c.allowed)
    return frozenset(values)


def vertex_lists(csp):
    return {v: vertex_list(csp, v) for v in csp.vertices}


def project_csp(csp, keep, fixed=None):
    """Restrict every component of ``csp`` onto ``keep``.

    Each hyperedge ``X`` maps to ``X & keep``; its tuples are filtered to those
    compatible with ``fixed`` and projected, and hyperedges with the same image
    are intersected. A hyperedge disjoint from ``keep`` leaves a nullary
    constraint only when no tuple survives, which marks the result unsatisfiable.
    """
    keep = set(keep)
    fixed = fixed or {}
    groups = {}
    for c in csp.constraints:
        idx = [i for i, v in enumerate(c.scope) if v in keep]
        pins = [(i, fixed[v]) for i, v in enumerate(c.scope) if v in fixed and v not in keep]
        rows = {
            tuple(t[i] for i in idx)
            for t in c.allowed
            if all(t[i] == x for i, x in pins)
        }
        scope = tuple(c.scope[i] for i in idx)
        if scope in groups:
            groups[scope] &= rows
        else:
            groups[scope] = rows
    vertices = tuple(v for v in csp.vertices if v in keep)
    constraints = [
        Constraint(scope, frozenset(rows))
        for scope, rows in groups.items()
        if scope or not rows
    ]
    return CspInstance.build(csp.domain, vertices, constraints)


def relabel_values(csp, maps):
    """Apply a per-vertex value permutation ``maps[v][old] = new``."""
    constraints = []
    for c in csp.constraints:
        cols = [maps.get(v) for v in c.scope]
        rows = frozenset(
            tuple(x if m is None else m[x] for x, m in zip(t, cols)) for t in c.allowed
        )
        constraints.append(Constraint(c.scope, rows))
    return CspInstance(csp.domain, csp.vertices, tuple(constraints))


def relabel_assignment(f, maps):
    return {v: (x if maps.get(v) is None else maps[v][x]) for v, x in f.items()}


def intersect_csps(a, b):
    """Instance whose solutions are the common solutions of ``a`` and ``b``."""
    if a.vertices != b.vertices:
        raise MalformedInstance("instances have different vertex sets")
    return CspInstance.build(a.domain, a.vertices, a.constraints + b.constraints)


def normalize_binary(csp):
    """Fold every unary constraint into an incident edge.

    A unary hyperedge on a vertex with no incident edge (an isolated component)
    is kept as it is.
    """
    if any(c.arity > 2 for c in csp.constraints):
        raise NotBinary("normalize_binary needs every hyperedge to have size <= 2")
    unary = {c.scope[0]: c for c in csp.constraints if c.arity == 1}
    if not unary:
        return csp
    edges = {c.scope: c for c in csp.constraints if c.arity == 2}
    kept = [c for c in csp.constraints if c.arity == 0]
    for v, u in unary.items():
        host = next((s for s in edges if v in s), None)
        if host is None:
            kept.append(u)
            continue
        i = host.index(v)
        ok = {t[0] for t in u.allowed}
        c = edges[host]
        edges[host] = Constraint(c.scope, frozenset(t for t in c.allowed if t[i] in ok))
    return CspInstance.build(csp.domain, csp.vertices, kept + list(edges.values()))
