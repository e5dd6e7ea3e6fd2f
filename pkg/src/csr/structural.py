"""Algorithms driven by structural parameters of the primal graph.

Vertex cover: substitution, the contracted solution graph over cover
assignments, and the weighted twin kernel. Tree-depth: decompositions, the
bottommost-vertex preprocessing, ID-tuples and the sibling-subtree kernel.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from .errors import BudgetExceeded, MalformedInstance
from .model import (
    Constraint,
    CspInstance,
    ReconfigInstance,
    intersect_csps,
    primal_graph,
    project_csp,
    vertex_lists,
)
from .oracle import default_budget
from .reduce import check_identical, greedy_identify_twins, identify


# ---------------------------------------------------------------- vertex cover

def _edge_list(graph):
    edges = []
    for e in graph.hyperedges:
        if len(e) == 2:
            edges.append(e)
        elif len(e) > 2:
            raise MalformedInstance("vertex cover search needs a 2-uniform graph")
    return edges


def find_vertex_cover(graph, budget):
    """A vertex cover of size at most ``budget``, or None. Branches on an uncovered edge."""
    edges = _edge_list(graph)
    pos = graph.position

    def branch(remaining, chosen, left):
        if not remaining:
            return chosen
        if left == 0:
            return None
        a, b = remaining[0]
        for pick in (a, b):
            rest = [e for e in remaining if pick not in e]
            found = branch(rest, chosen | {pick}, left - 1)
            if found is not None:
                return found
        return None

    found = branch(edges, frozenset(), budget)
    if found is None:
        return None
    return frozenset(sorted(found, key=pos.__getitem__))


def minimum_vertex_cover(graph):
    for size in range(len(graph.vertices) + 1):
        cover = find_vertex_cover(graph, size)
        if cover is not None:
            return cover
    raise AssertionError("the whole vertex set is always a cover")


def is_vertex_cover(graph, cover):
    cover = set(cover)
    return all(a in cover or b in cover for a, b in _edge_list(graph))


def substitute(csp, h):
    """Fix the vertices in ``h`` and project every constraint onto the rest."""
    unknown = [v for v in h if v not in csp.position]
    if unknown:
        raise MalformedInstance(f"substitution names unknown vertices {unknown!r}")
    keep = [v for v in csp.vertices if v not in h]
    return project_csp(csp, keep, fixed=h)


def unary_satisfiable(csp):
    """Satisfiability of an instance whose constraints all have arity at most one."""
    for c in csp.constraints:
        if c.arity > 1:
            raise MalformedInstance("expected only unary or nullary constraints")
        if not c.allowed:
            return False
    return True


@dataclass(frozen=True)
class ContractedSolutionGraph:
    keyset: tuple
    nodes: tuple  # value tuples aligned with keyset
    edges: tuple  # index pairs
    source_node: int
    target_node: int

    def connected(self):
        adj = [[] for _ in self.nodes]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = {self.source_node}
        queue = deque([self.source_node])
        while queue:
            i = queue.popleft()
            if i == self.target_node:
                return True
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        return False


def build_csg(csp, keyset, source, target, solvable, limit=None):
    """Contract solutions by their restriction onto ``keyset``.

    ``solvable`` decides whether a substitution instance has a solution; it is
    used both for node existence and, on the intersection of two
    substitutions, for edges.
    """
    limit = default_budget() if limit is None else limit
    keyset = tuple(v for v in csp.vertices if v in set(keyset))
    lists = vertex_lists(csp)
    choices = [sorted(lists[v]) for v in keyset]
    total = 1
    for c in choices:
        total *= len(c)
    if total > limit:
        raise BudgetExceeded(f"{total} key assignments exceed the budget {limit}")
    subs = {}
    for values in product(*choices):
        sub = substitute(csp, dict(zip(keyset, values)))
        if solvable(sub):
            subs[values] = sub
    nodes = tuple(subs)
    index = {h: i for i, h in enumerate(nodes)}
    edges = []
    for h, i in index.items():
        for p in range(len(keyset)):
            for x in choices[p]:
                if x <= h[p]:
                    continue
                h2 = h[:p] + (x,) + h[p + 1:]
                j = index.get(h2)
                if j is not None and solvable(intersect_csps(subs[h], subs[h2])):
                    edges.append((i, j))
    s_key = tuple(source[v] for v in keyset)
    t_key = tuple(target[v] for v in keyset)
    return ContractedSolutionGraph(keyset, nodes, tuple(edges), index[s_key], index[t_key])


def cover_of(inst, cover=None):
    """Validate a given cover of the primal graph, or compute a minimum one."""
    primal = primal_graph(inst.csp.graph)
    if cover is None:
        return minimum_vertex_cover(primal)
    cover = frozenset(cover)
    for v in cover:
        if v not in inst.csp.position:
            raise MalformedInstance(f"cover names unknown vertex {v!r}")
    if not is_vertex_cover(primal, cover):
        raise MalformedInstance("the given set is not a vertex cover of the primal graph")
    return cover


def vc_csg(inst, cover=None, limit=None):
    cover = cover_of(inst, cover)
    return build_csg(inst.csp, cover, inst.source, inst.target, unary_satisfiable, limit)


def solve_vc_csg(inst, cover=None, limit=None):
    """Decide reconfigurability through the contracted solution graph over a vertex cover."""
    return vc_csg(inst, cover, limit).connected()


def merge_cover_hyperedges(csp, cover):
    """Give every vertex outside ``cover`` the single hyperedge ``cover | {v}``."""
    cover = frozenset(cover)
    pos = csp.position
    c_order = tuple(v for v in csp.vertices if v in cover)
    kept = [c for c in csp.constraints if cover.issuperset(c.scope)]
    for v in csp.vertices:
        if v in cover:
            continue
        scope = tuple(sorted(c_order + (v,), key=pos.__getitem__))
        where = {x: i for i, x in enumerate(scope)}
        removed = []
        for c in csp.incident[v]:
            if not cover.issuperset(set(c.scope) - {v}):
                raise MalformedInstance("the given set is not a vertex cover of the primal graph")
            removed.append(([where[x] for x in c.scope], c.allowed))
        rows = frozenset(
            g for g in product(range(csp.k), repeat=len(scope))
            if all(tuple(g[i] for i in idx) in allowed for idx, allowed in removed)
        )
        kept.append(Constraint(scope, rows))
    return CspInstance.build(csp.domain, csp.vertices, kept)


def kernelize_vc_weighted(inst, cover=None, trace=None):
    """Weighted kernel: merge per-vertex hyperedges, then collapse twins outside the cover."""
    cover = cover_of(inst, cover)
    merged = ReconfigInstance(merge_cover_hyperedges(inst.csp, cover), inst.source, inst.target, inst.weights)
    outside = [v for v in merged.csp.vertices if v not in cover]
    return greedy_identify_twins(merged, outside, weighted=True, trace=trace)


def vc_kernel_bound(k, vc):
    return k * k * 2 ** (k ** (vc + 1))


# ------------------------------------------------------------------ tree-depth

@dataclass(frozen=True)
class TreeDepthDecomposition:
    parent: dict
    order: tuple  # global vertex order; children are visited in this order
    exact: bool = False

    @cached_property
    def position(self):
        return {v: i for i, v in enumerate(self.order)}

    @cached_property
    def _children(self):
        kids = {v: [] for v in self.order}
        for v in self.order:
            p = self.parent[v]
            if p is not None:
                kids[p].append(v)
        return {v: tuple(c) for v, c in kids.items()}

    def children(self, v):
        return self._children[v]

    @property
    def roots(self):
        return tuple(v for v in self.order if self.parent[v] is None)

    def ancestors(self, v):
        """Proper ancestors, root first."""
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        out.reverse()
        return out

    def level(self, v):
        return len(self.ancestors(v)) + 1

    def depth(self):
        return max((self.level(v) for v in self.order), default=0)

    def subtree(self, v):
        """Vertices of the subtree rooted at ``v`` in pre-order."""
        out = []
        stack = [v]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(reversed(self._children[x]))
        return out

    def preorder(self):
        out = []
        for r in self.roots:
            out.extend(self.subtree(r))
        return out

    def postorder(self):
        return list(reversed(self._reverse_postorder()))

    def _reverse_postorder(self):
        # a vertex precedes all of its descendants, children in reverse order
        out = []
        stack = list(self.roots)
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self._children[x])
        return out

    def validate(self, graph):
        if set(self.parent) != set(graph.vertices):
            raise MalformedInstance("decomposition vertex set differs from the graph")
        for v in self.order:
            seen = {v}
            p = self.parent[v]
            while p is not None:
                if p in seen:
                    raise MalformedInstance("decomposition contains a cycle")
                seen.add(p)
                p = self.parent[p]
        for e in primal_graph(graph).hyperedges:
            a, b = e
            if a not in self.ancestors(b) and b not in self.ancestors(a):
                raise MalformedInstance(f"edge {a!r}-{b!r} joins two unrelated vertices")
        return True

    def without(self, removed):
        removed = set(removed)
        parent = {v: p for v, p in self.parent.items() if v not in removed}
        return TreeDepthDecomposition(parent, tuple(v for v in self.order if v not in removed), self.exact)


def _components(vertices, adj):
    comps = []
    left = set(vertices)
    for v in vertices:
        if v not in left:
            continue
        comp = [v]
        left.discard(v)
        i = 0
        while i < len(comp):
            for w in adj[comp[i]]:
                if w in left:
                    left.discard(w)
                    comp.append(w)
            i += 1
        comps.append(comp)
    return comps


def _exact_forest(vertices, adj):
    """Minimum-depth elimination forest by memoised root choice."""
    index = {v: i for i, v in enumerate(vertices)}
    nbr = [0] * len(vertices)
    for v in vertices:
        for w in adj[v]:
            nbr[index[v]] |= 1 << index[w]
    memo = {}

    def comps_of(mask):
        out = []
        while mask:
            low = mask & -mask
            comp = low
            frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = nbr[b.bit_length() - 1] & mask & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            mask &= ~comp
        return out

    def best(mask):
        # mask is connected; returns (depth, root)
        if mask in memo:
            return memo[mask]
        if mask & (mask - 1) == 0:
            memo[mask] = (1, mask.bit_length() - 1)
            return memo[mask]
        result = None
        m = mask
        while m:
            b = m & -m
            m ^= b
            i = b.bit_length() - 1
            d = 1 + max((best(c)[0] for c in comps_of(mask & ~b)), default=0)
            if result is None or d < result[0]:
                result = (d, i)
        memo[mask] = result
        return result

    parent = {}

    def build(mask, par):
        _, i = best(mask)
        v = vertices[i]
        parent[v] = par
        for c in comps_of(mask & ~(1 << i)):
            build(c, v)

    for comp in comps_of((1 << len(vertices)) - 1):
        build(comp, None)
    return parent


def _dfs_forest(vertices, adj):
    """Depth-first spanning forest; every non-tree edge joins ancestor and descendant."""
    parent = {}
    pos = {v: i for i, v in enumerate(vertices)}
    for comp in _components(vertices, adj):
        root = max(comp, key=lambda v: len(adj[v]))
        parent[root] = None
        stack = [(root, iter(sorted(adj[root], key=pos.__getitem__)))]
        while stack:
            v, it = stack[-1]
            for w in it:
                if w not in parent:
                    parent[w] = v
                    stack.append((w, iter(sorted(adj[w], key=pos.__getitem__))))
                    break
            else:
                stack.pop()
    return parent


def compute_treedepth_decomposition(graph, exact_limit=16):
    primal = primal_graph(graph)
    vertices = list(primal.vertices)
    adj = primal.adjacency
    exact = len(vertices) <= exact_limit
    parent = _exact_forest(vertices, adj) if exact else _dfs_forest(vertices, adj)
    td = TreeDepthDecomposition(parent, tuple(vertices), exact)
    td.validate(graph)
    return td


def td_preprocess(inst, td):
    """Replace hyperedges by one hyperedge per vertex: the vertex and its ancestors."""
    csp = inst.csp
    td.validate(csp.graph)
    pos = csp.position
    level = {v: td.level(v) for v in csp.vertices}
    grouped = {v: [] for v in csp.vertices}
    kept = []
    for c in csp.constraints:
        if not c.scope:
            kept.append(c)
            continue
        bottom = max(c.scope, key=level.__getitem__)
        grouped[bottom].append(c)
    for v in csp.vertices:
        scope = tuple(sorted(td.ancestors(v) + [v], key=pos.__getitem__))
        where = {x: i for i, x in enumerate(scope)}
        removed = [([where[x] for x in c.scope], c.allowed) for c in grouped[v]]
        rows = frozenset(
            g for g in product(range(csp.k), repeat=len(scope))
            if all(tuple(g[i] for i in idx) in allowed for idx, allowed in removed)
        )
        kept.append(Constraint(scope, rows))
    new = CspInstance.build(csp.domain, csp.vertices, kept)
    return ReconfigInstance(new, inst.source, inst.target, inst.weights)


@dataclass(frozen=True)
class IdTuples:
    n: tuple
    a: tuple
    c: tuple


def id_tuples(inst, td, v):
    csp = inst.csp
    pos = csp.position
    sub = td.subtree(v)
    local = {x: i for i, x in enumerate(sub)}
    n_part, a_part, c_part = [], [], []
    for x in sub:
        nbrs = list(td.children(x))
        if td.parent[x] is not None:
            nbrs.append(td.parent[x])
        n_part.append(tuple(sorted((0, local[y]) if y in local else (1, pos[y]) for y in nbrs)))
        a_part.append(inst.asgn(x))
        chain = td.ancestors(x) + [x]
        c = csp.constraint_on(chain)
        if c is None:
            raise MalformedInstance("instance is not in per-vertex hyperedge form; run td_preprocess")
        c_part.append(tuple(sorted(c.reorder(chain).allowed)))
    return IdTuples(tuple(n_part), tuple(a_part), tuple(c_part))


def _in_td_form(csp, td):
    scopes = [c for c in csp.constraints if c.scope]
    if len(scopes) != csp.n:
        return False
    return all(csp.constraint_on(td.ancestors(v) + [v]) is not None for v in csp.vertices)


def kernelize_td(inst, td, trace=None):
    """Collapse identical sibling subtrees bottom-up. Returns the kernel and its decomposition."""
    if not _in_td_form(inst.csp, td):
        inst = td_preprocess(inst, td)
    else:
        td.validate(inst.csp.graph)
    for u in td.postorder() + [None]:
        if u is not None and u not in td.parent:
            continue
        while True:
            kids = td.roots if u is None else td.children(u)
            seen = {}
            pair = None
            for child in kids:
                key = id_tuples(inst, td, child)
                if key in seen:
                    pair = (seen[key], child)
                    break
                seen[key] = child
            if pair is None:
                break
            keep, drop = pair
            left, right = td.subtree(keep), td.subtree(drop)
            witness = check_identical(inst, set(left), set(right), dict(zip(left, right)))
            inst = identify(inst, witness)
            td = td.without(right)
            if trace is not None:
                trace.append((keep, drop, len(right)))
    return inst, td


def td_kernel_bound(j, k):
    """Recursive vertex bound on the kernel for decomposition depth ``j``."""
    if j < 1:
        raise ValueError("depth must be at least 1")
    g = 1
    for _ in range(j - 1):
        a = g
        g = a * a * (2 ** a * k * k * 2 ** (k ** a)) ** a
    return g
