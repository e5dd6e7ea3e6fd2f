"""Independent brute force used as ground truth in tests.

Nothing here imports the package's search code: solutions come from
``itertools.product`` and components from a plain union-find.
"""

import heapq
import math
from collections import deque
from itertools import combinations, permutations, product

from csr.model import Constraint, CspInstance, ReconfigInstance


def make_csp(k, vertices, cons):
    """``cons`` is a list of ``(scope, allowed)`` with scope a string or tuple of ids."""
    vertices = tuple(vertices)
    built = [Constraint(tuple(scope), frozenset(map(tuple, allowed))) for scope, allowed in cons]
    return CspInstance.build(k, vertices, built)


def make_inst(k, vertices, cons, source, target, weights=None):
    csp = make_csp(k, vertices, cons)
    vs = csp.vertices
    if not isinstance(source, dict):
        source = dict(zip(vs, source))
    if not isinstance(target, dict):
        target = dict(zip(vs, target))
    return ReconfigInstance(csp, source, target, weights)


def all_states(csp):
    vs = csp.vertices
    out = []
    for values in product(range(csp.k), repeat=len(vs)):
        f = dict(zip(vs, values))
        if all(tuple(f[v] for v in c.scope) in c.allowed for c in csp.constraints):
            out.append(values)
    return out


def brute_labels(csp):
    """Union-find component label per solution tuple."""
    sols = all_states(csp)
    parent = {s: s for s in sols}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    present = set(sols)
    for s in sols:
        for p in range(len(s)):
            for x in range(csp.k):
                t = s[:p] + (x,) + s[p + 1:]
                if t != s and t in present:
                    a, b = find(s), find(t)
                    if a != b:
                        parent[a] = b
    return {s: find(s) for s in sols}


def as_tuple(csp, f):
    return tuple(f[v] for v in csp.vertices)


def brute_reconfigurable(inst):
    labels = brute_labels(inst.csp)
    return labels[as_tuple(inst.csp, inst.source)] == labels[as_tuple(inst.csp, inst.target)]


def brute_opt(inst):
    csp = inst.csp
    w = [inst.weights[v] for v in csp.vertices]
    present = set(all_states(csp))
    start, goal = as_tuple(csp, inst.source), as_tuple(csp, inst.target)
    dist = {start: 0}
    heap = [(0, start)]
    while heap:
        d, s = heapq.heappop(heap)
        if s == goal:
            return d
        if d > dist[s]:
            continue
        for p in range(len(s)):
            for x in range(csp.k):
                t = s[:p] + (x,) + s[p + 1:]
                if t != s and t in present and d + w[p] < dist.get(t, math.inf):
                    dist[t] = d + w[p]
                    heapq.heappush(heap, (d + w[p], t))
    return math.inf


def random_csp(rng, n, k, arity=2, density=0.5, tightness=0.6):
    vs = [f"v{i}" for i in range(n)]
    cons = []
    for _ in range(max(1, int(density * n * 2))):
        r = rng.randint(1, min(arity, n))
        scope = tuple(rng.sample(vs, r))
        rows = [t for t in product(range(k), repeat=r) if rng.random() < tightness]
        cons.append((scope, rows))
    return make_csp(k, vs, cons)


def random_instance(rng, n, k, arity=2, density=0.5, tightness=0.6, tries=100):
    """Random instance with endpoints drawn from the brute-force solution list."""
    for _ in range(tries):
        csp = random_csp(rng, n, k, arity, density, tightness)
        sols = all_states(csp)
        if sols:
            s, t = rng.choice(sols), rng.choice(sols)
            return ReconfigInstance(csp, dict(zip(csp.vertices, s)), dict(zip(csp.vertices, t)))
    raise RuntimeError("no solvable instance drawn")



def csps(max_n=4, max_k=3, max_arity=2, min_k=1):
    """Hypothesis strategy for small instances (k**n stays tiny)."""
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        k = draw(st.integers(min_k, max_k))
        vs = [f"v{i}" for i in range(n)]
        cons = []
        for _ in range(draw(st.integers(0, 2 * n))):
            r = draw(st.integers(1, min(max_arity, n)))
            scope = tuple(draw(st.permutations(vs))[:r])
            tuples = list(product(range(k), repeat=r))
            rows = draw(st.sets(st.sampled_from(tuples)))
            cons.append((scope, rows))
        return make_csp(k, vs, cons)

    return build()


def instances(max_n=4, max_k=3, max_arity=2, min_k=1):
    from hypothesis import assume
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        csp = draw(csps(max_n, max_k, max_arity, min_k))
        sols = all_states(csp)
        assume(sols)
        s = draw(st.sampled_from(sols))
        t = draw(st.sampled_from(sols))
        return ReconfigInstance(csp, dict(zip(csp.vertices, s)), dict(zip(csp.vertices, t)))

    return build()


def plant_copy(inst, group, suffix="'"):
    """Add a disjoint copy of ``group`` with the same outside neighbours.

    Every hyperedge meeting ``group`` is duplicated with the group renamed; the
    copy inherits source and target values and weights. Returns the new
    instance and the renaming map.
    """
    csp = inst.csp
    group = [v for v in csp.vertices if v in set(group)]
    rename = {v: v + suffix for v in group}
    cons = [(c.scope, c.allowed) for c in csp.constraints]
    for c in csp.constraints:
        if set(c.scope) & set(group):
            cons.append((tuple(rename.get(v, v) for v in c.scope), c.allowed))
    vertices = list(csp.vertices) + [rename[v] for v in group]
    source = dict(inst.source, **{rename[v]: inst.source[v] for v in group})
    target = dict(inst.target, **{rename[v]: inst.target[v] for v in group})
    weights = dict(inst.weights, **{rename[v]: inst.weights[v] for v in group})
    return make_inst(csp.k, vertices, cons, source, target, weights), rename


# ground truth for the reduction sources

def has_multicolored_clique(src):
    k = src.kappa
    for pick in product(range(1, k + 1), repeat=k):
        nodes = [(i + 1, p) for i, p in enumerate(pick)]
        if all(src.has_edge(a, b) for a, b in combinations(nodes, 2)):
            return True
    return False


def bfs_connected(start, goal, states):
    states = set(states)
    seen, queue = {start}, deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            return True
        for t in states:
            if t not in seen and sum(a != b for a, b in zip(s, t)) == 1:
                seen.add(t)
                queue.append(t)
    return False


def labeled_cliques(src):
    return [c for c in permutations(src.vertices, src.tau) if src.is_labeled_clique(c)]


def rwords(sys):
    words = [(x,) for x in sys.letters]
    arcs = set(sys.arcs)
    for _ in range(sys.length - 1):
        words = [w + (y,) for w in words for y in sys.letters if (w[-1], y) in arcs]
    return words


def list_coloring(rng, n):
    vs = [f"v{i}" for i in range(n)]
    lists = {v: rng.sample(range(4), rng.randint(1, 3)) for v in vs}
    cons = [((v,), {(a,) for a in lists[v]}) for v in vs]
    for v, w in combinations(vs, 2):
        if rng.random() < 0.5:
            cons.append(((v, w), {(a, b) for a in lists[v] for b in lists[w] if a != b}))
    return vs, cons
