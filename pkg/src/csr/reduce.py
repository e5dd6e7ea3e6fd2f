"""Identification of identical induced subhypergraphs.

Two disjoint vertex sets with the same outer neighbourhood ``W``, matching
endpoint values and matching constraints can be collapsed: the second copy is
deleted and every constraint is projected onto what remains. Reconfigurability
survives, and for single vertices so does the weighted shortest length once the
deleted vertex's weight is added to its twin.
"""

from dataclasses import dataclass

from .errors import InvalidWalk, MalformedInstance, NotIdentical, WrongAlgorithm
from .model import (
    ReconfigInstance,
    induced_subhypergraph,
    project_csp,
    restrict,
    same_relation,
    translate_constraint,
    vertex_list,
)
from .oracle import validate_walk


@dataclass(frozen=True)
class IdenticalWitness:
    v1: frozenset
    v2: frozenset
    w: frozenset
    phi: dict  # on V1 | W, identity on W
    pi: dict  # clipped hyperedge of G[V1 | W] -> its image


def _normalize_map(inst, v1, v2, phi):
    vertices = inst.csp.position
    V1, V2 = frozenset(v1), frozenset(v2)
    if not V1 or not V2:
        raise MalformedInstance("both vertex sets must be non-empty")
    if V1 & V2:
        raise MalformedInstance("vertex sets must be disjoint")
    if len(V1) != len(V2):
        raise MalformedInstance("vertex sets must have equal size")
    for v in V1 | V2:
        if v not in vertices:
            raise MalformedInstance(f"unknown vertex {v!r}")
    phi = dict(phi)
    missing = V1 - set(phi)
    if missing:
        raise MalformedInstance(f"bijection is undefined on {sorted(map(repr, missing))}")
    image = {phi[v] for v in V1}
    if image != V2 or len(image) != len(V1):
        raise MalformedInstance("bijection must map the first set onto the second")
    return V1, V2, phi


def check_identical(inst, v1, v2, phi):
    """Return an ``IdenticalWitness`` or raise ``NotIdentical`` naming the failed check.

    ``phi`` needs only be given on ``v1``; it is extended by the identity on
    the common neighbourhood and the hyperedge map is the induced image map.
    """
    csp = inst.csp
    graph = csp.graph
    V1, V2, phi = _normalize_map(inst, v1, v2, phi)
    W = graph.neighborhood(V1)
    if W != graph.neighborhood(V2):
        raise NotIdentical("neighborhood", "the two sets have different neighbourhoods")
    for x, y in phi.items():
        if x in V1:
            continue
        if x not in W:
            raise MalformedInstance(f"bijection is defined outside the first set and W: {x!r}")
        if y != x:
            raise NotIdentical("2", f"{x!r} lies in W but is mapped to {y!r}")
    full = {x: x for x in W}
    full.update({v: phi[v] for v in V1})

    h1 = induced_subhypergraph(graph, V1 | W)
    h2 = induced_subhypergraph(graph, V2 | W)
    pi = {frozenset(e): frozenset(full[x] for x in e) for e in h1.hyperedges}
    if set(pi.values()) != h2.edge_set() or len(set(pi.values())) != len(pi):
        raise NotIdentical("1", "hyperedges do not correspond under the bijection")

    for v in V1:
        if inst.asgn(v) != inst.asgn(full[v]):
            raise NotIdentical("3", f"{v!r} and {full[v]!r} have different endpoint values")

    images = set()
    for c in csp.constraints:
        if not V1.intersection(c.scope):
            continue
        image = frozenset(full[x] for x in c.scope)
        other = csp.constraint_on(image)
        if other is None:
            raise NotIdentical("4", f"image of hyperedge {c.scope!r} is not a hyperedge")
        moved = translate_constraint(c, {x: full[x] for x in c.scope})
        if not same_relation(moved, other):
            raise NotIdentical("4", f"constraint of {c.scope!r} differs from its image")
        images.add(image)
    expected = {frozenset(c.scope) for c in csp.constraints if V2.intersection(c.scope)}
    if images != expected:
        raise NotIdentical("4", "some hyperedge meeting the second set has no preimage")
    return IdenticalWitness(V1, V2, W, full, pi)


def is_identical(inst, v1, v2, phi):
    try:
        check_identical(inst, v1, v2, phi)
    except NotIdentical:
        return False
    return True


def identify(inst, witness):
    """Delete ``witness.v2`` and project every constraint onto the rest."""
    check_identical(inst, witness.v1, witness.v2, {v: witness.phi[v] for v in witness.v1})
    csp = inst.csp
    keep = [v for v in csp.vertices if v not in witness.v2]
    reduced = project_csp(csp, keep)
    return ReconfigInstance(
        reduced,
        restrict(inst.source, keep),
        restrict(inst.target, keep),
        restrict(inst.weights, keep),
    )


def _extend(f, witness):
    g = dict(f)
    for v in witness.v1:
        g[witness.phi[v]] = f[v]
    return g


def lift_sequence(inst, witness, seq):
    """Turn a walk of the identified instance into a walk of ``inst``.

    A step that changes a vertex of the kept copy is split in two: first the
    vertex itself, then its partner in the deleted copy.
    """
    reduced = identify(inst, witness)
    if not seq:
        return [dict(inst.source)]
    validate_walk(reduced, seq)
    out = [_extend(seq[0], witness)]
    order = inst.csp.vertices
    for prev, nxt in zip(seq, seq[1:]):
        changed = [v for v in prev if prev[v] != nxt[v]]
        v = changed[0]
        if v in witness.v1:
            mid = dict(out[-1])
            mid[v] = nxt[v]
            out.append(mid)
        out.append(_extend(nxt, witness))
    out = [{v: f[v] for v in order} for f in out]
    try:
        validate_walk(inst, out)
    except InvalidWalk as exc:
        raise InvalidWalk(f"lifted walk is invalid: {exc}") from None
    return out


def identify_weighted(inst, v1, v2):
    """Identify two single-vertex twins and move ``v2``'s weight onto ``v1``."""
    witness = check_identical(inst, {v1}, {v2}, {v1: v2})
    reduced = identify(inst, witness)
    weights = dict(reduced.weights)
    weights[v1] = inst.weights[v1] + inst.weights[v2]
    return ReconfigInstance(reduced.csp, reduced.source, reduced.target, weights)


def check_lhr_identical(inst, v1, v2, phi):
    """List-homomorphism sufficient condition for two subgraphs to be identical."""
    from .specialcase import detect_lhr

    csp = inst.csp
    if detect_lhr(csp) is None:
        raise WrongAlgorithm("instance is not in list-homomorphism form")
    V1, V2, phi = _normalize_map(inst, v1, v2, phi)
    phi = {v: phi[v] for v in V1}
    graph = csp.graph
    edges = graph.edge_set()
    for a in V1:
        for b in V1:
            if a == b:
                continue
            if (frozenset((a, b)) in edges) != (frozenset((phi[a], phi[b])) in edges):
                return False
    for v in V1:
        if graph.neighbors(v) - V1 != graph.neighbors(phi[v]) - V2:
            return False
        if inst.asgn(v) != inst.asgn(phi[v]):
            return False
        if vertex_list(csp, v) != vertex_list(csp, phi[v]):
            return False
    return True


def _twin_signature(inst, v):
    """Cheap necessary condition for two single vertices to be identical."""
    csp = inst.csp
    pos = csp.position
    rels = []
    for c in csp.incident[v]:
        rest = tuple(sorted((x for x in c.scope if x != v), key=pos.__getitem__))
        rels.append((rest, c.reorder((v,) + rest).allowed))
    rels.sort(key=lambda r: [pos[x] for x in r[0]])
    return (csp.graph.neighbors(v), inst.asgn(v), tuple(rels))


def greedy_identify_twins(inst, candidates, weighted=False, trace=None):
    """Identify single-vertex twins inside ``candidates`` until none remain.

    Each round takes the lowest identical pair ``(a, b)`` by global vertex
    order, then removes ``b`` together with every later member of its
    signature group that is also identical to ``a``. Such twins share one
    neighbourhood and are pairwise non-adjacent, so deleting one leaves the
    others identical to ``a``; one projection then does the whole batch.
    ``trace`` collects the applied ``(kept, removed)`` pairs.
    """
    candidates = set(candidates)
    while True:
        pos = inst.csp.position
        live = sorted((v for v in candidates if v in pos), key=pos.__getitem__)
        groups = {}
        for v in live:
            groups.setdefault(_twin_signature(inst, v), []).append(v)
        best = None
        for members in groups.values():
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    key = (pos[a], pos[b])
                    if best is not None and key >= best[0]:
                        break
                    if is_identical(inst, {a}, {b}, {a: b}):
                        best = (key, a, b, members)
                        break
        if best is None:
            return inst
        _, a, b, members = best
        removed = [b] + [m for m in members if pos[m] > pos[b] and is_identical(inst, {a}, {m}, {a: m})]
        keep = [v for v in inst.csp.vertices if v not in set(removed)]
        weights = restrict(inst.weights, keep)
        if weighted:
            weights[a] = inst.weights[a] + sum(inst.weights[m] for m in removed)
        inst = ReconfigInstance(
            project_csp(inst.csp, keep),
            restrict(inst.source, keep),
            restrict(inst.target, keep),
            weights,
        )
        if trace is not None:
            trace.extend((a, m) for m in removed)
