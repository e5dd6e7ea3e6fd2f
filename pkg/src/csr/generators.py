"""Seeded random instance families.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister), seeded
once per call. The same parameters and seed always give the same instance.
"""

import random
from dataclasses import dataclass
from itertools import combinations, product

from .errors import GenerationFailed, MalformedInstance
from .model import Constraint, CspInstance, ReconfigInstance, vertex_lists
from .oracle import enumerate_solutions, extreme_solution
from .transform import KKCliqueInstance, kk_clique_to_2csr

FAMILIES = ("random", "coloring", "lhr", "boolean2", "kkclique")


@dataclass(frozen=True)
class GenParams:
    n: int = 5
    k: int = 3
    arity: int = 2
    density: float = 0.5  # chance that a candidate hyperedge is present
    tightness: float = 0.6  # chance that a tuple is allowed (random, boolean2)
    family: str = "random"
    endpoints: str = "extremes"  # or "random": two uniformly drawn solutions
    retries: int = 50
    max_solutions: int = 20000  # cap for endpoints='random'

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise MalformedInstance(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.n < 1 or self.k < 1:
            raise MalformedInstance("n and k must be positive")
        if self.arity < 1:
            raise MalformedInstance("arity must be positive")
        if not (0.0 <= self.density <= 1.0 and 0.0 <= self.tightness <= 1.0):
            raise MalformedInstance("density and tightness must lie in [0, 1]")
        if self.endpoints not in ("extremes", "random"):
            raise MalformedInstance("endpoints must be 'extremes' or 'random'")


def _names(n):
    return [f"x{i}" for i in range(n)]


def _random_csp(p, rng):
    vs = _names(p.n)
    arity = min(p.arity, p.n)
    cons = []
    for scope in combinations(vs, arity):
        if rng.random() < p.density:
            rows = frozenset(t for t in product(range(p.k), repeat=arity) if rng.random() < p.tightness)
            cons.append(Constraint(scope, rows))
    return CspInstance.build(p.k, vs, cons)


def _coloring_csp(p, rng):
    vs = _names(p.n)
    proper = frozenset((a, b) for a in range(p.k) for b in range(p.k) if a != b)
    cons = [Constraint(e, proper) for e in combinations(vs, 2) if rng.random() < p.density]
    return CspInstance.build(p.k, vs, cons)


def _lhr_csp(p, rng):
    # plant a homomorphism first so that most draws are solvable
    vs = _names(p.n)
    h = {frozenset(e) for e in combinations(range(p.k), 2) if rng.random() < 0.6}
    if not h and p.k >= 2:
        h.add(frozenset(rng.sample(range(p.k), 2)))
    planted = {v: rng.randrange(p.k) for v in vs}
    lists = {v: {planted[v]} | {a for a in range(p.k) if rng.random() < 0.6} for v in vs}
    edges = [
        (v, w) for v, w in combinations(vs, 2)
        if frozenset((planted[v], planted[w])) in h and rng.random() < p.density
    ]
    # shrink lists until every constraint is exactly E(H) on the list product
    while True:
        cons = [
            Constraint((v, w), frozenset((a, b) for a in lists[v] for b in lists[w] if frozenset((a, b)) in h))
            for v, w in edges
        ]
        csp = CspInstance.build(p.k, vs, cons)
        fresh = vertex_lists(csp)
        if all(fresh[v] == lists[v] for v in vs):
            return csp
        lists = {v: set(fresh[v]) for v in vs}


def _boolean2_csp(p, rng):
    vs = _names(p.n)
    cons = []
    for v in vs:
        if rng.random() < p.density / 4:
            cons.append(Constraint((v,), frozenset({(rng.randrange(2),)})))
    for e in combinations(vs, 2):
        if rng.random() < p.density:
            rows = frozenset(t for t in product(range(2), repeat=2) if rng.random() < p.tightness)
            cons.append(Constraint(e, rows))
    return CspInstance.build(2, vs, cons)


def random_kk_source(kappa, density, rng):
    return KKCliqueInstance.from_matrix(kappa, lambda i, a, j, b: rng.random() < density)


def _pick_endpoints(csp, p, rng):
    if p.endpoints == "random":
        sols = enumerate_solutions(csp, p.max_solutions)
        if not sols:
            return None
        return rng.choice(sols), rng.choice(sols)
    first = extreme_solution(csp)
    if first is None:
        return None
    return first, extreme_solution(csp, last=True)


def generate(params, seed):
    """Deterministic random instance of the requested family."""
    rng = random.Random(seed)
    if params.family == "kkclique":
        # kkclique endpoints are fixed by the construction
        return kk_clique_to_2csr(random_kk_source(max(2, params.n - 2), params.density, rng))
    build = {
        "random": _random_csp,
        "coloring": _coloring_csp,
        "lhr": _lhr_csp,
        "boolean2": _boolean2_csp,
    }[params.family]
    for _ in range(params.retries):
        csp = build(params, rng)
        picked = _pick_endpoints(csp, params, rng)
        if picked is not None:
            return ReconfigInstance(csp, *picked)
    raise GenerationFailed(f"no solvable {params.family} instance after {params.retries} attempts")
