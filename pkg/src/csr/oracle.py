"""Brute-force ground truth: enumerate solutions, search the solution graph.

States are value tuples aligned with ``csp.vertices``. Every search is bounded
by a state budget; running past it raises ``BudgetExceeded`` instead of
returning a partial answer.
"""

import heapq
import math
import os
from collections import deque
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidWalk, MalformedInstance
from .model import check_assignment, is_solution, vertex_lists

DEFAULT_BUDGET = 10 ** 6


def default_budget():
    raw = os.environ.get("CSR_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise MalformedInstance(f"CSR_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise MalformedInstance("CSR_BUDGET must be positive")
    return value


class _Checker:
    """Constraint lookups keyed by vertex position."""

    def __init__(self, csp):
        self.csp = csp
        pos = csp.position
        self.n = csp.n
        self.k = csp.k
        self.dead = any(not c.scope and not c.allowed for c in csp.constraints)
        self.at = [[] for _ in range(self.n)]
        # prefix tables: at the i-th scope vertex, the allowed prefixes of length i+1
        self.prefix_at = [[] for _ in range(self.n)]
        for c in csp.constraints:
            if not c.scope:
                continue
            idx = tuple(pos[v] for v in c.scope)
            for p in idx:
                self.at[p].append((idx, c.allowed))
            for i, p in enumerate(idx):
                prefixes = frozenset(t[: i + 1] for t in c.allowed)
                self.prefix_at[p].append((idx[: i + 1], prefixes))
        lists = vertex_lists(csp)
        self.lists = [sorted(lists[v]) for v in csp.vertices]

    def ok_at(self, state, p):
        for idx, allowed in self.at[p]:
            if tuple(state[i] for i in idx) not in allowed:
                return False
        return True

    def neighbors(self, state):
        """Solutions differing from ``state`` in one position, as (position, tuple)."""
        out = []
        s = list(state)
        for p in range(self.n):
            old = s[p]
            for x in self.lists[p]:
                if x == old:
                    continue
                s[p] = x
                if self.ok_at(s, p):
                    out.append((p, tuple(s)))
            s[p] = old
        return out


def _to_state(csp, f):
    f = check_assignment(csp, f)
    return tuple(f[v] for v in csp.vertices)


def _to_assignment(csp, state):
    return dict(zip(csp.vertices, state))


def enumerate_solutions(csp, limit=None):
    """All solutions in lexicographic order of their value tuples."""
    limit = default_budget() if limit is None else limit
    chk = _Checker(csp)
    if chk.dead:
        return []
    n = chk.n
    out = []
    state = [0] * n

    def extend(p):
        if p == n:
            if len(out) >= limit:
                raise BudgetExceeded(f"more than {limit} solutions")
            out.append(_to_assignment(csp, tuple(state)))
            return
        for x in chk.lists[p]:
            state[p] = x
            good = True
            for idx, prefixes in chk.prefix_at[p]:
                if tuple(state[i] for i in idx) not in prefixes:
                    good = False
                    break
            if good:
                extend(p + 1)

    extend(0)
    return out


def extreme_solution(csp, last=False):
    """Lexicographically first (or last) solution, or None."""
    chk = _Checker(csp)
    if chk.dead:
        return None
    n = chk.n
    state = [0] * n

    def extend(p):
        if p == n:
            return True
        for x in (reversed(chk.lists[p]) if last else chk.lists[p]):
            state[p] = x
            if all(tuple(state[i] for i in idx) in prefixes for idx, prefixes in chk.prefix_at[p]):
                if extend(p + 1):
                    return True
        return False

    return _to_assignment(csp, tuple(state)) if extend(0) else None


@dataclass(frozen=True)
class SolutionGraph:
    vertices: tuple
    solutions: tuple
    edges: tuple

    @property
    def index(self):
        return {tuple(f[v] for v in self.vertices): i for i, f in enumerate(self.solutions)}

    def adjacency(self):
        adj = [[] for _ in self.solutions]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def components(self):
        """Component label per solution index."""
        adj = self.adjacency()
        label = [-1] * len(self.solutions)
        count = 0
        for start in range(len(self.solutions)):
            if label[start] >= 0:
                continue
            label[start] = count
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in adj[i]:
                    if label[j] < 0:
                        label[j] = count
                        queue.append(j)
            count += 1
        return label

    def emit(self):
        lines = [f"p sol {len(self.solutions)} {len(self.edges)}"]
        lines.extend(f"{i} {j} {w}" for i, j, w in self.edges)
        return "\n".join(lines) + "\n"


def build_solution_graph(csp, weights=None, limit=None):
    sols = enumerate_solutions(csp, limit)
    vertices = csp.vertices
    index = {tuple(f[v] for v in vertices): i for i, f in enumerate(sols)}
    k = csp.k
    edges = []
    for i, f in enumerate(sols):
        state = [f[v] for v in vertices]
        for p, v in enumerate(vertices):
            old = state[p]
            w = 1 if weights is None else weights[v]
            for x in range(old + 1, k):
                state[p] = x
                j = index.get(tuple(state))
                if j is not None:
                    edges.append((i, j, w))
            state[p] = old
    edges.sort()
    return SolutionGraph(vertices, tuple(sols), tuple(edges))


def _bfs(inst, limit):
    csp = inst.csp
    chk = _Checker(csp)
    start = _to_state(csp, inst.source)
    goal = _to_state(csp, inst.target)
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == goal:
            return parent, goal
        for _, t in chk.neighbors(s):
            if t not in parent:
                if len(parent) >= limit:
                    raise BudgetExceeded(f"search visited more than {limit} solutions")
                parent[t] = s
                queue.append(t)
    return parent, None


def is_reconfigurable(inst, limit=None):
    limit = default_budget() if limit is None else limit
    _, found = _bfs(inst, limit)
    return found is not None


def _dijkstra(inst, limit):
    csp = inst.csp
    chk = _Checker(csp)
    weights = [inst.weights[v] for v in csp.vertices]
    start = _to_state(csp, inst.source)
    goal = _to_state(csp, inst.target)
    dist = {start: 0}
    pred = {start: None}
    done = set()
    heap = [(0, start)]
    while heap:
        d, s = heapq.heappop(heap)
        if s in done:
            continue
        done.add(s)
        if s == goal:
            return d, pred, goal
        for p, t in chk.neighbors(s):
            nd = d + weights[p]
            old = dist.get(t)
            if old is None:
                if len(dist) >= limit:
                    raise BudgetExceeded(f"search visited more than {limit} solutions")
            if old is None or nd < old or (nd == old and t not in done and s < pred[t]):
                dist[t] = nd
                pred[t] = s
                heapq.heappush(heap, (nd, t))
    return math.inf, pred, None


def shortest_reconfiguration(inst, limit=None):
    """Minimum weighted length of a reconfiguration sequence, or ``math.inf``."""
    limit = default_budget() if limit is None else limit
    d, _, _ = _dijkstra(inst, limit)
    return d


def shortest_walk(inst, limit=None):
    """A minimum-weight walk from source to target as a list of assignments, or None."""
    limit = default_budget() if limit is None else limit
    _, pred, goal = _dijkstra(inst, limit)
    if goal is None:
        return None
    path = []
    s = goal
    while s is not None:
        path.append(s)
        s = pred[s]
    path.reverse()
    return [_to_assignment(inst.csp, s) for s in path]


def validate_walk(inst, walk):
    """Raise ``InvalidWalk`` unless ``walk`` is a source-to-target walk of solutions."""
    if not walk:
        raise InvalidWalk("walk is empty")
    csp = inst.csp
    states = []
    for i, f in enumerate(walk):
        try:
            ok = is_solution(csp, f)
        except MalformedInstance as exc:
            raise InvalidWalk(f"step {i}: {exc}") from None
        if not ok:
            raise InvalidWalk(f"step {i} is not a solution")
        states.append(_to_state(csp, f))
    if states[0] != _to_state(csp, inst.source):
        raise InvalidWalk("walk does not start at the source")
    if states[-1] != _to_state(csp, inst.target):
        raise InvalidWalk("walk does not end at the target")
    for i in range(1, len(states)):
        changed = sum(a != b for a, b in zip(states[i - 1], states[i]))
        if changed != 1:
            raise InvalidWalk(f"step {i} changes {changed} vertices")
    return True


def walk_length(inst, walk):
    total = 0
    for a, b in zip(walk, walk[1:]):
        for v in inst.csp.vertices:
            if a[v] != b[v]:
                total += inst.weights[v]
    return total
