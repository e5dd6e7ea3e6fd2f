"""Small graph utilities: strongly connected components and BFS reachability.

Adjacency is always a mapping node -> iterable of successor nodes.
"""

from collections import deque


def strongly_connected_components(nodes, succ):
    """Iterative Tarjan. Components come out in reverse topological order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def nodes_on_cycles(nodes, succ):
    """Nodes lying on some directed cycle (SCC of size >= 2, or a self-loop)."""
    out = set()
    for comp in strongly_connected_components(nodes, succ):
        if len(comp) > 1:
            out.update(comp)
        else:
            v = comp[0]
            if v in set(succ.get(v, ())):
                out.add(v)
    return out


def reachable(start, succ):
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def undirected_components(nodes, edges):
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    label = {}
    comps = []
    for v in nodes:
        if v in label:
            continue
        comp = reachable(v, adj)
        for w in comp:
            label[w] = len(comps)
        comps.append(comp)
    return label, comps
