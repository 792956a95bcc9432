"""Vertex-disjoint X–Y paths and a minimum X–Y separator via unit-capacity max-flow."""
from __future__ import annotations

from collections import deque
from itertools import combinations

from .errors import GraphError
from .graph_core import SimpleGraph


def _split_network(g, xs, ys, vcap):
    """Vertex ``v`` becomes ``2v -> 2v+1`` with capacity ``vcap[v]``; source ``2n``, sink ``2n+1``."""
    n = g.n
    big = sum(vcap) + 1
    cap = {}
    adj = [set() for _ in range(2 * n + 2)]

    def arc(a, b, c):
        cap[(a, b)] = cap.get((a, b), 0) + c
        cap.setdefault((b, a), 0)
        adj[a].add(b)
        adj[b].add(a)

    for i in range(n):
        arc(2 * i, 2 * i + 1, vcap[i])
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        arc(2 * i + 1, 2 * j, big)
        arc(2 * j + 1, 2 * i, big)
    for i in xs:
        arc(2 * n, 2 * i, big)
    for i in ys:
        arc(2 * i + 1, 2 * n + 1, big)
    return cap, [sorted(a) for a in adj]


def _augment(cap, adj, s, t):
    """One shortest augmenting path, pushing its bottleneck; returns ``(pushed, reached)``."""
    parent = {s: None}
    queue = deque([s])
    while queue and t not in parent:
        a = queue.popleft()
        for b in adj[a]:
            if b not in parent and cap[(a, b)] > 0:
                parent[b] = a
                queue.append(b)
    if t not in parent:
        return 0, parent
    arcs = []
    b = t
    while parent[b] is not None:
        arcs.append((parent[b], b))
        b = parent[b]
    push = min(cap[a] for a in arcs)
    for a, b in arcs:
        cap[(a, b)] -= push
        cap[(b, a)] += push
    return push, parent


def _max_flow(cap, adj, s, t):
    while True:
        pushed, reach = _augment(cap, adj, s, t)
        if not pushed:
            return reach


def menger(g: SimpleGraph, xs, ys):
    """Return ``(paths, separator)`` with ``len(paths) == len(separator)``.

    A vertex of ``X ∩ Y`` is a path of length zero and belongs to the separator.
    Among minimum separators one with fewest vertices of ``X ∪ Y`` is returned.
    Every returned path meets ``X`` only at its first vertex and ``Y`` only at its last.
    """
    xs, ys = set(map(str, xs)), set(map(str, ys))
    if not xs or not ys:
        raise GraphError("X and Y must be non-empty")
    for v in xs | ys:
        if v not in g.index:
            raise GraphError(f"vertex {v!r} not in graph")
    both = sorted(xs & ys)
    keep = [v for v in g.vertices if v not in xs & ys]
    h = g.induced(keep)
    paths = [[v] for v in both]
    separator = set(both)
    xi = [h.index[v] for v in sorted(xs - set(both))]
    yi = [h.index[v] for v in sorted(ys - set(both))]
    if h.n and xi and yi:
        s, t = 2 * h.n, 2 * h.n + 1
        cap, adj = _split_network(h, xi, yi, [1] * h.n)
        orig = dict(cap)
        _max_flow(cap, adj, s, t)
        paths += [_trim(p, xs, ys) for p in _decompose(h, orig, cap, xi)]
        # second cut with vertex weight M (+1 on X ∪ Y): same size, fewest terminals
        m = h.n + 1
        weights = [m + (v in xs or v in ys) for v in h.vertices]
        cap, adj = _split_network(h, xi, yi, weights)
        reach = _max_flow(cap, adj, s, t)
        separator |= {h.vertices[i] for i in range(h.n)
                      if 2 * i in reach and 2 * i + 1 not in reach}
    paths.sort(key=lambda p: (len(p), p))
    return paths, frozenset(separator)


def _decompose(h, orig, cap, xi):
    """Split the flow into source-to-sink paths; each vertex carries at most one unit."""
    n = h.n
    s, t = 2 * n, 2 * n + 1
    flow = {k: orig[k] - cap[k] for k in orig if orig[k] > 0 and orig[k] > cap[k]}
    out = []
    for i in xi:
        if not flow.get((s, 2 * i)):
            continue
        path = [i]
        cur = i
        while not flow.get((2 * cur + 1, t)):
            cur = next(j for j in range(n) if flow.get((2 * cur + 1, 2 * j)))
            flow[(2 * path[-1] + 1, 2 * cur)] -= 1
            path.append(cur)
        flow[(2 * cur + 1, t)] -= 1
        out.append([h.vertices[k] for k in path])
    return out


def _trim(path, xs, ys):
    start = max(k for k, v in enumerate(path) if v in xs)
    end = min(k for k, v in enumerate(path) if v in ys and k >= start)
    return path[start:end + 1]


def is_separator(g: SimpleGraph, xs, ys, sep) -> bool:
    """True when every X–Y path meets ``sep`` (search in ``G - sep``)."""
    sep = set(sep)
    start = [v for v in xs if v not in sep]
    seen = set(start)
    queue = deque(start)
    while queue:
        v = queue.popleft()
        if v in ys:
            return False
        for u in g.adj[v]:
            if u not in sep and u not in seen:
                seen.add(u)
                queue.append(u)
    return True


def min_separator_bruteforce(g: SimpleGraph, xs, ys) -> int:
    """Smallest separator size by enumeration (test oracle)."""
    for k in range(g.n + 1):
        for sep in combinations(g.vertices, k):
            if is_separator(g, xs, ys, sep):
                return k
    return g.n
