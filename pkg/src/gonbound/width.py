"""Tree-decompositions, weak tree-decompositions, brambles and exact width solvers.

Vertex sets inside the solvers are bitmasks over ``SimpleGraph.index``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .errors import CapExceeded, GraphError
from .graph_core import SimpleGraph, ValidationReport, require_valid
from .hitting import min_hitting_set

TW_CAP = 12
WTW_CAP = 7
SBN_CAP = 7


# ---------------------------------------------------------------- bitmask helpers


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(x):
    return bin(x).count("1")


def _spread(nb, mask):
    """Union of neighbourhoods of the vertices in ``mask``."""
    out = 0
    for i in _bits(mask):
        out |= nb[i]
    return out


def _boundary(nb, mask):
    return _spread(nb, mask) & ~mask


def _grow(nb, start, allowed):
    comp = frontier = start
    while frontier:
        new = _spread(nb, frontier) & allowed & ~comp
        comp |= new
        frontier = new
    return comp


def mask_components(nb, mask):
    """Components of the subgraph induced by ``mask``, lowest bit first."""
    out = []
    rest = mask
    while rest:
        comp = _grow(nb, rest & -rest, rest)
        out.append(comp)
        rest &= ~comp
    return out


def _submasks(pool, limit):
    subs = []
    sub = pool
    while True:
        if _popcount(sub) <= limit:
            subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & pool
    subs.sort(key=lambda s: (_popcount(s), s))
    return subs


# ---------------------------------------------------------------- decompositions


@dataclass(frozen=True)
class _Decomposition:
    bags: tuple  # sorted (node, frozenset) pairs
    tree_edges: tuple  # sorted (a, b) pairs with a < b

    def __init__(self, bags: Mapping, tree_edges: Iterable = ()):
        norm = tuple(sorted((str(k), frozenset(map(str, v))) for k, v in dict(bags).items()))
        edges = tuple(sorted(tuple(sorted((str(a), str(b)))) for a, b in tree_edges))
        object.__setattr__(self, "bags", norm)
        object.__setattr__(self, "tree_edges", edges)

    @property
    def bag_map(self) -> dict:
        return dict(self.bags)

    @property
    def nodes(self) -> list:
        return [k for k, _ in self.bags]

    def tree_adj(self) -> dict:
        adj = {k: set() for k in self.nodes}
        for a, b in self.tree_edges:
            if a in adj and b in adj:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def nodes_with(self, v) -> set:
        return {k for k, s in self.bags if v in s}

    def tree_path(self, i, t) -> list:
        adj = self.tree_adj()
        parent = {i: None}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if t not in parent:
            raise GraphError(f"no tree path between {i!r} and {t!r}")
        path = [t]
        while path[-1] != i:
            path.append(parent[path[-1]])
        return path[::-1]

    def rooted_parents(self, root=None) -> dict:
        root = min(self.nodes) if root is None else root
        adj = self.tree_adj()
        parent = {root: None}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x]):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        return parent

    def as_dict(self) -> dict:
        return {
            "tree_edges": [list(e) for e in self.tree_edges],
            "bags": {k: sorted(s) for k, s in self.bags},
        }


class TreeDecomposition(_Decomposition):
    @property
    def width(self) -> int:
        return max(len(s) for _, s in self.bags) - 1


class WeakTreeDecomposition(_Decomposition):
    @property
    def width(self) -> int:
        return max(len(s) for _, s in self.bags)


def decomposition_from_dict(data: Mapping, weak: bool):
    cls = WeakTreeDecomposition if weak else TreeDecomposition
    return cls(data["bags"], [tuple(e) for e in data.get("tree_edges", ())])


def _connected_in_tree(adj, nodes) -> bool:
    nodes = set(nodes)
    if not nodes:
        return True
    start = min(nodes)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in nodes and y not in seen:
                seen.add(y)
                queue.append(y)
    return seen == nodes


def _common_violations(g: SimpleGraph, dec: _Decomposition) -> list:
    out = []
    nodes = dec.nodes
    if not nodes:
        return ["decomposition has no nodes"]
    adj = dec.tree_adj()
    for a, b in dec.tree_edges:
        if a not in adj or b not in adj:
            out.append(f"tree edge {a!r}-{b!r} uses an unknown node")
        elif a == b:
            out.append(f"tree loop at node {a!r}")
    if len(set(dec.tree_edges)) != len(dec.tree_edges):
        out.append("repeated tree edge")
    if len(dec.tree_edges) != len(nodes) - 1 or not _connected_in_tree(adj, nodes):
        out.append("tree is not a tree (must be connected with |I|-1 edges)")
    covered = set()
    for k, s in dec.bags:
        for v in s:
            if v not in g.index:
                out.append(f"bag {k!r} contains {v!r}, not a vertex of the graph")
        covered |= s
    for v in g.vertices:
        if v not in covered:
            out.append(f"vertex {v!r} is in no bag")
    if out:
        return out
    for v in g.vertices:
        if not _connected_in_tree(adj, dec.nodes_with(v)):
            out.append(f"nodes containing vertex {v!r} do not form a subtree")
    return out


def validate_td(g: SimpleGraph, dec: TreeDecomposition) -> ValidationReport:
    out = _common_violations(g, dec)
    if not out:
        bags = [s for _, s in dec.bags]
        for u, v in g.edges:
            if not any(u in s and v in s for s in bags):
                out.append(f"edge {u!r}-{v!r} lies in no single bag")
    return ValidationReport(tuple(out))


def _weak_edge_ok(dec, u, v) -> bool:
    bm = dec.bag_map
    if any(u in s and v in s for s in bm.values()):
        return True
    return any({u, v} <= (bm[a] | bm[b]) for a, b in dec.tree_edges)


def validate_wtd(g: SimpleGraph, dec: WeakTreeDecomposition) -> ValidationReport:
    """Weak rules: each edge inside ``S_i ∪ S_j`` for some tree edge ``ij``.

    An edge inside one bag also passes, which matters only for a one-node tree.
    """
    out = _common_violations(g, dec)
    if not out:
        for u, v in g.edges:
            if not _weak_edge_ok(dec, u, v):
                out.append(f"edge {u!r}-{v!r} is not inside the union of two adjacent bags")
    return ValidationReport(tuple(out))


def adjacent_subtrees_connected(g: SimpleGraph, dec: _Decomposition) -> list:
    """Edges ``uv`` whose node sets ``T_u ∪ T_v`` are disconnected (expect none)."""
    adj = dec.tree_adj()
    return [
        (u, v) for u, v in g.edges
        if not _connected_in_tree(adj, dec.nodes_with(u) | dec.nodes_with(v))
    ]


def restrict_wtd(g: SimpleGraph, dec: WeakTreeDecomposition, keep) -> WeakTreeDecomposition:
    keep = set(map(str, keep))
    return WeakTreeDecomposition({k: s & keep for k, s in dec.bags}, dec.tree_edges)


def augment_wtd_path(dec: WeakTreeDecomposition, i, t, v) -> WeakTreeDecomposition:
    """Add ``v`` (already in bag ``t``) to every bag on the tree path from ``i`` to ``t``."""
    bm = dec.bag_map
    if v not in bm.get(t, ()):
        raise GraphError(f"vertex {v!r} is not in bag {t!r}")
    for j in dec.tree_path(i, t):
        bm[j] = bm[j] | {v}
    return WeakTreeDecomposition(bm, dec.tree_edges)


def td_from_wtd(g: SimpleGraph, dec: WeakTreeDecomposition) -> TreeDecomposition:
    """Merge each bag with its parent's bag; the root is the smallest node id."""
    bm = dec.bag_map
    parent = dec.rooted_parents()
    bags = {k: bm[k] | (bm[p] if p is not None else frozenset()) for k, p in parent.items()}
    return TreeDecomposition(bags, dec.tree_edges)


def wtd_from_td(g: SimpleGraph, dec: TreeDecomposition) -> WeakTreeDecomposition:
    return WeakTreeDecomposition(dec.bag_map, dec.tree_edges)


# ---------------------------------------------------------------- families


@dataclass(frozen=True)
class VertexFamily:
    members: tuple
    kind: str = "strong"  # or "bramble"

    def __init__(self, members: Iterable, kind: str = "strong"):
        if kind not in ("strong", "bramble"):
            raise ValueError(f"unknown family kind {kind!r}")
        object.__setattr__(self, "members", tuple(frozenset(map(str, m)) for m in members))
        object.__setattr__(self, "kind", kind)

    def as_lists(self) -> list:
        return [sorted(m) for m in self.members]


def _touch(g, a, b) -> bool:
    if a & b:
        return True
    return any(u in b for v in a for u in g.adj[v])


def validate_family(g: SimpleGraph, fam: VertexFamily) -> ValidationReport:
    out = []
    for i, m in enumerate(fam.members):
        bad = [v for v in m if v not in g.index]
        if bad:
            out.append(f"member {i} contains unknown vertex {bad[0]!r}")
        elif not g.is_connected_set(m):
            out.append(f"member {i} does not induce a connected subgraph")
    if out:
        return ValidationReport(tuple(out))
    for i, j in combinations(range(len(fam.members)), 2):
        a, b = fam.members[i], fam.members[j]
        if fam.kind == "strong" and not a & b:
            out.append(f"members {i} and {j} are disjoint")
        if fam.kind == "bramble" and not _touch(g, a, b):
            out.append(f"members {i} and {j} do not touch")
    return ValidationReport(tuple(out))


def family_order(g: SimpleGraph, fam: VertexFamily, cap: int = 64) -> int:
    if len(fam.members) > cap:
        raise CapExceeded("family_order", len(fam.members), cap)
    size, _ = min_hitting_set([g.to_mask(m) for m in fam.members])
    return size


def hitting_bags(dec: _Decomposition, fam: VertexFamily) -> list:
    """Nodes whose bag meets every member of ``fam``."""
    return [k for k, s in dec.bags if all(s & m for m in fam.members)]


# ---------------------------------------------------------------- treewidth


def _guard(g, cap, what):
    if g.n > cap:
        raise CapExceeded(what, g.n, cap)


def treewidth_exact(g: SimpleGraph, cap: int = TW_CAP):
    """Exact treewidth by dynamic programming over eliminated vertex sets."""
    require_valid(g)
    _guard(g, cap, "treewidth_exact")
    n = g.n
    nb = g.masks
    if n == 0:
        return -1, TreeDecomposition({"n0": ()})
    best = [0] * (1 << n)
    pick = [0] * (1 << n)
    best[0] = -1
    for s in range(1, 1 << n):
        val = None
        for v in _bits(s):
            rest = s & ~(1 << v)
            comp = _grow(nb, 1 << v, rest | 1 << v)
            q = _popcount(_boundary(nb, comp))
            cand = max(best[rest], q)
            if val is None or cand < val:
                val, pick[s] = cand, v
        best[s] = val
    order = []
    s = (1 << n) - 1
    while s:
        order.append(pick[s])
        s &= ~(1 << pick[s])
    order.reverse()
    return best[(1 << n) - 1], _td_from_order(g, order)


def _td_from_order(g, order):
    nb = g.masks
    pos = {v: k for k, v in enumerate(order)}
    width = len(str(len(order)))
    name = [f"n{k:0{width}d}" for k in range(len(order))]
    bags, edges = {}, []
    eliminated = 0
    for k, v in enumerate(order):
        comp = _grow(nb, 1 << v, eliminated | 1 << v)
        higher = _boundary(nb, comp)
        bags[name[k]] = g.from_mask(higher | 1 << v)
        if higher:
            nxt = min(pos[u] for u in _bits(higher))
            edges.append((name[k], name[nxt]))
        elif k + 1 < len(order):
            edges.append((name[k], name[k + 1]))
        eliminated |= 1 << v
    return TreeDecomposition(bags, edges)


# ---------------------------------------------------------------- weak treewidth


def _wtw_search(g, w):
    """Decide ``wtw(g) <= w``; on success return the recursive choices.

    A component ``C`` hanging below a bag sees only its boundary ``N(C)``.
    The node for ``C`` takes ``S ⊆ C ∪ N(C)`` meeting ``C``; any vertex of ``C``
    adjacent to a boundary vertex left out of ``S`` must be in ``S`` (that edge
    is covered across the tree edge to the parent), and every component of
    ``C - S`` recurses with boundary inside ``S``.
    """
    nb = g.masks
    memo = {}

    def feasible(c):
        if c in memo:
            return memo[c] is not None
        memo[c] = None
        bnd = _boundary(nb, c)
        for s in _submasks(c | bnd, w):
            if not s & c:
                continue
            left_out = bnd & ~s
            if c & _spread(nb, left_out) & ~s:
                continue
            kids = mask_components(nb, c & ~s)
            if all(feasible(k) for k in kids):
                memo[c] = (s, kids)
                return True
        return False

    full = (1 << g.n) - 1
    return memo if feasible(full) else None


def _wtd_from_choices(g, memo):
    bags, edges = {}, []
    counter = [0]

    def build(c, parent):
        s, kids = memo[c]
        name = f"n{counter[0]}"
        counter[0] += 1
        bags[name] = g.from_mask(s)
        if parent is not None:
            edges.append((parent, name))
        for k in kids:
            build(k, name)

    build((1 << g.n) - 1, None)
    width = len(str(counter[0] - 1))
    rename = {f"n{k}": f"n{k:0{width}d}" for k in range(counter[0])}
    return WeakTreeDecomposition(
        {rename[k]: v for k, v in bags.items()}, [(rename[a], rename[b]) for a, b in edges]
    )


def _prune_leaves(g, dec):
    """Drop leaves (smallest id first) while the decomposition stays valid."""
    changed = True
    while changed and len(dec.nodes) > 1:
        changed = False
        adj = dec.tree_adj()
        for leaf in sorted(k for k in dec.nodes if len(adj[k]) == 1):
            bags = {k: s for k, s in dec.bags if k != leaf}
            cand = WeakTreeDecomposition(bags, [e for e in dec.tree_edges if leaf not in e])
            if validate_wtd(g, cand).ok:
                dec, changed = cand, True
                break
    return dec


def weak_treewidth_exact(g: SimpleGraph, cap: int = WTW_CAP):
    """Exact weak treewidth with an optimal weak tree-decomposition.

    The search starts at ``ceil((tw + 1) / 2)`` and stops by ``tw + 1``.
    """
    require_valid(g)
    _guard(g, cap, "weak_treewidth_exact")
    if g.n == 0:
        return 0, WeakTreeDecomposition({"n0": ()})
    tw, td = treewidth_exact(g, cap=max(cap, g.n))
    lo = max(1, -(-(tw + 1) // 2))
    for w in range(lo, tw + 2):
        memo = _wtw_search(g, w)
        if memo is not None:
            return w, _prune_leaves(g, _wtd_from_choices(g, memo))
    raise AssertionError("a tree-decomposition of width tw is a weak one of width tw + 1")


# ---------------------------------------------------------------- bramble numbers


def _solve_choice(domains, compatible):
    """Pick one value per domain so that all picks are pairwise compatible."""
    assigned = [None] * len(domains)

    def rec(doms):
        free = [i for i in range(len(doms)) if assigned[i] is None]
        if not free:
            return True
        idx = min(free, key=lambda i: (len(doms[i]), i))
        for val in doms[idx]:
            new = list(doms)
            ok = True
            for j in free:
                if j == idx:
                    continue
                nd = [x for x in doms[j] if compatible(val, x)]
                if not nd:
                    ok = False
                    break
                new[j] = nd
            if not ok:
                continue
            assigned[idx] = val
            if rec(new):
                return True
            assigned[idx] = None
        return False

    return list(assigned) if rec(list(domains)) else None


def _order_at_least(g, k, compatible):
    """A family of connected sets, pairwise ``compatible``, with no hitting set of size < k.

    WLOG the member avoiding a (k-1)-set ``S`` is a whole component of ``G - S``.
    """
    n = g.n
    full = (1 << n) - 1
    if k <= 1:
        return [full] if n else None
    if k - 1 >= n:
        return None
    nb = g.masks
    domains = []
    for combo in combinations(range(n), k - 1):
        s = 0
        for i in combo:
            s |= 1 << i
        comps = mask_components(nb, full & ~s)
        comps.sort(key=lambda c: (-_popcount(c), c))
        domains.append(comps)
    picks = _solve_choice(domains, compatible)
    if picks is None:
        return None
    return sorted(set(picks), key=lambda c: (_popcount(c), c))


def _bramble_number(g, cap, compatible, kind, what):
    require_valid(g)
    _guard(g, cap, what)
    best_k, best = 0, None
    k = 1
    while True:
        fam = _order_at_least(g, k, compatible)
        if fam is None:
            break
        best_k, best = k, fam
        k += 1
    family = VertexFamily([g.from_mask(m) for m in best or ()], kind=kind)
    if best is not None:
        got = family_order(g, family)
        if got != best_k:
            raise AssertionError(f"{what}: witness order {got} != {best_k}")
    return best_k, family


def strong_bramble_number_exact(g: SimpleGraph, cap: int = SBN_CAP):
    """Maximum order of a family of pairwise intersecting connected sets."""
    return _bramble_number(g, cap, lambda a, b: bool(a & b), "strong", "strong_bramble_number_exact")


def bramble_number_exact(g: SimpleGraph, cap: int = SBN_CAP):
    """Maximum order of a family of pairwise touching connected sets."""
    nb = g.masks

    def touch(a, b):
        return bool(a & b) or bool(_spread(nb, a) & b)

    return _bramble_number(g, cap, touch, "bramble", "bramble_number_exact")


def dumps_decomposition(dec: _Decomposition) -> str:
    return json.dumps(dec.as_dict(), indent=2)
