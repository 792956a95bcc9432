"""Simple graphs, metric graphs and their geometric quantities.

Edge lengths are exact :class:`fractions.Fraction` values. Vertex ids are
strings and every iteration goes in sorted order.
"""
from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import GraphError


def edge_key(u, v):
    """Normalized unordered edge ``(min, max)``."""
    return (u, v) if u <= v else (v, u)


def as_fraction(value) -> Fraction:
    """Parse an exact positive-or-not rational from int, str ``"p/q"`` or float."""
    if isinstance(value, bool):
        raise GraphError(f"not a rational length: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not np.isfinite(value):
            raise GraphError(f"not a finite length: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"not a rational length: {value!r}") from exc
    raise GraphError(f"not a rational length: {value!r}")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SimpleGraph:
    """Vertices plus unordered edges.

    Construction normalizes but does not reject: loops and repeated pairs
    are kept so that :func:`validate` can report them.
    """

    vertices: tuple
    edges: tuple

    def __init__(self, vertices: Iterable = (), edges: Iterable = ()):
        edges = [edge_key(str(u), str(v)) for u, v in edges]
        verts = {str(v) for v in vertices}
        for u, v in edges:
            verts.add(u)
            verts.add(v)
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "edges", tuple(sorted(edges)))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adj(self) -> dict:
        nb = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u != v:
                nb[u].add(v)
                nb[v].add(u)
        return {v: tuple(sorted(s)) for v, s in nb.items()}

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def degree(self, v) -> int:
        return len(self.adj[v])

    @property
    def d_max(self) -> int:
        return max((len(a) for a in self.adj.values()), default=0)

    def has_edge(self, u, v) -> bool:
        return edge_key(u, v) in self.edge_set

    @cached_property
    def connected(self) -> bool:
        if not self.vertices:
            return True
        return len(reachable(self, self.vertices[0])) == self.n

    @cached_property
    def csr(self):
        """``(indptr, indices)`` int64 arrays over :attr:`index` order."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indices = []
        for i, v in enumerate(self.vertices):
            nbrs = [self.index[u] for u in self.adj[v]]
            indices.extend(nbrs)
            indptr[i + 1] = indptr[i] + len(nbrs)
        return indptr, np.asarray(indices, dtype=np.int64)

    @cached_property
    def masks(self) -> list:
        """Neighbourhood bitmasks over :attr:`index` order."""
        out = [0] * self.n
        for u, v in self.edges:
            if u != v:
                i, j = self.index[u], self.index[v]
                out[i] |= 1 << j
                out[j] |= 1 << i
        return out

    def to_mask(self, vs: Iterable) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.index[v]
        return m

    def from_mask(self, mask: int) -> frozenset:
        return frozenset(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def induced(self, vs: Iterable) -> "SimpleGraph":
        keep = set(vs)
        return SimpleGraph(keep, [(u, v) for u, v in self.edges if u in keep and v in keep])

    def edges_within(self, vs: Iterable) -> int:
        keep = set(vs)
        return sum(1 for u, v in self.edges if u in keep and v in keep)

    def is_connected_set(self, vs: Iterable) -> bool:
        vs = set(vs)
        if not vs:
            return False
        start = min(vs)
        return reachable(self, start, within=vs) == vs


def reachable(g: SimpleGraph, start, within=None) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in g.adj[v]:
            if u not in seen and (within is None or u in within):
                seen.add(u)
                queue.append(u)
    return seen


def components(g: SimpleGraph, within=None) -> list:
    """Connected components (sorted lists of frozensets) of ``g[within]``."""
    pool = set(g.vertices if within is None else within)
    out = []
    for v in sorted(pool):
        if any(v in c for c in out):
            continue
        out.append(frozenset(reachable(g, v, within=pool)))
    return out


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def first(self):
        return self.violations[0] if self.violations else None


def validate(graph: SimpleGraph) -> ValidationReport:
    """Report loops, repeated edges and disconnection. Empty report means valid."""
    out = []
    seen = set()
    for u, v in graph.edges:
        if u == v:
            out.append(f"loop at vertex {u!r}")
        elif (u, v) in seen:
            out.append(f"parallel edge {u!r}-{v!r}")
        seen.add((u, v))
    if not graph.connected:
        comps = components(graph)
        out.append(f"graph is disconnected: {len(comps)} components")
    return ValidationReport(tuple(out))


def require_valid(graph: SimpleGraph) -> SimpleGraph:
    report = validate(graph)
    if not report.ok:
        raise GraphError(report.first())
    return graph


@dataclass(frozen=True)
class MetricGraph:
    """A simple model plus exact positive edge lengths."""

    model: SimpleGraph
    lengths: tuple  # aligned with model.edges

    def __init__(self, model: SimpleGraph, lengths: Mapping | None = None):
        if lengths is None:
            lengths = {}
        require_valid(model)
        norm = {}
        for key, val in dict(lengths).items():
            norm[edge_key(*key)] = as_fraction(val)
        out = []
        for e in model.edges:
            ell = norm.pop(e, Fraction(1))
            if ell <= 0:
                raise GraphError(f"edge {e[0]!r}-{e[1]!r} has non-positive length {ell}")
            out.append(ell)
        if norm:
            extra = sorted(norm)[0]
            raise GraphError(f"length given for non-edge {extra[0]!r}-{extra[1]!r}")
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "lengths", tuple(out))

    @classmethod
    def unit(cls, model: SimpleGraph) -> "MetricGraph":
        return cls(model)

    @cached_property
    def length_map(self) -> dict:
        return dict(zip(self.model.edges, self.lengths))

    def length(self, u, v) -> Fraction:
        return self.length_map[edge_key(u, v)]

    @property
    def mu(self) -> Fraction:
        return sum(self.lengths, Fraction(0))

    @property
    def l_min(self) -> Fraction:
        """Minimum edge length of this model."""
        return min(self.lengths)

    @property
    def d_max(self) -> int:
        """Maximum valence of a point; interior edge points have valence 2."""
        if not self.model.edges:
            return 0
        return max(self.model.d_max, 2)


@dataclass(frozen=True, order=True)
class PointOnGraph:
    """A vertex, or a point at ``offset`` from ``edge[0]`` strictly inside ``edge``."""

    vertex: str | None = None
    edge: tuple | None = None
    offset: Fraction | None = None

    @classmethod
    def at_vertex(cls, v):
        return cls(vertex=str(v))

    @classmethod
    def on_edge(cls, u, v, offset, length=None):
        u, v, offset = str(u), str(v), as_fraction(offset)
        if u > v:
            if length is None:
                raise GraphError("edge length needed to flip orientation")
            u, v, offset = v, u, as_fraction(length) - offset
        return cls(edge=(u, v), offset=offset)

    @property
    def ident(self) -> str:
        if self.vertex is not None:
            return self.vertex
        return point_id(self.edge[0], self.edge[1], self.offset)


def point_id(u, v, offset: Fraction) -> str:
    """Vertex id used for a subdivision point, offset measured from ``u < v``."""
    return f"{u}-{v}@{fraction_str(offset)}"


def subdivide(metric: MetricGraph, points: Iterable[PointOnGraph]) -> MetricGraph:
    """Insert edge-interior points as new degree-2 vertices. Volume is preserved exactly."""
    by_edge = {}
    for p in points:
        if p.vertex is not None:
            raise GraphError(f"point {p.vertex!r} is a vertex, not edge-interior")
        e = edge_key(*p.edge)
        if e not in metric.length_map:
            raise GraphError(f"no edge {e[0]!r}-{e[1]!r}")
        off = p.offset if p.edge == e else metric.length_map[e] - p.offset
        ell = metric.length_map[e]
        if not 0 < off < ell:
            raise GraphError(
                f"point at offset {off} coincides with an endpoint of {e[0]!r}-{e[1]!r} "
                f"(length {ell})"
            )
        by_edge.setdefault(e, set()).add(off)
    existing = set(metric.model.vertices)
    new_edges = {}
    for e, ell in metric.length_map.items():
        offs = sorted(by_edge.get(e, ()))
        if not offs:
            new_edges[e] = ell
            continue
        ids = [e[0]] + [point_id(e[0], e[1], o) for o in offs] + [e[1]]
        for name in ids[1:-1]:
            if name in existing:
                raise GraphError(f"subdivision point id {name!r} clashes with a vertex")
            existing.add(name)
        pos = [Fraction(0)] + offs + [ell]
        for a, b, x, y in zip(ids, ids[1:], pos, pos[1:]):
            new_edges[edge_key(a, b)] = y - x
    model = SimpleGraph(existing, new_edges)
    return MetricGraph(model, new_edges)


def essential_vertices(metric: MetricGraph) -> frozenset:
    g = metric.model
    return frozenset(v for v in g.vertices if g.degree(v) != 2)


def dijkstra(metric: MetricGraph, source, skip_edge=None) -> dict:
    dist = {source: Fraction(0)}
    heap = [(Fraction(0), source)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u in metric.model.adj[v]:
            if skip_edge is not None and edge_key(u, v) == skip_edge:
                continue
            nd = d + metric.length(u, v)
            if u not in dist or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def geodesic_l_min(metric: MetricGraph):
    """Shortest geodesic between essential points, or ``None`` if there are none.

    Covers distinct pairs of essential vertices and the shortest non-trivial
    loop based at an essential vertex.
    """
    ess = sorted(essential_vertices(metric))
    if not ess:
        return None
    best = None
    ess_set = set(ess)
    for v in ess:
        dist = dijkstra(metric, v)
        for u in ess_set:
            if u > v and u in dist and (best is None or dist[u] < best):
                best = dist[u]
        for u in metric.model.adj[v]:
            around = dijkstra(metric, u, skip_edge=edge_key(u, v))
            if v in around:
                loop = around[v] + metric.length(u, v)
                if best is None or loop < best:
                    best = loop
    return best


def rescale(metric: MetricGraph, beta) -> MetricGraph:
    beta = as_fraction(beta)
    if beta <= 0:
        raise GraphError(f"scale factor must be positive, got {beta}")
    return MetricGraph(metric.model, {e: ell * beta for e, ell in metric.length_map.items()})


# ---------------------------------------------------------------- JSON


def graph_from_dict(data: Mapping) -> MetricGraph:
    if not isinstance(data, Mapping) or "edges" not in data:
        raise GraphError("graph JSON must be an object with an 'edges' list")
    edges, lengths = [], {}
    for rec in data["edges"]:
        if isinstance(rec, Mapping):
            u, v = str(rec["u"]), str(rec["v"])
            ell = as_fraction(rec.get("length", 1))
        else:
            u, v = str(rec[0]), str(rec[1])
            ell = as_fraction(rec[2]) if len(rec) > 2 else Fraction(1)
        if ell <= 0:
            raise GraphError(f"edge {u!r}-{v!r} has non-positive length {ell}")
        edges.append((u, v))
        lengths[edge_key(u, v)] = ell
    g = SimpleGraph(data.get("vertices", ()), edges)
    return MetricGraph(g, lengths)


def graph_to_dict(metric: MetricGraph | SimpleGraph) -> dict:
    if isinstance(metric, SimpleGraph):
        metric = MetricGraph(metric)
    return {
        "vertices": list(metric.model.vertices),
        "edges": [
            {"u": u, "v": v, "length": fraction_str(ell)}
            for (u, v), ell in zip(metric.model.edges, metric.lengths)
        ],
    }


def load_graph(path) -> MetricGraph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_dict(json.load(fh))


def dump_graph(metric, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_dict(metric), fh, indent=2)
