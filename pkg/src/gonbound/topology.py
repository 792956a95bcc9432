"""Topological brambles on metric graphs and their strong-bramble counterparts.

A member is a closed connected subset stored in normal form: a set of
vertices plus, per model edge, merged closed intervals ``[a, b]`` measured
from the smaller endpoint. Every intersection test is exact rational
interval arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import CapExceeded, GraphError
from .graph_core import (
    MetricGraph,
    PointOnGraph,
    SimpleGraph,
    as_fraction,
    edge_key,
    fraction_str,
    subdivide,
)
from .hitting import min_hitting_set

DEFAULT_MEMBER_CAP = 24
DEFAULT_ELEMENT_CAP = 256


@dataclass(frozen=True)
class Member:
    vertices: frozenset
    intervals: tuple  # sorted (edge, ((a, b), ...)) pairs

    @property
    def interval_map(self) -> dict:
        return dict(self.intervals)

    def contains(self, metric: MetricGraph, point: PointOnGraph) -> bool:
        if point.vertex is not None:
            return point.vertex in self.vertices
        return any(a <= point.offset <= b for a, b in self.interval_map.get(point.edge, ()))


def _merge(spans):
    out = []
    for a, b in sorted(spans):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return tuple(out)


def make_member(metric: MetricGraph, edges=(), vertices=(), segments=()) -> Member:
    """Normalize whole edges, vertices and ``(edge, from, to)`` segments into a member."""
    verts = set()
    spans = {}
    for v in vertices:
        v = str(v)
        if v not in metric.model.index:
            raise GraphError(f"member vertex {v!r} not in graph")
        verts.add(v)
    for u, v in edges:
        e = edge_key(str(u), str(v))
        if e not in metric.length_map:
            raise GraphError(f"member edge {u!r}-{v!r} not in graph")
        spans.setdefault(e, []).append((Fraction(0), metric.length_map[e]))
    for (u, v), a, b in segments:
        u, v = str(u), str(v)
        e = edge_key(u, v)
        if e not in metric.length_map:
            raise GraphError(f"segment edge {u!r}-{v!r} not in graph")
        ell = metric.length_map[e]
        a, b = as_fraction(a), as_fraction(b)
        if (u, v) != e:
            a, b = ell - b, ell - a
        if not 0 <= a <= b <= ell:
            raise GraphError(f"segment [{a}, {b}] not inside edge {e[0]!r}-{e[1]!r} of length {ell}")
        spans.setdefault(e, []).append((a, b))
    intervals = {}
    for e, sp in spans.items():
        merged = _merge(sp)
        ell = metric.length_map[e]
        if merged[0][0] == 0:
            verts.add(e[0])
        if merged[-1][1] == ell:
            verts.add(e[1])
        # drop pieces that are just the endpoint itself; the vertex records it
        merged = tuple(s for s in merged if not (s[0] == s[1] and s[0] in (0, ell)))
        if merged:
            intervals[e] = merged
    return Member(frozenset(verts), tuple(sorted(intervals.items())))


def member_connected(metric: MetricGraph, m: Member) -> bool:
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for v in m.vertices:
        parent[("v", v)] = ("v", v)
    for e, spans in m.intervals:
        ell = metric.length_map[e]
        for a, b in spans:
            key = ("s", e, a, b)
            parent[key] = key
            if a == 0:
                union(key, ("v", e[0]))
            if b == ell:
                union(key, ("v", e[1]))
    if not parent:
        return False
    return len({find(x) for x in parent}) == 1


def members_intersect(a: Member, b: Member) -> bool:
    if a.vertices & b.vertices:
        return True
    bm = b.interval_map
    for e, spans in a.intervals:
        for x0, x1 in spans:
            for y0, y1 in bm.get(e, ()):
                if max(x0, y0) <= min(x1, y1):
                    return True
    return False


@dataclass(frozen=True)
class TopologicalBrambleCert:
    metric: MetricGraph
    members: tuple

    def violations(self) -> list:
        out = []
        for i, m in enumerate(self.members):
            if not m.vertices and not m.intervals:
                out.append(f"member {i} is empty")
            elif not member_connected(self.metric, m):
                out.append(f"member {i} is not connected")
        for i in range(len(self.members)):
            for j in range(i + 1, len(self.members)):
                if not members_intersect(self.members[i], self.members[j]):
                    out.append(f"members {i} and {j} are disjoint")
        return out

    def require_valid(self):
        bad = self.violations()
        if bad:
            raise GraphError(bad[0])
        return self


def breakpoints(cert: TopologicalBrambleCert) -> dict:
    """Edge-interior interval endpoints, per edge."""
    pts = {}
    for m in cert.members:
        for e, spans in m.intervals:
            ell = cert.metric.length_map[e]
            for a, b in spans:
                for x in (a, b):
                    if 0 < x < ell:
                        pts.setdefault(e, set()).add(x)
    return pts


def _refined_points(cert, with_midpoints):
    """Breakpoints (and optionally the midpoint of every piece) as edge points."""
    metric = cert.metric
    pts = breakpoints(cert)
    out = []
    for e, ell in metric.length_map.items():
        cuts = sorted(pts.get(e, ()))
        for x in cuts:
            out.append(PointOnGraph(edge=e, offset=x))
        if with_midpoints:
            grid = [Fraction(0)] + cuts + [ell]
            for x, y in zip(grid, grid[1:]):
                out.append(PointOnGraph(edge=e, offset=(x + y) / 2))
    return out


def _membership(cert, refined: MetricGraph, points):
    sets = []
    ids = {p.ident: p for p in points}
    for m in cert.members:
        inside = set(m.vertices)
        for name, p in ids.items():
            if m.contains(cert.metric, p):
                inside.add(name)
        sets.append(frozenset(inside & set(refined.model.vertices)))
    return sets


def topological_bramble_order(cert: TopologicalBrambleCert,
                              member_cap: int = DEFAULT_MEMBER_CAP,
                              element_cap: int = DEFAULT_ELEMENT_CAP) -> int:
    """Minimum hitting set, searched over vertices of the boundary refinement.

    An edge-interior point between consecutive breakpoints lies in exactly the
    members that contain the whole closed piece, so moving it to an end of the
    piece never loses a hit.
    """
    cert.require_valid()
    if len(cert.members) > member_cap:
        raise CapExceeded("topological_bramble_order members", len(cert.members), member_cap)
    points = _refined_points(cert, with_midpoints=False)
    refined = subdivide(cert.metric, points)
    if refined.model.n > element_cap:
        raise CapExceeded("topological_bramble_order elements", refined.model.n, element_cap)
    sets = _membership(cert, refined, points)
    g = refined.model
    size, _ = min_hitting_set([g.to_mask(s) for s in sets])
    return size


def bramble_to_strong(cert: TopologicalBrambleCert):
    """Refine at member boundaries, bisect every piece, and read off ``{V ∩ X}``.

    Returns ``(metric model, list of vertex sets)``; the list is a strong
    bramble on the model whose induced metric subgraphs are the members.
    """
    cert.require_valid()
    points = _refined_points(cert, with_midpoints=True)
    refined = subdivide(cert.metric, points)
    family = _membership(cert, refined, points)
    bad = strong_family_violations(refined.model, family)
    if bad:
        raise GraphError(f"refinement did not give a strong bramble: {bad[0]}")
    return refined, family


def strong_family_violations(g: SimpleGraph, family) -> list:
    out = []
    for i, x in enumerate(family):
        if not x:
            out.append(f"member {i} is empty")
        elif not g.is_connected_set(x):
            out.append(f"member {i} does not induce a connected subgraph")
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if not set(family[i]) & set(family[j]):
                out.append(f"members {i} and {j} are disjoint")
    return out


def strong_to_topological(metric: MetricGraph, family, check_order: bool = True,
                          member_cap: int = 16) -> TopologicalBrambleCert:
    """Induced closed metric subgraphs of a strong bramble."""
    g = metric.model
    family = [frozenset(map(str, x)) for x in family]
    bad = strong_family_violations(g, family)
    if bad:
        raise GraphError(bad[0])
    members = tuple(
        make_member(metric, edges=[e for e in g.edges if e[0] in x and e[1] in x], vertices=x)
        for x in family
    )
    cert = TopologicalBrambleCert(metric, members)
    if check_order and len(family) <= member_cap:
        lhs, _ = min_hitting_set([g.to_mask(x) for x in family])
        rhs = topological_bramble_order(cert)
        if lhs != rhs:
            raise AssertionError(f"order changed from {lhs} to {rhs}")
    return cert


# ---------------------------------------------------------------- JSON


def member_to_dict(metric: MetricGraph, m: Member) -> dict:
    edges, segments = [], []
    for e, spans in m.intervals:
        ell = metric.length_map[e]
        for a, b in spans:
            if (a, b) == (0, ell):
                edges.append(list(e))
            else:
                segments.append({"edge": list(e), "from": fraction_str(a), "to": fraction_str(b)})
    return {"edges": edges, "vertices": sorted(m.vertices), "segments": segments}


def cert_to_dict(cert: TopologicalBrambleCert) -> dict:
    return {"members": [member_to_dict(cert.metric, m) for m in cert.members]}


def _edge_ref(ref):
    if isinstance(ref, str):
        raise GraphError(f"edge references must be [u, v] pairs, got {ref!r}")
    u, v = ref
    return str(u), str(v)


def cert_from_dict(metric: MetricGraph, data: Mapping) -> TopologicalBrambleCert:
    recs = data["members"] if isinstance(data, Mapping) else data
    members = []
    for rec in recs:
        members.append(make_member(
            metric,
            edges=[_edge_ref(e) for e in rec.get("edges", ())],
            vertices=rec.get("vertices", ()),
            segments=[(_edge_ref(s["edge"]), s["from"], s["to"]) for s in rec.get("segments", ())],
        ))
    return TopologicalBrambleCert(metric, tuple(members))


def make_cert(metric: MetricGraph, specs: Iterable[Mapping]) -> TopologicalBrambleCert:
    return cert_from_dict(metric, {"members": list(specs)})
