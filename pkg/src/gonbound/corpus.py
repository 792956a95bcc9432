"""Test and study corpora: small connected graphs and named families."""
from __future__ import annotations

from fractions import Fraction

import networkx as nx

from .graph_core import MetricGraph, SimpleGraph


def from_networkx(h) -> SimpleGraph:
    return SimpleGraph([str(v) for v in h.nodes], [(str(a), str(b)) for a, b in h.edges])


def connected_small_graphs(max_n: int = 6) -> list:
    """``(name, graph)`` for every connected graph on 1..max_n vertices, one per isomorphism class.

    The networkx graph atlas lists all graphs up to 7 vertices.
    """
    if max_n > 7:
        raise ValueError("the atlas stops at 7 vertices")
    out = []
    for i, h in enumerate(nx.graph_atlas_g()):
        if 1 <= h.number_of_nodes() <= max_n and nx.is_connected(h):
            out.append((f"atlas-{i}", from_networkx(h)))
    return out


def path(n: int) -> SimpleGraph:
    return from_networkx(nx.path_graph(n))


def cycle(n: int) -> SimpleGraph:
    return from_networkx(nx.cycle_graph(n))


def complete(n: int) -> SimpleGraph:
    return from_networkx(nx.complete_graph(n))


def petersen() -> SimpleGraph:
    return from_networkx(nx.petersen_graph())


def named_graphs(max_n: int = 10) -> list:
    g = {
        "P2": path(2), "P5": path(5), "star5": from_networkx(nx.star_graph(4)),
        "C3": cycle(3), "C5": cycle(5), "C7": cycle(7), "C8": cycle(8),
        "K4": complete(4), "K5": complete(5), "K6": complete(6), "K7": complete(7),
        "K33": from_networkx(nx.complete_bipartite_graph(3, 3)),
        "K34": from_networkx(nx.complete_bipartite_graph(3, 4)),
        "wheel6": from_networkx(nx.wheel_graph(6)),
        "grid3x3": from_networkx(nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3))),
        "cube": from_networkx(nx.convert_node_labels_to_integers(nx.hypercube_graph(3))),
        "petersen": petersen(),
    }
    return [(k, v) for k, v in g.items() if v.n <= max_n]


def metric_corpus() -> list:
    """``(name, MetricGraph)`` with minimum edge length exactly 1 and mixed lengths."""
    def lengths(g, pattern):
        return {e: Fraction(pattern[i % len(pattern)]) for i, e in enumerate(g.edges)}

    items = [
        ("unit-P2", MetricGraph(path(2))),
        ("P3-1-2", MetricGraph(path(3), {("0", "1"): 1, ("1", "2"): 2})),
        ("unit-C3", MetricGraph(cycle(3))),
        ("unit-K4", MetricGraph(complete(4))),
        ("K4-mixed", MetricGraph(complete(4), lengths(complete(4), ["1", "3/2", "2"]))),
        ("C5-mixed", MetricGraph(cycle(5), lengths(cycle(5), ["1", "7/3", "5/4"]))),
        ("star5-mixed", MetricGraph(from_networkx(nx.star_graph(4)),
                                    lengths(from_networkx(nx.star_graph(4)), ["1", "5/2"]))),
        ("K33-unit", MetricGraph(from_networkx(nx.complete_bipartite_graph(3, 3)))),
        ("wheel6-mixed", MetricGraph(from_networkx(nx.wheel_graph(6)),
                                     lengths(from_networkx(nx.wheel_graph(6)), ["1", "6/5", "3"]))),
        ("petersen-unit", MetricGraph(petersen())),
        ("petersen-mixed", MetricGraph(petersen(), lengths(petersen(), ["1", "2", "3"]))),
        ("P5-long", MetricGraph(path(5), lengths(path(5), ["1", "9/2", "17/8"]))),
    ]
    return items
