import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gonbound import kernels
from gonbound.graph_core import MetricGraph, SimpleGraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def graph(edges, vertices=()):
    """SimpleGraph from ``"ab bc"``-style or pair-list edges."""
    if isinstance(edges, str):
        edges = [tuple(e) for e in edges.split()]
    return SimpleGraph(vertices, edges)


@st.composite
def connected_graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    names = [f"v{i}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        edges.add((names[j], names[i]))
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    if pairs:
        extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs)))
        edges |= set(extra)
    return SimpleGraph(names, edges)


@st.composite
def metric_graphs(draw, min_n=2, max_n=6, min_length=1):
    g = draw(connected_graphs(min_n, max_n))
    lengths = {}
    for e in g.edges:
        extra = Fraction(draw(st.integers(0, 12)), draw(st.integers(1, 4)))
        lengths[e] = min_length + extra
    return MetricGraph(g, lengths)


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    return kernels.get_backend(request.param)
