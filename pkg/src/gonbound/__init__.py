"""Lower bounds for the divisorial gonality of graphs and metric graphs.

Submodules: ``graph_core`` (graphs, metric graphs, JSON), ``divisors``
(reduction, rank, gonality), ``width`` and ``menger`` (decompositions,
brambles, exact widths), ``topology`` (brambles on metric graphs),
``spectral`` and ``pipeline`` (eigenvalues and the stacked bounds),
``experiments`` (random graph study) and ``cli``.
"""
from .errors import CapExceeded, GraphError
from .graph_core import MetricGraph, SimpleGraph, load_graph
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "CapExceeded", "GraphError", "MetricGraph", "SimpleGraph", "load_graph"]
