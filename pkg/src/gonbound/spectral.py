"""Discrete and metric Laplacian spectra, Rayleigh quotients and the disk lift."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from . import kernels
from .errors import GraphError
from .graph_core import MetricGraph, SimpleGraph, as_fraction, require_valid

DENSE_LIMIT = 512
EIG_TOL = 1e-14


def laplacian(g: SimpleGraph) -> np.ndarray:
    L = np.zeros((g.n, g.n))
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        L[i, j] -= 1.0
        L[j, i] -= 1.0
        L[i, i] += 1.0
        L[j, j] += 1.0
    return L


def _sparse_laplacian(g: SimpleGraph):
    rows, cols = [], []
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        rows += [i, j]
        cols += [j, i]
    adj = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    return sp.diags(np.asarray(adj.sum(axis=1)).ravel()) - adj


def symmetric_eigh(a: np.ndarray):
    """Sorted eigenvalues and orthonormal eigenvectors (columns) by cyclic Jacobi."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    return kernels.jacobi_eigh(a.copy(), EIG_TOL, 100)


def _second_smallest(a, dense_limit):
    """Smallest nonzero eigenpair of a PSD matrix whose kernel is one-dimensional."""
    n = a.shape[0]
    if n <= dense_limit:
        dense = a.toarray() if sp.issparse(a) else a
        w, V = symmetric_eigh(dense)
        return float(w[1]), V[:, 1]
    mat = sp.csc_matrix(a)
    shift = -1e-3 * max(1.0, abs(mat).max())
    w, V = eigsh(mat, k=2, sigma=shift, which="LM", tol=1e-12)
    order = np.argsort(w)
    return float(w[order[1]]), V[:, order[1]]


def lambda1_discrete(g: SimpleGraph, dense_limit: int = DENSE_LIMIT) -> float:
    """Spectral gap of the combinatorial Laplacian."""
    return fiedler_pair(g, dense_limit)[0]


def fiedler_pair(g: SimpleGraph, dense_limit: int = DENSE_LIMIT):
    if not g.connected:
        raise GraphError("graph is disconnected, so lambda_1 = 0")
    require_valid(g)
    if g.n < 2:
        raise GraphError("lambda_1 needs at least two vertices")
    mat = laplacian(g) if g.n <= dense_limit else _sparse_laplacian(g)
    return _second_smallest(mat, dense_limit)


def test_function_bound(g: SimpleGraph, ys, zs) -> Fraction:
    """``(|E| - |E(Y)| - |E(Z)|) * (1/|Y| + 1/|Z|)``, an upper bound on lambda_1."""
    ys, zs = set(map(str, ys)), set(map(str, zs))
    if not ys or not zs:
        raise GraphError("Y and Z must be non-empty")
    if ys & zs:
        raise GraphError("Y and Z must be disjoint")
    for v in ys | zs:
        if v not in g.index:
            raise GraphError(f"vertex {v!r} not in graph")
    cut = g.m - g.edges_within(ys) - g.edges_within(zs)
    return cut * (Fraction(1, len(ys)) + Fraction(1, len(zs)))


# ---------------------------------------------------------------- metric meshes


@dataclass(frozen=True, eq=False)
class Mesh:
    """Nodes are model vertices plus ``(edge, offset)`` interior points."""

    metric: MetricGraph
    h: Fraction
    labels: tuple
    seg: np.ndarray  # (m, 2) node indices
    seg_len: np.ndarray  # float lengths

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @cached_property
    def index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def mass(self) -> np.ndarray:
        m = np.zeros(self.n_nodes)
        np.add.at(m, self.seg[:, 0], self.seg_len / 2)
        np.add.at(m, self.seg[:, 1], self.seg_len / 2)
        return m

    @cached_property
    def stiffness(self):
        i, j = self.seg[:, 0], self.seg[:, 1]
        k = 1.0 / self.seg_len
        rows = np.concatenate([i, j, i, j])
        cols = np.concatenate([i, j, j, i])
        vals = np.concatenate([k, k, -k, -k])
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes))

    def position(self, label):
        """``(edge, offset)`` of a node; model vertices map to ``(vertex, 0)``."""
        return label if isinstance(label, tuple) else (label, Fraction(0))


def build_mesh(metric: MetricGraph, h, extra: Mapping | None = None) -> Mesh:
    """Split each edge of length L into ceil(L/h) equal pieces, plus ``extra`` offsets."""
    h = as_fraction(h)
    if h <= 0:
        raise GraphError(f"mesh size must be positive, got {h}")
    extra = extra or {}
    labels = list(metric.model.vertices)
    index = {v: i for i, v in enumerate(labels)}
    seg, lens = [], []
    for e, ell in metric.length_map.items():
        n = math.ceil(ell / h)
        cuts = {ell * k / n for k in range(1, n)}
        for x in extra.get(e, ()):
            x = as_fraction(x)
            if not 0 < x < ell:
                raise GraphError(f"mesh point {x} not inside edge {e[0]!r}-{e[1]!r}")
            cuts.add(x)
        prev, prev_pos = index[e[0]], Fraction(0)
        for x in sorted(cuts):
            index[(e, x)] = len(labels)
            labels.append((e, x))
            seg.append((prev, index[(e, x)]))
            lens.append(float(x - prev_pos))
            prev, prev_pos = index[(e, x)], x
        seg.append((prev, index[e[1]]))
        lens.append(float(ell - prev_pos))
    if len(labels) < 2:
        raise GraphError("mesh needs at least two nodes")
    seg_arr = np.array(seg, dtype=np.int64).reshape(-1, 2)
    len_arr = np.array(lens)
    if (len_arr <= 0).any():
        raise GraphError("zero-length mesh segment (singular mass)")
    return Mesh(metric, h, tuple(labels), seg_arr, len_arr)


def _metric_pair(mesh: Mesh, dense_limit: int):
    dinv = 1.0 / np.sqrt(mesh.mass)
    a = sp.diags(dinv) @ mesh.stiffness @ sp.diags(dinv)
    lam, y = _second_smallest(a, dense_limit)
    return lam, dinv * y


def lambda1_metric(metric: MetricGraph, h, dense_limit: int = DENSE_LIMIT) -> float:
    """Smallest nonzero eigenvalue of ``K x = lambda M x`` on the mesh of size ``h``."""
    return _metric_pair(build_mesh(metric, h), dense_limit)[0]


def metric_eigenfunction(metric: MetricGraph, h, dense_limit: int = DENSE_LIMIT):
    mesh = build_mesh(metric, h)
    lam, x = _metric_pair(mesh, dense_limit)
    return lam, MeshFunction(mesh, x)


def spectrum_report(metric: MetricGraph, h) -> dict:
    mesh = build_mesh(metric, h)
    lam, _ = _metric_pair(mesh, DENSE_LIMIT)
    return {"lambda1": lam, "h": mesh.h, "n_nodes": mesh.n_nodes}


@dataclass(frozen=True, eq=False)
class MeshFunction:
    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.mesh.n_nodes,):
            raise GraphError("mesh function has the wrong number of values")
        if not np.isfinite(vals).all():
            raise GraphError("mesh function has non-finite values")
        object.__setattr__(self, "values", vals)

    def mean(self) -> float:
        m = self.mesh.mass
        return float(m @ self.values / m.sum())

    def centered(self) -> "MeshFunction":
        return MeshFunction(self.mesh, self.values - self.mean())


def rayleigh_quotient(f: MeshFunction) -> float:
    """Energy over lumped L2 norm of ``f`` minus its mass-weighted mean."""
    mesh = f.mesh
    c = f.centered().values
    den = float(mesh.mass @ (c * c))
    scale = float(mesh.mass @ (f.values * f.values))
    if den <= 1e-24 * max(scale, 1e-300):
        raise GraphError("function is constant after centering")
    diff = c[mesh.seg[:, 0]] - c[mesh.seg[:, 1]]
    return float((diff * diff / mesh.seg_len).sum() / den)


# ---------------------------------------------------------------- the disk lift


def disk_radius(gbar: SimpleGraph, v) -> Fraction:
    return Fraction(1, 16 * gbar.degree(v))


def disk_gaps(gbar: MetricGraph) -> dict:
    """Per edge of the subdivision, the exact length left between the two disks."""
    g = gbar.model
    return {
        e: ell - disk_radius(g, e[0]) - disk_radius(g, e[1])
        for e, ell in gbar.length_map.items()
    }


def lift_eigenvector(metric: MetricGraph, gbar: MetricGraph, values, h,
                     min_gap=Fraction(1, 8)) -> MeshFunction:
    """Constant ``g(v)`` on each disk ``B(v)``, affine in between, then centered.

    The mesh contains the disk boundaries, so the lifted function is exactly
    piecewise linear on it.
    """
    g = gbar.model
    if gbar.mu != metric.mu or not set(metric.model.vertices) <= set(g.vertices):
        raise GraphError("subdivision does not match the metric graph")
    vals = np.asarray(values, dtype=np.float64)
    if vals.shape != (g.n,):
        raise GraphError("one value per subdivision vertex is required")
    gaps = disk_gaps(gbar)
    short = [e for e, t in gaps.items() if t < min_gap]
    if short:
        e = short[0]
        raise GraphError(f"segment between disks on {e[0]!r}-{e[1]!r} is {gaps[e]}, below {min_gap}")
    extra = {}
    for e, ell in gbar.length_map.items():
        extra[e] = {disk_radius(g, e[0]), ell - disk_radius(g, e[1])}
    mesh = build_mesh(gbar, h, extra)
    out = np.empty(mesh.n_nodes)
    for k, lab in enumerate(mesh.labels):
        if not isinstance(lab, tuple):
            out[k] = vals[g.index[lab]]
            continue
        (u, v), x = lab
        ell = gbar.length_map[(u, v)]
        a, b = disk_radius(g, u), ell - disk_radius(g, v)
        gu, gv = vals[g.index[u]], vals[g.index[v]]
        if x <= a:
            out[k] = gu
        elif x >= b:
            out[k] = gv
        else:
            t = float((x - a) / (b - a))
            out[k] = (1 - t) * gu + t * gv
    f = MeshFunction(mesh, out)
    if np.ptp(f.values) == 0:
        raise GraphError("lifted function is constant")
    return f.centered()


test_function_bound.__test__ = False  # keep pytest from collecting it when imported
