import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import connected_graphs, graph, metric_graphs
from gonbound.corpus import complete, connected_small_graphs, cycle, metric_corpus, path, petersen
from gonbound.errors import GraphError
from gonbound.graph_core import MetricGraph, rescale
from gonbound.pipeline import build_subdivision
from gonbound.spectral import (
    MeshFunction,
    build_mesh,
    disk_gaps,
    fiedler_pair,
    lambda1_discrete,
    lambda1_metric,
    laplacian,
    lift_eigenvector,
    metric_eigenfunction,
    rayleigh_quotient,
    spectrum_report,
    symmetric_eigh,
    test_function_bound,
)

CIRCLE = MetricGraph(cycle(3), {e: Fraction(1, 3) for e in cycle(3).edges})
SEGMENT = MetricGraph(path(2))


def test_laplacian_shape():
    L = laplacian(graph("ab bc"))
    assert L.tolist() == [[1, -1, 0], [-1, 2, -1], [0, -1, 1]]


@pytest.mark.parametrize("g, lam", [(path(2), 2), (cycle(4), 2), (complete(4), 4), (petersen(), 2)])
def test_lambda1_closed_forms(g, lam):
    assert lambda1_discrete(g) == pytest.approx(lam, rel=1e-9)


def test_cycle_closed_form():
    for n in range(3, 12):
        assert lambda1_discrete(cycle(n)) == pytest.approx(2 - 2 * math.cos(2 * math.pi / n), rel=1e-9)


def test_lambda1_rejects():
    with pytest.raises(GraphError):
        lambda1_discrete(graph("ab cd"))
    with pytest.raises(GraphError):
        lambda1_discrete(graph("", ["a"]))


def test_sparse_path_agrees_with_dense():
    g = cycle(40)
    assert lambda1_discrete(g, dense_limit=10) == pytest.approx(lambda1_discrete(g), rel=1e-9)
    m = build_mesh(CIRCLE, Fraction(1, 60))
    assert lambda1_metric(CIRCLE, Fraction(1, 60), dense_limit=10) == pytest.approx(
        lambda1_metric(CIRCLE, Fraction(1, 60)), rel=1e-9)
    assert m.n_nodes == 60


def test_eigh_properties_on_corpus():
    for _, g in connected_small_graphs(6):
        L = laplacian(g)
        w, v = symmetric_eigh(L)
        assert np.abs(v @ np.diag(w) @ v.T - L).max() <= 1e-8 * max(np.abs(L).max(), 1)
        assert np.all(np.diff(w) >= -1e-12) and abs(w[0]) < 1e-10 and w.min() > -1e-10
        if g.n > 1:
            assert np.allclose(np.abs(v[:, 0]), 1 / math.sqrt(g.n), atol=1e-8)
            assert lambda1_discrete(g) == pytest.approx(oracles.dense_lambda1(g), rel=1e-9, abs=1e-12)


def test_fiedler_vector_is_eigenvector():
    g = petersen()
    lam, x = fiedler_pair(g)
    assert np.allclose(laplacian(g) @ x, lam * x, atol=1e-9)
    assert abs(x.sum()) < 1e-9


def test_test_function_examples():
    k4 = complete(4)
    assert test_function_bound(k4, ["0"], ["1"]) == 12
    assert test_function_bound(cycle(4), ["0"], ["2"]) == 8
    assert test_function_bound(k4, ["0", "1"], ["2", "3"]) == 4 == round(lambda1_discrete(k4))
    with pytest.raises(GraphError):
        test_function_bound(k4, ["0"], ["0", "1"])
    with pytest.raises(GraphError):
        test_function_bound(k4, [], ["1"])


def test_test_function_bound_exhaustive():
    for _, g in connected_small_graphs(5):
        if g.n < 2:
            continue
        lam = lambda1_discrete(g)
        for ys in oracles.all_subsets(g.vertices):
            rest = [v for v in g.vertices if v not in ys]
            for zs in oracles.all_subsets(rest):
                assert test_function_bound(g, ys, zs) >= lam - 1e-9


def test_circle_and_segment():
    h = Fraction(1, 300)
    assert lambda1_metric(CIRCLE, h) == pytest.approx((2 * math.pi) ** 2, rel=0.01)
    assert lambda1_metric(SEGMENT, h) == pytest.approx(math.pi ** 2, rel=0.01)


def test_circle_convergence_order():
    exact = (2 * math.pi) ** 2
    errs = [abs(lambda1_metric(CIRCLE, Fraction(1, 30 * 2 ** k)) - exact) for k in range(4)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(3.5 <= r <= 4.5 for r in ratios), ratios


def test_scaling_law():
    for _, m in metric_corpus()[:6]:
        h = Fraction(1, 16)
        lam = lambda1_metric(m, h)
        assert lambda1_metric(rescale(m, 2), 2 * h) == pytest.approx(lam / 4, rel=1e-9)


def test_spectrum_report():
    rep = spectrum_report(SEGMENT, Fraction(1, 10))
    assert rep["n_nodes"] == 11 and rep["h"] == Fraction(1, 10)
    assert rep["lambda1"] == pytest.approx(math.pi ** 2, rel=0.01)


def test_mesh_rejects():
    with pytest.raises(GraphError):
        build_mesh(SEGMENT, 0)
    with pytest.raises(GraphError):
        build_mesh(SEGMENT, Fraction(1, 2), {("0", "1"): [Fraction(1)]})
    with pytest.raises(GraphError):
        MeshFunction(build_mesh(SEGMENT, Fraction(1, 2)), [1.0])


def test_rayleigh_examples():
    h = Fraction(1, 200)
    lam, f = metric_eigenfunction(CIRCLE, h)
    assert rayleigh_quotient(f) == pytest.approx(lam, rel=1e-9)
    mesh = build_mesh(CIRCLE, h)
    pos = []
    start = {"0": 0, "1": Fraction(1, 3), "2": Fraction(2, 3)}
    for lab in mesh.labels:
        if isinstance(lab, tuple):
            (u, v), x = lab
            # edges 0-1, 1-2 run forward; 0-2 runs from 0 backwards around the circle
            pos.append(float(start[u] + x) if (u, v) != ("0", "2") else float(-x))
        else:
            pos.append(float(start[lab]))
    f = MeshFunction(mesh, np.cos(2 * math.pi * np.array(pos)))
    assert rayleigh_quotient(f) == pytest.approx((2 * math.pi) ** 2, rel=1e-3)
    with pytest.raises(GraphError):
        rayleigh_quotient(MeshFunction(mesh, np.ones(mesh.n_nodes)))


def test_variational_inequality_on_corpus():
    rng = np.random.default_rng(3)
    h = Fraction(1, 20)
    for _, m in metric_corpus():
        mesh = build_mesh(m, h)
        lam = lambda1_metric(m, h)
        for _ in range(100):
            f = MeshFunction(mesh, rng.standard_normal(mesh.n_nodes)).centered()
            assert rayleigh_quotient(f) >= lam - 1e-6


@given(metric_graphs(max_n=5), st.integers(0, 2**32 - 1))
def test_variational_inequality_random(m, seed):
    h = Fraction(1, 3)
    mesh = build_mesh(m, h)
    vals = np.random.default_rng(seed).standard_normal(mesh.n_nodes)
    assert rayleigh_quotient(MeshFunction(mesh, vals)) >= lambda1_metric(m, h) - 1e-6


@given(connected_graphs(min_n=2, max_n=8))
def test_test_function_bound_random(g):
    lam = lambda1_discrete(g)
    half = len(g.vertices) // 2
    ys, zs = g.vertices[:half] or g.vertices[:1], g.vertices[max(half, 1):]
    assert test_function_bound(g, ys, zs) >= lam - 1e-9


def test_lift_on_unit_k4():
    m = MetricGraph(complete(4))
    sub = build_subdivision(m)
    lam_bar, g = fiedler_pair(sub.gbar.model)
    f = lift_eigenvector(m, sub.gbar, g, Fraction(1, 50))
    r = rayleigh_quotient(f)
    assert abs(f.mean()) < 1e-12
    assert lambda1_metric(m, Fraction(1, 50)) - 1e-6 <= r <= 128 * lam_bar
    assert min(disk_gaps(sub.gbar).values()) >= Fraction(1, 8)


def test_lift_is_constant_on_disks():
    m = MetricGraph(path(2))
    sub = build_subdivision(m)
    vals = np.arange(sub.gbar.model.n, dtype=float)
    f = lift_eigenvector(m, sub.gbar, vals, Fraction(1, 40))
    gbar = sub.gbar.model
    for lab, val in zip(f.mesh.labels, f.values):
        if isinstance(lab, tuple):
            (u, v), x = lab
            if x <= Fraction(1, 16 * gbar.degree(u)):
                assert val == pytest.approx(f.values[f.mesh.index[u]])
            if x >= gbar_len(sub, (u, v)) - Fraction(1, 16 * gbar.degree(v)):
                assert val == pytest.approx(f.values[f.mesh.index[v]])


def gbar_len(sub, e):
    return sub.gbar.length_map[e]


def test_lift_rejects():
    m = MetricGraph(complete(4))
    sub = build_subdivision(m)
    with pytest.raises(GraphError):
        lift_eigenvector(m, sub.gbar, np.ones(sub.gbar.model.n), Fraction(1, 20))
    with pytest.raises(GraphError):
        lift_eigenvector(m, sub.gbar, np.ones(3), Fraction(1, 20))
    with pytest.raises(GraphError):
        lift_eigenvector(MetricGraph(cycle(3)), sub.gbar, np.ones(sub.gbar.model.n), Fraction(1, 20))
    literal = build_subdivision(m, placement="literal")
    with pytest.raises(GraphError, match="below"):
        lift_eigenvector(m, literal.gbar, np.arange(literal.gbar.model.n), Fraction(1, 20))
