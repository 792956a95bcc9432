"""Chip-firing divisors on finite graphs: Dhar burning, reduction, rank, gonality."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .errors import CapExceeded, GraphError
from .graph_core import SimpleGraph, require_valid

DEFAULT_CAP = 12


@dataclass(frozen=True)
class Divisor:
    """Finitely supported integer function on vertices; zero entries are dropped."""

    coeffs: tuple  # sorted (vertex, nonzero int) pairs

    def __init__(self, coeffs: Mapping | None = None):
        items = {}
        for v, a in dict(coeffs or {}).items():
            if isinstance(a, bool) or int(a) != a:
                raise GraphError(f"coefficient at {v!r} is not an integer: {a!r}")
            if int(a):
                items[str(v)] = int(a)
        object.__setattr__(self, "coeffs", tuple(sorted(items.items())))

    @classmethod
    def from_vector(cls, g: SimpleGraph, vec) -> "Divisor":
        return cls({v: int(a) for v, a in zip(g.vertices, vec)})

    @classmethod
    def point(cls, v, k=1) -> "Divisor":
        return cls({v: k})

    def __getitem__(self, v) -> int:
        return dict(self.coeffs).get(v, 0)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    @property
    def degree(self) -> int:
        return sum(a for _, a in self.coeffs)

    @property
    def support(self) -> frozenset:
        return frozenset(v for v, _ in self.coeffs)

    def is_effective(self) -> bool:
        return all(a >= 0 for _, a in self.coeffs)

    def __add__(self, other: "Divisor") -> "Divisor":
        out = self.as_dict()
        for v, a in other.coeffs:
            out[v] = out.get(v, 0) + a
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({v: -a for v, a in self.coeffs})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def vector(self, g: SimpleGraph) -> np.ndarray:
        vec = np.zeros(g.n, dtype=np.int64)
        for v, a in self.coeffs:
            if v not in g.index:
                raise GraphError(f"divisor vertex {v!r} not in graph")
            vec[g.index[v]] = a
        return vec


@dataclass(frozen=True)
class FiringRecord:
    """Aggregated firing counts ``z`` (minimum entry 0) with ``D_out = D_in - L z``."""

    z: tuple  # sorted (vertex, count) pairs

    def as_dict(self) -> dict:
        return dict(self.z)

    def vector(self, g: SimpleGraph) -> np.ndarray:
        vec = np.zeros(g.n, dtype=np.int64)
        for v, a in self.z:
            vec[g.index[v]] = a
        return vec


def laplacian_int(g: SimpleGraph) -> np.ndarray:
    L = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        i, j = g.index[u], g.index[v]
        L[i, j] -= 1
        L[j, i] -= 1
        L[i, i] += 1
        L[j, j] += 1
    return L


def check_witness(g: SimpleGraph, d_in: Divisor, d_out: Divisor, rec: FiringRecord) -> bool:
    lhs = d_in.vector(g) - d_out.vector(g)
    return bool(np.array_equal(lhs, laplacian_int(g) @ rec.vector(g)))


def _check_q(g, q):
    if q not in g.index:
        raise GraphError(f"base vertex {q!r} not in graph")
    return g.index[q]


def dhar_burn(g: SimpleGraph, D: Divisor, q) -> frozenset:
    """Vertices left unburnt by a fire started at ``q``; empty iff ``D`` is q-reduced."""
    require_valid(g)
    qi = _check_q(g, q)
    vec = D.vector(g)
    bad = [g.vertices[i] for i in range(g.n) if i != qi and vec[i] < 0]
    if bad:
        raise GraphError(f"negative coefficient off the base vertex at {bad[0]!r}")
    indptr, indices = g.csr
    mask = kernels.dhar_burn(indptr, indices, vec, qi)
    return frozenset(g.vertices[i] for i in np.flatnonzero(mask))


def _bfs_layers(g, qi):
    indptr, indices = g.csr
    dist = [-1] * g.n
    dist[qi] = 0
    queue = deque([qi])
    while queue:
        v = queue.popleft()
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def _make_effective(g, vec, qi):
    """Fire BFS balls around q, outermost layer first, until effective off q."""
    vec = vec.copy()
    z = np.zeros(g.n, dtype=np.int64)
    if all(vec[i] >= 0 for i in range(g.n) if i != qi):
        return vec, z
    indptr, indices = g.csr
    dist = _bfs_layers(g, qi)
    L = laplacian_int(g)
    for r in range(max(dist), 0, -1):
        layer = [i for i in range(g.n) if dist[i] == r]
        need = 0
        for v in layer:
            if vec[v] < 0:
                down = sum(1 for k in range(indptr[v], indptr[v + 1]) if dist[indices[k]] == r - 1)
                need = max(need, -(-int(-vec[v]) // down))
        if need:
            ball = np.array([1 if 0 <= dist[i] < r else 0 for i in range(g.n)], dtype=np.int64)
            vec -= need * (L @ ball)
            z += need * ball
    return vec, z


def _round_cap(g, vec):
    return 4 * (g.d_max + 1) * g.n * (int(np.abs(vec).max(initial=0)) + 1) + 16


def reduce_vector(g: SimpleGraph, vec, qi: int):
    """Array-level reduction; returns ``(reduced, z)`` with ``z`` shifted to min 0."""
    vec, z0 = _make_effective(g, np.asarray(vec, dtype=np.int64), qi)
    indptr, indices = g.csr
    try:
        out, z1, _ = kernels.reduce_divisor(indptr, indices, vec, qi, _round_cap(g, vec))
    except RuntimeError as exc:
        raise GraphError(f"reduction did not terminate: {exc}") from exc
    z = z0 + z1
    return out, z - z.min(initial=0)


def reduce(g: SimpleGraph, D: Divisor, q):
    """The unique q-reduced divisor equivalent to ``D`` and the firing witness."""
    require_valid(g)
    qi = _check_q(g, q)
    out, z = reduce_vector(g, D.vector(g), qi)
    return Divisor.from_vector(g, out), FiringRecord(
        tuple((v, int(a)) for v, a in zip(g.vertices, z) if a)
    )


def _rank_one_vec(g, vec) -> bool:
    if vec.sum() < 1:
        return False
    for qi in range(g.n):
        out, _ = reduce_vector(g, vec, qi)
        if out[qi] < 1:
            return False
    return True


def rank_at_least_one(g: SimpleGraph, D: Divisor) -> bool:
    require_valid(g)
    return _rank_one_vec(g, D.vector(g))


def _guard(g, cap, what):
    if g.n > cap:
        raise CapExceeded(what, g.n, cap)


def compositions(total: int, parts: int):
    """All non-negative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def _equiv_effective(g, vec) -> bool:
    out, _ = reduce_vector(g, vec, 0)
    return out[0] >= 0


def rank(g: SimpleGraph, D: Divisor, cap: int = DEFAULT_CAP) -> int:
    """Exact rank by enumerating effective divisors ``E`` of increasing degree."""
    require_valid(g)
    _guard(g, cap, "rank")
    vec = D.vector(g)
    deg = int(vec.sum())
    if deg < 0 or not _equiv_effective(g, vec):
        return -1
    r = 0
    while r < deg:
        k = r + 1
        for e in compositions(k, g.n):
            if not _equiv_effective(g, vec - np.asarray(e, dtype=np.int64)):
                return r
        r = k
    return r


def superstables(g: SimpleGraph, qi: int, degree: int):
    """Yield the q-reduced configurations off ``q`` of exactly ``degree`` chips."""
    indptr, indices = g.csr
    others = [i for i in range(g.n) if i != qi]
    bound = [g.degree(g.vertices[i]) - 1 for i in others]
    for comp in compositions(degree, len(others)):
        if any(c > b for c, b in zip(comp, bound)):
            continue
        vec = np.zeros(g.n, dtype=np.int64)
        vec[others] = comp
        if not kernels.dhar_burn(indptr, indices, vec, qi).any():
            yield vec


def divisorial_gonality(g: SimpleGraph, cap: int = DEFAULT_CAP):
    """Smallest degree of a rank-one divisor, with the lexicographically least witness.

    Only q-reduced effective divisors are tried (one per class), for q the
    first vertex; a rank-one candidate must carry at least one chip at q.
    """
    require_valid(g)
    _guard(g, cap, "divisorial_gonality")
    if g.n == 1:
        return 1, Divisor({g.vertices[0]: 1})
    qi = 0
    pool = []
    for d in range(1, g.n + 1):
        pool.append(list(superstables(g, qi, d - 1)))
        hits = []
        for deg in range(d):
            for conf in pool[deg]:
                cand = conf.copy()
                cand[qi] = d - deg
                if _rank_one_vec(g, cand):
                    hits.append(tuple(int(x) for x in cand))
        if hits:
            return d, Divisor.from_vector(g, min(hits))
    raise AssertionError("the all-ones divisor always has rank at least one")
