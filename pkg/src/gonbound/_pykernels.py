"""Pure-Python reference versions of the compiled kernels.

Used when the Cython extension is not built. Same call signatures and
return types as ``_ckernels``.
"""
from collections import deque

import numpy as np


def _burn(indptr, indices, chips, q, n):
    burnt = [False] * n
    seen = [0] * n
    burnt[q] = True
    queue = deque([q])
    while queue:
        v = queue.popleft()
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if burnt[u]:
                continue
            seen[u] += 1
            if seen[u] > chips[u]:
                burnt[u] = True
                queue.append(u)
    return burnt


def dhar_burn(indptr, indices, chips, q):
    n = len(indptr) - 1
    burnt = _burn(list(indptr), list(indices), list(chips), int(q), n)
    return np.array([0 if b else 1 for b in burnt], dtype=np.uint8)


def reduce_divisor(indptr, indices, chips_in, q, max_rounds):
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    chips = [int(x) for x in chips_in]
    n = len(indptr) - 1
    q = int(q)
    z = [0] * n
    rounds = 0
    while True:
        burnt = _burn(indptr, indices, chips, q, n)
        unburnt = [v for v in range(n) if not burnt[v]]
        if not unburnt:
            break
        if rounds >= max_rounds:
            raise RuntimeError("set-firing round cap %d exceeded" % max_rounds)
        rounds += 1
        outdeg = {}
        k = None
        for v in unburnt:
            out = sum(1 for i in range(indptr[v], indptr[v + 1]) if burnt[indices[i]])
            outdeg[v] = out
            if out and (k is None or chips[v] // out < k):
                k = chips[v] // out
        k = max(k or 1, 1)
        for v in unburnt:
            z[v] += k
            for i in range(indptr[v], indptr[v + 1]):
                u = indices[i]
                if burnt[u]:
                    chips[v] -= k
                    chips[u] += k
    return np.array(chips, dtype=np.int64), np.array(z, dtype=np.int64), rounds


def jacobi_eigh(a_in, tol=1e-14, max_sweeps=60):
    """Cyclic Jacobi with two-sided rotations applied as numpy row/column ops."""
    a = np.array(a_in, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        if np.sqrt(2.0 * np.sum(a[iu] ** 2)) <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                app = a[p, p] - t * apq
                aqq = a[q, q] + t * apq
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - s * colq
                a[:, q] = s * colp + c * colq
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app
                a[q, q] = aqq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diagonal(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
