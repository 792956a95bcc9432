# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: Dhar burning, set-firing reduction, cyclic Jacobi.

Signatures mirror :mod:`gonbound._pykernels` exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef void _burn(const long long[::1] indptr, const long long[::1] indices,
                long long[::1] chips, long long q,
                unsigned char[::1] burnt, long long[::1] seen,
                long long[::1] queue) noexcept nogil:
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, head = 0, tail = 0
    cdef long long v, u
    for i in range(n):
        burnt[i] = 0
        seen[i] = 0
    burnt[q] = 1
    queue[tail] = q
    tail += 1
    while head < tail:
        v = queue[head]
        head += 1
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if burnt[u]:
                continue
            seen[u] += 1
            if seen[u] > chips[u]:
                burnt[u] = 1
                queue[tail] = u
                tail += 1


def dhar_burn(long long[::1] indptr, long long[::1] indices,
              long long[::1] chips, long long q):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    burnt = np.zeros(n, dtype=np.uint8)
    seen = np.zeros(n, dtype=np.int64)
    queue = np.zeros(n, dtype=np.int64)
    _burn(indptr, indices, chips, q, burnt, seen, queue)
    return (1 - burnt).astype(np.uint8)


def reduce_divisor(long long[::1] indptr, long long[::1] indices,
                   long long[::1] chips_in, long long q, long long max_rounds):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef long long v, u, out, k, rounds = 0
    chips_arr = np.array(chips_in, dtype=np.int64)
    z_arr = np.zeros(n, dtype=np.int64)
    burnt_arr = np.zeros(n, dtype=np.uint8)
    seen_arr = np.zeros(n, dtype=np.int64)
    queue_arr = np.zeros(n, dtype=np.int64)
    outdeg_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] chips = chips_arr
    cdef long long[::1] z = z_arr
    cdef unsigned char[::1] burnt = burnt_arr
    cdef long long[::1] seen = seen_arr
    cdef long long[::1] queue = queue_arr
    cdef long long[::1] outdeg = outdeg_arr
    cdef bint any_unburnt
    with nogil:
        while True:
            _burn(indptr, indices, chips, q, burnt, seen, queue)
            any_unburnt = False
            k = -1
            for v in range(n):
                if burnt[v]:
                    continue
                any_unburnt = True
                out = 0
                for i in range(indptr[v], indptr[v + 1]):
                    if burnt[indices[i]]:
                        out += 1
                outdeg[v] = out
                if out > 0 and (k < 0 or chips[v] // out < k):
                    k = chips[v] // out
            if not any_unburnt:
                break
            if rounds >= max_rounds:
                rounds = -1
                break
            rounds += 1
            if k < 1:
                k = 1
            for v in range(n):
                if burnt[v]:
                    continue
                z[v] += k
                for i in range(indptr[v], indptr[v + 1]):
                    u = indices[i]
                    if burnt[u]:
                        chips[v] -= k
                        chips[u] += k
    if rounds < 0:
        raise RuntimeError("set-firing round cap %d exceeded" % max_rounds)
    return chips_arr, z_arr, rounds


def jacobi_eigh(double[:, ::1] a_in, double tol=1e-14, int max_sweeps=60):
    cdef Py_ssize_t n = a_in.shape[0]
    a_arr = np.array(a_in, dtype=np.float64, order="C")
    v_arr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, norm, apq, theta, t, c, s, akp, akq, app, aqq
    norm = 0.0
    for p in range(n):
        for q in range(n):
            norm += a[p, q] * a[p, q]
    norm = sqrt(norm)
    if norm == 0.0:
        return np.zeros(n), v_arr
    with nogil:
        for sweep in range(max_sweeps):
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += a[p, q] * a[p, q]
            if sqrt(2.0 * off) <= tol * norm:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if fabs(apq) <= 1e-300:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if theta >= 0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * akq
                        v[k, q] = s * akp + c * akq
    w = np.diagonal(a_arr).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v_arr[:, order]
