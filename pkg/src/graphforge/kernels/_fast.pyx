# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled construction kernels.

Same contracts as kernels._numpy_impl; the inner pair-test loops run as
tight C loops with early exit, which is where the runtime goes for Gabriel
and SNN construction.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline double _dot_blocker(const double[:, ::1] pts, Py_ssize_t c,
                                Py_ssize_t a, Py_ssize_t b, Py_ssize_t d) noexcept nogil:
    # (C - A) . (C - B); negative means C is strictly inside the AB-diameter sphere
    cdef double acc = 0.0
    cdef Py_ssize_t l
    for l in range(d):
        acc += (pts[c, l] - pts[a, l]) * (pts[c, l] - pts[b, l])
    return acc


def gabriel_exact_edges(const double[:, ::1] points, bint closed):
    """Edge list (u, v) of the exact Gabriel graph over distinct points."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t a, m, j, b, c, n_cand
    cdef double dot
    cdef bint blocked

    cdef cnp.ndarray d2 = np.empty(n, dtype=np.float64)
    cdef double[::1] d2v = d2
    cdef cnp.ndarray order_arr
    cdef long long[::1] order

    us: list = []
    vs: list = []
    cdef double acc, diff
    cdef Py_ssize_t l

    for a in range(n):
        for c in range(n):
            acc = 0.0
            for l in range(d):
                diff = points[c, l] - points[a, l]
                acc += diff * diff
            d2v[c] = acc
        # stable sort of an index-ordered base = ties broken by ascending index
        order_arr = np.argsort(d2, kind="stable").astype(np.int64)
        order = order_arr
        n_cand = 0
        # drop self (always at distance exactly 0; duplicates are rejected upstream)
        for m in range(n):
            if order[m] != a:
                order[n_cand] = order[m]
                n_cand += 1
        with nogil:
            for m in range(n_cand):
                b = order[m]
                if b <= a:
                    continue  # pair handled from the other endpoint
                blocked = False
                for j in range(m):
                    c = order[j]
                    dot = _dot_blocker(points, c, a, b, d)
                    if dot < 0.0 or (closed and dot == 0.0):
                        blocked = True
                        break
                if not blocked:
                    with gil:
                        us.append(a)
                        vs.append(b)
    if not us:
        return np.empty((0, 2), dtype=np.int64)
    return np.stack(
        [np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)], axis=1
    )


def gabriel_blocked_mask(const double[:, ::1] points,
                         const long long[:, ::1] pairs,
                         const long long[::1] indptr,
                         const long long[::1] candidates,
                         bint closed):
    """True for each pair blocked by one of its listed candidate points."""
    cdef Py_ssize_t m = pairs.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef cnp.ndarray out = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] outv = out
    cdef Py_ssize_t p, e, a, b, c
    cdef double dot
    with nogil:
        for p in range(m):
            a = pairs[p, 0]
            b = pairs[p, 1]
            for e in range(indptr[p], indptr[p + 1]):
                c = candidates[e]
                if c == a or c == b:
                    continue
                dot = _dot_blocker(points, c, a, b, d)
                if dot < 0.0 or (closed and dot == 0.0):
                    outv[p] = 1
                    break
    return out.astype(bool)


def snn_cooccurrence_codes(const long long[::1] owners,
                           const long long[::1] indptr,
                           long long n_nodes):
    """Pair codes u*n+v (u < v) for every co-occurrence of two owners in a group."""
    cdef Py_ssize_t n_groups = indptr.shape[0] - 1
    cdef Py_ssize_t g, i, j, lo, hi, total, pos
    cdef long long u, v, swap

    total = 0
    for g in range(n_groups):
        hi = indptr[g + 1] - indptr[g]
        total += hi * (hi - 1) // 2
    cdef cnp.ndarray codes = np.empty(total, dtype=np.int64)
    cdef long long[::1] cv = codes
    pos = 0
    with nogil:
        for g in range(n_groups):
            lo = indptr[g]
            hi = indptr[g + 1]
            for i in range(lo, hi):
                for j in range(i + 1, hi):
                    u = owners[i]
                    v = owners[j]
                    if u > v:
                        swap = u
                        u = v
                        v = swap
                    cv[pos] = u * n_nodes + v
                    pos += 1
    return codes
