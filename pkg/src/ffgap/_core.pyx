# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the census accumulation and the ED block assembly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"
LOOKUP_SITES = 24


def accumulate_pairs(idx, wa, wb, long long k, Py_ssize_t n_edges):
    cdef cnp.int64_t[:, ::1] ix = np.ascontiguousarray(idx, dtype=np.int64)
    cdef cnp.int64_t[::1] a = np.ascontiguousarray(wa, dtype=np.int64)
    cdef cnp.int64_t[::1] b = np.ascontiguousarray(wb, dtype=np.int64)
    A_arr = np.zeros((n_edges, n_edges), dtype=np.int64)
    B_arr = np.zeros((n_edges, n_edges), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] A = A_arr
    cdef cnp.int64_t[:, ::1] B = B_arr
    cdef Py_ssize_t m = ix.shape[1]
    cdef Py_ssize_t n, i, j, e, f
    cdef bint has_b = False
    for i in range(m):
        if b[i] != 0:
            has_b = True
    # per-box products are instance independent
    aa_arr = np.empty((m, m), dtype=np.int64)
    ab_arr = np.empty((m, m), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] aa = aa_arr
    cdef cnp.int64_t[:, ::1] ab = ab_arr
    for i in range(m):
        for j in range(m):
            aa[i, j] = a[i] * a[j] + k * b[i] * b[j]
            ab[i, j] = a[i] * b[j] + b[i] * a[j]
    with nogil:
        for n in range(ix.shape[0]):
            for i in range(m):
                e = ix[n, i]
                for j in range(m):
                    f = ix[n, j]
                    A[e, f] += aa[i, j]
                    if has_b:
                        B[e, f] += ab[i, j]
    return A_arr, B_arr


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline cnp.int64_t _next_comb(cnp.int64_t v) nogil:
    # Gosper's hack: next integer with the same popcount
    cdef cnp.int64_t t = v | (v - 1)
    return (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctzll(v) + 1))


def block_states(int n_sites, int n_up):
    from math import comb
    cdef Py_ssize_t n = comb(n_sites, n_up)
    out_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef cnp.int64_t v
    cdef Py_ssize_t i
    if n_up == 0:
        out[0] = 0
        return out_arr
    v = (<cnp.int64_t>1 << n_up) - 1
    for i in range(n):
        out[i] = v
        if i + 1 < n:
            v = _next_comb(v)
    return out_arr


cdef inline Py_ssize_t _find(cnp.int64_t[::1] s, cnp.int64_t x) nogil:
    cdef Py_ssize_t lo = 0, hi = s.shape[0] - 1, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if s[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def magnetization_block(int n_sites, edges, int n_up):
    states_arr = block_states(n_sites, n_up)
    cdef cnp.int64_t[::1] s = states_arr
    cdef cnp.int64_t[:, ::1] ed = np.ascontiguousarray(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    cdef Py_ssize_t n = s.shape[0], ne = ed.shape[0]
    cdef Py_ssize_t cap = n + n * ne
    r_arr = np.empty(cap, dtype=np.int64)
    c_arr = np.empty(cap, dtype=np.int64)
    v_arr = np.empty(cap, dtype=np.float64)
    cdef cnp.int64_t[::1] r = r_arr
    cdef cnp.int64_t[::1] c = c_arr
    cdef double[::1] v = v_arr
    cdef Py_ssize_t p = 0, q, t
    cdef cnp.int64_t x, mask
    cdef double dg
    cdef int i, j
    # direct rank table for small systems, binary search otherwise
    cdef bint direct = n_sites <= LOOKUP_SITES
    rank_arr = np.empty((1 << n_sites) if direct else 1, dtype=np.int64)
    cdef cnp.int64_t[::1] rank = rank_arr
    if direct:
        for q in range(n):
            rank[s[q]] = q
    with nogil:
        for q in range(n):
            x = s[q]
            dg = 0.0
            for t in range(ne):
                i = ed[t, 0]
                j = ed[t, 1]
                if ((x >> i) ^ (x >> j)) & 1:
                    dg += 0.5
                    mask = (<cnp.int64_t>1 << i) | (<cnp.int64_t>1 << j)
                    r[p] = q
                    c[p] = rank[x ^ mask] if direct else _find(s, x ^ mask)
                    v[p] = -0.5
                    p += 1
            r[p] = q
            c[p] = q
            v[p] = dg
            p += 1
    return states_arr, r_arr[:p], c_arr[:p], v_arr[:p]
