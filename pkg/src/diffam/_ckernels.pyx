# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels; drop-in twins of the functions in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport calloc, free
from libcpp.vector cimport vector
from libcpp.unordered_set cimport unordered_set
from libcpp.algorithm cimport sort

cnp.import_array()

# ground sets up to this size dedup through a flat bitmap (2^26 bits = 8 MiB)
cdef int BITMAP_MAX_N = 26


cdef extern from *:
    int popcount64 "__builtin_popcountll"(uint64_t) nogil
    int ctz64 "__builtin_ctzll"(uint64_t) nogil


cdef inline uint64_t _apply(int op, uint64_t a, uint64_t b) nogil:
    if op == 0:
        return a & ~b
    return a ^ b


cdef vector[uint64_t] _pair_image(const uint64_t[::1] m, int n, int op) nogil:
    cdef Py_ssize_t size = m.shape[0], i, j
    cdef vector[uint64_t] out
    cdef uint64_t v
    cdef uint64_t *seen
    cdef unordered_set[uint64_t] hs
    if size == 0:
        return out
    if n <= BITMAP_MAX_N:
        seen = <uint64_t *> calloc(((<uint64_t> 1) << n) // 64 + 1, sizeof(uint64_t))
        for i in range(size):
            for j in range(size):
                v = _apply(op, m[i], m[j])
                if not (seen[v >> 6] >> (v & 63)) & 1:
                    seen[v >> 6] |= (<uint64_t> 1) << (v & 63)
                    out.push_back(v)
        free(seen)
    else:
        for i in range(size):
            for j in range(size):
                v = _apply(op, m[i], m[j])
                if hs.insert(v).second:
                    out.push_back(v)
    sort(out.begin(), out.end())
    return out


cdef _to_array(vector[uint64_t] &vec):
    cdef Py_ssize_t i
    arr = np.empty(vec.size(), dtype=np.uint64)
    cdef uint64_t[::1] view = arr
    for i in range(<Py_ssize_t> vec.size()):
        view[i] = vec[i]
    return arr


def diff_masks(masks, int n):
    cdef const uint64_t[::1] m = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef vector[uint64_t] out
    with nogil:
        out = _pair_image(m, n, 0)
    return _to_array(out)


def symdiff_masks(masks, int n):
    cdef const uint64_t[::1] m = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef vector[uint64_t] out
    with nogil:
        out = _pair_image(m, n, 1)
    return _to_array(out)


def diff_size(masks, int n):
    cdef const uint64_t[::1] m = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef vector[uint64_t] out
    with nogil:
        out = _pair_image(m, n, 0)
    return <Py_ssize_t> out.size()


def all_intersect(masks):
    return cross_intersect(masks, masks)


def cross_intersect(a, b):
    cdef const uint64_t[::1] x = np.ascontiguousarray(a, dtype=np.uint64)
    cdef const uint64_t[::1] y = np.ascontiguousarray(b, dtype=np.uint64)
    cdef Py_ssize_t i, j
    cdef bint ok = True
    with nogil:
        for i in range(x.shape[0]):
            for j in range(y.shape[0]):
                if (x[i] & y[j]) == 0:
                    ok = False
                    break
            if not ok:
                break
    return ok


def count_disjoint(family, probes):
    cdef const uint64_t[::1] f = np.ascontiguousarray(family, dtype=np.uint64)
    cdef const uint64_t[::1] p = np.ascontiguousarray(probes, dtype=np.uint64)
    out = np.zeros(p.shape[0], dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef Py_ssize_t i, j
    cdef int64_t c
    with nogil:
        for i in range(p.shape[0]):
            c = 0
            for j in range(f.shape[0]):
                c += (f[j] & p[i]) == 0
            o[i] = c
    return out


cdef struct CliqueState:
    const uint64_t *adj
    vector[uint64_t] *out
    Py_ssize_t cap


cdef bint _expand(CliqueState *st, uint64_t r, uint64_t p, uint64_t x) nogil:
    cdef uint64_t px, cand, bit
    cdef int u, v, c, best = -1, pivot = 0
    if p == 0:
        if x == 0:
            if <Py_ssize_t> st.out.size() >= st.cap:
                return True
            st.out.push_back(r)
        return False
    px = p | x
    while px:
        u = ctz64(px)
        px &= px - 1
        c = popcount64(p & st.adj[u])
        if c > best:
            best = c
            pivot = u
    cand = p & ~st.adj[pivot]
    while cand:
        v = ctz64(cand)
        cand &= cand - 1
        bit = (<uint64_t> 1) << v
        if _expand(st, r | bit, p & st.adj[v], x & st.adj[v]):
            return True
        p &= ~bit
        x |= bit
    return False


def maximal_cliques(adj, cap):
    """Pivoting Bron-Kerbosch for graphs with at most 64 vertices."""
    cdef Py_ssize_t nv = len(adj)
    if nv > 64:
        raise ValueError("compiled clique kernel handles at most 64 vertices")
    cdef uint64_t[::1] a = np.array([int(v) for v in adj], dtype=np.uint64) if nv else np.zeros(1, dtype=np.uint64)
    cdef vector[uint64_t] out
    cdef CliqueState st
    cdef uint64_t full = ((<uint64_t> 1) << nv) - 1 if nv < 64 else <uint64_t> 0xFFFFFFFFFFFFFFFF
    cdef bint exhausted
    st.adj = &a[0]
    st.out = &out
    st.cap = cap
    with nogil:
        exhausted = _expand(&st, 0, full, 0)
    return [int(c) for c in out], bool(exhausted)
