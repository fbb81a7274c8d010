"""Reference kernels in numpy / plain Python.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and output. Inputs are 1-d ``uint64`` arrays of set bitmasks.
"""

import numpy as np

BLOCK = 1 << 22  # pair products materialised per chunk


def _pair_image(masks, op):
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    m = len(masks)
    if m == 0:
        return np.empty(0, dtype=np.uint64)
    rows = max(1, BLOCK // m)
    acc = np.empty(0, dtype=np.uint64)
    for start in range(0, m, rows):
        block = op(masks[start:start + rows, None], masks[None, :]).ravel()
        acc = np.union1d(acc, np.unique(block))
    return acc


def diff_masks(masks, n):
    """Sorted distinct ``a & ~b`` over all ordered pairs."""
    return _pair_image(masks, lambda a, b: a & ~b)


def symdiff_masks(masks, n):
    """Sorted distinct ``a ^ b`` over all pairs."""
    return _pair_image(masks, np.bitwise_xor)


def diff_size(masks, n):
    return len(diff_masks(masks, n))


def all_intersect(masks):
    return cross_intersect(masks, masks)


def cross_intersect(a, b):
    a = np.ascontiguousarray(a, dtype=np.uint64)
    b = np.ascontiguousarray(b, dtype=np.uint64)
    if len(a) == 0 or len(b) == 0:
        return True
    rows = max(1, BLOCK // len(b))
    for start in range(0, len(a), rows):
        if np.any((a[start:start + rows, None] & b[None, :]) == 0):
            return False
    return True


def count_disjoint(family, probes):
    """For each probe, the number of family members disjoint from it."""
    family = np.ascontiguousarray(family, dtype=np.uint64)
    probes = np.ascontiguousarray(probes, dtype=np.uint64)
    out = np.zeros(len(probes), dtype=np.int64)
    if len(family) == 0:
        return out
    rows = max(1, BLOCK // len(family))
    for start in range(0, len(probes), rows):
        chunk = probes[start:start + rows, None] & family[None, :]
        out[start:start + rows] = np.count_nonzero(chunk == 0, axis=1)
    return out


def _lowest_bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def maximal_cliques(adj, cap):
    """Pivoting Bron-Kerbosch over integer-bitset adjacency.

    ``adj[v]`` is an int whose set bits are the neighbours of ``v``. Returns
    ``(cliques, exhausted)``: each clique is an int bitmask over vertex
    indices, emitted in the order shared with the compiled kernel, and
    ``exhausted`` is True iff more than ``cap`` maximal cliques exist.
    """
    adj = [int(a) for a in adj]
    out = []

    def expand(r, p, x):
        if not p:
            if not x:
                if len(out) >= cap:
                    return True
                out.append(r)
            return False
        best, pivot = -1, 0
        for u in _lowest_bits(p | x):
            c = (p & adj[u]).bit_count()
            if c > best:
                best, pivot = c, u
        for v in _lowest_bits(p & ~adj[pivot]):
            bit = 1 << v
            if expand(r | bit, p & adj[v], x & adj[v]):
                return True
            p &= ~bit
            x |= bit
        return False

    exhausted = expand(0, (1 << len(adj)) - 1, 0)
    return out, exhausted
