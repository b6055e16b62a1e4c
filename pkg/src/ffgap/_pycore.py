"""Reference numpy implementations of the hot loops (used when the extension is absent)."""

import numpy as np

BACKEND = "python"


def accumulate_pairs(idx, wa, wb, k, n_edges):
    """Sum ``w w^T`` over box instances, split into rational and sqrt(k) parts.

    ``idx[n, i]`` is the torus edge carrying the box's ``i``-th weight
    ``(wa[i] + wb[i] sqrt(k)) / den`` in instance ``n``.  Returns integer
    numerator matrices ``(A, B)`` with ``sum w_e w_f = (A + B sqrt(k)) / den^2``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    dtype = wa.dtype if isinstance(wa, np.ndarray) and wa.dtype == object else np.int64
    wa = np.asarray(wa, dtype=dtype)
    wb = np.asarray(wb, dtype=dtype)
    aa = np.outer(wa, wa) + k * np.outer(wb, wb)
    ab = np.outer(wa, wb)
    ab = ab + ab.T
    A = np.zeros((n_edges, n_edges), dtype=dtype)
    B = np.zeros((n_edges, n_edges), dtype=dtype)
    has_b = bool(np.any(wb != 0))
    for row in idx:
        sel = np.ix_(row, row)
        # box edges are distinct, so plain fancy-index addition is safe
        A[sel] += aa
        if has_b:
            B[sel] += ab
    return A, B


def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101 & 0xFFFFFFFFFFFFFFFF) >> 56


def block_states(n_sites, n_up):
    """Sorted basis states (bit strings) with ``n_up`` set bits."""
    allx = np.arange(1 << n_sites, dtype=np.uint64)
    pc = _popcount(allx)
    return allx[pc == n_up].astype(np.int64)


def magnetization_block(n_sites, edges, n_up):
    """COO triplets of ``sum_e (1 - SWAP_e) / 2`` restricted to one magnetization block."""
    states = block_states(n_sites, n_up)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    diag = np.zeros(len(states))
    rows, cols = [], []
    for i, j in edges:
        mask = (np.int64(1) << i) | (np.int64(1) << j)
        anti = ((states >> i) ^ (states >> j)) & 1
        hit = np.nonzero(anti)[0]
        diag[hit] += 0.5
        flipped = states[hit] ^ mask
        rows.append(hit)
        cols.append(np.searchsorted(states, flipped))
    n = len(states)
    r = np.concatenate(rows + [np.arange(n)])
    c = np.concatenate(cols + [np.arange(n)])
    off = sum(len(x) for x in rows)
    v = np.concatenate([np.full(off, -0.5), diag])
    return states, r, c, v
