"""Compiled vs pure-Python kernels on the two hot loops.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per workload with the best-of-N wall time of each backend and
the speedup, after checking that both backends return identical arrays.
"""

import argparse
import time

import numpy as np
import scipy.sparse as sp

from ffgap import kernels
from ffgap.criteria import LatticeKind
from ffgap.lattice import build_torus
from ffgap.profiles import CoefficientProfile
from ffgap.scalars import ScalarVector
from ffgap.tuner import paper_lambda
from ffgap.weight_oracle import enumerate_boxes


def census_inputs(lattice, ell):
    g = build_torus(lattice, 2 * ell + 1)
    p = CoefficientProfile.from_lambda(ell, paper_lambda(lattice, ell))
    boxes = enumerate_boxes(g, ell, p)
    idx = np.array([b.edge_ids for b in boxes], dtype=np.int64)
    vec = ScalarVector(boxes[0].weights)
    return idx, vec.num_a, vec.num_b, vec.k, g.n_edges


def _same(ref, got):
    if len(ref) == 2:  # census numerators
        return all(np.array_equal(a, b) for a, b in zip(ref, got))
    # ED triplets: entry order may differ, the assembled matrices may not
    n = len(ref[0])
    mats = [sp.csr_matrix((v, (r, c)), shape=(n, n)) for _, r, c, v in (ref, got)]
    return np.array_equal(ref[0], got[0]) and (mats[0] != mats[1]).nnz == 0


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(repeat=3):
    if "compiled" not in kernels.available_backends():
        print("compiled kernels not built; nothing to compare")
        return []
    workloads = []
    for lat, ell in [(LatticeKind.hypercubic(2), 3), (LatticeKind.hypercubic(3), 2), (LatticeKind.triangular(), 3)]:
        idx, wa, wb, k, ne = census_inputs(lat, ell)
        workloads.append((f"census {lat} ell={ell}", lambda idx=idx, wa=wa, wb=wb, k=k, ne=ne:
                          kernels.accumulate_pairs(idx, wa, wb, k, ne)))
    for L in (3, 4):
        g = build_torus(LatticeKind.hypercubic(2), L)
        n = g.n_vertices
        workloads.append((f"ED block square torus {n} sites, m={n // 2}",
                          lambda g=g, n=n: kernels.magnetization_block(n, g.edge_array(), n // 2)))

    rows = []
    prev = kernels.backend()
    try:
        for name, fn in workloads:
            kernels.use_backend("python")
            t_py, ref = best_of(fn, repeat)
            kernels.use_backend("compiled")
            t_c, got = best_of(fn, repeat)
            same = _same(ref, got)
            rows.append((name, t_py, t_c, same))
            print(f"{name:45s} python {t_py * 1e3:9.2f} ms  compiled {t_c * 1e3:9.2f} ms  "
                  f"x{t_py / t_c:7.1f}  {'identical' if same else 'MISMATCH'}")
    finally:
        kernels.use_backend(prev)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    run(ap.parse_args().repeat)
