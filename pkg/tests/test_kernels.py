import numpy as np
import pytest
import scipy.sparse as sp

from ffgap import _pycore, kernels
from ffgap.lattice import ring_graph

compiled = pytest.mark.skipif("compiled" not in kernels.available_backends(), reason="extension not built")


@pytest.fixture
def restore_backend():
    prev = kernels.backend()
    yield
    kernels.use_backend(prev)


def _block(backend, n, edges, m):
    kernels.use_backend(backend)
    states, r, c, v = kernels.magnetization_block(n, edges, m)
    k = len(states)
    return states, sp.csr_matrix((v, (r, c)), shape=(k, k))


@compiled
@pytest.mark.parametrize("m", range(0, 6))
def test_blocks_agree(restore_backend, m):
    edges = ring_graph(10).edge_array()
    s1, h1 = _block("python", 10, edges, m)
    s2, h2 = _block("compiled", 10, edges, m)
    assert np.array_equal(s1, s2)
    assert (h1 != h2).nnz == 0


@compiled
def test_pair_sums_agree(restore_backend):
    rng = np.random.default_rng(7)
    idx = np.array([rng.permutation(30)[:12] for _ in range(40)])
    wa = rng.integers(-50, 50, 12)
    wb = rng.integers(-50, 50, 12)
    kernels.use_backend("python")
    a1, b1 = kernels.accumulate_pairs(idx, wa, wb, 5, 30)
    kernels.use_backend("compiled")
    a2, b2 = kernels.accumulate_pairs(idx, wa, wb, 5, 30)
    assert np.array_equal(a1, a2) and np.array_equal(b1, b2)


def test_overflow_falls_back_to_python_ints():
    idx = np.array([[0, 1], [1, 2]])
    big = 3 * 10**12
    A, _ = kernels.accumulate_pairs(idx, [big, big], [0, 0], 1, 3)
    assert A.dtype == object
    assert A[1, 1] == 2 * big * big


def test_states_are_sorted_combinations():
    s = kernels.block_states(6, 3)
    assert len(s) == 20 and np.all(np.diff(s) > 0)
    assert np.array_equal(s, _pycore.block_states(6, 3))


def test_backend_switching(restore_backend):
    assert kernels.backend() in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
    assert kernels.use_backend("python") in ("compiled", "python")
    assert kernels.backend() == "python"
