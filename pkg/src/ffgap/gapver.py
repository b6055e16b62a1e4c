"""Exact diagonalisation of the spin-1/2 ferromagnetic Heisenberg model.

Every edge carries the singlet projector ``(1 - SWAP) / 2``, so the ground
space is the spin-``N/2`` multiplet with energy 0 and the gap is measured in
units of one projector.  The model conserves the number of up spins, and each
magnetisation block contains exactly one ground state (the symmetric Dicke
state, i.e. the uniform vector in the block basis).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .criteria import ThresholdReport
from .lattice import TorusGraph, build_box, build_torus

MAX_SITES = 20
DENSE_LIMIT = 4096
ZERO_TOL = 1e-10
GAP_TOL = 1e-8
HEISENBERG = "heisenberg_fm_singlet_projector"


class SystemTooLargeError(ValueError):
    pass


class SpectrumSeparationError(RuntimeError):
    """An eigenvalue fell between the zero and the gap thresholds."""


@dataclass(frozen=True)
class SpinSystem:
    graph: TorusGraph
    local_dim: int = 2
    interaction: str = HEISENBERG

    def __post_init__(self):
        if self.local_dim != 2 or self.interaction != HEISENBERG:
            raise ValueError("only the spin-1/2 singlet-projector model is built in")

    @property
    def n_sites(self) -> int:
        return self.graph.n_vertices

    @property
    def edge_pairs(self) -> np.ndarray:
        return self.graph.edge_array()

    def block_sizes(self) -> list[int]:
        return [math.comb(self.n_sites, m) for m in range(self.n_sites + 1)]


def _check_size(sys: SpinSystem):
    if sys.n_sites > MAX_SITES:
        raise SystemTooLargeError(f"{sys.n_sites} sites exceed the {MAX_SITES}-site cap")


def block_hamiltonian(sys: SpinSystem, n_up: int):
    """Sparse Hamiltonian on the block with ``n_up`` up spins, plus its basis states."""
    _check_size(sys)
    states, r, c, v = kernels.magnetization_block(sys.n_sites, sys.edge_pairs, n_up)
    n = len(states)
    return sp.csr_matrix((v, (r, c)), shape=(n, n)), states


def build_hamiltonian(sys: SpinSystem):
    """Full ``2^N`` sparse Hamiltonian in the computational basis."""
    _check_size(sys)
    N = sys.n_sites
    rows, cols, vals = [], [], []
    for m in range(N + 1):
        states, r, c, v = kernels.magnetization_block(N, sys.edge_pairs, m)
        rows.append(states[r])
        cols.append(states[c])
        vals.append(v)
    dim = 1 << N
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    )


@dataclass(frozen=True)
class BlockResult:
    n_up: int
    dimension: int
    gamma: float  # inf when the block holds only ground states
    zero_modes: int
    method: str
    residual: float


@dataclass(frozen=True)
class GapReport:
    gamma: float
    method: str
    dimension: int
    residual: float
    n_up: int = -1
    blocks: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        d = asdict(self)
        # strict JSON has no infinity; a block with no excitations stores null
        d["blocks"] = [{**asdict(b), "gamma": b.gamma if math.isfinite(b.gamma) else None} for b in self.blocks]
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "GapReport":
        blocks = tuple(
            BlockResult(**{**b, "gamma": math.inf if b["gamma"] is None else b["gamma"]})
            for b in obj.get("blocks", ())
        )
        return cls(obj["gamma"], obj["method"], obj["dimension"], obj["residual"], obj.get("n_up", -1), blocks)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, allow_nan=False)


def _separate(evals) -> tuple[int, float]:
    zeros = int(np.count_nonzero(evals < ZERO_TOL))
    if zeros == 0:
        raise SpectrumSeparationError(f"no zero mode: lowest eigenvalue {evals[0]:.3e}")
    between = evals[(evals >= ZERO_TOL) & (evals < GAP_TOL)]
    if len(between):
        raise SpectrumSeparationError(f"eigenvalue {between[0]:.3e} between zero and gap thresholds")
    rest = evals[evals >= GAP_TOL]
    return zeros, float(rest[0]) if len(rest) else math.inf


def _dense_block(H, n_up) -> BlockResult:
    n = H.shape[0]
    Hd = H.toarray()
    if n == 1:
        zeros, gamma = _separate(np.array([Hd[0, 0]]))
        return BlockResult(n_up, 1, gamma, zeros, "dense", 0.0)
    top = min(n - 1, 3)
    w, V = la.eigh(Hd, subset_by_index=[0, top])
    if top < n - 1 and np.all(w < GAP_TOL):
        # unusually many zero modes: look at the whole spectrum
        w, V = la.eigh(Hd)
    zeros, gamma = _separate(w)
    resid = 0.0
    if math.isfinite(gamma):
        j = zeros
        resid = float(np.linalg.norm(Hd @ V[:, j] - w[j] * V[:, j]))
    return BlockResult(n_up, n, gamma, zeros, "dense", resid)


def _iterative_block(H, n_up, shift: float) -> BlockResult:
    """Lowest eigenvalues after lifting the known ground state out of the way."""
    n = H.shape[0]
    u = np.full(n, 1.0 / math.sqrt(n))
    if np.linalg.norm(H @ u) > ZERO_TOL:
        raise SpectrumSeparationError("uniform block vector is not a ground state")
    op = spla.LinearOperator((n, n), matvec=lambda x: H @ x + shift * u * (u @ x), dtype=float)
    v0 = np.cos(np.arange(n) * 0.7 + 0.3)  # fixed start vector: runs are reproducible
    w, V = spla.eigsh(op, k=2, which="SA", v0=v0, tol=1e-12, maxiter=20 * n)
    order = np.argsort(w)
    w, V = w[order], V[:, order]
    # the lifted ground state counts as the block's one zero mode
    zeros, gamma = _separate(np.concatenate([[0.0], w]))
    x = V[:, 0]
    resid = float(np.linalg.norm(op.matvec(x) - w[0] * x))
    return BlockResult(n_up, n, gamma, zeros, "iterative", resid)


def spectral_gap(sys: SpinSystem, *, jobs: int = 1, dense_limit: int = DENSE_LIMIT) -> GapReport:
    """Smallest positive eigenvalue over all magnetisation blocks.

    Blocks ``m`` and ``N - m`` are unitarily equivalent under the global spin
    flip, so only ``m <= N/2`` is diagonalised.
    """
    _check_size(sys)
    N = sys.n_sites
    shift = float(max(1, sys.graph.n_edges))

    def solve(m):
        H, _ = block_hamiltonian(sys, m)
        if H.shape[0] <= dense_limit:
            return _dense_block(H, m)
        return _iterative_block(H, m, shift)

    ms = list(range(N // 2 + 1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(solve, ms))
    else:
        blocks = [solve(m) for m in ms]
    best = min(blocks, key=lambda b: (b.gamma, b.n_up))
    if not math.isfinite(best.gamma):
        raise SpectrumSeparationError("no excited states found")
    method = "iterative" if any(b.method == "iterative" for b in blocks) else "dense"
    return GapReport(best.gamma, method, 1 << N, max(b.residual for b in blocks), best.n_up, tuple(blocks))


def ground_space_dimension(sys: SpinSystem) -> int:
    """Number of zero modes summed over all blocks (``N + 1`` on a connected graph)."""
    N = sys.n_sites
    total = 0
    for m in range(N + 1):
        H, _ = block_hamiltonian(sys, m)
        w = np.linalg.eigvalsh(H.toarray())
        total += int(np.count_nonzero(w < ZERO_TOL))
    return total


# --- one-magnon sector ---------------------------------------------------------


def graph_one_magnon_gap(g: TorusGraph) -> float:
    """Smallest nonzero eigenvalue of half the graph Laplacian."""
    lap = g.laplacian() * 0.5
    n = lap.shape[0]
    if n <= 2000:
        w = np.linalg.eigvalsh(lap.toarray())
    else:
        # shift-invert just below zero picks out the bottom of the spectrum
        w = spla.eigsh(lap.tocsc(), k=3, sigma=-1e-3, which="LM", return_eigenvectors=False,
                       v0=np.cos(np.arange(n) * 0.7 + 0.3))
        w = np.sort(w)
    pos = w[w >= GAP_TOL]
    if np.count_nonzero(w < ZERO_TOL) != 1:
        raise SpectrumSeparationError("graph is disconnected or spectrum ill-separated")
    return float(pos[0])


def one_magnon_gap(lattice, L: int, bc: str = "periodic") -> float:
    """One-magnon gap on the ``L x L`` torus (``periodic``) or the open box of side ``L`` (``open``)."""
    if bc == "periodic":
        g = build_torus(lattice, L)
    elif bc == "open":
        g = build_box(lattice, L)
    else:
        raise ValueError(f"unknown boundary condition {bc!r}")
    return graph_one_magnon_gap(g)


# --- criterion ------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionVerdict:
    holds: bool
    margin: float
    certifying: bool
    rhs: float

    def to_json(self) -> dict:
        return asdict(self)


def check_criterion(gamma_L: float, gamma_ell: float, report) -> CriterionVerdict:
    """Check ``gamma_L >= prefactor * (gamma_ell - t_ell)``.

    ``report`` is a :class:`ThresholdReport` or a ``(t_ell, prefactor)`` pair.
    """
    if isinstance(report, ThresholdReport):
        if not report.feasible:
            raise ValueError("threshold report is not feasible")
        t, pref = report.t_float, report.prefactor_float
    else:
        t, pref = (float(x) for x in report)
    vals = (gamma_L, gamma_ell, t, pref)
    if not all(math.isfinite(x) for x in vals):
        raise ValueError("inputs must be finite")
    rhs = pref * (gamma_ell - t)
    margin = gamma_L - rhs
    return CriterionVerdict(margin >= 0, margin, gamma_ell > t, rhs)
