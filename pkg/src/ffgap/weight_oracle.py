"""Brute-force census of the squared weighted box Hamiltonians on a torus.

Expanding ``sum_boxes W_B^2`` with ``W_B = sum_e w_B(e) h_e`` gives

    sum_e (sum_B w_B(e)^2) h_e  +  sum_{e != f} (sum_B w_B(e) w_B(f)) h_e h_f,

so every coefficient is a sum of products of scalar edge weights.  The census
computes all of them exactly and groups the pairs by geometric shape, which
is what the closed-form constants are supposed to summarise.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .criteria import HONEYCOMB, HYPERCUBIC, TRIANGULAR, KSet, LatticeKind
from .lattice import (
    HONEYCOMB_DIR_NAMES,
    TorusGraph,
    box_edges,
    check_box_fits,
    edge_weight,
    place,
    rotation_turns,
    translations,
    vertex_sublattice,
)
from .profiles import CoefficientProfile, ProfileError
from .scalars import QuadraticScalar, ScalarVector, qf_sign, qf_to_float

COLLINEAR = "collinear_touching"
PARALLEL = "parallel_adjacent"
ORTHOGONAL = "orthogonal_touching"
OTHER_DISJOINT = "other_disjoint"
APEX = "triangle_apex"
WIDE = "wide_angle"
OTHER = "other"
DISJOINT = "disjoint"

SHAPES = {
    HYPERCUBIC: (COLLINEAR, PARALLEL, ORTHOGONAL, OTHER_DISJOINT),
    TRIANGULAR: (COLLINEAR, APEX, WIDE, OTHER),
    HONEYCOMB: tuple(
        f"adjacent_{s}_{a}_{b}"
        for s in ("top", "bottom")
        for a, b in (("dl", "dr"), ("dl", "up"), ("dr", "up"))
    )
    + (DISJOINT,),
}


@dataclass(frozen=True)
class BoxInstance:
    translate: tuple
    rotation: int
    edge_ids: tuple
    weights: tuple = field(repr=False)
    ell: int = 0

    @property
    def weighted_edges(self) -> dict:
        return dict(zip(self.edge_ids, self.weights))


def enumerate_boxes(g: TorusGraph, ell: int, p: CoefficientProfile) -> list[BoxInstance]:
    if not g.periodic:
        raise ValueError("boxes are translated across a torus")
    if p.ell != ell:
        raise ProfileError(f"profile is for ell={p.ell}, not {ell}")
    check_box_fits(g.L, ell)
    canon = box_edges(g.lattice, ell)
    weights = tuple(edge_weight(e, p) for e in canon)
    if any(qf_sign(w) <= 0 for w in weights):
        raise ProfileError("box weights must be positive")
    out = []
    for r, turns in enumerate(rotation_turns(g.lattice)):
        for t in translations(g.lattice, g.L):
            ids = tuple(g.edge_id(place(e.start, turns, t), place(e.end, turns, t)) for e in canon)
            out.append(BoxInstance(t, r, ids, weights, ell))
    return out


def classify_pair(e1: int, e2: int, g: TorusGraph) -> str:
    if e1 == e2:
        raise ValueError("a pair needs two distinct edges")
    a1, b1, k1 = g.edges[e1]
    a2, b2, k2 = g.edges[e2]
    shared = {a1, b1} & {a2, b2}
    lat = g.lattice.name
    V = g.vertices
    if shared:
        s = shared.pop()
        o1 = b1 if a1 == s else a1
        o2 = b2 if a2 == s else a2
        u = g.min_image(np.subtract(V[o1], V[s]))
        v = g.min_image(np.subtract(V[o2], V[s]))
        if lat == HYPERCUBIC:
            return COLLINEAR if all(x == -y for x, y in zip(u, v)) else ORTHOGONAL
        if lat == TRIANGULAR:
            dot2 = 2 * u[0] * v[0] + u[0] * v[1] + u[1] * v[0] + 2 * u[1] * v[1]
            return {-2: COLLINEAR, 1: APEX, -1: WIDE}[dot2]
        a, b = sorted((HONEYCOMB_DIR_NAMES[k1], HONEYCOMB_DIR_NAMES[k2]))
        return f"adjacent_{vertex_sublattice(V[s])}_{a}_{b}"
    if lat == HYPERCUBIC:
        if k1 == k2:
            delta = g.min_image(np.subtract(V[a2], V[a1]))
            if sum(abs(x) for x in delta) == 1 and delta[k1] == 0:
                return PARALLEL
        return OTHER_DISJOINT
    return OTHER if lat == TRIANGULAR else DISJOINT


@dataclass(frozen=True)
class ShapeStat:
    max: QuadraticScalar
    min: QuadraticScalar
    count: int


def _pack(a, b, den, k) -> QuadraticScalar:
    return QuadraticScalar(Fraction(int(a), den), Fraction(int(b), den), k)


def _exact_extremes(values, den, k):
    scal = [_pack(a, b, den, k) for a, b in values]
    return max(scal), min(scal)


class Census:
    """Exact coefficients of ``sum_boxes W_B^2`` on one torus.

    Integer numerators are kept in dense matrices: the coefficient of
    ``h_e h_f`` is ``(A[e, f] + B[e, f] sqrt(k)) / den``.
    """

    def __init__(self, g: TorusGraph, ell: int, A, B, lin_a, lin_b, den: int, k: int,
                 class_avg_min: QuadraticScalar, n_boxes: int, lin_den: int):
        self.graph = g
        self.lattice: LatticeKind = g.lattice
        self.ell = ell
        self.A, self.B = A, B
        self.lin_a, self.lin_b = lin_a, lin_b
        self.den = den  # of pair and diagonal coefficients
        self.k = k
        self.class_avg_min = class_avg_min
        self.n_boxes = n_boxes
        self.lin_den = lin_den
        self._pairs = None
        self.shape_stats = self._shape_stats()

    # per-edge data -----------------------------------------------------------

    def diagonal_value(self, e: int) -> QuadraticScalar:
        return _pack(self.A[e, e], self.B[e, e], self.den, self.k)

    @property
    def diagonal(self) -> dict:
        return {e: self.diagonal_value(e) for e in range(self.graph.n_edges)}

    def linear_value(self, e: int) -> QuadraticScalar:
        return _pack(self.lin_a[e], self.lin_b[e], self.lin_den, self.k)

    @property
    def linear(self) -> dict:
        return {e: self.linear_value(e) for e in range(self.graph.n_edges)}

    def pair_weight(self, e: int, f: int) -> QuadraticScalar:
        return _pack(self.A[e, f], self.B[e, f], self.den, self.k)

    @property
    def pair_weights(self) -> dict:
        """Nonzero off-diagonal coefficients keyed by ``(e, f)`` with ``e < f``."""
        if self._pairs is None:
            ii, jj = self._pair_indices()
            self._pairs = {(int(i), int(j)): self.pair_weight(i, j) for i, j in zip(ii, jj)}
        return self._pairs

    def _uniform(self, a, b):
        vals = set(zip(np.asarray(a).tolist(), np.asarray(b).tolist()))
        return len(vals) == 1, vals

    @property
    def diagonal_uniform(self) -> bool:
        return self._uniform(np.diagonal(self.A), np.diagonal(self.B))[0]

    def diagonal_extremes(self):
        _, vals = self._uniform(np.diagonal(self.A), np.diagonal(self.B))
        return _exact_extremes(vals, self.den, self.k)

    @property
    def linear_uniform(self) -> bool:
        return self._uniform(self.lin_a, self.lin_b)[0]

    def linear_extremes(self):
        _, vals = self._uniform(self.lin_a, self.lin_b)
        return _exact_extremes(vals, self.lin_den, self.k)

    # shapes -----------------------------------------------------------------

    def _pair_indices(self):
        nz = (self.A != 0) | (self.B != 0)
        ii, jj = np.nonzero(np.triu(nz, k=1))
        return ii, jj

    def _shape_stats(self) -> dict:
        g = self.graph
        ii, jj = self._pair_indices()
        starts = np.array([g.vertices[a] for a, _, _ in g.edges], dtype=np.int64)
        dirs = np.array([d for _, _, d in g.edges], dtype=np.int64)
        delta = starts[jj] - starts[ii]
        P = g.period
        delta = ((delta + P // 2) % P) - P // 2
        keys = np.column_stack([dirs[ii], dirs[jj], delta])
        labels = np.empty(len(ii), dtype=object)
        if len(ii):
            uniq, first, inv = np.unique(keys, axis=0, return_index=True, return_inverse=True)
            inv = np.asarray(inv).reshape(-1)
            names = [classify_pair(int(ii[f]), int(jj[f]), g) for f in first]
            labels = np.array(names, dtype=object)[inv]
        stats = {}
        a_vals = self.A[ii, jj]
        b_vals = self.B[ii, jj]
        for name in SHAPES[self.lattice.name]:
            sel = labels == name
            n = int(np.count_nonzero(sel))
            if n == 0:
                continue
            vals = set(zip(a_vals[sel].tolist(), b_vals[sel].tolist()))
            hi, lo = _exact_extremes(vals, self.den, self.k)
            stats[name] = ShapeStat(hi, lo, n)
        return stats

    @property
    def shape_max(self) -> dict:
        return {k: v.max for k, v in self.shape_stats.items()}

    def to_json(self, include_pairs: bool = False) -> dict:
        dmax, dmin = self.diagonal_extremes()
        lmax, lmin = self.linear_extremes()
        out = {
            "lattice": self.lattice.to_json(),
            "L": self.graph.L,
            "ell": self.ell,
            "boxes": self.n_boxes,
            "edges": self.graph.n_edges,
            "diagonal": {"min": _sj(dmin), "max": _sj(dmax), "uniform": self.diagonal_uniform},
            "linear": {"min": _sj(lmin), "max": _sj(lmax), "uniform": self.linear_uniform},
            "class_avg_min": _sj(self.class_avg_min),
            "shape_max": {k: _sj(v.max) for k, v in self.shape_stats.items()},
            "shape_min": {k: _sj(v.min) for k, v in self.shape_stats.items()},
            "shape_count": {k: v.count for k, v in self.shape_stats.items()},
        }
        if include_pairs:
            out["pairs"] = [[e, f, _sj(w)] for (e, f), w in sorted(self.pair_weights.items())]
        return out


def _sj(x: QuadraticScalar) -> dict:
    d = x.to_json()
    d["float"] = qf_to_float(x)
    return d


def census(g: TorusGraph, boxes: list[BoxInstance], *, jobs: int = 1) -> Census:
    if not boxes:
        raise ValueError("no boxes")
    weights = boxes[0].weights
    vec = ScalarVector(weights)
    idx = np.array([b.edge_ids for b in boxes], dtype=np.int64)
    E = g.n_edges
    chunks = [c for c in np.array_split(idx, max(1, min(jobs, len(idx)))) if len(c)]
    if len(chunks) == 1:
        A, B = kernels.accumulate_pairs(idx, vec.num_a, vec.num_b, vec.k, E)
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda c: kernels.accumulate_pairs(c, vec.num_a, vec.num_b, vec.k, E, total=len(idx)), chunks))
        A = sum(p[0] for p in parts)
        B = sum(p[1] for p in parts)
    obj = A.dtype == object
    lin_a = np.zeros(E, dtype=object if obj else np.int64)
    lin_b = np.zeros(E, dtype=object if obj else np.int64)
    wa = np.array(vec.num_a, dtype=lin_a.dtype)
    wb = np.array(vec.num_b, dtype=lin_b.dtype)
    for row in idx:
        lin_a[row] += wa
        lin_b[row] += wb

    # smallest per-direction-class average weight of a single box
    ell = boxes[0].ell
    groups: dict = {}
    for e, w in zip(box_edges(g.lattice, ell), weights):
        groups.setdefault(e.direction, []).append(w)
    avg = min(sum(ws, QuadraticScalar(0)) / len(ws) for ws in groups.values())
    return Census(g, ell, A, B, lin_a, lin_b, vec.den * vec.den, vec.k, avg, len(boxes), vec.den)


@dataclass(frozen=True)
class ComparisonEntry:
    name: str
    census: QuadraticScalar
    formula: QuadraticScalar
    equal: bool
    note: str = ""
    informational: bool = False  # reported, but not part of the pass/fail verdict

    def to_json(self) -> dict:
        return {"name": self.name, "census": _sj(self.census), "formula": _sj(self.formula),
                "equal": self.equal, "note": self.note, "informational": self.informational}


@dataclass(frozen=True)
class ComparisonReport:
    lattice: LatticeKind
    entries: tuple
    dominating: str
    residual_max: QuadraticScalar
    residual_ok: bool
    feasible_census: bool
    feasible_formula: bool

    @property
    def all_equal(self) -> bool:
        return all(e.equal for e in self.entries if not e.informational)

    @property
    def ok(self) -> bool:
        return self.all_equal and self.residual_ok and self.feasible_census == self.feasible_formula

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice.to_json(),
            "entries": [e.to_json() for e in self.entries],
            "dominating": self.dominating,
            "residual_max": _sj(self.residual_max),
            "residual_ok": self.residual_ok,
            "feasible_census": self.feasible_census,
            "feasible_formula": self.feasible_formula,
            "ok": self.ok,
        }


def _entry(name: str, stats: list, formula) -> ComparisonEntry:
    """Compare a constant against shape statistics that must all coincide with it."""
    hi = max(s.max for s in stats)
    lo = min(s.min for s in stats)
    note = "" if hi == lo else f"not uniform: min {qf_to_float(lo):.6g}"
    return ComparisonEntry(name, hi, formula, hi == formula and lo == formula, note)


def _const(name, value, formula, uniform=True) -> ComparisonEntry:
    return ComparisonEntry(name, value, formula, uniform and value == formula, "" if uniform else "not uniform")


# constant name -> shape classes it summarises, and the constant all others must stay below
IDENTIFIED = {
    HYPERCUBIC: ({"K_collinear": (COLLINEAR,), "K_parallel": (PARALLEL,), "K3": (ORTHOGONAL,)}, "K3"),
    TRIANGULAR: ({"K1": (COLLINEAR,), "K2": (APEX,), "K3": (WIDE,)}, "K2"),
    HONEYCOMB: ({"K1": SHAPES[HONEYCOMB][:-1]}, "K1"),
}


def census_vs_kset(c: Census, k: KSet) -> ComparisonReport:
    if c.lattice != k.lattice:
        raise ValueError(f"census is for {c.lattice}, constants for {k.lattice}")
    name = c.lattice.name
    stats = c.shape_stats
    dmax, dmin = c.diagonal_extremes()
    lmax, lmin = c.linear_extremes()
    entries = [_const("K0", dmax, k["K0"], c.diagonal_uniform)]
    identified, dom = IDENTIFIED[name]
    for const, classes in identified.items():
        present = [stats[s] for s in classes if s in stats]
        if present:
            entries.append(_entry(const, present, k[const]))
    if name == HONEYCOMB:
        adjacent = [stats[s] for s in identified["K1"] if s in stats]
        for alt in ("K1_published", "K1_exact"):
            e = _entry(alt, adjacent, k[alt])
            entries.append(ComparisonEntry(e.name, e.census, e.formula, e.equal, e.note, True))
    avg_lin = c.class_avg_min * lmax
    if name == HYPERCUBIC:
        entries.append(_const("K4", avg_lin, k["K4"], c.linear_uniform))
    elif name == HONEYCOMB:
        entries.append(_const("K2", c.class_avg_min, k["K2"]))
        entries.append(_const("K3", avg_lin, k["K3"], c.linear_uniform))
    else:
        entries.append(_const("K4", c.class_avg_min, k["K4"]))
        entries.append(_const("K5", avg_lin, k["K5"], c.linear_uniform))

    used = {s for classes in identified.values() for s in classes}
    residual = [s.max for n, s in stats.items() if n not in used]
    residual_max = max(residual) if residual else QuadraticScalar(0)
    dom_value = max(s.max for s in (stats[x] for x in identified[dom] if x in stats))
    residual_ok = residual_max <= dom_value
    others = [stats[x].max for const, classes in identified.items() if const != dom for x in classes if x in stats]
    feasible_census = all(v <= dom_value for v in others) and residual_ok
    return ComparisonReport(c.lattice, tuple(entries), dom, residual_max, residual_ok,
                            feasible_census, k.feasible)


def run_census(lattice: LatticeKind, ell: int, p: CoefficientProfile, L=None, *, jobs: int = 1,
               honeycomb_k1: str = "published"):
    """Build the torus (default ``L = 2 ell + 1``), enumerate boxes and take the census."""
    from .criteria import kset_for
    from .lattice import build_torus, default_L

    g = build_torus(lattice, L or default_L(ell))
    c = census(g, enumerate_boxes(g, ell, p), jobs=jobs)
    return c, census_vs_kset(c, kset_for(lattice, p, check=False, honeycomb_k1=honeycomb_k1))
