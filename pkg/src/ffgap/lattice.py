"""Periodic lattices, open subsystem boxes and their canonical edge weights.

All three families live on integer coordinates so that translations and
60-degree rotations are exact integer maps:

* hypercubic: ``Z^D`` with period ``L``;
* triangular: axial coordinates ``(x, y)`` (vertex ``x a1 + y a2``, with
  ``a1, a2`` at 60 degrees), period ``L``;
* honeycomb: the same axial frame scaled by 3.  Hexagon ``(u, v)`` is centred
  at ``(3u, 3v)`` and owns its top vertex ``(3u-1, 3v+2)`` and bottom vertex
  ``(3u+1, 3v-2)``; period ``3L``.

In the axial frame a rotation by +60 degrees about the origin is
``(x, y) -> (-y, x + y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .criteria import HONEYCOMB, HYPERCUBIC, TRIANGULAR, LatticeKind
from .profiles import CoefficientProfile

# displacement (start -> end) of each direction class
TRIANGULAR_DIRS = ((1, 0), (0, 1), (-1, 1))
# from a top vertex to its three bottom neighbours: down-right, down-left, up
HONEYCOMB_DIRS = ((2, -1), (-1, -1), (-1, 2))
HONEYCOMB_DIR_NAMES = ("dr", "dl", "up")


class LatticeSizeError(ValueError):
    pass


def rotate60(p, times: int = 1):
    x, y = p
    for _ in range(times % 6):
        x, y = -y, x + y
    return (x, y)


def _hex_top(u, v):
    return (3 * u - 1, 3 * v + 2)


def _hex_bottom(u, v):
    return (3 * u + 1, 3 * v - 2)


def _is_top(p) -> bool:
    return p[0] % 3 == 2


def direction_vectors(lattice: LatticeKind) -> tuple:
    if lattice.name == HYPERCUBIC:
        return tuple(tuple(int(i == j) for i in range(lattice.dim)) for j in range(lattice.dim))
    if lattice.name == TRIANGULAR:
        return TRIANGULAR_DIRS
    return HONEYCOMB_DIRS


@dataclass
class TorusGraph:
    """Vertices and edges of a lattice graph, periodic or open.

    Edges are ``(start, end, direction_class)`` vertex indices with
    ``coords[end] - coords[start]`` equal to the direction vector of the class
    (modulo the period when ``periodic``).
    """

    lattice: LatticeKind
    L: int
    vertices: list
    edges: list
    periodic: bool = True
    period: int = 0
    _vindex: dict = field(default_factory=dict, repr=False)
    _eindex: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._eindex = {}
        for n, (a, b, _) in enumerate(self.edges):
            self._eindex[(min(a, b), max(a, b))] = n

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def wrap(self, p) -> tuple:
        if not self.periodic:
            return tuple(p)
        return tuple(x % self.period for x in p)

    def vertex_index(self, p) -> int:
        return self._vindex[self.wrap(p)]

    def edge_id(self, p, q) -> int:
        a, b = self.vertex_index(p), self.vertex_index(q)
        return self._eindex[(min(a, b), max(a, b))]

    def has_edge(self, p, q) -> bool:
        try:
            self.edge_id(p, q)
        except KeyError:
            return False
        return True

    def min_image(self, delta) -> tuple:
        """Shortest representative of a displacement on the torus."""
        if not self.periodic:
            return tuple(delta)
        P = self.period
        return tuple(((d + P // 2) % P) - P // 2 for d in delta)

    def edge_array(self) -> np.ndarray:
        return np.array([(a, b) for a, b, _ in self.edges], dtype=np.int64).reshape(-1, 2)

    def laplacian(self):
        import scipy.sparse as sp

        n = self.n_vertices
        ab = self.edge_array()
        rows = np.concatenate([ab[:, 0], ab[:, 1], ab[:, 0], ab[:, 1]])
        cols = np.concatenate([ab[:, 1], ab[:, 0], ab[:, 0], ab[:, 1]])
        ones = np.ones(len(ab))
        vals = np.concatenate([-ones, -ones, ones, ones])
        return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()

    def summary(self) -> dict:
        return {
            "lattice": self.lattice.to_json(),
            "L": self.L,
            "periodic": self.periodic,
            "vertices": self.n_vertices,
            "edges": self.n_edges,
        }


def _from_edge_coords(lattice, L, coord_edges, periodic, period) -> TorusGraph:
    verts = sorted({p for e in coord_edges for p in e[:2]})
    index = {v: i for i, v in enumerate(verts)}
    edges = [(index[p], index[q], k) for p, q, k in coord_edges]
    return TorusGraph(lattice, L, verts, edges, periodic, period)


def build_torus(lattice: LatticeKind, L: int) -> TorusGraph:
    if L < 2:
        raise LatticeSizeError("torus side L must be >= 2")
    if lattice.name in (TRIANGULAR, HYPERCUBIC) and L < 3:
        # with L = 2 opposite edges coincide and the graph is a multigraph
        raise LatticeSizeError(f"{lattice} torus needs L >= 3")
    coord_edges = []
    if lattice.name == HYPERCUBIC:
        dirs = direction_vectors(lattice)
        period = L
        for x in itertools.product(range(L), repeat=lattice.dim):
            for k, e in enumerate(dirs):
                y = tuple((a + b) % L for a, b in zip(x, e))
                coord_edges.append((x, y, k))
    elif lattice.name == TRIANGULAR:
        period = L
        for x in itertools.product(range(L), repeat=2):
            for k, e in enumerate(TRIANGULAR_DIRS):
                y = ((x[0] + e[0]) % L, (x[1] + e[1]) % L)
                coord_edges.append((x, y, k))
    else:
        period = 3 * L
        for u, v in itertools.product(range(L), repeat=2):
            t = tuple(c % period for c in _hex_top(u, v))
            for k, e in enumerate(HONEYCOMB_DIRS):
                b = ((t[0] + e[0]) % period, (t[1] + e[1]) % period)
                coord_edges.append((t, b, k))
    g = _from_edge_coords(lattice, L, coord_edges, True, period)
    if len(g._eindex) != len(g.edges):
        raise LatticeSizeError(f"L={L} too small: edges coincide on the torus")
    return g


# --- canonical weighted box -------------------------------------------------


@dataclass(frozen=True)
class BoxEdge:
    start: tuple
    end: tuple
    direction: int
    factors: tuple  # e.g. (("c", 1), ("d", 0)): weight is the product


def box_edges(lattice: LatticeKind, ell: int) -> list[BoxEdge]:
    """Edges of the unrotated box anchored at the origin, with weight factors."""
    if ell < 1:
        raise LatticeSizeError("ell must be >= 1")
    out = []
    if lattice.name == HYPERCUBIC:
        D = lattice.dim
        for j in range(D):
            ranges = [range(ell) if k == j else range(ell + 1) for k in range(D)]
            for x in itertools.product(*ranges):
                y = tuple(a + (k == j) for k, a in enumerate(x))
                factors = tuple(("c" if k == j else "d", a) for k, a in enumerate(x))
                out.append(BoxEdge(x, y, j, factors))
    elif lattice.name == TRIANGULAR:
        for i in range(ell):
            for j in range(ell + 1):
                out.append(BoxEdge((i, j), (i + 1, j), 0, (("c", i), ("d", j))))
                out.append(BoxEdge((j, i), (j, i + 1), 1, (("d", j), ("c", i))))
        for i in range(ell):
            for j in range(ell):
                out.append(BoxEdge((i + 1, j), (i, j + 1), 2, (("c", i), ("c", j))))
    else:
        for i in range(ell):
            for j in range(ell + 1):
                # lower-left side of hexagon (i, j)
                out.append(BoxEdge(_hex_top(i, j - 1), _hex_bottom(i, j), 0, (("c", i), ("d", j))))
        for i in range(ell + 1):
            for j in range(ell):
                # left side of hexagon (i, j)
                out.append(BoxEdge(_hex_top(i, j - 1), _hex_bottom(i - 1, j + 1), 2, (("d", i), ("c", j))))
        for i in range(ell + 1):
            for j in range(ell + 1):
                if (i, j) in ((0, 0), (ell, ell)):
                    continue
                # upper-left side of hexagon (i, j-1)
                out.append(BoxEdge(_hex_top(i, j - 1), _hex_bottom(i - 1, j), 1, (("d", i), ("d", j))))
    return out


def box_edge_count(lattice: LatticeKind, ell: int) -> int:
    if lattice.name == HYPERCUBIC:
        return lattice.dim * ell * (ell + 1) ** (lattice.dim - 1)
    if lattice.name == TRIANGULAR:
        return 2 * ell * (ell + 1) + ell * ell
    return 2 * ell * (ell + 1) + (ell + 1) ** 2 - 2


def edge_weight(edge: BoxEdge, p: CoefficientProfile):
    w = None
    for name, i in edge.factors:
        f = p.c[i] if name == "c" else p.d[i]
        w = f if w is None else w * f
    return w


def build_box(lattice: LatticeKind, ell: int) -> TorusGraph:
    """The open subsystem graph on which the local gap is measured."""
    if ell < 1:
        raise LatticeSizeError("ell must be >= 1")
    coord_edges = [(e.start, e.end, e.direction) for e in box_edges(lattice, ell)]
    return _from_edge_coords(lattice, ell, coord_edges, False, 0)


def path_graph(n: int) -> TorusGraph:
    """Open chain of ``n`` sites, as a one-dimensional open graph."""
    if n < 2:
        raise LatticeSizeError("a chain needs at least 2 sites")
    verts = [(i,) for i in range(n)]
    edges = [(i, i + 1, 0) for i in range(n - 1)]
    return TorusGraph(LatticeKind.hypercubic(2), n - 1, verts, edges, False, 0)


def ring_graph(n: int) -> TorusGraph:
    if n < 3:
        raise LatticeSizeError("a ring needs at least 3 sites")
    verts = [(i,) for i in range(n)]
    edges = [(i, (i + 1) % n, 0) for i in range(n)]
    return TorusGraph(LatticeKind.hypercubic(2), n, verts, edges, True, n)


def check_box_fits(L: int, ell: int) -> None:
    """Translated boxes must not wrap around the torus: ``L > 2 ell``."""
    if not L > 2 * ell:
        raise LatticeSizeError(f"need L > 2*ell, got L={L}, ell={ell}")


def translations(lattice: LatticeKind, L: int) -> list[tuple]:
    if lattice.name == HYPERCUBIC:
        return list(itertools.product(range(L), repeat=lattice.dim))
    scale = 3 if lattice.name == HONEYCOMB else 1
    return [(scale * u, scale * v) for u, v in itertools.product(range(L), repeat=2)]


def rotation_turns(lattice: LatticeKind) -> tuple:
    """Rotations (in 60-degree turns) averaged over: identity, clockwise, counterclockwise."""
    if lattice.name == HYPERCUBIC:
        return (0,)
    return (0, -1, 1)


def place(p, turns: int, shift) -> tuple:
    if turns:
        p = rotate60(p, turns)
    return tuple(a + b for a, b in zip(p, shift))


def edge_endpoints(g: TorusGraph, e: int) -> tuple:
    a, b, k = g.edges[e]
    return g.vertices[a], g.vertices[b], k


def default_L(ell: int) -> int:
    return 2 * ell + 1


def vertex_sublattice(p) -> Optional[str]:
    if len(p) != 2:
        return None
    return "top" if _is_top(p) else "bottom"
