from collections import Counter

import numpy as np
import pytest

from ffgap.criteria import LatticeKind
from ffgap.lattice import (
    LatticeSizeError,
    box_edge_count,
    box_edges,
    build_box,
    build_torus,
    check_box_fits,
    edge_weight,
    path_graph,
    ring_graph,
    rotate60,
    vertex_sublattice,
)
from ffgap.profiles import CoefficientProfile

SQ, CUBE = LatticeKind.hypercubic(2), LatticeKind.hypercubic(3)
HC, TR = LatticeKind.honeycomb(), LatticeKind.triangular()


@pytest.mark.parametrize("lattice,L,nv,ne,deg", [
    (SQ, 5, 25, 50, 4),
    (CUBE, 3, 27, 81, 6),
    (HC, 3, 18, 27, 3),
    (TR, 4, 16, 48, 6),
])
def test_torus_counts_and_regularity(lattice, L, nv, ne, deg):
    g = build_torus(lattice, L)
    assert (g.n_vertices, g.n_edges) == (nv, ne)
    degrees = Counter()
    for a, b, _ in g.edges:
        degrees[a] += 1
        degrees[b] += 1
    assert set(degrees.values()) == {deg}
    assert len({(min(a, b), max(a, b)) for a, b, _ in g.edges}) == ne


def test_honeycomb_is_bipartite():
    g = build_torus(HC, 4)
    for a, b, _ in g.edges:
        assert {vertex_sublattice(g.vertices[a]), vertex_sublattice(g.vertices[b])} == {"top", "bottom"}


def test_rotation_has_order_six():
    p = (3, -1)
    assert rotate60(p, 6) == p
    assert rotate60(p, 3) == (-3, 1)


@pytest.mark.parametrize("lattice,ell,count", [
    (SQ, 3, 2 * 3 * 4),
    (CUBE, 2, 3 * 2 * 9),
    (TR, 3, 2 * 3 * 4 + 9),
])
def test_box_edge_counts(lattice, ell, count):
    assert box_edge_count(lattice, ell) == count == len(box_edges(lattice, ell))


def test_honeycomb_box_is_connected_hexagon_patch():
    g = build_box(HC, 3)
    lap = g.laplacian().toarray()
    w = np.linalg.eigvalsh(lap)
    assert np.count_nonzero(w < 1e-10) == 1
    assert g.n_vertices == 2 * 4 * 4 - 2


def test_box_weights_use_profile():
    p = CoefficientProfile.from_lambda(3, 0)
    ws = {edge_weight(e, p) for e in box_edges(SQ, 3)}
    assert all(w > 0 for w in ws)


def test_size_guards():
    with pytest.raises(LatticeSizeError):
        check_box_fits(4, 2)
    check_box_fits(5, 2)
    with pytest.raises(ValueError):
        build_torus(SQ, 2)


def test_min_image_and_edges():
    g = build_torus(SQ, 5)
    assert g.min_image((4, 0)) == (-1, 0)
    assert g.has_edge((0, 0), (4, 0))
    assert not g.has_edge((0, 0), (2, 0))


def test_chains():
    assert path_graph(4).n_edges == 3
    assert ring_graph(5).n_edges == 5
