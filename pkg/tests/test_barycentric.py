"""Barycentric subdivision, induced maps, naturality and continuity."""

import itertools

import numpy as np
import pytest

from polycomp import (
    DegenerateSimplex,
    PointOutside,
    PolytopeMismatch,
    Shape,
    barycentre,
    barycentric_complex,
    evaluate_map,
    induced_map,
    ngon_polytope,
    simplex_polytope,
)


def brute_force_chains(polytope):
    """Oracle: every strictly increasing face sequence of dimensions 0..d."""
    d = polytope.dimension
    by_dim = [[i for i, k in enumerate(polytope.face_dims) if k == dim]
              for dim in range(d + 1)]
    chains = []
    for combo in itertools.product(*by_dim):
        ok = True
        for a, b in zip(combo, combo[1:]):
            if not set(polytope.faces[a]) < set(polytope.faces[b]):
                ok = False
                break
        if ok:
            chains.append(combo)
    return set(chains)


def test_barycentre_singleton_and_edge(unit_square):
    assert np.allclose(barycentre([2], unit_square), [1.0, 1.0])
    assert np.allclose(barycentre([0, 1], unit_square), [0.5, 0.0])


def test_barycentre_body_of_published_triangle(triangle_pair):
    p, _ = triangle_pair
    b = barycentre([0, 1, 2], p)
    assert np.allclose(b, [1.7843333333333333, 0.7396666666666667], atol=1e-12)


@pytest.mark.parametrize("polytope,expected", [
    (simplex_polytope(2), 6),
    (ngon_polytope(4), 8),
    (simplex_polytope(3), 24),
])
def test_chain_counts(polytope, expected):
    complex_ = barycentric_complex(polytope)
    assert complex_.simplex_count == expected
    assert set(complex_.chains) == brute_force_chains(polytope)


def test_chain_structure():
    complex_ = barycentric_complex(ngon_polytope(5))
    poly = complex_.polytope
    for chain in complex_.chains:
        dims = [poly.face_dims[i] for i in chain]
        assert dims == [0, 1, 2]
        assert set(poly.faces[chain[0]]) < set(poly.faces[chain[1]])
    for i, j in complex_.adjacency:
        assert len(set(complex_.chains[i]) & set(complex_.chains[j])) == 2


def test_induced_map_identity(unit_square):
    m = induced_map(unit_square, unit_square)
    assert m.kind == "barycentric"
    for corr in m.correspondences:
        assert np.allclose(corr.linear, np.eye(2), atol=1e-12)
        sv = np.linalg.svd(corr.linear, compute_uv=False)
        assert np.abs(sv - 1.0).max() <= 1e-12


def test_induced_map_homothety(unit_square):
    m = induced_map(unit_square, unit_square.scaled(2.0))
    for corr in m.correspondences:
        assert np.allclose(corr.linear, 2.0 * np.eye(2), atol=1e-12)


def test_induced_map_simplex_bypass(triangle_pair):
    p, q = triangle_pair
    m = induced_map(p, q)
    assert m.kind == "simplex"
    assert m.simplex_count == 1


def test_induced_map_polytope_mismatch(unit_square, triangle_pair):
    with pytest.raises(PolytopeMismatch):
        induced_map(unit_square, triangle_pair[0])


def test_induced_map_degenerate_source():
    poly = ngon_polytope(4)
    # two coincident vertices collapse a chain simplex
    p = Shape(poly, [[0.0, 0.0], [0.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    q = Shape(poly, [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    with pytest.raises(DegenerateSimplex):
        induced_map(p, q)


def test_affine_invariants(triangle_pair):
    p, q = triangle_pair
    corr = induced_map(p, q).correspondences[0]
    assert np.abs(corr.matrix[-1] - np.array([0.0, 0.0, 1.0])).max() <= 1e-10
    phom = np.vstack([corr.source.T, np.ones(3)])
    qhom = np.vstack([corr.target.T, np.ones(3)])
    assert np.abs(corr.matrix @ phom - qhom).max() <= 1e-10


def test_evaluate_map_vertices(unit_square):
    target = unit_square.scaled(3.0).transformed(translation=[2.0, -1.0])
    m = induced_map(unit_square, target)
    for i in range(4):
        out = evaluate_map(m, unit_square.coords[i])
        assert np.allclose(out, target.coords[i], atol=1e-10)


def test_evaluate_map_published_points(triangle_pair):
    p, q = triangle_pair
    m = induced_map(p, q)
    x = np.array([0.34, 0.464, 0.196]) @ p.coords
    y = np.array([0.149, 0.316, 0.535]) @ p.coords
    assert np.allclose(x, [1.97432, 0.819808], atol=1e-4)
    assert np.allclose(y, [2.10787, 0.41864], atol=1e-4)
    qx = evaluate_map(m, x)
    qy = evaluate_map(m, y)
    assert np.allclose(qx, [4.21365, 2.49228], atol=1e-4)
    assert np.allclose(qy, [4.34854, 2.0862], atol=1e-4)


def test_evaluate_map_outside(unit_square):
    m = induced_map(unit_square, unit_square)
    with pytest.raises(PointOutside):
        evaluate_map(m, [5.0, 5.0])


def test_naturality(rng):
    # f(b(F)) = b(G) for every face, on a random pentagon pair
    from polycomp.generators import random_polygon_shape

    p = random_polygon_shape(rng, 5)
    q = random_polygon_shape(rng, 5)
    m = induced_map(p, q)
    for face in p.polytope.faces:
        image = evaluate_map(m, barycentre(face, p))
        assert np.linalg.norm(image - barycentre(face, q)) <= 1e-10


def test_continuity_on_shared_facets(rng):
    # adjacent chain simplices agree on their shared face
    from polycomp.generators import random_polygon_shape

    p = random_polygon_shape(rng, 6)
    q = random_polygon_shape(rng, 6)
    m = induced_map(p, q)
    complex_ = m.complex
    samples_per_pair = 1000 // max(1, len(complex_.adjacency))
    for i, j in complex_.adjacency:
        ci, cj = complex_.chains[i], complex_.chains[j]
        shared = [f for f in ci if f in cj]
        pts = np.stack([barycentre(p.polytope.faces[f], p) for f in shared])
        w = rng.dirichlet(np.ones(len(shared)), size=samples_per_pair)
        xs = w @ pts
        for x in xs:
            yi = m.correspondences[i].apply(x)
            yj = m.correspondences[j].apply(x)
            assert np.linalg.norm(yi - yj) <= 1e-10
