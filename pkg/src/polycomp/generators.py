"""Deterministic random generators for experiments and tests.

Everything takes an explicit numpy Generator so that experiment scripts and
property suites are reproducible from a single seed.
"""

from __future__ import annotations

import numpy as np

from .polytopes import Shape, ngon_polytope, simplex_polytope


def random_rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.standard_normal((d, d))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_contraction(rng: np.random.Generator, d: int,
                       sigma_range=(0.2, 0.95)) -> np.ndarray:
    """Random matrix with singular values drawn from sigma_range."""
    u = random_rotation(rng, d)
    v = random_rotation(rng, d)
    sv = rng.uniform(*sigma_range, d)
    return u @ np.diag(sv) @ v.T


def random_weak_contraction(rng: np.random.Generator, d: int) -> np.ndarray:
    """Contraction with top singular value exactly one."""
    u = random_rotation(rng, d)
    v = random_rotation(rng, d)
    sv = np.sort(rng.uniform(0.2, 1.0, d))[::-1]
    sv[0] = 1.0
    return u @ np.diag(sv) @ v.T


def random_simplex_coords(rng: np.random.Generator, d: int,
                          min_singular: float = 0.3,
                          max_singular: float = 3.0) -> np.ndarray:
    """(d+1) moderately conditioned points in R^d (rejection sampled)."""
    while True:
        pts = rng.standard_normal((d + 1, d))
        sv = np.linalg.svd(pts[1:] - pts[0], compute_uv=False)
        if sv[-1] >= min_singular and sv[0] <= max_singular:
            return pts


def random_simplex_shape(rng: np.random.Generator, d: int) -> Shape:
    return Shape(simplex_polytope(d), random_simplex_coords(rng, d))


def random_convex_polygon(rng: np.random.Generator, n: int) -> np.ndarray:
    """Valtr's algorithm: a random convex n-gon, vertices counterclockwise."""
    xs = np.sort(rng.uniform(0.0, 1.0, n))
    ys = np.sort(rng.uniform(0.0, 1.0, n))

    def paired_diffs(vals):
        mid = vals[1:-1]
        mask = rng.integers(0, 2, mid.size).astype(bool)
        up = np.concatenate([[vals[0]], mid[mask], [vals[-1]]])
        down = np.concatenate([[vals[0]], mid[~mask], [vals[-1]]])
        return np.concatenate([np.diff(up), -np.diff(down)])

    dx = paired_diffs(xs)
    dy = paired_diffs(ys)
    rng.shuffle(dy)
    vecs = np.column_stack([dx, dy])
    vecs = vecs[np.argsort(np.arctan2(vecs[:, 1], vecs[:, 0]))]
    pts = np.cumsum(vecs, axis=0)
    return pts - pts.mean(axis=0)


def random_polygon_shape(rng: np.random.Generator, n: int) -> Shape:
    return Shape(ngon_polytope(n), random_convex_polygon(rng, n))
