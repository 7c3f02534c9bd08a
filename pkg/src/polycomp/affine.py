"""Homogeneous affine correspondences between simplices.

A d-simplex with vertices p_1..p_{d+1} is written as the (d+1)x(d+1) matrix
whose columns are the vertices embedded in the hyperplane x_{d+1} = 1.  The
affine map carrying one simplex onto another is then A = Q P^{-1}; dropping
its last row and column leaves the d x d linear part used by every spectral
criterion in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSimplex

DET_TOL = 1e-12


def homogeneous(vertices: np.ndarray) -> np.ndarray:
    """Column matrix [[p_1 .. p_{d+1}], [1 .. 1]] of a vertex array (d+1, d)."""
    v = np.asarray(vertices, dtype=float)
    return np.vstack([v.T, np.ones(v.shape[0])])


@dataclass(frozen=True)
class AffineCorrespondence:
    """Affine map between two d-simplices given by vertex correspondence."""

    source: np.ndarray  # (d+1, d) rows are vertices
    target: np.ndarray
    matrix: np.ndarray  # (d+1, d+1) homogeneous map, last row (0,..,0,1)
    linear: np.ndarray  # (d, d) reduced matrix

    @property
    def dimension(self) -> int:
        return self.source.shape[1]

    def apply(self, x: np.ndarray) -> np.ndarray:
        xh = np.append(np.asarray(x, dtype=float), 1.0)
        return (self.matrix @ xh)[:-1]

    def gram_eigenvalues(self) -> np.ndarray:
        """Eigenvalues of linear^T linear, ascending (squared singular values)."""
        return np.linalg.eigvalsh(self.linear.T @ self.linear)


def affine_correspondence(source, target) -> AffineCorrespondence:
    """Build the affine map taking the source simplex onto the target.

    Raises ``SingularSimplex`` when the source simplex is affinely
    degenerate (|det| below 1e-12 at coordinate scale).
    """
    src = np.asarray(source, dtype=float)
    tgt = np.asarray(target, dtype=float)
    if src.shape != tgt.shape or src.shape[0] != src.shape[1] + 1:
        raise ValueError("simplices must be (d+1) x d vertex arrays of equal shape")
    d = src.shape[1]
    p = homogeneous(src)
    q = homogeneous(tgt)
    scale = max(1.0, float(np.abs(src).max()))
    if abs(np.linalg.det(p)) <= DET_TOL * scale**d:
        raise SingularSimplex("source simplex is affinely degenerate")
    matrix = np.linalg.solve(p.T, q.T).T
    return AffineCorrespondence(source=src, target=tgt, matrix=matrix,
                                linear=matrix[:d, :d].copy())


def restricted_singular_values(source, target) -> np.ndarray:
    """Singular values of the affine map between simplices in mixed dimensions.

    The source simplex may live in a higher-dimensional space than its own
    affine hull; the map is measured relative to the intrinsic (isometric)
    coordinates of that hull.  Used to certify that dropping coordinates is
    a per-simplex weak compression.
    """
    src = np.asarray(source, dtype=float)
    tgt = np.asarray(target, dtype=float)
    e_src = (src[1:] - src[0]).T  # (D_s, d)
    e_tgt = (tgt[1:] - tgt[0]).T
    _, r = np.linalg.qr(e_src)
    d = e_src.shape[1]
    cond = np.abs(np.diag(r))
    if cond.min() <= DET_TOL * max(1.0, cond.max()):
        raise SingularSimplex("source simplex is affinely degenerate")
    m = np.linalg.solve(r.T, e_tgt.T).T  # target edges in intrinsic coordinates
    return np.linalg.svd(m, compute_uv=False)
