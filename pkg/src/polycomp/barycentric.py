"""Barycentric subdivision and the induced piecewise-linear map.

The subdivision of a polytope realization has one d-simplex per maximal
chain of faces F_0 c F_1 c ... c F_d, with vertices at the face barycentres.
Two realizations of the same combinatorial polytope therefore share chain
structure, which induces a piecewise-linear map matching barycentre to
barycentre.  Simplex polytopes bypass the subdivision: the single affine
map given by the vertex correspondence is used directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineCorrespondence, affine_correspondence
from .errors import DegenerateSimplex, PointOutside, PolytopeMismatch, SingularSimplex
from .polytopes import CombinatorialPolytope, Shape

BARY_TOL = 1e-9


def barycentre(face, shape: Shape) -> np.ndarray:
    """Arithmetic mean of a face's vertex coordinates."""
    idx = list(face)
    if not idx:
        raise ValueError("face must be nonempty")
    return shape.coords[idx].mean(axis=0)


@dataclass(frozen=True)
class BarycentricComplex:
    """Maximal chains of faces and their adjacency (shared d of d+1 faces)."""

    polytope: CombinatorialPolytope
    chains: tuple[tuple[int, ...], ...]  # face indices, dimensions 0..d
    adjacency: tuple[tuple[int, int], ...]

    @property
    def simplex_count(self) -> int:
        return len(self.chains)


def barycentric_complex(polytope: CombinatorialPolytope) -> BarycentricComplex:
    """Enumerate all maximal chains of the face lattice, deterministically.

    Chains are emitted in lexicographic order of their face-index tuples.
    Adjacent chains differ in exactly one face.
    """
    d = polytope.dimension
    by_dim = [[] for _ in range(d + 1)]
    for i, k in enumerate(polytope.face_dims):
        if 0 <= k <= d:
            by_dim[k].append(i)
    face_sets = [frozenset(f) for f in polytope.faces]

    chains = []

    def extend(chain, level):
        if level > d:
            chains.append(tuple(chain))
            return
        cur = face_sets[chain[-1]]
        for j in by_dim[level]:
            if cur < face_sets[j]:
                chain.append(j)
                extend(chain, level + 1)
                chain.pop()

    for i in by_dim[0]:
        extend([i], 1)

    adjacency = []
    seen = {}
    for ci, chain in enumerate(chains):
        for pos in range(d + 1):
            key = chain[:pos] + chain[pos + 1:]
            if (pos, key) in seen:
                adjacency.append((seen[(pos, key)], ci))
            else:
                seen[(pos, key)] = ci
    return BarycentricComplex(polytope, tuple(chains), tuple(sorted(adjacency)))


@dataclass(frozen=True)
class InducedMap:
    """The piecewise-linear map f: P -> Q with its per-simplex affine pieces.

    ``kind`` records the domain decomposition: "simplex" for the single
    affine map of a simplex polytope, "barycentric" for chain simplices of
    the subdivision, "triangulation" for a user-supplied vertex
    triangulation.
    """

    source: Shape
    target: Shape
    kind: str
    correspondences: tuple[AffineCorrespondence, ...]
    complex: BarycentricComplex | None = None
    simplices: tuple[tuple[int, ...], ...] | None = None

    @property
    def simplex_count(self) -> int:
        return len(self.correspondences)

    @property
    def dimension(self) -> int:
        return self.source.polytope.dimension


def _require_same_polytope(p: Shape, q: Shape) -> None:
    if p.polytope != q.polytope:
        raise PolytopeMismatch("shapes realize different combinatorial polytopes")


def chain_simplex_coords(complex_: BarycentricComplex, shape: Shape) -> np.ndarray:
    """Vertex coordinates of every chain simplex: array (t, d+1, d)."""
    faces = complex_.polytope.faces
    out = np.empty((len(complex_.chains), complex_.polytope.dimension + 1,
                    complex_.polytope.dimension))
    for i, chain in enumerate(complex_.chains):
        for j, fi in enumerate(chain):
            out[i, j] = barycentre(faces[fi], shape)
    return out


def induced_map(p: Shape, q: Shape) -> InducedMap:
    """Build the induced piecewise-linear map from P to Q.

    Barycentre naturality f(b(F)) = b(G) holds by construction: source and
    target simplex vertices are the barycentres of corresponding faces.
    Raises ``PolytopeMismatch`` or ``DegenerateSimplex``.
    """
    _require_same_polytope(p, q)
    if p.polytope.is_simplex:
        try:
            corr = affine_correspondence(p.coords, q.coords)
        except SingularSimplex as exc:
            raise DegenerateSimplex(str(exc)) from exc
        return InducedMap(p, q, "simplex", (corr,),
                          simplices=(tuple(range(p.polytope.vertex_count)),))
    complex_ = barycentric_complex(p.polytope)
    src = chain_simplex_coords(complex_, p)
    tgt = chain_simplex_coords(complex_, q)
    corrs = []
    for i in range(len(complex_.chains)):
        try:
            corrs.append(affine_correspondence(src[i], tgt[i]))
        except SingularSimplex as exc:
            raise DegenerateSimplex(f"chain {i} is degenerate in the source") from exc
    return InducedMap(p, q, "barycentric", tuple(corrs), complex=complex_)


def triangulation_map(p: Shape, q: Shape, simplices) -> InducedMap:
    """Per-simplex affine map over a vertex triangulation instead of B(P)."""
    _require_same_polytope(p, q)
    corrs = []
    simps = tuple(tuple(s) for s in simplices)
    for s in simps:
        idx = list(s)
        try:
            corrs.append(affine_correspondence(p.coords[idx], q.coords[idx]))
        except SingularSimplex as exc:
            raise DegenerateSimplex(f"simplex {s} is degenerate in the source") from exc
    return InducedMap(p, q, "triangulation", tuple(corrs), simplices=simps)


def evaluate_map(m: InducedMap, x, tol: float = BARY_TOL) -> np.ndarray:
    """Evaluate f at a point of P by locating a containing simplex.

    Linear scan in simplex order; a simplex accepts the point when all its
    barycentric coordinates are >= -tol (they are then clamped and
    renormalized, so results on shared faces do not depend on the winner).
    Raises ``PointOutside`` when no simplex contains the point.
    """
    x = np.asarray(x, dtype=float)
    for corr in m.correspondences:
        p = np.vstack([corr.source.T, np.ones(corr.source.shape[0])])
        lam = np.linalg.solve(p, np.append(x, 1.0))
        if lam.min() >= -tol:
            lam = np.clip(lam, 0.0, None)
            lam = lam / lam.sum()
            return corr.target.T @ lam
    raise PointOutside(f"point {x.tolist()} lies in no simplex of the domain")
