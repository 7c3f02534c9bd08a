#!/usr/bin/env python3
"""Pleat the unit square over a homothety target and walk the projection
chain back down, one dropped coordinate per stage.

Usage: python3 scripts/pleat_square_demo.py [scale]
"""

import sys

import numpy as np

from polycomp import (
    Shape,
    fan_triangulation,
    ngon_polytope,
    pleat_validity,
    pleated_embedding,
    pleated_projection_chain,
)


def main():
    scale = float(sys.argv[1]) if len(sys.argv) > 1 else 0.8
    poly = ngon_polytope(4)
    p = Shape(poly, [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    q = p.scaled(scale)
    tri = fan_triangulation(poly, 0)

    pe = pleated_embedding(p, q, tri)
    print(f"pleated the unit square over {scale}*square into R^{pe.ambient_dimension}")
    print("vertex coordinates:")
    for i, row in enumerate(pe.coords):
        print(f"  v{i}: {np.round(row, 6).tolist()}")

    report = pleat_validity(pe)
    print(f"\nper-simplex isometry residual: {report.max_isometry_residual:.3e}")
    print(f"projection residual onto the target: {report.projection_residual:.3e}")
    for fold in report.facet_folds:
        print(f"fold across {fold.shared_vertices}: dihedral "
              f"{np.degrees(fold.dihedral):.3f} deg (180 = flat)")
    for ridge in report.ridge_angle_sums:
        print(f"angle sum at shared vertex {ridge.vertices}: "
              f"{np.degrees(ridge.angle_sum):.3f} deg "
              f"(< 180: {ridge.strictly_below_pi})")

    chain = pleated_projection_chain(pe)
    print("\nprojection chain:")
    for stage in chain.stages:
        alpha = ("-" if stage.alpha_max_vs_prev is None
                 else f"{stage.alpha_max_vs_prev:.12f}")
        print(f"  R^{stage.ambient_dimension}: alpha_max vs previous stage = {alpha}")
    print(f"final stage matches the target within {chain.final_residual:.3e}")


if __name__ == "__main__":
    main()
