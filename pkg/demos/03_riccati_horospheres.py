"""Horosphere shape operators from the algebraic Riccati equation.

Along a geodesic perpendicular to [s, s] the stable horosphere shape
operator is constant: L0 = -D_A - X with X the maximal symmetric
solution of X^2 + X ad_A + ad_A^T X = 0, and trace L0 equals
-sum |Re sigma| over the spectrum of ad_A.  Finite-distance spheres
converge monotonically to the horosphere from outside.
"""

import numpy as np

from solvharm import (build_damek_ricci, clifford_generators,
                      finite_horizon_shape, horosphere_mean_curvature_formula,
                      solve_algebraic_riccati_max, standard_decomposition)

np.set_printoptions(precision=6, suppress=True)

# Scalar warm-up: ad_A = (a) has solutions X in {0, -2a}; the maximal one
# flips the unstable direction.
for a in (-1.0, 0.7):
    res = solve_algebraic_riccati_max(np.array([[a]]))
    print(f"a = {a:+.1f}:  X = {res.x[0,0]:.3f},  L0 = {res.l0[0,0]:.3f}")

# A non-normal example: the trace identity holds regardless of the
# eigenvector geometry.
ad_a = np.array([
    [0.6, 0.4, 0.0],
    [0.0, -0.5, 0.3],
    [0.0, 0.0, 1.1],
])
res = solve_algebraic_riccati_max(ad_a)
print("\nnon-normal ad_A: X =")
print(res.x)
print("trace L0             :", res.trace_l0)
print("-sum |Re sigma|      :", horosphere_mean_curvature_formula(ad_a))
print("Riccati residual     :", res.residual(ad_a))

# Spheres about points at distance r: their second fundamental forms U_r
# decrease monotonically to the horosphere limit -L0 = D_A + X.
print("\nmonotone convergence U_r -> -L0:")
for r in (2.0, 5.0, 10.0, 25.0):
    u_r = finite_horizon_shape(ad_a, r)
    print(f"  r = {r:5.1f}:  |U_r + L0| = {np.abs(u_r + res.l0).max():.3e}")

# On a Damek-Ricci algebra, ad_H has spectrum {1/2 on v, 1 on z}, so the
# horosphere mean curvature along H-geodesics is m/2 + l.
cm = clifford_generators(3)
d = standard_decomposition(build_damek_ricci(cm))
res = solve_algebraic_riccati_max(d.ad_h())
print(f"\nDamek-Ricci (m={cm.m}, l={cm.l}): trace L0 = {res.trace_l0}"
      f"  (expected -(m/2 + l) = {-(cm.m / 2 + cm.l)})")
