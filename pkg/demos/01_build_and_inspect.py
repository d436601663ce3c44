"""Build the reference algebras and inspect their bracket structure.

Every algebra is stored as structure constants in an orthonormal basis,
so the metric never appears explicitly: geometry is pure linear algebra
on the constants.
"""

import numpy as np

from solvharm import (ad_matrix, bracket, build_damek_ricci, build_flat,
                      build_heisenberg_type, build_real_hyperbolic,
                      center_of, clifford_generators, derived_algebra,
                      growth_type, nilpotency_class)

np.set_printoptions(precision=4, suppress=True)

# A Clifford module: l anticommuting skew complex structures J_a on R^m.
cm = clifford_generators(l=2, copies=1)
print(f"Clifford module: l = {cm.l}, module dim m = {cm.m}")
print("first generator J_1:")
print(cm.generators[0])
print("relation residual (J_a^2 = -id, anticommutation):",
      cm.relation_residual())

# The module defines a two-step nilpotent algebra of Heisenberg type on
# v + z, and a solvable rank-one extension: the Damek-Ricci algebra.
nil = build_heisenberg_type(cm)
dr = build_damek_ricci(cm)
print(f"\nHeisenberg-type algebra: dim {nil.dim}, "
      f"nilpotency class {nilpotency_class(nil)}")
print(f"Damek-Ricci algebra:     dim {dr.dim}, "
      f"nilpotent: {nilpotency_class(dr) is not None}")

# Basis order is (H, V_1..V_m, Z_1..Z_l); ad_H acts by 1/2 on v, 1 on z.
h = np.zeros(dr.dim)
h[0] = 1.0
print("\nad_H eigenvalues:", np.linalg.eigvalsh(ad_matrix(h, dr)))

# the derived algebra [s, s] is exactly v + z (codimension one) ...
print("derived algebra dimension:", derived_algebra(dr).shape[1])
# ... and the center of the nilpotent part is z
print("center of the Heisenberg part:", center_of(nil).shape[1],
      "dimensional")

# Brackets at work: [V_1, V_2] lands in the center.
v1 = np.zeros(dr.dim)
v1[1] = 1.0
v2 = np.zeros(dr.dim)
v2[2] = 1.0
print("\n[V1, V2] =", bracket(v1, v2, dr))

# Volume growth separates the flat, nilpotent and solvable worlds.
for name, g in (("flat R^4", build_flat(4)),
                ("Heisenberg type", nil),
                ("real hyperbolic H^4", build_real_hyperbolic(4)),
                ("Damek-Ricci", dr)):
    print(f"growth of {name:20s}: {growth_type(g).value}")
