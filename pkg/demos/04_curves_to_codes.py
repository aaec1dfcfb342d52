"""From branch points to GKP generators via period matrices."""

import numpy as np

from gkptools.curves import HyperellipticCurve, elliptic_roundtrip, gkp_from_curve, period_matrix
from gkptools.lattice import distance
from gkptools.modular import j_invariant

curve = HyperellipticCurve((-1.0, 0.0, 1.0))
pm = period_matrix(curve)
print("y^2 = x^3 - x: Omega =", np.round(pm.Omega, 12))
code = gkp_from_curve(curve, 2)
print("  code type", code.D, "distance", round(distance(code), 12))

for y in (1.0, 1.5, 2.0):
    back = elliptic_roundtrip(1j * y)
    print(f"tau = {y}i -> periods -> tau = {back:.12f}, j error {abs(j_invariant(back) - j_invariant(1j * y)):.1e}")

g2 = HyperellipticCurve((0.0, 1.0, 2.0, 3.0, 4.0, 5.0))
pm = period_matrix(g2)
print("\ngenus 2, branch points 0..5")
print("  Omega =\n", np.round(pm.Omega, 6))
print("  eigenvalues of Im Omega", np.round(np.linalg.eigvalsh(pm.Omega.imag), 6))
code = gkp_from_curve(g2, 2)
print("  two-mode code type", code.D, "distance", round(distance(code), 6))
