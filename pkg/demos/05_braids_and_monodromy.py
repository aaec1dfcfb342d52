"""What a loop of lattices does to the half-period roots and to the logical qubit."""

import numpy as np

from gkptools.paths import braid_trace, closure, concat, monodromy, rotation_path, shear_path, two_torsion_permutation

sq = np.eye(2)
hadamard = rotation_path(sq, np.pi / 2)
phase = shear_path(sq, 1.0)
for name, p in (("quarter turn", hadamard), ("unit shear", phase), ("two quarter turns", concat(hadamard, hadamard))):
    bt = braid_trace(p)
    A = closure(p)
    print(f"{name:18s} A = {A.tolist()!s:18s} roots permuted {bt.permutation} "
          f"(mod 2 prediction {two_torsion_permutation(A)}), crossings {len(bt.crossings)}, "
          f"logical {monodromy(p, 2).tolist()}")
