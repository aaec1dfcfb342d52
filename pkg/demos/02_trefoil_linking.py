"""Closed paths of lattices wind around the degenerate locus Delta = 0.

A rotation by phi links -12 phi / 2 pi times, a unit shear once, and the
modular geodesic of a hyperbolic A links psi(A) times.
"""

import numpy as np

from gkptools.clifford import rademacher_dedekind, rl_word
from gkptools.lattice import M_A2
from gkptools.paths import closure, geodesic_for, linking_number, rotation_path, shear_path

loops = [
    ("square, quarter turn", rotation_path(np.eye(2), np.pi / 2)),
    ("hexagonal, sixth of a turn", rotation_path(M_A2, np.pi / 3)),
    ("square, half turn", rotation_path(np.eye(2), np.pi)),
    ("unit shear", shear_path(np.eye(2), 1.0)),
]
for name, p in loops:
    print(f"{name:28s} certificate {closure(p).tolist()!s:18s} link {linking_number(p):+d}")

print("\nA               R/L word        psi   link(geodesic)")
for A in ([[2, 1], [1, 1]], [[3, 2], [1, 1]], [[5, 2], [2, 1]], [[7, 4], [5, 3]], [[1, -5], [-1, 6]]):
    w = rl_word(A)
    print(f"{A!s:15s} {str(w):15s} {rademacher_dedekind(A):+3d}   {linking_number(geodesic_for(A)):+3d}")
