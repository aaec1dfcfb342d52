"""Two single-mode codes at d = 2: distances, Pauli bases and the Clifford gates they admit."""

import numpy as np

from gkptools.clifford import integral_rep, logical_action
from gkptools.exact_linalg import rotation
from gkptools.lattice import canonical_pauli_basis, distance, hexagonal_code, square_code

for name, code, angle in (("square", square_code(2), np.pi / 2), ("hexagonal", hexagonal_code(2), -np.pi / 3)):
    pb = canonical_pauli_basis(code)
    print(f"{name} code, type {code.D}")
    print(f"  distance        {distance(code):.12f}")
    print(f"  logical X, Z    {np.round(pb.e[0], 6)}, {np.round(pb.f[0], 6)}  (e J f = {pb.products[0]})")
    U = integral_rep(code, rotation(angle))
    print(f"  rotation {angle:+.4f}: U = {U.tolist()}, logical {logical_action(U, 2).tolist()}")

# the square lattice only has the quarter turns, so a sixth of a turn is refused
try:
    integral_rep(square_code(2), rotation(np.pi / 3))
except Exception as exc:
    print("square + pi/3:", type(exc).__name__)
