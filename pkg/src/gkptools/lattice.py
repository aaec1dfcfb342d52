"""GKP codes as symplectically integral lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyCoset,
    NotSymplectic,
    UnsupportedDimension,
    ValidationError,
)
from .exact_linalg import (
    ExactMatrix,
    as_real,
    canonical_gram,
    integer_snap,
    is_symplectic,
    symplectic_form,
    symplectic_gram,
    symplectic_reduce,
)
from .modular import RHO, Tau, _tau_array

SQRT2 = math.sqrt(2.0)
M_A2 = np.array([[2.0, 0.0], [1.0, math.sqrt(3.0)]]) / math.sqrt(2.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class GkpCode:
    """Lattice generated by the rows of M, stored in a basis where M J M^T = [[0, D], [-D, 0]]."""

    M: np.ndarray
    A: ExactMatrix
    D: tuple
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n", len(self.D))

    @property
    def is_scaled(self):
        return len(set(self.D)) == 1

    @property
    def d(self):
        """Scaling d when D = d I, else None."""
        return self.D[0] if self.is_scaled else None

    def to_json(self):
        return {"n": self.n, "D": list(self.D), "M": self.M.tolist()}

    @classmethod
    def from_json(cls, obj):
        try:
            M = np.asarray(obj["M"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad code descriptor: {exc}") from None
        code = from_generator(M)
        if "n" in obj and int(obj["n"]) != code.n:
            raise ValidationError(f"descriptor says n={obj['n']} but M has {code.n} modes")
        if "D" in obj and tuple(int(x) for x in obj["D"]) != code.D:
            raise ValidationError(f"descriptor type {obj['D']} does not match computed type {list(code.D)}")
        return code


def from_generator(M, tol=1e-9):
    """Build a code from any generator matrix with integral symplectic Gram.

    If the Gram is not already in canonical form the rows are changed by a
    unimodular basis change (same lattice).
    """
    M = as_real(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch(f"generator must be 2n x 2n, got {M.shape}")
    A = integer_snap(symplectic_gram(M), tol)
    D, V = symplectic_reduce(A)
    G = canonical_gram(D)
    if A != G:
        M = V.to_numpy() @ M
        A = G
    return GkpCode(M=M, A=A, D=D)


def from_type(D, S0):
    """M = (diag(D) + I) S0^T, i.e. the type-D sublattice of the symplectic lattice with basis S0^T."""
    D = tuple(int(x) for x in D)
    if any(x <= 0 for x in D) or any(D[i + 1] % D[i] for i in range(len(D) - 1)):
        raise ValidationError("D must be positive integers with d_1 | d_2 | ...")
    S0 = as_real(S0)
    n = len(D)
    if S0.shape != (2 * n, 2 * n):
        raise DimensionMismatch("S0 must be 2n x 2n")
    if not is_symplectic(S0):
        raise NotSymplectic("S0 is not symplectic")
    M = np.diag(np.concatenate([np.asarray(D, dtype=float), np.ones(n)])) @ S0.T
    return from_generator(M)


def scaled(M0, d):
    """Scaled code sqrt(d) M0 of type d I for a symplectic M0."""
    M0 = as_real(M0)
    if not is_symplectic(M0):
        raise NotSymplectic("M0 is not symplectic")
    if int(d) != d or d < 1:
        raise ValidationError("d must be a positive integer")
    return from_generator(math.sqrt(d) * M0)


def from_tau(tau, d):
    """Lattice Z + tau Z with area scaled to d.

    Rows (u, v) correspond to complex numbers v + i u; the second row maps
    to a positive real period and M.i == tau.
    """
    t = complex(_tau_array(tau.value if isinstance(tau, Tau) else tau))
    if int(d) != d or d < 1:
        raise ValidationError("d must be a positive integer")
    x, y = t.real, t.imag
    ry = math.sqrt(y)
    M0 = np.array([[ry, x / ry], [0.0, 1.0 / ry]])
    return scaled(M0, d)


def square_code(d=2):
    return from_tau(1j, d)


def hexagonal_code(d=2):
    return scaled(M_A2, d)


def code_tau(code_or_M):
    """Modular parameter M.i = (a i + b)/(c i + d) of a single-mode generator, normalised to det 1."""
    M = code_or_M.M if isinstance(code_or_M, GkpCode) else as_real(code_or_M)
    if M.shape != (2, 2):
        raise UnsupportedDimension("code_tau needs a single mode")
    det = np.linalg.det(M)
    if det <= 0:
        raise ValidationError("generator must have positive determinant")
    (a, b), (c, dd) = M / math.sqrt(det)
    return Tau((a * 1j + b) / (c * 1j + dd))


def dual_basis(code):
    """Generator of the symplectic dual lattice, M_perp = J A^-1 M.

    In the canonical basis this is M with both blocks of rows divided by D,
    so the first n rows are logical X-type and the last n logical Z-type
    representatives.
    """
    n = code.n
    Dinv = np.concatenate([1.0 / np.asarray(code.D, dtype=float)] * 2)
    return Dinv[:, None] * code.M


@dataclass(frozen=True)
class PauliBasis:
    e: list
    f: list
    products: tuple  # exact e_i^T J f_i


def canonical_pauli_basis(code):
    if code.n > 2:
        raise UnsupportedDimension("canonical_pauli_basis supports n <= 2")
    Mp = dual_basis(code)
    n = code.n
    e = [Mp[i] for i in range(n)]
    f = [Mp[n + i] for i in range(n)]
    # exact: e_i J f_i = A[i, n+i] / d_i^2
    prods = tuple(code.A[i, n + i] / Fraction(code.D[i]) ** 2 for i in range(n))
    return PauliBasis(e=e, f=f, products=prods)


def _fincke_pohst(B, radius):
    """All nonzero integer vectors c with |c B| <= radius (B has lattice basis rows)."""
    G = B @ B.T
    R = np.linalg.cholesky(G).T  # G = R^T R, R upper triangular
    N = len(G)
    out = []
    c = np.zeros(N, dtype=np.int64)
    r2 = radius * radius * (1 + 1e-12) + 1e-300

    def rec(k, rem):
        # coordinate k given coordinates k+1.. fixed; |R c|^2 splits by rows
        s = sum(R[k, j] * c[j] for j in range(k + 1, N))
        centre = -s / R[k, k]
        half = math.sqrt(max(rem, 0.0)) / R[k, k]
        for ck in range(math.ceil(centre - half - 1e-12), math.floor(centre + half + 1e-12) + 1):
            c[k] = ck
            t = R[k, k] * ck + s
            left = rem - t * t
            if left < -1e-12 * r2:
                continue
            if k == 0:
                if np.any(c):
                    out.append(c.copy())
            else:
                rec(k - 1, left)
        c[k] = 0

    rec(N - 1, r2)
    return np.array(out, dtype=np.int64).reshape(-1, N)


def enumerate_ball(B, radius):
    """Coefficient vectors and lattice vectors of norm <= radius, excluding 0."""
    B = as_real(B)
    C = _fincke_pohst(B, radius)
    return C, C @ B


def shortest_vector(M):
    """(lambda_1, v): minimal nonzero norm of the lattice spanned by the rows of M."""
    M = as_real(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch("M must be square")
    if M.shape[0] > 4:
        raise UnsupportedDimension("enumeration is limited to dimension <= 4")
    radius = np.min(np.linalg.norm(M, axis=1))
    _, X = enumerate_ball(M, radius)
    norms = np.linalg.norm(X, axis=1)
    i = int(np.argmin(norms))
    return float(norms[i]), X[i]


def in_code_lattice(code, coeffs):
    """True for each dual coefficient vector c whose vector c M_perp lies in the code lattice.

    Decided exactly: c M_perp M^-1 = c J A^-1 must be integral.
    """
    R = symplectic_form(code.n, exact=True) @ code.A.inv()
    den = math.lcm(*(x.denominator for row in R.rows for x in row))
    Rint = np.array([[int(x * den) for x in row] for row in R.rows], dtype=object)
    C = np.asarray(coeffs, dtype=object).reshape(-1, Rint.shape[0])
    prod = C.dot(Rint)
    return np.array([all(int(v) % den == 0 for v in row) for row in prod], dtype=bool)


def distance(code):
    """Shortest vector of L_perp outside L, the code distance."""
    if all(d == 1 for d in code.D):
        raise EmptyCoset("type (1, ..., 1): the dual lattice equals the code lattice")
    if code.n > 2:
        raise UnsupportedDimension("distance supports n <= 2")
    Mp = dual_basis(code)
    radius = float(np.min(np.linalg.norm(Mp, axis=1)))
    while True:
        C, X = enumerate_ball(Mp, radius)
        if len(C):
            keep = ~in_code_lattice(code, C)
            if np.any(keep):
                return float(np.min(np.linalg.norm(X[keep], axis=1)))
        radius *= 1.5


def syndrome_reduce(z, tau, d, tol=1e-12):
    """Split z = syndrome + (a + b tau)/d mod Z + tau Z.

    Coordinates are taken in the (1/d, tau/d) frame: the floors give the
    logical label (a, b) mod d and the fractional parts give the syndrome
    inside the cell of (1/d)(Z + tau Z).
    """
    t = complex(_tau_array(tau.value if isinstance(tau, Tau) else tau))
    if int(d) != d or d < 1:
        raise ValidationError("d must be a positive integer")
    z = complex(z)
    beta = z.imag / t.imag
    alpha = z.real - beta * t.real
    u, v = d * alpha, d * beta
    fu, fv = math.floor(u + tol), math.floor(v + tol)
    su, sv = u - fu, v - fv
    su = 0.0 if abs(su) < tol else su
    sv = 0.0 if abs(sv) < tol else sv
    syndrome = (su + sv * t) / d
    return syndrome, (fu % d, fv % d)
