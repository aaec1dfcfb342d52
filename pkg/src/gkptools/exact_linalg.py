"""Exact rational matrices and small real symplectic kernels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import (
    Degenerate,
    DimensionMismatch,
    NotIntegral,
    NotSymplectic,
    UnsupportedDimension,
    ZeroVector,
)

DEFAULT_TOL = 1e-9


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot use {x!r} as an exact entry; snap floats with integer_snap")


@dataclass(frozen=True)
class ExactMatrix:
    """Matrix of Fractions with exact arithmetic."""

    rows: tuple

    def __init__(self, entries):
        if isinstance(entries, ExactMatrix):
            rows = entries.rows
        else:
            rows = tuple(tuple(_frac(x) for x in row) for row in entries)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ExactMatrix needs a non-empty rectangular array")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            try:
                other = ExactMatrix(other)
            except (TypeError, DimensionMismatch):
                return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"ExactMatrix([{body}])"

    def _coerce(self, other):
        return other if isinstance(other, ExactMatrix) else ExactMatrix(other)

    def __add__(self, other):
        other = self._coerce(other)
        if other.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return ExactMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return ExactMatrix([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __matmul__(self, other):
        other = self._coerce(other)
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        return ExactMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows])

    def __rmatmul__(self, other):
        return self._coerce(other) @ self

    def scale(self, s):
        s = _frac(s)
        return ExactMatrix([[s * a for a in r] for r in self.rows])

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    @property
    def T(self):
        return ExactMatrix(list(zip(*self.rows)))

    def _elimination(self):
        """Gauss-Jordan on [self | I]; returns (det, inverse or None)."""
        n, m = self.shape
        if n != m:
            raise DimensionMismatch("square matrix required")
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.rows)]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                return Fraction(0), None
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = -det
            p = a[col][col]
            det *= p
            a[col] = [x / p for x in a[col]]
            for r in range(n):
                if r != col and a[r][col] != 0:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det, ExactMatrix([row[n:] for row in a])

    def det(self):
        return self._elimination()[0]

    def inv(self):
        det, inv = self._elimination()
        if inv is None:
            raise Degenerate("matrix is singular")
        return inv

    def is_integral(self):
        return all(x.denominator == 1 for r in self.rows for x in r)

    def is_unimodular(self):
        return self.shape[0] == self.shape[1] and self.is_integral() and self.det() in (1, -1)

    def mod(self, d):
        if not self.is_integral():
            raise NotIntegral("matrix", 0.0)
        return ExactMatrix([[int(x) % d for x in r] for r in self.rows])

    def tolist(self):
        """Nested lists of ints where possible, Fractions otherwise."""
        return [[int(x) if x.denominator == 1 else x for x in r] for r in self.rows]

    def to_numpy(self):
        return np.array([[float(x) for x in r] for r in self.rows])


def as_real(M):
    """Float array view of a RealMatrix-like input, rejecting NaN/inf."""
    if isinstance(M, ExactMatrix):
        return M.to_numpy()
    a = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DimensionMismatch("matrix has non-finite entries")
    return a


def symplectic_form(n, exact=False):
    """J = [[0, I], [-I, 0]] for n modes."""
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    if exact:
        return ExactMatrix(J.astype(int))
    return J


def _check_even_square(M):
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionMismatch(f"expected a square matrix of even size, got shape {M.shape}")
    return M.shape[0] // 2


def symplectic_gram(M):
    """A = M J M^T for a generator matrix whose rows span the lattice."""
    if isinstance(M, ExactMatrix):
        n2 = M.shape[0]
        if M.shape[1] != n2 or n2 % 2:
            raise DimensionMismatch(f"expected a square matrix of even size, got shape {M.shape}")
        return M @ symplectic_form(n2 // 2, exact=True) @ M.T
    M = as_real(M)
    n = _check_even_square(M)
    return M @ symplectic_form(n) @ M.T


def is_symplectic(S, tol=1e-9):
    S = as_real(S)
    n = _check_even_square(S)
    J = symplectic_form(n)
    return bool(np.max(np.abs(S.T @ J @ S - J)) <= tol)


def require_symplectic(S, tol=1e-9):
    if not is_symplectic(S, tol):
        raise NotSymplectic("S^T J S differs from J")
    return as_real(S)


def integer_snap(A, tol=DEFAULT_TOL):
    """Round a float matrix to an exact integer matrix, refusing if any entry is off by more than tol."""
    a = as_real(A)
    if a.ndim != 2:
        raise DimensionMismatch("integer_snap expects a 2-d array")
    r = np.rint(a)
    dev = np.abs(a - r)
    if dev.size and dev.max() > tol:
        idx = np.unravel_index(np.argmax(dev), dev.shape)
        raise NotIntegral(tuple(int(i) for i in idx), float(dev[idx]))
    return ExactMatrix(r.astype(np.int64).tolist())


def _skew_reduce(A):
    """Symplectic reduction of an integral skew matrix.

    Returns (pairs, W, V) with W = V A V^T block diagonal, one 2x2 block
    [[0, d], [-d, 0]] per entry of ``pairs`` (a list of (p, q, d)).
    """
    N = len(A)
    W = [list(r) for r in A]
    V = [[int(i == j) for j in range(N)] for i in range(N)]

    def add(r, s, m):
        # basis vector e_r += m e_s, applied congruently to W and V
        if m == 0:
            return
        V[r] = [x + m * y for x, y in zip(V[r], V[s])]
        W[r] = [x + m * y for x, y in zip(W[r], W[s])]
        for row in W:
            row[r] += m * row[s]

    def swap(r, s):
        if r == s:
            return
        V[r], V[s] = V[s], V[r]
        W[r], W[s] = W[s], W[r]
        for row in W:
            row[r], row[s] = row[s], row[r]

    rest = list(range(N))
    pairs = []
    while rest:
        p, q = rest[0], rest[1]
        while True:
            nz = [(abs(W[i][j]), i, j) for i in rest for j in rest if i != j and W[i][j] != 0]
            if not nz:
                raise Degenerate("Gram matrix is degenerate")
            _, i, j = min(nz)
            swap(p, i)
            if j == p:
                j = i
            swap(q, j)
            if W[p][q] < 0:
                swap(p, q)
            delta = W[p][q]
            clean = True
            for r in rest:
                if r in (p, q):
                    continue
                # <e_p, e_r + m e_q> = W[p][r] + m delta
                add(r, q, -(W[p][r] // delta))
                # <e_q, e_r + m e_p> = W[q][r] - m delta
                add(r, p, W[q][r] // delta)
                if W[p][r] or W[q][r]:
                    clean = False
            if not clean:
                continue
            others = [r for r in rest if r not in (p, q)]
            bad = next(((r, s) for r in others for s in others if W[r][s] % delta), None)
            if bad is None:
                break
            add(p, bad[0], 1)
        pairs.append((p, q, delta))
        rest = [r for r in rest if r not in (p, q)]
    return pairs, W, V


def symplectic_reduce(A):
    """Canonical form of an integral antisymmetric matrix.

    Returns ``(D, V)`` with V unimodular and V A V^T = [[0, diag(D)], [-diag(D), 0]].
    Only n <= 2 modes are supported.  det V is +1 or -1; it cannot always
    be chosen to be +1 (for A = -J it is forced to be -1).
    """
    A = A if isinstance(A, ExactMatrix) else ExactMatrix(A)
    N, m = A.shape
    if N != m or N % 2:
        raise DimensionMismatch(f"expected a square matrix of even size, got shape {A.shape}")
    if N > 4:
        raise UnsupportedDimension("canonical_type is implemented for n <= 2 modes")
    if not A.is_integral():
        raise NotIntegral("Gram matrix", 0.0)
    if A.T != -A:
        raise DimensionMismatch("matrix is not antisymmetric")
    Ai = [[int(x) for x in r] for r in A.rows]
    pairs, W, V = _skew_reduce(Ai)
    pairs.sort(key=lambda t: t[2])
    order = [p for p, _, _ in pairs] + [q for _, q, _ in pairs]
    Vc = ExactMatrix([V[i] for i in order])
    D = tuple(d for _, _, d in pairs)
    return D, Vc


def canonical_type(A):
    """Type D = (d_1, ..., d_n) of an integral symplectic Gram matrix, d_1 | d_2 | ..."""
    return symplectic_reduce(A)[0]


def canonical_gram(D):
    n = len(D)
    Dm = np.diag(np.asarray(D, dtype=int))
    Z = np.zeros((n, n), dtype=int)
    return ExactMatrix(np.block([[Z, Dm], [-Dm, Z]]).tolist())


def transvection(alpha, n=None, exact=False):
    """t_alpha = I + alpha alpha^T J.

    With ``exact=True`` alpha must be integer or Fraction valued and an
    ExactMatrix is returned.
    """
    if exact:
        a = [_frac(x) for x in alpha]
        N = len(a)
        if N % 2 or (n is not None and N != 2 * n):
            raise DimensionMismatch("alpha must have length 2n")
        aa = ExactMatrix([[x * y for y in a] for x in a])
        return ExactMatrix.identity(N) + aa @ symplectic_form(N // 2, exact=True)
    a = np.asarray(alpha, dtype=float).ravel()
    if a.size % 2 or (n is not None and a.size != 2 * n):
        raise DimensionMismatch("alpha must have length 2n")
    N = a.size
    return np.eye(N) + np.outer(a, a) @ symplectic_form(N // 2)


def reflection(alpha):
    """Householder reflection r_alpha = I - 2 alpha alpha^T / (alpha^T alpha); det -1, never symplectic."""
    a = np.asarray(alpha, dtype=float).ravel()
    nn = a @ a
    if nn == 0:
        raise ZeroVector("reflection needs a nonzero vector")
    return np.eye(a.size) - 2.0 * np.outer(a, a) / nn


def rotation(theta):
    """Phase-space rotation [[cos, sin], [-sin, cos]] generated by exp(-i theta n)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def ccw(theta):
    """Counterclockwise rotation matrix of the plane."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def shear(s):
    return np.array([[1.0, s], [0.0, 1.0]])


def squeeze(lam):
    return np.array([[lam, 0.0], [0.0, 1.0 / lam]])


def _require_sp2(S):
    S = as_real(S)
    if S.shape != (2, 2):
        raise DimensionMismatch("a 2x2 matrix is required")
    return require_symplectic(S)


def angle_of(K):
    """Angle phi with K = ccw(phi), phi in (-pi, pi]."""
    return float(np.arctan2(K[1, 0], K[0, 0]))


def iwasawa(S):
    """S = N A K with N unit upper triangular, A positive diagonal and K in SO(2)."""
    S = _require_sp2(S)
    s2 = S[1]
    a = 1.0 / np.hypot(*s2)
    sn, cs = s2 * a
    K = np.array([[cs, -sn], [sn, cs]])
    NA = S @ K.T
    x = NA[0, 1] * a
    N = np.array([[1.0, x], [0.0, 1.0]])
    A = np.diag([a, 1.0 / a])
    return N, A, K


def bloch_messiah(S, tol=1e-12):
    """S = K1 A K2 with K1, K2 in SO(2) and A = diag(lam, 1/lam), lam >= 1.

    Gauge: K2 has angle in (-pi/2, pi/2]; when S is itself orthogonal we
    return (S, I, I).
    """
    S = _require_sp2(S)
    U, sig, Vt = np.linalg.svd(S)
    if sig[0] - sig[1] <= tol * max(1.0, sig[0]):
        return S.copy(), np.eye(2), np.eye(2)
    lam = sig[0]
    if np.linalg.det(U) < 0:
        U = U @ np.diag([1.0, -1.0])
        Vt = np.diag([1.0, -1.0]) @ Vt
    phi = angle_of(Vt)
    if not (-np.pi / 2 < phi <= np.pi / 2):
        U, Vt = -U, -Vt
    return U, np.diag([lam, 1.0 / lam]), Vt
