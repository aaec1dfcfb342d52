"""Clifford gates as lattice automorphisms, word decompositions and the Rademacher function."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    NotAutomorphism,
    NotHyperbolic,
    NotHyperbolicModQ,
    NotIntegral,
    NotPrime,
    NotSymplectic,
    TooLarge,
    ValidationError,
)
from .exact_linalg import ExactMatrix, as_real, integer_snap, is_symplectic
from .lattice import GkpCode, dual_basis

S_MAT = ExactMatrix([[0, -1], [1, 0]])
T_MAT = ExactMatrix([[1, 1], [0, 1]])
R_MAT = T_MAT
L_MAT = ExactMatrix([[1, 0], [1, 1]])


def _int2x2(A):
    if isinstance(A, ExactMatrix):
        if A.shape != (2, 2) or not A.is_integral():
            raise ValidationError("expected an integral 2x2 matrix")
        return tuple(int(x) for r in A.rows for x in r)
    a = np.asarray(A)
    if a.shape == (4,):
        a = a.reshape(2, 2)
    if a.shape != (2, 2):
        raise ValidationError("expected a 2x2 matrix")
    vals = [x for x in a.ravel().tolist()]
    if any(int(x) != x for x in vals):
        raise ValidationError("matrix entries must be integers")
    return tuple(int(x) for x in vals)


def _sl2(A):
    a, b, c, d = _int2x2(A)
    if a * d - b * c != 1:
        raise ValidationError(f"det = {a * d - b * c}, expected 1")
    return a, b, c, d


def _mat(t):
    a, b, c, d = t
    return ExactMatrix([[a, b], [c, d]])


# integral and real representations


def integral_rep(code: GkpCode, g, tol=1e-9):
    """U with U M = M g^T, required integral and A-preserving."""
    g = as_real(g)
    if g.shape != code.M.shape:
        raise ValidationError("g has the wrong size for this code")
    if not is_symplectic(g, tol):
        raise NotSymplectic("g is not symplectic")
    Uf = code.M @ g.T @ np.linalg.inv(code.M)
    try:
        U = integer_snap(Uf, tol=1e-7)
    except NotIntegral as exc:
        raise NotAutomorphism(f"g does not map the lattice to itself ({exc})") from None
    if U @ code.A @ U.T != code.A:
        raise NotAutomorphism("U does not preserve the symplectic Gram matrix")
    return U


def real_rep(code: GkpCode, U):
    """g = (M^-1 U M)^T, the phase-space map realising U."""
    U = U if isinstance(U, ExactMatrix) else ExactMatrix(np.asarray(U, dtype=int).tolist())
    if U.shape != code.A.shape or not U.is_integral() or U @ code.A @ U.T != code.A:
        raise NotAutomorphism("U must be integral with U A U^T = A")
    M = code.M
    return (np.linalg.inv(M) @ U.to_numpy() @ M).T


def dual_automorphism_check(code: GkpCode, g, tol=1e-7):
    """True iff g maps both the lattice and its symplectic dual onto themselves."""
    g = as_real(g)
    if not is_symplectic(g):
        raise NotSymplectic("g is not symplectic")
    for B in (code.M, dual_basis(code)):
        U = B @ g.T @ np.linalg.inv(B)
        if np.max(np.abs(U - np.rint(U))) > tol or abs(abs(np.linalg.det(np.rint(U))) - 1) > 0.5:
            return False
    return True


def logical_action(U, d):
    """U reduced entrywise mod d (entries in 0..d-1)."""
    U = U if isinstance(U, ExactMatrix) else ExactMatrix(np.asarray(U, dtype=int).tolist())
    return U.mod(int(d))


# S/T words


def st_word(A):
    """Word in S, T, T^-1 whose product is +-A.

    Euclid on the first column: A = T^k1 S T^k2 S ... (+-T^m).
    Returns (tokens, sign) with product(tokens) == sign * A.
    """
    a, b, c, d = _sl2(A)
    tokens = []
    while c != 0:
        k = round(Fraction(a, c))
        if k:
            tokens += ["T"] * k if k > 0 else ["T^-1"] * (-k)
            a, b = a - k * c, b - k * d
        # peel off S: A = S (S^-1 A), S^-1 = [[0, 1], [-1, 0]]
        tokens.append("S")
        a, b, c, d = c, d, -a, -b
    # remaining matrix is eps * T^m with eps = a = d = +-1
    eps = a
    m = b * eps
    tokens += ["T"] * m if m > 0 else ["T^-1"] * (-m)
    return tokens, eps


def word_product(tokens):
    gens = {"S": S_MAT, "T": T_MAT, "T^-1": ExactMatrix([[1, -1], [0, 1]]), "R": R_MAT, "L": L_MAT}
    P = ExactMatrix.identity(2)
    for t in tokens:
        P = P @ gens[t]
    return P


# R/L words


@dataclass(frozen=True)
class RLWord:
    """Exponents (r1, l1, ..., rN, lN) of R^r1 L^l1 ... R^rN L^lN, all >= 1.

    ``conjugator`` C and ``sign`` satisfy product == sign * C^-1 A C for the
    source matrix A.
    """

    exponents: tuple
    conjugator: ExactMatrix = None
    sign: int = 1

    def __post_init__(self):
        e = tuple(int(x) for x in self.exponents)
        if not e or len(e) % 2 or any(x < 0 for x in e):
            raise ValidationError("an R/L word needs an even number of nonnegative exponents")
        object.__setattr__(self, "exponents", e)

    def matrix(self):
        P = ExactMatrix.identity(2)
        for i, x in enumerate(self.exponents):
            g = R_MAT if i % 2 == 0 else L_MAT
            a, b, c, dd = (int(v) for r in g.rows for v in r)
            P = P @ ExactMatrix([[a, b * x], [c * x, dd]]) if x else P
        return P

    def __str__(self):
        return " ".join(f"{'RL'[i % 2]}^{x}" for i, x in enumerate(self.exponents) if x)


def _cf_quadratic(P, D, Q, max_terms=10000):
    """Continued fraction of (P + sqrt D)/Q; returns (terms, start of period)."""
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = math.isqrt(D)
    seen = {}
    terms = []
    for i in range(max_terms):
        if (P, Q) in seen:
            return terms, seen[(P, Q)]
        seen[(P, Q)] = i
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // (-Q)) - 1
        terms.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("continued fraction period not found")


def rl_word(A):
    """Conjugate a hyperbolic A into a positive R/L word.

    The attracting fixed point x of A (or -A if the trace is negative) is a
    quadratic irrational; its continued fraction [b0; b1, ..., period] gives
    C = R^b0 L^b1 ... over an even-length preperiod and the primitive word
    from the period.  C^-1 (+-A) C is then a positive power of that word.
    """
    a, b, c, d = _sl2(A)
    t = a + d
    if abs(t) <= 2:
        raise NotHyperbolic(f"|trace| = {abs(t)} <= 2")
    sign = 1
    if t < 0:
        a, b, c, d, t, sign = -a, -b, -c, -d, -t, -1
    disc = t * t - 4
    terms, k = _cf_quadratic(a - d, disc, 2 * c)
    pre, period = terms[:k], terms[k:]
    if len(pre) % 2:
        pre = pre + [period[0]]
        period = period[1:] + period[:1]
    if len(period) % 2:
        period = period * 2
    C = ExactMatrix.identity(2)
    for i, x in enumerate(pre):
        g = ExactMatrix([[1, x], [0, 1]]) if i % 2 == 0 else ExactMatrix([[1, 0], [x, 1]])
        C = C @ g
    target = C.inv() @ _mat((a, b, c, d)) @ C
    P0 = RLWord(tuple(period)).matrix()
    P = P0
    reps = 1
    while P != target:
        if P[0, 0] + P[1, 1] > t:
            raise NotHyperbolic("could not conjugate into the positive cone")
        P = P @ P0
        reps += 1
    return RLWord(tuple(period) * reps, conjugator=C, sign=sign)


def rademacher_rl(word: RLWord):
    """psi = sum of R exponents minus sum of L exponents."""
    e = word.exponents if isinstance(word, RLWord) else tuple(word)
    return int(sum(e[0::2]) - sum(e[1::2]))


# Dedekind formula


def _saw(x: Fraction):
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def dedekind_sum(a, c):
    """s(a, c) = sum_{n=1}^{|c|-1} ((n/c)) ((n a / c))."""
    a, c = int(a), int(c)
    return sum((_saw(Fraction(n, c)) * _saw(Fraction(n * a, c)) for n in range(1, abs(c))), Fraction(0))


def _sign(x):
    return (x > 0) - (x < 0)


def _psi_fraction(a, b, c, d):
    if c == 0:
        phi = Fraction(b, d)
    else:
        phi = Fraction(a + d, c) - 12 * _sign(c) * dedekind_sum(a, c)
    return phi - 3 * _sign(c * (a + d))


def rademacher_dedekind(A):
    """psi(A) = Phi(A) - 3 sign(c(a + d)) with the Dedekind symbol Phi."""
    val = _psi_fraction(*_sl2(A))
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral Rademacher value {val}")
    return int(val)


def rademacher(A):
    return rademacher_dedekind(A)


def _centered(x, q):
    x %= q
    return x - q if 2 * x > q else x


def _is_prime(q):
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


def _residue_psi(a, b, c, d, q):
    """Dedekind formula on residues in 0..q-1, read mod q.

    Denominators only contain primes below q, so the value is a well-defined
    element of Z_q.
    """
    v = _psi_fraction(a, b, c, d)
    return v.numerator * pow(v.denominator, -1, q) % q


def rademacher_mod(A, q):
    """psi of an element of SL(2, Z_q), computed from its residue representative in 0..q-1.

    Hyperbolic mod q means |centered trace| > 2 with the centered residue in
    (-q/2, q/2].  The value depends on A only through A mod q.
    """
    q = int(q)
    if not _is_prime(q):
        raise NotPrime(f"{q} is not prime")
    a, b, c, d = (x % q for x in _int2x2(A))
    if (a * d - b * c) % q != 1:
        raise ValidationError("det(A mod q) != 1")
    if abs(_centered(a + d, q)) <= 2:
        raise NotHyperbolicModQ(f"centered trace {_centered(a + d, q)} has |.| <= 2")
    return _residue_psi(a, b, c, d, q)


@dataclass(frozen=True)
class Histogram:
    q: int
    counts: tuple  # counts[k] for k in Z_q
    group_order: int  # |SL(2, Z_q)| seen during enumeration

    @property
    def total(self):
        return sum(self.counts)

    @property
    def densities(self):
        n = self.total
        return tuple(c / n if n else 0.0 for c in self.counts)

    def rows(self):
        return [(k, c, p) for k, (c, p) in enumerate(zip(self.counts, self.densities))]


def rademacher_stats(q):
    """Histogram of psi mod q over all hyperbolic elements of SL(2, Z_q)."""
    q = int(q)
    if not _is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if q > 31:
        raise TooLarge("exhaustive enumeration is limited to q <= 31")
    counts = Counter()
    order = 0
    inv = {x: pow(x, -1, q) for x in range(1, q)}
    for a in range(q):
        for c in range(q):
            if a == 0 and c == 0:
                continue
            # solutions (b, d) of a d - b c = 1 form a line: one particular
            # solution plus multiples of (a, c)
            if a:
                b0, d0 = 0, inv[a]
            else:
                b0, d0 = (-inv[c]) % q, 0
            for s in range(q):
                b, d = (b0 + s * a) % q, (d0 + s * c) % q
                order += 1
                if abs(_centered(a + d, q)) <= 2:
                    continue
                counts[_residue_psi(a, b, c, d, q)] += 1
    return Histogram(q=q, counts=tuple(counts[k] for k in range(q)), group_order=order)
