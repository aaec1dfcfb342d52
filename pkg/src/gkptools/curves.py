"""Period matrices of real hyperelliptic curves and the GKP codes they define."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import sqrtm

from .errors import (
    CoincidentRoots,
    ComplexRoots,
    NotPositive,
    NotPositiveDefinite,
    QuadratureFailure,
    SingularBlock,
    UnsupportedDimension,
    ValidationError,
)
from .exact_linalg import symplectic_form
from .lattice import GkpCode, from_generator
from .modular import _tau_array, g2, g3, j_invariant, reduce_fundamental


@dataclass(frozen=True)
class HyperellipticCurve:
    """y^2 = leading * prod (x - lambda_k) with real, distinct branch points."""

    branch_points: tuple
    leading: float = 1.0

    def __post_init__(self):
        pts = np.asarray(self.branch_points)
        if np.iscomplexobj(pts) and np.any(np.abs(pts.imag) > 1e-12):
            raise ComplexRoots("only real branch points are supported")
        pts = np.sort(np.real(pts).astype(float))
        if len(pts) not in (3, 4, 5, 6):
            raise UnsupportedDimension("need 3 to 6 branch points (genus 1 or 2)")
        if np.min(np.diff(pts)) <= 1e-12 * max(1.0, np.max(np.abs(pts))):
            raise CoincidentRoots("branch points must be distinct")
        if not self.leading or not math.isfinite(self.leading):
            raise ValidationError("leading coefficient must be finite and nonzero")
        object.__setattr__(self, "branch_points", tuple(float(x) for x in pts))
        object.__setattr__(self, "leading", float(self.leading))

    @property
    def genus(self):
        return (len(self.branch_points) - 1) // 2

    def f(self, x):
        x = np.asarray(x, dtype=float)
        return self.leading * np.prod([x - lam for lam in self.branch_points], axis=0)


@dataclass(frozen=True)
class PeriodMatrix:
    Pi: np.ndarray  # n x 2n, rows = differentials x^(i-1) dx / y, columns = (a_1..a_n, b_1..b_n)
    Omega: np.ndarray


def _interval_integrals(curve, k, nodes):
    """Integrals of x^(i-1)/sqrt(f) over [lambda_k, lambda_k+1], i = 1..g.

    Each half of the interval is mapped by x = endpoint +- t^2, which removes
    the inverse square-root singularities; sqrt(f) is taken as sqrt|f| or
    i sqrt|f| according to the sign of f.
    """
    lam = curve.branch_points
    lo, hi = lam[k], lam[k + 1]
    h = 0.5 * (hi - lo)
    t, w = np.polynomial.legendre.leggauss(nodes)
    T = 0.5 * math.sqrt(h) * (t + 1.0)
    W = 0.5 * math.sqrt(h) * w
    others_lo = [x for i, x in enumerate(lam) if i != k]
    others_hi = [x for i, x in enumerate(lam) if i != k + 1]
    out = np.zeros(curve.genus, dtype=complex)
    for end, others, sgn in ((lo, others_lo, 1.0), (hi, others_hi, -1.0)):
        x = end + sgn * T * T
        # f = leading * (x - end) * g(x) with x - end = sgn t^2
        g = curve.leading * np.prod([x - o for o in others], axis=0)
        fsign = np.sign(sgn * g)
        if np.any(fsign != fsign[0]):
            raise QuadratureFailure("sign of f changes inside a branch interval")
        phase = 1.0 if fsign[0] > 0 else -1j
        root = np.sqrt(np.abs(g))  # sqrt|f| = t sqrt|g|
        for i in range(curve.genus):
            out[i] += phase * np.sum(2.0 * W * x**i / root)
    return out


def _chain_periods(curve, nodes):
    lam = curve.branch_points
    c = [2.0 * _interval_integrals(curve, k, nodes) for k in range(len(lam) - 1)]
    return c


def riemann_bilinear_check(Pi, tol=1e-8):
    """H = i Pi J Pi^dagger; must be Hermitian positive definite for a valid cycle basis."""
    Pi = np.atleast_2d(np.asarray(Pi, dtype=complex))
    n = Pi.shape[0]
    if Pi.shape != (n, 2 * n):
        raise ValidationError("Pi must be n x 2n")
    H = 1j * Pi @ symplectic_form(n) @ Pi.conj().T
    scale = max(1.0, np.max(np.abs(H)))
    if np.max(np.abs(H - H.conj().T)) > tol * scale:
        raise NotPositiveDefinite("H is not Hermitian")
    ev = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    if np.min(ev) <= tol * scale:
        raise NotPositiveDefinite(f"smallest eigenvalue {np.min(ev):.3g}")
    return H


def normalize_period(Pi, tol=1e-8):
    """Omega = A^-1 B for Pi = (A | B), checked symmetric with Im Omega > 0."""
    Pi = np.atleast_2d(np.asarray(Pi, dtype=complex))
    n = Pi.shape[0]
    if Pi.shape != (n, 2 * n):
        raise ValidationError("Pi must be n x 2n")
    A, B = Pi[:, :n], Pi[:, n:]
    if abs(np.linalg.det(A)) < 1e-14 * max(1.0, np.max(np.abs(A))) ** n:
        raise SingularBlock("first n x n block is singular")
    Om = np.linalg.solve(A, B)
    if np.max(np.abs(Om - Om.T)) > tol * max(1.0, np.max(np.abs(Om))):
        raise NotPositive("Omega is not symmetric")
    if np.min(np.linalg.eigvalsh(0.5 * (Om.imag + Om.imag.T))) <= 0:
        raise NotPositive("Im Omega is not positive definite")
    return Om


def period_matrix(curve, nodes=64):
    """Periods of x^(i-1) dx / y over a/b cycles built from the branch intervals.

    With chain integrals c_k = 2 int over [lambda_k, lambda_k+1]: genus 1 uses
    a = c_1, b = c_2; genus 2 uses a = (c_1, c_3), b = (c_2 + c_4, c_4).  The
    relative signs of the c_k depend on sheet choices, so they are searched
    in a fixed order until Omega is symmetric with Im Omega > 0 and the
    bilinear form is positive.
    """
    g = curve.genus
    c = _chain_periods(curve, nodes)[: 2 * g]
    for signs in itertools.product((1, -1), repeat=len(c)):
        ck = [s * x for s, x in zip(signs, c)]
        if g == 1:
            cols = [ck[0], ck[1]]
        else:
            cols = [ck[0], ck[2], ck[1] + ck[3], ck[3]]
        Pi = np.column_stack(cols)
        try:
            Om = normalize_period(Pi)
            riemann_bilinear_check(Pi)
        except (NotPositive, NotPositiveDefinite, SingularBlock):
            continue
        return PeriodMatrix(Pi=Pi, Omega=Om)
    raise QuadratureFailure("no sign choice of the cycles gives a Riemann matrix")


def real_representation(Omega):
    """M with M^T = [[I, X], [0, Y]] for Omega = X + i Y."""
    Om = np.atleast_2d(np.asarray(Omega, dtype=complex))
    n = Om.shape[0]
    X, Y = Om.real, Om.imag
    if np.max(np.abs(Om - Om.T)) > 1e-8 * max(1.0, np.max(np.abs(Om))):
        raise NotPositive("Omega must be symmetric")
    if np.min(np.linalg.eigvalsh(0.5 * (Y + Y.T))) <= 0:
        raise NotPositive("Im Omega must be positive definite")
    MT = np.block([[np.eye(n), X], [np.zeros((n, n)), Y]])
    return MT.T


def symplectic_residual(M, Y):
    """max |M (J_2 (x) Y^-1) M^T - J|."""
    n = Y.shape[0]
    Yi = np.linalg.inv(Y)
    K = np.block([[np.zeros((n, n)), Yi], [-Yi, np.zeros((n, n))]])
    return float(np.max(np.abs(M @ K @ M.T - symplectic_form(n))))


def curve_generator(Omega):
    """M_C = M (I_2 (x) Y^-1/2), a symplectic generator for the lattice of Omega."""
    Om = np.atleast_2d(np.asarray(Omega, dtype=complex))
    M = real_representation(Om)
    Y = 0.5 * (Om.imag + Om.imag.T)
    Yh = np.real(sqrtm(np.linalg.inv(Y)))
    return M @ np.kron(np.eye(2), Yh)


def gkp_from_curve(curve, d) -> GkpCode:
    """Scaled code sqrt(d) M_C of type d I from the curve's period matrix."""
    if int(d) != d or d < 1:
        raise ValidationError("d must be a positive integer")
    pm = period_matrix(curve)
    MC = curve_generator(pm.Omega)
    return from_generator(math.sqrt(d) * MC)


def elliptic_curve(tau):
    """Curve y^2 = 4x^3 - g2(tau) x - g3(tau), refusing non-real roots."""
    t = complex(_tau_array(tau))
    roots = np.roots([4.0, 0.0, -g2(t), -g3(t)])
    if np.max(np.abs(roots.imag)) > 1e-8 * max(1.0, np.max(np.abs(roots))):
        raise ComplexRoots(f"cubic for tau={t} has non-real roots")
    return HyperellipticCurve(tuple(roots.real), leading=4.0)


def elliptic_roundtrip(tau):
    """Rebuild tau from the periods of its Weierstrass cubic (up to SL(2, Z))."""
    t = complex(_tau_array(tau))
    curve = elliptic_curve(t)
    pm = period_matrix(curve)
    tr, _, _ = reduce_fundamental(complex(pm.Omega[0, 0]))
    return tr.value
