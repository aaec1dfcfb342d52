"""Modular forms on the upper half-plane.

All q-series are evaluated after moving tau into the standard fundamental
domain, where |q| <= exp(-pi sqrt 3) ~ 0.0043, and the factor of automorphy
of the reducing matrix is applied afterwards.  Functions accept scalars or
numpy arrays of tau.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .errors import (
    BothZero,
    DegenerateDenominator,
    NotSymplectic,
    NotUpperHalfPlane,
    OnLattice,
    SlowConvergence,
    ValidationError,
)
from .exact_linalg import ExactMatrix

RHO = cmath.exp(2j * math.pi / 3)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Tau:
    """A point of the upper half-plane."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise NotUpperHalfPlane(f"tau must be finite, got {v}")
        if v.imag <= 0:
            raise NotUpperHalfPlane(f"Im tau must be positive, got {v}")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value


def _tau_array(tau):
    if isinstance(tau, Tau):
        return np.asarray(tau.value, dtype=complex)
    t = np.asarray(tau, dtype=complex)
    if not np.all(np.isfinite(t)):
        raise NotUpperHalfPlane("tau must be finite")
    if np.any(t.imag <= 0):
        raise NotUpperHalfPlane("Im tau must be positive")
    return t


def _out(x):
    return complex(x) if np.ndim(x) == 0 else x


def _sigma(p, N):
    s = np.zeros(N + 1, dtype=object)
    for d in range(1, N + 1):
        dp = d**p
        s[d::d] += dp
    return [int(x) for x in s]


@dataclass(frozen=True)
class QSeriesConfig:
    """Truncation order of the q-expansions.  Coefficient tables are cached per instance."""

    n_terms: int = 64

    def __post_init__(self):
        if int(self.n_terms) != self.n_terms or self.n_terms < 8:
            raise ValidationError("n_terms must be an integer >= 8")

    @cached_property
    def coefficients(self):
        N = self.n_terms
        e2 = [1] + [-24 * s for s in _sigma(1, N)[1:]]
        e4 = [1] + [240 * s for s in _sigma(3, N)[1:]]
        e6 = [1] + [-504 * s for s in _sigma(5, N)[1:]]

        def mul(a, b):
            out = [0] * (N + 1)
            for i, x in enumerate(a):
                if x:
                    for j in range(N + 1 - i):
                        out[i + j] += x * b[j]
            return out

        # E4^3 - E6^2 = 1728 q prod (1 - q^n)^24, combined exactly in integers
        disc = [x - y for x, y in zip(mul(mul(e4, e4), e4), mul(e6, e6))]
        as_float = lambda c: np.array([float(x) for x in c])
        return {2: as_float(e2), 4: as_float(e4), 6: as_float(e6), "disc": as_float(disc)}


DEFAULT_QSERIES = QSeriesConfig()


def _polyval(coef, q):
    return np.polynomial.polynomial.polyval(q, coef)


def mobius(gamma, tau):
    """(a tau + b) / (c tau + d)."""
    g = np.asarray(gamma.to_numpy() if isinstance(gamma, ExactMatrix) else gamma, dtype=float)
    if g.shape != (2, 2):
        raise ValidationError("gamma must be 2x2")
    if abs(np.linalg.det(g) - 1.0) > 1e-9:
        raise NotSymplectic("det gamma must be 1")
    t = _tau_array(tau)
    (a, b), (c, d) = g
    den = c * t + d
    if np.any(np.abs(den) == 0):
        raise DegenerateDenominator("c tau + d = 0")
    res = (a * t + b) / den
    return Tau(complex(res)) if np.ndim(res) == 0 else res


def _reduce_arrays(t):
    """Reduce an array of tau into the fundamental domain.

    Returns (tau', a, b, c, d) with tau' = (a tau + b)/(c tau + d), integer
    matrices tracked as float arrays (exact for the moderate sizes seen here).
    """
    shape = np.shape(t)
    t = np.array(t, dtype=complex).reshape(-1)
    a = np.ones(t.shape)
    b = np.zeros(t.shape)
    c = np.zeros(t.shape)
    d = np.ones(t.shape)
    for _ in range(10000):
        n = np.round(t.real)
        t = t - n
        a, b = a - n * c, b - n * d
        inside = np.abs(t) < 1.0 - 1e-15
        if not np.any(inside):
            break
        tt = t[inside]
        t[inside] = -1.0 / tt
        # S = [[0, -1], [1, 0]] on the left
        a[inside], b[inside], c[inside], d[inside] = -c[inside], -d[inside], a[inside], b[inside]
    return tuple(x.reshape(shape) for x in (t, a, b, c, d))


def reduce_fundamental(tau):
    """Reduce tau to the closed fundamental domain.

    Returns ``(tau', word, gamma)`` where gamma is an ExactMatrix in SL(2, Z)
    with gamma.tau = tau' and ``word`` lists the generators applied,
    leftmost first, so that gamma = word[-1] ... word[0]; tokens are
    'S', 'T' and 'T^-1'.
    """
    t = complex(_tau_array(tau))
    word = []
    a, b, c, d = 1, 0, 0, 1
    for _ in range(10000):
        n = int(round(t.real))
        if n:
            t -= n
            a, b = a - n * c, b - n * d
            word += ["T^-1"] * n if n > 0 else ["T"] * (-n)
        if abs(t) < 1.0 - 1e-15:
            t = -1.0 / t
            a, b, c, d = -c, -d, a, b
            word.append("S")
        else:
            break
    # boundary normalisation: Re tau' in [-1/2, 1/2), and left half of the unit arc
    if abs(t.real - 0.5) < 1e-15:
        t -= 1
        a, b = a - c, b - d
        word.append("T^-1")
    return Tau(t), word, ExactMatrix([[a, b], [c, d]])


def eisenstein_series(k, tau, cfg=DEFAULT_QSERIES):
    """Raw q-expansion of E_k with no reduction; refuses |q| > 0.5."""
    t = _tau_array(tau)
    q = np.exp(2j * np.pi * t)
    if np.any(np.abs(q) > 0.5):
        raise SlowConvergence("|q| > 0.5; reduce tau to the fundamental domain first")
    if k not in (2, 4, 6):
        raise ValidationError("k must be 2, 4 or 6")
    return _polyval(cfg.coefficients[k], q)


def eisenstein(k, tau, cfg=DEFAULT_QSERIES):
    """Normalised Eisenstein series E_k(tau), k in {2, 4, 6}."""
    if k not in (2, 4, 6):
        raise ValidationError("k must be 2, 4 or 6")
    t = _tau_array(tau)
    tr, a, b, c, d = _reduce_arrays(t)
    j = c * t + d
    val = eisenstein_series(k, tr, cfg)
    if k == 2:
        # quasi-modular transformation of E_2
        val = (val - 6.0 * c * j / (np.pi * 1j)) / j**2
    else:
        val = val / j**k
    return _out(val)


def g2(tau, cfg=DEFAULT_QSERIES):
    return _out(4.0 * np.pi**4 / 3.0 * np.asarray(eisenstein(4, tau, cfg)))


def g3(tau, cfg=DEFAULT_QSERIES):
    return _out(8.0 * np.pi**6 / 27.0 * np.asarray(eisenstein(6, tau, cfg)))


def _disc_reduced(tr, cfg):
    q = np.exp(2j * np.pi * tr)
    return TWO_PI**12 / 1728.0 * _polyval(cfg.coefficients["disc"], q)


def discriminant(tau, cfg=DEFAULT_QSERIES):
    """Delta = g2^3 - 27 g3^2.

    The difference is formed coefficientwise on the integer q-expansions,
    so the leading cancellation is exact and small values of Delta keep
    full relative precision.
    """
    t = _tau_array(tau)
    tr, a, b, c, d = _reduce_arrays(t)
    return _out(_disc_reduced(tr, cfg) / (c * t + d) ** 12)


def j_invariant(tau, cfg=DEFAULT_QSERIES):
    """j = 1728 g2^3 / Delta."""
    tr, *_ = _reduce_arrays(_tau_array(tau))
    q = np.exp(2j * np.pi * tr)
    coef = cfg.coefficients
    return _out(1728.0 * _polyval(coef[4], q) ** 3 / _polyval(coef["disc"], q))


def lattice_invariants(omega1, omega2, cfg=DEFAULT_QSERIES):
    """(g2, g3) of the lattice omega1 Z + omega2 Z (any orientation)."""
    o1, o2 = complex(omega1), complex(omega2)
    tau = o2 / o1
    if tau.imag < 0:
        tau = -tau
    if tau.imag == 0:
        raise ValidationError("periods are collinear")
    return g2(tau, cfg) / o1**4, g3(tau, cfg) / o1**6


def delta_tilde(gamma, cfg=DEFAULT_QSERIES, check=True):
    """Delta(gamma.i) / (c i + d)^12.

    ``gamma`` is a 2x2 real matrix of determinant 1 or a stack of them with
    shape (..., 2, 2).  The result depends only on the lattice spanned by
    the rows of gamma and is invariant under gamma -> A gamma for A in SL(2, Z).
    """
    g = np.asarray(gamma.to_numpy() if isinstance(gamma, ExactMatrix) else gamma, dtype=float)
    if g.shape[-2:] != (2, 2):
        raise ValidationError("gamma must have shape (..., 2, 2)")
    a, b, c, d = g[..., 0, 0], g[..., 0, 1], g[..., 1, 0], g[..., 1, 1]
    if check and np.any(np.abs(a * d - b * c - 1.0) > 1e-8):
        raise NotSymplectic("det gamma must be 1")
    w1 = d + 1j * c
    t = (b + 1j * a) / w1
    return _out(np.asarray(discriminant(t, cfg)) / w1**12)


def _inv_sin2(w):
    """pi^2 / sin^2(pi w), evaluated through exp(+-2 pi i w) to stay finite off the real axis."""
    w = np.asarray(w, dtype=complex)
    sgn = np.where(w.imag >= 0, 1.0, -1.0)
    u = np.exp(2j * np.pi * sgn * w)
    return -4.0 * np.pi**2 * u / (1.0 - u) ** 2


def _wp_reduced(z, tau, tol=1e-18):
    """Weierstrass p for Z + tau Z with tau in the fundamental domain."""
    y = tau.imag
    # move z into the period cell centred at 0
    beta = np.round(z.imag / y)
    z = z - beta * tau
    z = z - np.round(z.real)
    N = int(np.ceil(-np.log(tol) / (2 * np.pi * y))) + 2
    total = _inv_sin2(z) - np.pi**2 / 3.0
    for n in range(1, N + 1):
        for m in (n, -n):
            total = total + _inv_sin2(z + m * tau) - _inv_sin2(m * tau)
    return total


def wp(z, tau, cfg=DEFAULT_QSERIES):
    """Weierstrass p(z) for the lattice Z + tau Z.

    Lattice sum regularised by 1/(z - w)^2 - 1/w^2, summed over each row
    m + n tau in closed form (pi^2 / sin^2), which converges geometrically in n.
    """
    t = complex(_tau_array(tau))
    z = np.asarray(z, dtype=complex)
    tr, a, b, c, d = (np.asarray(x) for x in _reduce_arrays(np.asarray(t)))
    tr, c, d = complex(tr), float(c), float(d)
    mu = c * t + d
    zr = z / mu
    beta = zr.imag / tr.imag
    alpha = zr.real - beta * tr.real
    off = np.abs(alpha - np.round(alpha)) + np.abs(beta - np.round(beta))
    if np.any(off < 1e-12):
        raise OnLattice("z lies on the period lattice")
    return _out(_wp_reduced(zr, tr) / mu**2)


def wp_half_periods(tau, cfg=DEFAULT_QSERIES):
    """(e1, e2, e3) = p(1/2), p(tau/2), p((1 + tau)/2)."""
    t = complex(_tau_array(tau))
    vals = wp(np.array([0.5, t / 2, (1 + t) / 2]), t, cfg)
    return tuple(complex(v) for v in vals)


def lattice_half_periods(omega1, omega2):
    """p at omega1/2, omega2/2, (omega1 + omega2)/2 for the lattice they span."""
    o1, o2 = complex(omega1), complex(omega2)
    t = o2 / o1
    if t.imag < 0:
        raise ValidationError("need Im(omega2/omega1) > 0")
    return tuple(e / o1**2 for e in wp_half_periods(t))


def sphere_normalize(g2v, g3v):
    """Rescale (g2, g3) -> (c^-4 g2, c^-6 g3) onto the unit sphere |g2|^2 + |g3|^2 = 1.

    Returns (g2', g3', c) with real c > 0.
    """
    a2, a3 = abs(complex(g2v)) ** 2, abs(complex(g3v)) ** 2
    if a2 == 0 and a3 == 0:
        raise BothZero("(g2, g3) = (0, 0)")
    # norm(s) with c = exp(s) is strictly decreasing; bracket the root
    f = lambda s: a2 * math.exp(-8 * s) + a3 * math.exp(-12 * s) - 1.0
    lo, hi = -1.0, 1.0
    while f(lo) < 0:
        lo *= 2
    while f(hi) > 0:
        hi *= 2
    s = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    c = math.exp(s)
    return complex(g2v) / c**4, complex(g3v) / c**6, c
