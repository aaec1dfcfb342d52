"""Paths in Sp(2, R): linking numbers, modular geodesics, root braids and monodromy.

A path is a chain of segments t in [0, 1] -> M(t).  Rows of M span a
lattice; a row (u, v) is read as the complex number v + i u, so the second
row gives omega1, the first gives omega2 and M.i = omega2 / omega1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm

from .errors import (
    NonIntegerWinding,
    NotClosed,
    NotHyperbolic,
    NotInGammaD,
    NotIntegral,
    RootCollision,
    ValidationError,
    ZeroDistanceCrossing,
)
from .exact_linalg import ExactMatrix, as_real, ccw, integer_snap, iwasawa
from .expr import parse_real
from .modular import Tau, _tau_array, delta_tilde, discriminant, lattice_half_periods, reduce_fundamental

KINDS = ("rotation", "shear", "squeeze", "expm")


@dataclass(frozen=True)
class Segment:
    """One smooth piece: M(t) = left @ F(t), with F(0) = start.

    rotation: F = start @ ccw(phi t)         (lattice turns by exp(i phi t))
    shear:    F = [[1, s t], [0, 1]] @ start (tau -> tau + s t)
    squeeze:  F = start @ diag(lam^t, lam^-t)
    expm:     F = start @ expm(t X)
    """

    kind: str
    param: object
    start: np.ndarray
    left: np.ndarray = field(default_factory=lambda: np.eye(2))

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown segment kind {self.kind!r}")
        if self.kind == "squeeze" and not float(self.param) > 0:
            raise ValidationError("squeeze parameter must be positive")

    def at(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        z, o = np.zeros_like(t), np.ones_like(t)
        if self.kind == "rotation":
            c, s = np.cos(self.param * t), np.sin(self.param * t)
            F = self.start @ np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
        elif self.kind == "shear":
            F = np.stack([np.stack([o, self.param * t], -1), np.stack([z, o], -1)], -2) @ self.start
        elif self.kind == "squeeze":
            lt = float(self.param) ** t
            F = self.start @ np.stack([np.stack([lt, z], -1), np.stack([z, 1.0 / lt], -1)], -2)
        else:
            X = np.asarray(self.param, dtype=float)
            F = np.stack([self.start @ expm(x * X) for x in t])
        return self.left @ F

    def end(self):
        return self.at(1.0)[0]


@dataclass(frozen=True)
class SymplecticPath:
    segments: tuple

    def __post_init__(self):
        if not self.segments:
            raise ValidationError("a path needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def start(self):
        s = self.segments[0]
        return s.left @ s.start

    @property
    def end(self):
        return self.segments[-1].end()

    def at(self, s):
        """Evaluate at s in [0, len(segments)]; segment k covers [k, k+1]."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        n = len(self.segments)
        k = np.clip(np.floor(s).astype(int), 0, n - 1)
        out = np.empty(s.shape + (2, 2))
        for i, seg in enumerate(self.segments):
            m = k == i
            if np.any(m):
                out[m] = seg.at(s[m] - i)
        return out

    def then(self, kind, param):
        """Append a segment starting where the path currently ends."""
        return SymplecticPath(self.segments + (Segment(kind, param, start=self.end),))

    def translated(self, A):
        """Left-translate the whole path by a constant matrix."""
        A = as_real(A)
        return SymplecticPath(tuple(replace(s, left=A @ s.left) for s in self.segments))


def make_path(M0, kind, param):
    return SymplecticPath((Segment(kind, param, start=as_real(_basis(M0))),))


def _basis(M0):
    M = getattr(M0, "M", M0)
    M = as_real(M)
    if M.shape != (2, 2):
        raise ValidationError("paths live in Sp(2, R): a 2x2 generator is required")
    return M


def rotation_path(M0, phi):
    return make_path(M0, "rotation", float(phi))


def shear_path(M0, s):
    return make_path(M0, "shear", float(s))


def squeeze_path(M0, lam):
    return make_path(M0, "squeeze", float(lam))


def concat(p1, p2):
    """p1 followed by p2 translated to start where p1 ends.

    Requires p1 to be closed: p2 is left-multiplied by p1's certificate, so
    closure(concat) = closure(p1) @ closure(p2).
    """
    A1 = closure(p1).to_numpy()
    return SymplecticPath(p1.segments + p2.translated(A1).segments)


def closure(path, tol=1e-7):
    """Integral A with M(end) = A M(start)."""
    Af = path.end @ np.linalg.inv(path.start)
    try:
        A = integer_snap(Af, tol)
    except NotIntegral as exc:
        raise NotClosed(exc.deviation) from None
    if A.det() != 1:
        raise NotClosed(abs(float(A.det()) - 1.0))
    return A


def _normalised(Ms):
    det = np.linalg.det(Ms)
    return Ms / np.sqrt(det)[..., None, None]


def _adaptive(path, f, ok, n0=64, max_points=1 << 18):
    """Sample f along the path, bisecting intervals until ok(prev, next) holds everywhere."""
    nseg = len(path.segments)
    s = np.linspace(0.0, nseg, n0 * nseg + 1)
    v = f(path.at(s))
    while True:
        good = ok(v[:-1], v[1:])
        if np.all(good):
            return s, v
        bad = np.nonzero(~good)[0]
        if len(s) + len(bad) > max_points:
            return s, v
        mid = 0.5 * (s[bad] + s[bad + 1])
        vm = f(path.at(mid))
        s = np.insert(s, bad + 1, mid)
        v = np.insert(v, bad + 1, vm, axis=0)


def winding(path, eps_rel=1e-12, steps=64):
    """Unrounded winding of Delta~(M(t)) around 0 and the log-magnitude mismatch at the ends."""
    closure(path)
    floor = eps_rel * abs(discriminant(1j))
    f = lambda Ms: np.asarray(delta_tilde(_normalised(Ms)), dtype=complex).reshape(-1)
    ok = lambda a, b: np.abs(np.angle(b / a)) < np.pi / 4
    s, v = _adaptive(path, f, ok, n0=steps)
    if np.min(np.abs(v)) < floor:
        raise ZeroDistanceCrossing("Delta~ fell below the floor: the path touches the trefoil")
    if not np.all(ok(v[:-1], v[1:])):
        raise NonIntegerWinding("phase could not be resolved")
    w = float(np.sum(np.angle(v[1:] / v[:-1])) / (2 * np.pi))
    mag = abs(math.log(abs(v[-1])) - math.log(abs(v[0])))
    return w, mag


def linking_number(path, eps_rel=1e-12, steps=64):
    """Linking number of a closed path with the trefoil Delta = 0."""
    w, mag = winding(path, eps_rel, steps)
    k = int(round(w))
    if abs(w - k) > 0.05 or mag > 1e-6:
        raise NonIntegerWinding(f"winding {w:.6f}, log-magnitude mismatch {mag:.2e}")
    return k


def geodesic_for(A):
    """Path M0 diag(lam^t, lam^-t) with A M0 = M0 diag(lam, 1/lam); for trace < -2 it is the geodesic of -A."""
    A = A if isinstance(A, ExactMatrix) else ExactMatrix(np.asarray(A, dtype=int).tolist())
    Af = A.to_numpy()
    if A.det() != 1:
        raise ValidationError("det A must be 1")
    t = Af[0, 0] + Af[1, 1]
    if abs(t) <= 2:
        raise NotHyperbolic(f"|trace| = {abs(t):g} <= 2")
    if t < 0:
        Af, t = -Af, -t
    lam = (t + math.sqrt(t * t - 4)) / 2
    (a, b), (c, d) = Af
    # eigenvectors of [[a, b], [c, d]] for lam and 1/lam
    def eig(mu):
        v = np.array([b, mu - a]) if abs(b) > abs(c) else np.array([mu - d, c])
        return v / np.linalg.norm(v)
    M0 = np.column_stack([eig(lam), eig(1 / lam)])
    if np.linalg.det(M0) < 0:
        M0[:, 1] *= -1
    M0 /= math.sqrt(np.linalg.det(M0))
    return squeeze_path(M0, lam)


def _periods(Ms):
    w1 = Ms[..., 1, 1] + 1j * Ms[..., 1, 0]
    w2 = Ms[..., 0, 1] + 1j * Ms[..., 0, 0]
    return w1, w2


def half_period_roots(M):
    """(e1, e2, e3) = p(omega1/2), p(omega2/2), p((omega1 + omega2)/2) for the lattice of M."""
    w1, w2 = _periods(as_real(M))
    return np.array(lattice_half_periods(complex(w1), complex(w2)))


def _roots_along(Ms):
    return np.array([half_period_roots(M) for M in Ms])


def _match(prev, new):
    """Permutation p with new[p[k]] the continuation of prev[k], and whether it is safe."""
    best = min(itertools.permutations(range(3)), key=lambda p: sum(abs(new[p[k]] - prev[k]) for k in range(3)))
    radius = min(abs(prev[i] - prev[j]) for i, j in ((0, 1), (0, 2), (1, 2))) / 3.0
    safe = all(abs(new[best[k]] - prev[k]) < radius for k in range(3))
    return best, safe


@dataclass(frozen=True)
class BraidTrace:
    permutation: tuple  # strand k starts at e_k and ends at e_permutation[k] (0-based)
    crossings: tuple  # sequence of (position, +1/-1) Artin generators sigma_position^(+-1)


def braid_trace(path, resolution=64, max_points=1 << 14):
    """Follow (e1, e2, e3) along the path.

    Root labels are continued by nearest-neighbour matching, refining the
    sampling until every step moves each root by less than a third of the
    smallest root gap.  Crossings are recorded whenever two strands swap
    their order by real part; the strand with larger imaginary part at the
    swap passes over, which is reported as sigma^+1 when it is the one moving
    to the right.
    """
    nseg = len(path.segments)
    s = list(np.linspace(0.0, nseg, resolution * nseg + 1))
    vals = list(_roots_along(path.at(np.array(s))))
    if min(abs(vals[0][i] - vals[0][j]) for i, j in ((0, 1), (0, 2), (1, 2))) < 1e-12:
        raise RootCollision("roots coincide at the start of the path")
    strands = [vals[0]]
    k = 0
    while k < len(s) - 1:
        perm, safe = _match(strands[-1], vals[k + 1])
        if not safe:
            if len(s) >= max_points:
                raise RootCollision("roots came too close to follow reliably")
            mid = 0.5 * (s[k] + s[k + 1])
            s.insert(k + 1, mid)
            vals.insert(k + 1, _roots_along(path.at(np.array([mid])))[0])
            continue
        strands.append(np.array([vals[k + 1][perm[j]] for j in range(3)]))
        k += 1
    strands = np.array(strands)
    # a closed path ends on the starting lattice, so every strand ends on a starting root
    permutation = tuple(int(np.argmin(np.abs(strands[0] - strands[-1][k]))) for k in range(3))
    crossings = []
    order = list(np.argsort(strands[0].real, kind="stable"))
    for row in strands[1:]:
        target = list(np.argsort(row.real, kind="stable"))
        # bubble the current order into the new one, one adjacent swap at a time
        cur = order[:]
        while cur != target:
            for p in range(2):
                a, b = cur[p], cur[p + 1]
                if target.index(a) > target.index(b):
                    over_right = row[a].imag > row[b].imag  # a moves right
                    crossings.append((p + 1, 1 if over_right else -1))
                    cur[p], cur[p + 1] = b, a
        order = cur
    return BraidTrace(permutation=permutation, crossings=tuple(crossings))


# half-period k corresponds to the row-coefficient vector c_k with omega = c_k . (omega2, omega1)
_HALF_COEFFS = ((0, 1), (1, 0), (1, 1))


def two_torsion_permutation(A):
    """Permutation of (e1, e2, e3) induced by c -> c A mod 2 on half-period labels."""
    A = A if isinstance(A, ExactMatrix) else ExactMatrix(A)
    a, b, c, d = (int(x) % 2 for r in A.rows for x in r)
    out = []
    for u, v in _HALF_COEFFS:
        img = ((u * a + v * c) % 2, (u * b + v * d) % 2)
        out.append(_HALF_COEFFS.index(img))
    return tuple(out)


def monodromy(path, d):
    """Logical action of a closed path: its certificate reduced mod d."""
    return closure(path).mod(int(d))


def gamma_d_member(A, d):
    """True iff A or -A is congruent to I mod d."""
    A = A if isinstance(A, ExactMatrix) else ExactMatrix(A)
    I = ExactMatrix.identity(2)
    d = int(d)
    return A.mod(d) == I.mod(d) or (-A).mod(d) == I.mod(d)


def level_action(gamma, tau, z, d):
    """Gamma(d) action (gamma.tau, z / (c tau + d))."""
    if not gamma_d_member(gamma, d):
        raise NotInGammaD(f"matrix is not in Gamma({d})")
    G = gamma if isinstance(gamma, ExactMatrix) else ExactMatrix(gamma)
    (a, b), (c, dd) = G.to_numpy()
    t = complex(_tau_array(tau.value if isinstance(tau, Tau) else tau))
    j = c * t + dd
    return (a * t + b) / j, complex(z) / j


def torsion_points(tau, d):
    """The d^2 points (a + b tau)/d, 0 <= a, b < d."""
    t = complex(_tau_array(tau.value if isinstance(tau, Tau) else tau))
    d = int(d)
    if d < 1:
        raise ValidationError("d must be >= 1")
    return [(a + b * t) / d for b in range(d) for a in range(d)]


def seifert_coords(gamma):
    """(tau in the fundamental domain, fibre angle).

    tau is gamma.i reduced by some g in SL(2, Z); the angle is read off the
    SO(2) factor K of iwasawa(g gamma), written K = rotation(angle).
    """
    G = as_real(gamma)
    if G.shape != (2, 2) or abs(np.linalg.det(G) - 1) > 1e-9:
        raise ValidationError("gamma must be a 2x2 matrix of determinant 1")
    (a, b), (c, d) = G
    tau0 = (a * 1j + b) / (c * 1j + d)
    tr, _, g = reduce_fundamental(tau0)
    _, _, K = iwasawa(g.to_numpy() @ G)
    angle = float(np.arctan2(K[0, 1], K[0, 0])) % (2 * np.pi)
    if angle > 2 * np.pi - 1e-12:
        angle = 0.0
    return tr, angle


def _mobius_any(S, z):
    (a, b), (c, d) = S
    return (a * z + b) / (c * z + d)


def magic_label_transform(S, tau, z_inv):
    """(S^-1 . tau, S . z_inv)."""
    S = as_real(S)
    if S.shape != (2, 2) or abs(np.linalg.det(S) - 1) > 1e-9:
        raise ValidationError("S must be a 2x2 symplectic matrix")
    t = complex(_tau_array(tau.value if isinstance(tau, Tau) else tau))
    return complex(_mobius_any(np.linalg.inv(S), t)), complex(_mobius_any(S, complex(z_inv)))


def parse_path(text, M0):
    """Build a path from ``rotate:<angle>,shear:<s>,squeeze:<lambda>,...`` starting at M0."""
    if not text or not text.strip():
        raise ValidationError("empty path")
    names = {"rotate": "rotation", "rotation": "rotation", "shear": "shear", "squeeze": "squeeze"}
    segs = []
    M = _basis(M0)
    for part in text.split(","):
        key, sep, val = part.strip().partition(":")
        if not sep or key not in names:
            raise ValidationError(f"bad path segment {part!r}")
        kind = names[key]
        x = parse_real(val)
        seg = Segment(kind, x, start=M)
        segs.append(seg)
        M = seg.end()
    return SymplecticPath(tuple(segs))
