import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkptools.clifford import rademacher_dedekind, word_product
from gkptools.errors import NotClosed, NotHyperbolic, NotInGammaD, ValidationError, ZeroDistanceCrossing
from gkptools.exact_linalg import ExactMatrix, ccw
from gkptools.lattice import M_A2, hexagonal_code, square_code
from gkptools.modular import j_invariant
from gkptools.paths import (
    braid_trace,
    closure,
    concat,
    gamma_d_member,
    geodesic_for,
    half_period_roots,
    level_action,
    linking_number,
    magic_label_transform,
    monodromy,
    parse_path,
    rotation_path,
    seifert_coords,
    shear_path,
    squeeze_path,
    torsion_points,
    two_torsion_permutation,
    winding,
)

SQ = np.eye(2)


def test_linking_examples():
    assert linking_number(rotation_path(SQ, np.pi / 2)) == -3
    assert linking_number(rotation_path(M_A2, np.pi / 3)) == -2
    assert linking_number(shear_path(SQ, 1.0)) == 1
    assert linking_number(rotation_path(SQ, np.pi)) == -6


def test_winding_residual_small():
    for p in (rotation_path(SQ, np.pi / 2), rotation_path(M_A2, np.pi / 3), shear_path(SQ, 1.0)):
        w, mag = winding(p)
        assert abs(w - round(w)) <= 0.05 and mag < 1e-6


def test_full_turn_is_minus_twelve():
    # -12 phi / 2 pi for any starting lattice
    assert linking_number(rotation_path(np.array([[1.0, 0.3], [0.0, 1.0]]), 2 * np.pi)) == -12


def test_open_path_rejected():
    with pytest.raises(NotClosed):
        linking_number(rotation_path(SQ, 0.3))
    with pytest.raises(NotClosed):
        closure(squeeze_path(SQ, 1.7))


def test_degenerate_path_near_trefoil():
    # a closed shear loop through a very long thin lattice: Delta~ ~ exp(-2 pi y)
    y = 8.0
    M0 = np.array([[np.sqrt(y), 0.0], [0.0, 1 / np.sqrt(y)]])
    with pytest.raises(ZeroDistanceCrossing):
        linking_number(shear_path(M0, 1.0))


def test_certificates():
    assert closure(rotation_path(SQ, np.pi / 2)) == ExactMatrix([[0, -1], [1, 0]])
    assert closure(shear_path(SQ, 1.0)) == ExactMatrix([[1, 1], [0, 1]])
    assert closure(shear_path(SQ, 3.0)) == ExactMatrix([[1, 3], [0, 1]])


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=15)
def test_linking_additive_under_concatenation(m, n):
    p1 = shear_path(SQ, float(m)) if m else rotation_path(SQ, 2 * np.pi)
    p2 = rotation_path(SQ, n * np.pi / 2) if n else shear_path(SQ, 2.0)
    p = concat(p1, p2)
    assert closure(p) == closure(p1) @ closure(p2)
    assert linking_number(p) == linking_number(p1) + linking_number(p2)


@pytest.mark.parametrize("A", [[[2, 1], [1, 1]], [[3, 2], [1, 1]], [[5, 2], [2, 1]], [[1, 1], [1, 2]], [[4, 1], [3, 1]]])
def test_ghys_geodesics(A):
    p = geodesic_for(A)
    assert closure(p) == ExactMatrix(A)
    assert linking_number(p) == rademacher_dedekind(A)


def test_geodesic_needs_hyperbolic():
    with pytest.raises(NotHyperbolic):
        geodesic_for([[0, -1], [1, 0]])


def test_monodromy():
    I = ExactMatrix.identity(2)
    assert monodromy(rotation_path(SQ, np.pi), 2) == I
    assert monodromy(rotation_path(SQ, np.pi / 2), 2) == ExactMatrix([[0, 1], [1, 0]])
    assert monodromy(shear_path(SQ, 1.0), 2) == ExactMatrix([[1, 1], [0, 1]])


@given(st.integers(0, 3), st.integers(-2, 2), st.integers(2, 5))
@settings(max_examples=20)
def test_monodromy_homomorphism(k, s, d):
    p1 = rotation_path(SQ, k * np.pi / 2) if k else shear_path(SQ, 1.0)
    p2 = shear_path(SQ, float(s)) if s else rotation_path(SQ, np.pi)
    lhs = monodromy(concat(p1, p2), d)
    rhs = (monodromy(p1, d) @ monodromy(p2, d)).mod(d)
    assert lhs == rhs


def test_braid_permutations():
    bt = braid_trace(shear_path(SQ, 1.0))
    assert bt.permutation == (0, 2, 1)
    assert bt.permutation == two_torsion_permutation(closure(shear_path(SQ, 1.0)))
    bt = braid_trace(rotation_path(SQ, np.pi / 2))
    assert bt.permutation == (1, 0, 2)
    assert bt.permutation == two_torsion_permutation(ExactMatrix([[0, -1], [1, 0]]))


def test_half_period_roots_sum_to_zero():
    e = half_period_roots(np.array([[1.0, 0.2], [0.1, 1.02]]))
    assert abs(e.sum()) < 1e-9 * np.abs(e).max()


def test_gamma_d_and_level_action():
    assert gamma_d_member([[3, 2], [4, 3]], 2)
    assert gamma_d_member([[-1, 0], [0, -1]], 3)
    assert not gamma_d_member([[1, 1], [0, 1]], 2)
    t, z = level_action([[1, 2], [0, 1]], 1j, 0.5, 2)
    assert abs(t - (1j + 2)) < 1e-12 and abs(z - 0.5) < 1e-12
    with pytest.raises(NotInGammaD):
        level_action([[1, 1], [0, 1]], 1j, 0.5, 2)


def test_level_action_preserves_torsion_grid():
    tau, d = 0.2 + 1.1j, 3
    G = word_product(["T", "T", "T"]) @ ExactMatrix([[1, 0], [3, 1]])  # [[10, 3], [3, 1]]
    assert gamma_d_member(G, d)
    t2, _ = level_action(G, tau, 0.0, d)
    (a, b), (c, dd) = G.to_numpy()
    pts = torsion_points(tau, d)
    img = [p / (c * tau + dd) for p in pts]
    grid = torsion_points(t2, d)
    # image points agree with the new grid modulo the lattice Z + t2 Z
    for z in img:
        ok = False
        for w in grid:
            delta = z - w
            beta = delta.imag / t2.imag
            alpha = delta.real - beta * t2.real
            if abs(alpha - round(alpha)) < 1e-9 and abs(beta - round(beta)) < 1e-9:
                ok = True
        assert ok


def test_seifert_coords():
    tau, angle = seifert_coords(np.eye(2))
    assert abs(tau.value - 1j) < 1e-12 and abs(angle) < 1e-12
    tau, angle = seifert_coords(ccw(0.4))
    assert abs(tau.value - 1j) < 1e-12
    tau, _ = seifert_coords(M_A2)
    assert abs(j_invariant(tau)) < 1e-6


def test_magic_label_transform():
    S = np.array([[2.0, 1.0], [1.0, 1.0]])
    t, z = magic_label_transform(S, 1j, 0.3 + 0.2j)
    Si = np.linalg.inv(S)
    assert abs(t - (Si[0, 0] * 1j + Si[0, 1]) / (Si[1, 0] * 1j + Si[1, 1])) < 1e-12
    assert abs(z - (2 * (0.3 + 0.2j) + 1) / ((0.3 + 0.2j) + 1)) < 1e-12


def test_parse_path():
    p = parse_path("rotate:pi/4, rotate:pi/4", square_code(2).M)
    assert linking_number(p) == -3
    p = parse_path("shear:1", hexagonal_code(2))
    assert closure(p) == ExactMatrix([[1, 1], [0, 1]])
    for bad in ("", "spin:1", "rotate", "squeeze:-1"):
        with pytest.raises(ValidationError):
            parse_path(bad, SQ)
