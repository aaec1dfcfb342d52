import cmath
import math

import numpy as np
import pytest
from hypothesis import given

from gkptools.errors import BothZero, NotUpperHalfPlane, OnLattice, SlowConvergence, ValidationError
from gkptools.exact_linalg import ExactMatrix
from gkptools.modular import (
    RHO,
    QSeriesConfig,
    Tau,
    delta_tilde,
    discriminant,
    eisenstein,
    eisenstein_series,
    g2,
    g3,
    j_invariant,
    lattice_half_periods,
    lattice_invariants,
    mobius,
    reduce_fundamental,
    sphere_normalize,
    wp,
    wp_half_periods,
)

from strategies import sl2z, upper_half_plane


def lattice_sum(k, tau, N=400):
    """Direct sum over m + n tau, |m|, |n| <= N, excluding 0 (absolutely convergent for k >= 4)."""
    m = np.arange(-N, N + 1)
    w = m[:, None] + tau * m[None, :]
    w[N, N] = 1.0
    terms = w ** (-k)
    terms[N, N] = 0.0
    return terms.sum()


def wp_direct(z, tau, N=300):
    m = np.arange(-N, N + 1)
    w = m[:, None] + tau * m[None, :]
    mask = np.ones_like(w, dtype=bool)
    mask[N, N] = False
    w = w[mask]
    return 1 / z**2 + np.sum(1 / (z - w) ** 2 - 1 / w**2)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_tau_validation():
    with pytest.raises(NotUpperHalfPlane):
        Tau(1.0 - 0.5j)
    with pytest.raises(NotUpperHalfPlane):
        j_invariant(0.3)
    assert Tau(2j).value == 2j


@pytest.mark.parametrize("tau", [1j, RHO, 0.2 + 1.1j, -0.45 + 0.95j])
def test_g2_g3_against_lattice_sum(tau):
    # tail of the k = 4 sum is O(N^-2), of k = 6 is O(N^-4)
    # absolute tolerances on the scale |g2(i)| ~ 189, |g3(rho)| ~ 150 (g2(rho) = g3(i) = 0)
    assert abs(g2(tau) - 60 * lattice_sum(4, tau)) < 2e-5 * 189
    assert abs(g3(tau) - 140 * lattice_sum(6, tau)) < 1e-8 * 150


def test_j_against_q_expansion():
    tau = 2.0j
    q = cmath.exp(2j * math.pi * tau)
    # j = 1/q + 744 + 196884 q + 21493760 q^2 + 864299970 q^3 + ...
    expansion = 1 / q + 744 + 196884 * q + 21493760 * q**2 + 864299970 * q**3 + 20245856256 * q**4
    assert rel(j_invariant(tau), expansion) < 1e-12


def test_discriminant_against_product_formula():
    for tau in (1j, 0.3 + 1.2j, RHO + 0.1j):
        q = cmath.exp(2j * math.pi * tau)
        prod = np.prod([(1 - q**n) ** 24 for n in range(1, 200)])
        assert rel(discriminant(tau), (2 * math.pi) ** 12 * q * prod) < 1e-12


def test_special_values():
    assert abs(j_invariant(1j) - 1728) < 1e-6
    assert abs(j_invariant(RHO)) < 1e-6
    assert abs(g3(1j)) < 1e-10 and abs(g2(RHO)) < 1e-10
    assert abs(eisenstein(2, 1j) - 3 / math.pi) < 1e-12  # E2(i) = 3/pi


def test_discriminant_is_tiny_near_cusp():
    # full relative precision although Delta ~ e^(-20 pi)
    tau = 10j
    q = math.exp(-20 * math.pi)
    assert rel(discriminant(tau), (2 * math.pi) ** 12 * q * (1 - q) ** 24) < 1e-12


@given(upper_half_plane(), sl2z())
def test_j_invariance_and_delta_weight(tau, gamma):
    (a, b), (c, d) = gamma.to_numpy()
    t2 = mobius(gamma, tau).value
    assert rel(j_invariant(t2), j_invariant(tau)) < 1e-6 or abs(j_invariant(t2) - j_invariant(tau)) < 1e-6
    assert rel(discriminant(t2), (c * tau + d) ** 12 * discriminant(tau)) < 1e-6


@given(upper_half_plane(ymin=0.4))
def test_dlog_delta_is_e2(tau):
    h = 1e-5 * tau.imag
    num = (np.log(discriminant(tau + h) / discriminant(tau - h))) / (2 * h)
    assert rel(num, 2j * math.pi * eisenstein(2, tau)) < 1e-5


def test_vectorised_eval():
    taus = np.array([1j, 0.3 + 1.2j, RHO])
    assert np.allclose(j_invariant(taus), [j_invariant(t) for t in taus])


@given(upper_half_plane(ymin=0.05))
def test_reduce_fundamental(tau):
    tr, word, gamma = reduce_fundamental(tau)
    t = tr.value
    assert abs(t.real) <= 0.5 + 1e-12 and abs(t) >= 1 - 1e-12
    assert gamma.det() == 1
    assert abs(mobius(gamma, tau).value - t) < 1e-9 * max(1, abs(t))


def test_reduce_word_matches_matrix():
    from gkptools.clifford import word_product

    tr, word, gamma = reduce_fundamental(0.3 + 0.1j)
    assert word_product(list(reversed(word))) == gamma
    assert abs(tr.value - 1j) < 1e-12


def test_eisenstein_series_refuses_slow_convergence():
    with pytest.raises(SlowConvergence):
        eisenstein_series(4, 0.05j)
    with pytest.raises(ValidationError):
        eisenstein(8, 1j)


def test_qseries_truncation_insensitive():
    t = 0.1 + 1.0j
    assert rel(j_invariant(t, QSeriesConfig(16)), j_invariant(t, QSeriesConfig(128))) < 1e-13


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.2j, 1.7 + 0.4j])
def test_e_roots_are_cubic_roots(tau):
    e = np.array(wp_half_periods(tau))
    roots = np.roots([4, 0, -g2(tau), -g3(tau)])
    assert np.allclose(np.sort_complex(e), np.sort_complex(roots), rtol=1e-9, atol=1e-9)
    assert abs(e.sum()) < 1e-9 * np.max(np.abs(e))
    disc = 16 * ((e[0] - e[1]) * (e[0] - e[2]) * (e[1] - e[2])) ** 2
    assert rel(disc, discriminant(tau)) < 1e-9


def test_wp_against_direct_sum():
    tau = 0.2 + 1.1j
    z = 0.31 + 0.17j
    assert rel(wp(z, tau), wp_direct(z, tau)) < 1e-4
    with pytest.raises(OnLattice):
        wp(1 + tau, tau)


def test_lattice_level_helpers():
    o1, o2 = 2.0, 2.0j
    G2, G3 = lattice_invariants(o1, o2)
    assert rel(G2, g2(1j) / 16) < 1e-12
    e = lattice_half_periods(o1, o2)
    assert rel(e[0], wp_half_periods(1j)[0] / 4) < 1e-12


def test_delta_tilde_left_invariance():
    M = np.array([[1.2, 0.3], [0.5, 1.0]])
    M = M / np.sqrt(np.linalg.det(M))
    A = ExactMatrix([[2, 1], [1, 1]]).to_numpy()
    assert rel(delta_tilde(A @ M), delta_tilde(M)) < 1e-9
    stack = np.stack([M, A @ M])
    assert np.allclose(delta_tilde(stack), delta_tilde(M))


def test_sphere_normalize():
    a, b, c = sphere_normalize(16.0, 0.0)
    assert abs(c - 2) < 1e-12 and abs(a - 1) < 1e-12
    a, b, c = sphere_normalize(g2(0.3 + 1.1j), g3(0.3 + 1.1j))
    assert abs(abs(a) ** 2 + abs(b) ** 2 - 1) < 1e-12
    with pytest.raises(BothZero):
        sphere_normalize(0, 0)
