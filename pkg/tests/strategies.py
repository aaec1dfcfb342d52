"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st

from gkptools.clifford import word_product

small_int = st.integers(min_value=-6, max_value=6)


@st.composite
def sl2z(draw, max_len=8):
    """Random SL(2, Z) element as a product of S, T, T^-1."""
    tokens = draw(st.lists(st.sampled_from(["S", "T", "T^-1"]), max_size=max_len))
    return word_product(tokens)


@st.composite
def upper_half_plane(draw, ymin=0.3, ymax=3.0):
    x = draw(st.floats(-2.0, 2.0, allow_nan=False))
    y = draw(st.floats(ymin, ymax, allow_nan=False))
    return complex(x, y)


@st.composite
def sp2r(draw):
    """Random element of SL(2, R) via Iwasawa coordinates."""
    x = draw(st.floats(-2.0, 2.0))
    a = draw(st.floats(0.4, 2.5))
    th = draw(st.floats(-np.pi, np.pi))
    N = np.array([[1.0, x], [0.0, 1.0]])
    A = np.diag([a, 1 / a])
    K = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    return N @ A @ K


positive_exponents = st.lists(st.integers(1, 4), min_size=2, max_size=6).filter(lambda e: len(e) % 2 == 0)
