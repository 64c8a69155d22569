"""Hypothesis strategies shared by the test modules."""

import random

from hypothesis import assume, strategies as st

from qtrick.exact_linalg import IntMatrix, det
from qtrick.instances import random_unimodular


def int_matrices(rows, cols=None, lo=-6, hi=6):
    cols = rows if cols is None else cols
    return st.lists(
        st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows
    ).map(IntMatrix)


@st.composite
def square_matrices(draw, max_n=4, lo=-6, hi=6):
    n = draw(st.integers(1, max_n))
    return draw(int_matrices(n, n, lo, hi))


@st.composite
def unimodulars(draw, n, steps=12):
    seed = draw(st.integers(0, 10**6))
    return random_unimodular(n, random.Random(seed), steps)


@st.composite
def alternating_forms(draw, max_g=2, lo=-4, hi=4):
    """Nondegenerate integral alternating matrices of rank 2g."""
    g = draw(st.integers(1, max_g))
    r = 2 * g
    upper = draw(st.lists(st.integers(lo, hi), min_size=r * (r - 1) // 2, max_size=r * (r - 1) // 2))
    rows = [[0] * r for _ in range(r)]
    it = iter(upper)
    for i in range(r):
        for j in range(i + 1, r):
            x = next(it)
            rows[i][j], rows[j][i] = x, -x
    E = IntMatrix(rows)
    assume(det(E) != 0)
    return E
