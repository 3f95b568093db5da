import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from recoupling.dmatrix import d_matrix
from recoupling.exact import wigner6j
from recoupling.identities import sixj_symmetries
from recoupling.spin import Spin


@st.composite
def sixj_args(draw, tmax=16):
    ta = draw(st.integers(0, tmax))
    tb = draw(st.integers(0, tmax))
    tc = draw(st.sampled_from(range(abs(ta - tb), ta + tb + 1, 2)))
    td = draw(st.integers(0, tmax))
    te = draw(st.sampled_from(range(abs(td - tc), td + tc + 1, 2)))
    tf = draw(st.integers(0, tmax))
    return ta, tb, tc, td, te, tf


@settings(max_examples=100, deadline=None)
@given(sixj_args())
def test_sixj_tetrahedral_symmetry(t):
    ref = wigner6j(*(Spin(x) for x in t))
    for q in sixj_symmetries(t):
        assert wigner6j(*(Spin(x) for x in q)) == ref


@settings(max_examples=100, deadline=None)
@given(sixj_args())
def test_sixj_bounded(t):
    # |{6j}| <= 1 / sqrt(max over columns of [j][j'])
    v = abs(float(wigner6j(*(Spin(x) for x in t))))
    bound = min(1 / math.sqrt((t[i] + 1) * (t[i + 3] + 1)) for i in range(3))
    assert v <= bound + 1e-15


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10), st.floats(0, math.pi), st.floats(0, math.pi))
def test_dmatrix_group_law(ts, a, b):
    da, db = d_matrix(ts / 2, a), d_matrix(ts / 2, b)
    assert np.abs(da @ da.T - np.eye(ts + 1)).max() < 1e-12
    assert np.abs(da @ db - d_matrix(ts / 2, a + b)).max() < 1e-10
