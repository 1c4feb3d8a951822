"""Randomized invariants."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from schlafli import geometry as geo
from schlafli import qdeform as qd
from schlafli import reduction as rd
from schlafli import sixj
from schlafli import spinor as sp

finite = st.floats(-3, 3, allow_nan=False)
spinors = st.tuples(finite, finite, finite, finite).map(lambda t: np.array([t[0] + 1j * t[1], t[2] + 1j * t[3]]))
vec3 = st.tuples(finite, finite, finite).map(np.array)


@given(spinors)
def test_hopf_norm(z):
    I, J = sp.hopf_map(z)
    assert abs(np.linalg.norm(J) - I) <= 1e-12 * max(1.0, I)


@given(vec3, st.floats(-10, 10))
def test_su2_homomorphism(n, a):
    if np.linalg.norm(n) < 1e-3:
        return
    n = n / np.linalg.norm(n)
    u = sp.su2_axis_angle(n, a)
    assert np.allclose(sp.so3_from_su2(u), sp.rotation_matrix(n, a), atol=1e-11)


@given(st.lists(st.floats(0.5, 3.0), min_size=6, max_size=6), st.sampled_from(geo.RELABELINGS))
@settings(max_examples=60)
def test_classification_relabel(J, perm):
    J = np.array(J)
    assert geo.classify(J[list(perm)]) is geo.classify(J)


@given(st.lists(st.integers(0, 5), min_size=6, max_size=6))
@settings(max_examples=80)
def test_sixj_column_swap(d):
    args = [x / 2 for x in d]
    swapped = [args[1], args[0], args[2], args[4], args[3], args[5]]
    assert sixj.exact_6j(args) == sixj.exact_6j(swapped)


@given(st.integers(0, 12), st.floats(0, 2 * np.pi))
def test_character_bounded(two_j, phi):
    assert abs(rd.character(two_j / 2, phi)) <= two_j + 1 + 1e-9


@given(vec3, vec3)
def test_coproduct_matches_product(a, b):
    J1, J2 = qd.from_cartesian(*a), qd.from_cartesian(*b)
    m = qd.J_from_b(qd.b_from_J(J1) @ qd.b_from_J(J2))
    c = qd.comult2(J1, J2)
    assert abs(c.Jz - m.Jz) <= 1e-10 and abs(c.Jminus - m.Jminus) <= 1e-9 * max(1, abs(c.Jminus))
