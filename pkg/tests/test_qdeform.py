import numpy as np
import pytest

from schlafli import qdeform as qd


@pytest.fixture
def rng():
    return np.random.default_rng(50)


def test_zero_is_identity():
    assert np.allclose(qd.b_from_J(qd.ZERO), np.eye(2))
    J = qd.DeformedJ(0.4, 0.2 - 0.1j)
    assert qd.comult2(J, qd.ZERO) == J
    assert qd.comult2(qd.ZERO, J) == J


def test_cartesian_components():
    J = qd.from_cartesian(1.0, 2.0, 3.0)
    assert (J.Jx, J.Jy, J.Jz) == (1.0, 2.0, 3.0)
    assert J.Jplus == complex(1, 2)


def test_b_round_trip(rng):
    for J0 in (1.0, 0.3, 5.0):
        for _ in range(20):
            J = qd.random_J(rng)
            assert qd.J_from_b(qd.b_from_J(J, J0), J0).close_to(J, 1e-12)


def test_b_is_in_group(rng):
    b = qd.check_b(qd.b_from_J(qd.random_J(rng, 3.0)))
    assert np.linalg.det(b) == pytest.approx(1)


@pytest.mark.parametrize(
    "b",
    [
        [[1, 0], [1, 1]],
        [[-1, 0], [0, -1]],
        [[2, 0], [0, 2]],
        [[1j, 0], [0, -1j]],
        np.eye(3),
    ],
)
def test_check_b_rejects(b):
    with pytest.raises(qd.DeformError):
        qd.check_b(b)


def test_coproduct_is_matrix_product(rng):
    for J0 in (1.0, 2.5):
        for _ in range(50):
            J1, J2 = qd.random_J(rng), qd.random_J(rng)
            prod = qd.J_from_b(qd.b_from_J(J1, J0) @ qd.b_from_J(J2, J0), J0)
            assert qd.comult2(J1, J2, J0).close_to(prod, 1e-12)


def test_coassociative(rng):
    for _ in range(50):
        J1, J2, J3 = (qd.random_J(rng) for _ in range(3))
        left = qd.comult2(qd.comult2(J1, J2), J3)
        right = qd.comult2(J1, qd.comult2(J2, J3))
        three = qd.comult3(J1, J2, J3)
        assert left.close_to(three, 1e-12) and right.close_to(three, 1e-12)


def test_not_cocommutative():
    J1 = qd.from_cartesian(1, 0, 1)
    J2 = qd.from_cartesian(0, 1, -0.5)
    assert not qd.comult2(J1, J2).close_to(qd.comult2(J2, J1), 1e-3)


def test_classical_limit(rng):
    # for small momenta relative to J0 the coproduct is ordinary vector addition
    J1, J2 = qd.random_J(rng), qd.random_J(rng)
    J0 = 1e6
    s = qd.comult2(J1, J2, J0)
    assert s.Jz == pytest.approx(J1.Jz + J2.Jz)
    assert abs(s.Jminus - (J1.Jminus + J2.Jminus)) < 1e-5


def test_diangle_closure_exact(rng):
    for J0 in (1.0, 0.7):
        for _ in range(100):
            J = qd.random_J(rng, 2.0)
            partner = qd.diangle_closure(J, J0)
            assert qd.comult2(J, partner, J0) == qd.DeformedJ(0.0, 0j)
            b = qd.b_from_J(J, J0) @ qd.b_from_J(partner, J0)
            assert np.allclose(b, np.eye(2), atol=1e-12)


def test_hyperbolic_action_preserves_distance(rng):
    for _ in range(20):
        b = qd.b_from_J(qd.random_J(rng))
        p = qd.hyperbolic_point(qd.b_from_J(qd.random_J(rng)))
        q = qd.hyperbolic_point(qd.b_from_J(qd.random_J(rng)))
        assert qd.hyperbolic_distance(qd.act(b, p), qd.act(b, q)) == pytest.approx(
            qd.hyperbolic_distance(p, q), rel=1e-9, abs=1e-12
        )


def test_length_of_pure_boost():
    # b = diag(e^{-t/2}, e^{t/2}) moves the origin to diag(e^{-t}, e^{t}), distance t
    assert qd.length(qd.DeformedJ(0.8, 0j)) == pytest.approx(0.8)
    assert qd.length(qd.ZERO) == 0.0


def test_triangle_demo(rng):
    out = qd.triangle_demo(qd.random_J(rng), qd.random_J(rng))
    assert out["product_defect"] < 1e-12
    assert np.allclose(out["lengths"], out["distances"], atol=1e-9)
