"""Spinor algebra on C^2: Hopf map, SU(2) in axis-angle form, time reversal.

Spinors are complex arrays of shape (2,). Nothing is normalized: every map
here is homogeneous, and the level sets I = const carry the physics.
"""
from __future__ import annotations

import numpy as np

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
IDENTITY = np.eye(2, dtype=complex)
#: exp(-i (pi/2) sigma_y)
U0 = np.array([[0, -1], [1, 0]], dtype=complex)

UNIT_TOL = 1e-12
NORM_MATCH_TOL = 1e-9


class SpinorError(ValueError):
    pass


def as_spinor(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (2,):
        raise SpinorError(f"a spinor has two components, got {z.shape[0]}")
    return z


def action(z) -> float:
    """I = z^dagger z / 2."""
    z = as_spinor(z)
    return 0.5 * float(np.real(np.vdot(z, z)))


def angular_momentum(z) -> np.ndarray:
    """J_i = z^dagger sigma_i z / 2."""
    z = as_spinor(z)
    return 0.5 * np.real(np.einsum("a,iab,b->i", z.conj(), SIGMA, z))


def hopf_map(z) -> tuple[float, np.ndarray]:
    """Return (I, J) for a spinor; |J| = I."""
    return action(z), angular_momentum(z)


def sigma_dot(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return np.einsum("i,iab->ab", n, SIGMA)


def su2_axis_angle(n, alpha: float) -> np.ndarray:
    """u(n, alpha) = exp(-i (alpha/2) n.sigma) = cos(alpha/2) - i sin(alpha/2) n.sigma."""
    n = np.asarray(n, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
        raise SpinorError("rotation axis must be a unit vector")
    return np.cos(alpha / 2) * IDENTITY - 1j * np.sin(alpha / 2) * sigma_dot(n)


def su2_exp(v) -> np.ndarray:
    """exp(-(i/2) v.sigma) for an arbitrary 3-vector v (axis v/|v|, angle |v|)."""
    v = np.asarray(v, dtype=float)
    a = np.linalg.norm(v)
    if a == 0.0:
        return IDENTITY.copy()
    return su2_axis_angle(v / a, a)


def is_su2(u, tol: float = UNIT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    return (
        u.shape == (2, 2)
        and np.allclose(u.conj().T @ u, IDENTITY, atol=tol, rtol=0)
        and abs(np.linalg.det(u) - 1) <= tol
    )


def so3_from_su2(u) -> np.ndarray:
    """R_ij(u) = tr(u^dagger sigma_i u sigma_j) / 2, so that J(u z) = R(u) J(z)."""
    u = np.asarray(u, dtype=complex)
    m = np.einsum("ba,ibc,cd,jda->ij", u.conj(), SIGMA, u, SIGMA)
    return 0.5 * np.real(m)


def rotation_matrix(n, alpha: float) -> np.ndarray:
    """Rodrigues rotation by alpha about the unit vector n (independent of SU(2))."""
    n = np.asarray(n, dtype=float)
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(alpha) * K + (1 - np.cos(alpha)) * (K @ K)


def time_reversal(z) -> np.ndarray:
    """Theta z = U0 conj(z); flips J, keeps I, and Theta^2 = -1."""
    z = as_spinor(z)
    return U0 @ z.conj()


def quaternion_matrix(z) -> np.ndarray:
    """M(z) = (z, Theta z); det M = 2 I."""
    z = as_spinor(z)
    return np.column_stack([z, time_reversal(z)])


def project_su2(m) -> np.ndarray:
    """Nearest SU(2) element to a matrix close to SU(2) (polar factor, det fixed)."""
    w, _, vh = np.linalg.svd(np.asarray(m, dtype=complex))
    u = w @ vh
    return u / np.sqrt(np.linalg.det(u))


def recover_group(z, zp) -> np.ndarray:
    """The unique g in SU(2) with z = g zp, g = M(z) M(zp)^-1."""
    z, zp = as_spinor(z), as_spinor(zp)
    i1, i2 = action(z), action(zp)
    if i1 == 0.0 or i2 == 0.0:
        raise SpinorError("group element undefined for a zero spinor")
    if abs(i1 - i2) > NORM_MATCH_TOL * max(i1, i2):
        raise SpinorError(f"spinor norms differ: I = {i1!r} vs I' = {i2!r}")
    Mp = quaternion_matrix(zp)
    # M(zp)^-1 = M(zp)^dagger / (2 I')
    g = quaternion_matrix(z) @ Mp.conj().T / (2 * i2)
    return project_su2(g)


def lift_chart(J) -> str:
    """Default chart for section_lift: "north" unless J points below the equator."""
    return "north" if np.asarray(J, dtype=float)[2] >= 0 else "south"


def section_lift(J, chart: str | None = None) -> np.ndarray:
    """A spinor zeta with hopf_map(zeta) = (|J|, J).

    Uses zeta = sqrt(2|J|) (cos(t/2), e^{i p} sin(t/2)) with (t, p) the polar
    angles of J; on the southern hemisphere the chart multiplied by e^{-ip}
    is used instead, which is smooth at the -z axis. Passing ``chart`` pins
    one chart, which keeps a smooth family of J smooth upstairs too.
    """
    J = np.asarray(J, dtype=float)
    mag = float(np.linalg.norm(J))
    if mag == 0.0:
        return np.zeros(2, dtype=complex)
    t = np.arccos(np.clip(J[2] / mag, -1.0, 1.0))
    p = np.arctan2(J[1], J[0])
    r = np.sqrt(2 * mag)
    chart = chart or lift_chart(J)
    if chart not in ("north", "south"):
        raise SpinorError(f"unknown chart {chart!r}")
    if chart == "north":
        return r * np.array([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)])
    return r * np.array([np.exp(-1j * p) * np.cos(t / 2), np.sin(t / 2)])


def random_su2(rng: np.random.Generator) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return q[0] * IDENTITY - 1j * sigma_dot(q[1:])


def random_spinor(rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * (rng.normal(size=2) + 1j * rng.normal(size=2))


def complex_to_pairs(a) -> list:
    """JSON-friendly nested [re, im] pairs."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_to_pairs(x) for x in a]


def pairs_to_complex(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise SpinorError("expected nested [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]
