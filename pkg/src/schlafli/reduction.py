"""Two stages of symplectic reduction.

Stage one sends a spinor pair (z, z') on the level set I = I' to a point
(g, J) of T*SU(2) through z = g Theta z'. Stage two restricts to the
Lagrangian set where J is parallel to the rotation axis of g and keeps only
(J, tau), tau being the signed conjugacy-class angle.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import contour as ct
from .spinor import (
    IDENTITY,
    SIGMA,
    NORM_MATCH_TOL,
    SpinorError,
    angular_momentum,
    recover_group,
    so3_from_su2,
    su2_axis_angle,
    time_reversal,
)

MEMBER_TOL = 1e-9
TANGENT_TOL = 1e-10
SERIES_CUTOFF = 1e-4


class ReductionError(ValueError):
    pass


class Branch(enum.Enum):
    UPPER = "UPPER"
    LOWER = "LOWER"
    SPHERE_PLUS = "SPHERE_PLUS"
    SPHERE_MINUS = "SPHERE_MINUS"
    NOT_MEMBER = "NOT_MEMBER"


@dataclass(frozen=True)
class ReducedPoint:
    g: np.ndarray
    J: np.ndarray

    @property
    def Jp(self) -> np.ndarray:
        return -so3_from_su2(self.g).T @ self.J

    def to_dict(self) -> dict:
        return {
            "g": [[[float(x.real), float(x.imag)] for x in row] for row in self.g],
            "J": [float(x) for x in self.J],
            "Jp": [float(x) for x in self.Jp],
        }


@dataclass(frozen=True)
class CylinderPoint:
    J: float
    tau: float

    def to_dict(self) -> dict:
        return {"J": float(self.J), "tau": float(self.tau)}


def project_pair(z, zp) -> ReducedPoint:
    """(g, J) with z = g Theta z' and J = J(z)."""
    try:
        g = recover_group(z, time_reversal(zp))
    except SpinorError as exc:
        raise ReductionError(str(exc)) from exc
    return ReducedPoint(g, angular_momentum(z))


def project_pairs(z, zp) -> list[ReducedPoint]:
    """Vectorized project_pair over stacks of shape (N, 2)."""
    z = np.asarray(z, dtype=complex)
    zp = np.asarray(zp, dtype=complex)
    w = np.stack([-zp[:, 1].conj(), zp[:, 0].conj()], axis=1)  # Theta z'
    i1 = 0.5 * np.sum(np.abs(z) ** 2, axis=1)
    i2 = 0.5 * np.sum(np.abs(w) ** 2, axis=1)
    if np.any(i2 == 0) or np.any(np.abs(i1 - i2) > NORM_MATCH_TOL * np.maximum(i1, i2)):
        raise ReductionError("zero or norm-mismatched spinor pair")

    def quat(x):
        return np.stack([x, np.stack([-x[:, 1].conj(), x[:, 0].conj()], axis=1)], axis=2)

    g = quat(z) @ quat(w).conj().transpose(0, 2, 1) / (2 * i2)[:, None, None]
    u, _, vh = np.linalg.svd(g)
    g = u @ vh
    g = g / np.sqrt(np.linalg.det(g))[:, None, None]
    J = 0.5 * np.real(np.einsum("na,iab,nb->ni", z.conj(), SIGMA, z))
    return [ReducedPoint(gk, Jk) for gk, Jk in zip(g, J)]


def project_config(config: ct.SpinorConfig) -> list[ReducedPoint]:
    return [project_pair(config.z[r], config.zp[r]) for r in range(6)]


def axis_angle(g) -> tuple[np.ndarray | None, float]:
    """(a, phi) with g = u(a, phi), phi in [0, 2 pi]; a is None at g = +-1."""
    g = np.asarray(g, dtype=complex)
    q0 = 0.5 * np.real(np.trace(g))
    q = 0.5 * np.real(1j * np.einsum("iab,ba->i", SIGMA, g))
    s = float(np.linalg.norm(q))
    phi = 2.0 * np.arctan2(s, q0)
    return (q / s if s > 0 else None), float(phi)


# ------------------------------------------------------------------ one-form

def _tangent_matrix(g: np.ndarray, dg) -> np.ndarray:
    dg = np.asarray(dg)
    if dg.shape == (3,):
        # right-invariant components v: dg = -(i/2)(v.sigma) g
        return -0.5j * np.einsum("i,iab->ab", dg.astype(float), SIGMA) @ g
    dg = dg.astype(complex)
    if dg.shape != (2, 2):
        raise ReductionError("a tangent is a 2x2 matrix or three right-invariant components")
    x = g.conj().T @ dg
    scale = max(1.0, float(np.max(np.abs(dg))))
    if np.max(np.abs(x + x.conj().T)) > TANGENT_TOL * scale or abs(np.trace(x)) > TANGENT_TOL * scale:
        raise ReductionError("dg is not tangent to SU(2) at g")
    return dg


def rho_R(g, dg) -> np.ndarray:
    """Right-invariant components: rho_R^i = -i tr(sigma_i g dg^dagger)."""
    g = np.asarray(g, dtype=complex)
    dg = _tangent_matrix(g, dg)
    return np.real(-1j * np.einsum("iab,bc,dc->i", SIGMA, g, dg.conj()))


def rho_L(g, dg) -> np.ndarray:
    """Left-invariant components: rho_L^i = i tr(sigma_i g^dagger dg)."""
    g = np.asarray(g, dtype=complex)
    dg = _tangent_matrix(g, dg)
    return np.real(1j * np.einsum("iab,cb,ca->i", SIGMA, g.conj(), dg))


def one_form_pair(p: ReducedPoint, dg) -> tuple[float, float]:
    """theta(dg) as J . rho_R and as -J' . rho_L."""
    return float(p.J @ rho_R(p.g, dg)), float(-p.Jp @ rho_L(p.g, dg))


def one_form_value(p: ReducedPoint, dg) -> float:
    return one_form_pair(p, dg)[0]


def theta_integral(points: list[ReducedPoint]) -> float:
    """Integral of theta along a sampled path of reduced points (midpoint rule)."""
    if len(points) < 2:
        raise ReductionError("need at least two points")
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        gm = 0.5 * (a.g + b.g)
        Jm = 0.5 * (a.J + b.J)
        d = b.g - a.g
        total += float(Jm @ np.real(-1j * np.einsum("iab,bc,dc->i", SIGMA, gm, d.conj())))
    return total


# --------------------------------------------------------------------- flows

GENERATORS = ("J", "Jp", "I", "J+Jp")


def flow(p: ReducedPoint, generator: str, alpha: float, n=None) -> ReducedPoint:
    """Closed-form Hamiltonian flows on T*SU(2).

    J.n:  g -> u g, J -> R(u) J;   J'.n: g -> g u^-1;   I: g -> u(j, alpha) g;
    (J+J').n: g -> u g u^-1, J -> R(u) J.  Here u = u(n, alpha).
    """
    if generator == "I":
        mag = np.linalg.norm(p.J)
        if mag == 0:
            raise ReductionError("I flow undefined at J = 0")
        return ReducedPoint(su2_axis_angle(p.J / mag, alpha) @ p.g, p.J.copy())
    if generator not in GENERATORS:
        raise ReductionError(f"unknown generator {generator!r}; expected one of {GENERATORS}")
    if n is None:
        raise ReductionError(f"generator {generator!r} needs an axis n")
    u = su2_axis_angle(n, alpha)
    R = so3_from_su2(u)
    if generator == "J":
        return ReducedPoint(u @ p.g, R @ p.J)
    if generator == "Jp":
        return ReducedPoint(p.g @ u.conj().T, p.J.copy())
    return ReducedPoint(u @ p.g @ u.conj().T, R @ p.J)


def flow_upstairs(z, zp, generator: str, alpha: float, n=None):
    """The spinor flow that projects onto ``flow``."""
    z = np.asarray(z, dtype=complex)
    zp = np.asarray(zp, dtype=complex)
    if generator == "I":
        return np.exp(-0.5j * alpha) * z, zp.copy()
    if generator not in GENERATORS:
        raise ReductionError(f"unknown generator {generator!r}; expected one of {GENERATORS}")
    if n is None:
        raise ReductionError(f"generator {generator!r} needs an axis n")
    u = su2_axis_angle(n, alpha)
    if generator == "J":
        return u @ z, zp.copy()
    if generator == "Jp":
        return z.copy(), u @ zp
    return u @ z, u @ zp


# ------------------------------------------------------- second reduction

def lambda_membership(p: ReducedPoint, J: float, tol: float = MEMBER_TOL) -> Branch:
    if J <= 0:
        raise ReductionError("J must be positive")
    scale = tol * max(1.0, J)
    if abs(np.linalg.norm(p.J) - J) > scale:
        return Branch.NOT_MEMBER
    if np.max(np.abs(p.g - IDENTITY)) <= tol:
        return Branch.SPHERE_PLUS
    if np.max(np.abs(p.g + IDENTITY)) <= tol:
        return Branch.SPHERE_MINUS
    a, _ = axis_angle(p.g)
    if np.max(np.abs(p.J - J * a)) <= scale:
        return Branch.UPPER
    if np.max(np.abs(p.J + J * a)) <= scale:
        return Branch.LOWER
    return Branch.NOT_MEMBER


def project_cylinder(p: ReducedPoint, tol: float = MEMBER_TOL) -> CylinderPoint:
    J = float(np.linalg.norm(p.J))
    if J == 0.0:
        return CylinderPoint(0.0, 0.0)
    branch = lambda_membership(p, J, tol)
    if branch is Branch.NOT_MEMBER:
        raise ReductionError("point is not on the Lagrangian set: J is not along the axis of g")
    if branch is Branch.SPHERE_PLUS:
        return CylinderPoint(J, 0.0)
    if branch is Branch.SPHERE_MINUS:
        return CylinderPoint(J, 2 * np.pi)
    _, phi = axis_angle(p.g)
    return CylinderPoint(J, phi if branch is Branch.UPPER else -phi)


def _loop_integral(cyl: list[CylinderPoint]) -> float:
    J = np.array([c.J for c in cyl])
    tau = np.array([c.tau for c in cyl])
    return float(np.sum(0.5 * (J[1:] + J[:-1]) * np.diff(tau)))


@dataclass
class CylinderReport:
    pieces_down: np.ndarray  # (6, 4): bottom, side, top, closing, per edge
    pieces_up: np.ndarray
    two_delta_S: float

    @property
    def downstairs(self) -> float:
        return float(self.pieces_down.sum())

    @property
    def upstairs(self) -> float:
        return float(self.pieces_up.sum())

    def summary(self) -> dict:
        return {
            "downstairs": self.downstairs,
            "upstairs": self.upstairs,
            "two_delta_S": self.two_delta_S,
            "down_vs_2dS": abs(self.downstairs - self.two_delta_S),
            "down_vs_up": abs(self.downstairs - self.upstairs),
            "vertical_left": float(self.pieces_down[:, 1].sum()),
            "vertical_right": float(self.pieces_down[:, 3].sum()),
        }


def cylinder_contour_check(family, lam0: float, lam1: float, n_lambda: int = 200, n_tau: int = 2000) -> CylinderReport:
    """Integrate sum_r J_r dtau_r around the six rectangles in the (tau, J) plane.

    Each rectangle runs: at lambda0 from P (tau = 0) to P' (tau = -2 psi) by the
    reversed I flow; along P'(lambda) up to lambda1; back to P by the I flow;
    and down along P(lambda) at tau = 0. Every piece is built upstairs from
    spinors and projected, so the upstairs action (real part) is reported
    alongside.
    """
    pts = ct.sweep_points(family, lam0, lam1, n_lambda)
    t = np.linspace(0.0, 1.0, n_tau + 1)
    down = np.zeros((6, 4))
    up = np.zeros((6, 4))
    first, last = pts[0], pts[-1]
    for r in range(6):
        zp0 = first.P.zp[r]
        bottom = [(np.exp(1j * first.psi[r] * s) * first.P.z[r], zp0) for s in t]
        side = [(p.P_prime.z[r], p.P_prime.zp[r]) for p in pts]
        top = [(np.exp(-1j * last.psi[r] * s) * last.P_prime.z[r], last.P_prime.zp[r]) for s in t]
        closing = [(p.P.z[r], p.P.zp[r]) for p in reversed(pts)]
        for k, piece in enumerate((bottom, side, top, closing)):
            reduced = project_pairs([a for a, _ in piece], [b for _, b in piece])
            down[r, k] = _loop_integral([project_cylinder(q) for q in reduced])
            path = np.array([[z, zp] for z, zp in piece])
            up[r, k] = ct.action_integral(path).real
    return CylinderReport(down, up, 2.0 * (last.S - first.S))


# ----------------------------------------------------------------- character

def character(j: float, phi):
    """SU(2) character sin((j + 1/2) phi) / sin(phi / 2), smooth at phi = 0, 2 pi."""
    two_j = round(2 * j)
    if two_j < 0 or abs(2 * j - two_j) > 1e-12:
        raise ReductionError(f"j must be a nonnegative half-integer, got {j!r}")
    j = two_j / 2
    phi = np.asarray(phi, dtype=float)
    sign = np.where(phi > np.pi, (-1.0) ** two_j, 1.0)
    e = np.where(phi > np.pi, 2 * np.pi - phi, phi)
    d = 2 * j + 1
    m2 = j * (j + 1) * d / 3
    m4 = j * (j + 1) * d * (3 * j * j + 3 * j - 1) / 15
    series = d - m2 * e**2 / 2 + m4 * e**4 / 24
    with np.errstate(invalid="ignore", divide="ignore"):
        exact = np.sin((j + 0.5) * e) / np.sin(e / 2)
    out = sign * np.where(np.abs(e) < SERIES_CUTOFF / max(d, 1.0), series, exact)
    return float(out) if out.ndim == 0 else out
