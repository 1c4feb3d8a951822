"""Deformed angular momentum as the group B of upper-triangular SL(2, C)
matrices with real positive diagonal.

Coordinates (Jz, J-) sit in b = [[exp(-Jz/2J0), -J-/J0], [0, exp(Jz/2J0)]].
Composition of two momenta is the matrix product, so addition becomes
associative but not commutative. B acts on hyperbolic 3-space, realized here
as unit-determinant positive Hermitian matrices X with b . X = b X b^dagger.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

B_TOL = 1e-12


class DeformError(ValueError):
    pass


@dataclass(frozen=True)
class DeformedJ:
    Jz: float
    Jminus: complex

    @property
    def Jplus(self) -> complex:
        return complex(np.conj(self.Jminus))

    @property
    def Jx(self) -> float:
        return float(np.real(self.Jminus))

    @property
    def Jy(self) -> float:
        # J- = Jx - i Jy
        return float(-np.imag(self.Jminus))

    def close_to(self, other: "DeformedJ", tol: float) -> bool:
        return abs(self.Jz - other.Jz) <= tol and abs(self.Jminus - other.Jminus) <= tol

    def to_dict(self) -> dict:
        return {"Jz": self.Jz, "Jminus": [self.Jminus.real, self.Jminus.imag]}


ZERO = DeformedJ(0.0, 0j)


def from_cartesian(Jx: float, Jy: float, Jz: float) -> DeformedJ:
    return DeformedJ(float(Jz), complex(Jx, -Jy))


def b_from_J(J: DeformedJ, J0: float = 1.0) -> np.ndarray:
    return np.array(
        [[np.exp(-J.Jz / (2 * J0)), -J.Jminus / J0], [0.0, np.exp(J.Jz / (2 * J0))]],
        dtype=complex,
    )


def check_b(b) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    if b.shape != (2, 2):
        raise DeformError("B elements are 2x2")
    if abs(b[1, 0]) > B_TOL:
        raise DeformError("B elements are upper triangular")
    d = np.diag(b)
    if np.any(np.abs(d.imag) > B_TOL) or np.any(d.real <= 0):
        raise DeformError("B elements have real positive diagonal")
    if abs(np.linalg.det(b) - 1) > 1e-10:
        raise DeformError("B elements have unit determinant")
    return b


def J_from_b(b, J0: float = 1.0) -> DeformedJ:
    b = check_b(b)
    # read Jz from the diagonal ratio so both entries count equally
    Jz = J0 * float(np.log(b[1, 1].real / b[0, 0].real))
    return DeformedJ(Jz, complex(-J0 * b[0, 1]))


def comult2(J1: DeformedJ, J2: DeformedJ, J0: float = 1.0) -> DeformedJ:
    """Jz = J1z + J2z, J- = exp(-J1z/2) J2- + J1- exp(J2z/2)."""
    return DeformedJ(
        J1.Jz + J2.Jz,
        complex(np.exp(-J1.Jz / (2 * J0)) * J2.Jminus + J1.Jminus * np.exp(J2.Jz / (2 * J0))),
    )


def comult3(J1: DeformedJ, J2: DeformedJ, J3: DeformedJ, J0: float = 1.0) -> DeformedJ:
    e = lambda x: np.exp(x / (2 * J0))  # noqa: E731
    return DeformedJ(
        J1.Jz + J2.Jz + J3.Jz,
        complex(
            e(-J1.Jz - J2.Jz) * J3.Jminus
            + e(-J1.Jz) * J2.Jminus * e(J3.Jz)
            + J1.Jminus * e(J2.Jz + J3.Jz)
        ),
    )


def diangle_closure(J1: DeformedJ, J0: float = 1.0) -> DeformedJ:
    """The partner J2 with b1 b2 = 1, i.e. zero total deformed momentum.

    Reading coordinates off b^-1 = [[e^{Jz/2}, J-], [0, e^{-Jz/2}]] gives
    (-Jz, -J-) for every J0, and with those the coproduct cancels exactly.
    """
    return DeformedJ(-J1.Jz, -J1.Jminus)


def hyperbolic_point(b) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    return b @ b.conj().T


def hyperbolic_distance(X1, X2) -> float:
    c = 0.5 * np.real(np.trace(np.linalg.solve(X1, X2)))
    return float(np.arccosh(max(c, 1.0)))


ORIGIN = np.eye(2, dtype=complex)


def act(b, X) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    return b @ X @ b.conj().T


def length(J: DeformedJ, J0: float = 1.0) -> float:
    """Distance the element moves the origin; the stand-in for an edge length."""
    return hyperbolic_distance(ORIGIN, hyperbolic_point(b_from_J(J, J0)))


def triangle_demo(J1: DeformedJ, J2: DeformedJ, J0: float = 1.0) -> dict:
    """Close a deformed triangle and compare side lengths with hyperbolic distances."""
    J3 = diangle_closure(comult2(J1, J2, J0), J0)
    b1, b2, b3 = (b_from_J(J, J0) for J in (J1, J2, J3))
    p0 = ORIGIN
    p1 = act(b1, ORIGIN)
    p2 = act(b1 @ b2, ORIGIN)
    return {
        "J3": J3.to_dict(),
        "product_defect": float(np.max(np.abs(b1 @ b2 @ b3 - np.eye(2)))),
        "lengths": [length(J, J0) for J in (J1, J2, J3)],
        "distances": [
            hyperbolic_distance(p0, p1),
            hyperbolic_distance(p1, p2),
            hyperbolic_distance(p2, p0),
        ],
    }


def random_J(rng: np.random.Generator, scale: float = 1.0) -> DeformedJ:
    x = rng.normal(size=3) * scale
    return from_cartesian(*x)
