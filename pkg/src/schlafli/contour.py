"""The twelve-spinor configuration of a tetrahedron and the closed contour
P -> Q -> P' -> P whose action is twice the Ponzano-Regge phase.

Every flow is applied as an exact SU(2) exponential or U(1) phase; sampled
paths exist only so that action integrals can be evaluated numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from . import geometry as geo
from .spinor import (
    SIGMA,
    IDENTITY,
    complex_to_pairs,
    lift_chart,
    section_lift,
    time_reversal,
)

# face (index into geometry.FACE_NAMES) holding each unprimed slot z_1..z_6
UNPRIMED_FACE = (0, 0, 0, 2, 3, 1)
# face holding each primed slot z'_1..z'_6
PRIMED_FACE = (1, 2, 3, 3, 1, 2)
# J_r = vertex[a] - vertex[b]; with these, every face's three slots sum to zero
EDGE_VECTOR_ENDS = ((0, 1), (2, 0), (1, 2), (2, 3), (1, 3), (0, 3))
# global sign on the edge vectors, fixed so that the holonomy is +psi when V > 0
EDGE_SIGN = 1.0

DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class SpinorConfig:
    """Six pairs (z_r, z'_r); rows of ``z`` and ``zp`` are indexed by edge."""

    z: np.ndarray
    zp: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.z, self.zp])

    @classmethod
    def from_stacked(cls, a) -> "SpinorConfig":
        a = np.asarray(a, dtype=complex)
        if a.shape != (12, 2):
            raise ValueError(f"expected twelve spinors, got shape {a.shape}")
        return cls(a[:6].copy(), a[6:].copy())

    @property
    def I(self) -> np.ndarray:
        return 0.5 * np.sum(np.abs(self.z) ** 2, axis=1)

    @property
    def Ip(self) -> np.ndarray:
        return 0.5 * np.sum(np.abs(self.zp) ** 2, axis=1)

    @property
    def J(self) -> np.ndarray:
        return _momenta(self.z)

    @property
    def Jp(self) -> np.ndarray:
        return _momenta(self.zp)

    def face_sums(self) -> np.ndarray:
        J, Jp = self.J, self.Jp
        sums = np.zeros((4, 3))
        for r in range(6):
            sums[UNPRIMED_FACE[r]] += J[r]
            sums[PRIMED_FACE[r]] += Jp[r]
        return sums

    def diangle_sums(self) -> np.ndarray:
        return self.J + self.Jp

    def total_J(self) -> np.ndarray:
        return self.J.sum(axis=0) + self.Jp.sum(axis=0)

    def distance(self, other: "SpinorConfig") -> float:
        return float(np.max(np.abs(self.stacked() - other.stacked())))

    def to_dict(self) -> dict:
        return {"z": complex_to_pairs(self.z), "zp": complex_to_pairs(self.zp)}


def _momenta(z: np.ndarray) -> np.ndarray:
    return 0.5 * np.real(np.einsum("...ra,iab,...rb->...ri", z.conj(), SIGMA, z))


def _su2_batch(n: np.ndarray, alpha) -> np.ndarray:
    """u(n_k, alpha) for a stack of axes n (k, 3); alpha scalar or broadcastable."""
    alpha = np.asarray(alpha, dtype=float)[..., None, None, None]
    ns = np.einsum("ki,iab->kab", n, SIGMA)
    return np.cos(alpha / 2) * IDENTITY - 1j * np.sin(alpha / 2) * ns


def edge_vectors(vertices) -> np.ndarray:
    v = np.asarray(vertices, dtype=float)
    return EDGE_SIGN * np.array([v[a] - v[b] for a, b in EDGE_VECTOR_ENDS])


def _require_nondegenerate(emb: geo.TetraEmbedding) -> None:
    cls = geo.classify(emb.edges)
    if cls is geo.ExistenceClass.DEGENERATE_FACE:
        raise geo.DegenerateFace("a face has zero area; no spinor configuration")
    if cls is not geo.ExistenceClass.NONDEGENERATE:
        raise geo.GeometryError(f"contour needs a nondegenerate tetrahedron, got {cls.name}")


def default_charts(emb: geo.TetraEmbedding) -> tuple[str, ...]:
    return tuple(lift_chart(-j) for j in edge_vectors(emb.vertices))


def build_config(emb: geo.TetraEmbedding, charts=None) -> SpinorConfig:
    """The configuration P: z'_r = zeta_r lifts J'_r = -J_r, and z_r = Theta zeta_r."""
    _require_nondegenerate(emb)
    Jp = -edge_vectors(emb.vertices)
    charts = charts or default_charts(emb)
    zp = np.array([section_lift(j, c) for j, c in zip(Jp, charts)])
    z = np.array([time_reversal(s) for s in zp])
    return SpinorConfig(z, zp)


def leg1_unitaries(normals, alpha: float = np.pi) -> np.ndarray:
    n = np.asarray(normals, dtype=float)[list(PRIMED_FACE)]
    return _su2_batch(n, alpha)


def leg2_unitaries(normals, alpha: float = np.pi) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(normals, dtype=float)
    return (
        _su2_batch(n[list(UNPRIMED_FACE)], -alpha),
        _su2_batch(n[list(PRIMED_FACE)], -alpha),
    )


def leg1(config: SpinorConfig, normals, alpha: float = np.pi) -> SpinorConfig:
    """Rotate each pair by alpha about the normal of the face holding J'_r."""
    u = leg1_unitaries(normals, alpha)
    return SpinorConfig(
        np.einsum("rab,rb->ra", u, config.z), np.einsum("rab,rb->ra", u, config.zp)
    )


def leg2(config: SpinorConfig, normals, alpha: float = np.pi) -> SpinorConfig:
    """Rotate every face by -alpha about its own normal (normals taken at P)."""
    u, up = leg2_unitaries(normals, alpha)
    return SpinorConfig(
        np.einsum("rab,rb->ra", u, config.z), np.einsum("rab,rb->ra", up, config.zp)
    )


def leg3(config: SpinorConfig, psi, upto: float = 6.0) -> SpinorConfig:
    """Six Hopf-circle flows in turn, z_r -> exp(-i psi_r) z_r.

    ``upto`` in [0, 6] stops part way: flows 1..floor(upto) are complete and
    the next one has run for the fractional remainder.
    """
    psi = np.asarray(psi, dtype=float)
    t = np.clip(upto - np.arange(6), 0.0, 1.0)
    return SpinorConfig(np.exp(-1j * psi * t)[:, None] * config.z, config.zp.copy())


def leg1_path(config: SpinorConfig, normals, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    alphas = np.linspace(0.0, np.pi, n + 1)
    n_ax = np.asarray(normals, dtype=float)[list(PRIMED_FACE)]
    u = _su2_batch(n_ax, alphas)
    s = config
    return np.concatenate(
        [np.einsum("krab,rb->kra", u, s.z), np.einsum("krab,rb->kra", u, s.zp)], axis=1
    )


def leg2_path(config: SpinorConfig, normals, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    alphas = np.linspace(0.0, np.pi, n + 1)
    nrm = np.asarray(normals, dtype=float)
    u = _su2_batch(nrm[list(UNPRIMED_FACE)], -alphas)
    up = _su2_batch(nrm[list(PRIMED_FACE)], -alphas)
    return np.concatenate(
        [np.einsum("krab,rb->kra", u, config.z), np.einsum("krab,rb->kra", up, config.zp)],
        axis=1,
    )


def leg3_path(config: SpinorConfig, psi, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Samples n + 1 points of each of the six flows, concatenated in order."""
    psi = np.asarray(psi, dtype=float)
    s = np.concatenate([np.linspace(r, r + 1, n + 1)[1 if r else 0:] for r in range(6)])
    t = np.clip(s[:, None] - np.arange(6), 0.0, 1.0)
    z = np.exp(-1j * psi * t)[:, :, None] * config.z
    zp = np.broadcast_to(config.zp, z.shape)
    return np.concatenate([z, zp], axis=1)


def action_integral(path) -> complex:
    """Discrete integral of sum_k i z_k^dagger dz_k along a sampled path.

    ``path`` has shape (N, ..., 2) with N >= 2. Each step contributes
    i * mean(z)^dagger * dz, which telescopes the imaginary part exactly
    (it equals the change in total I) and is second-order accurate.
    """
    p = np.asarray(path, dtype=complex)
    if p.ndim < 2 or p.shape[0] < 2:
        raise ValueError("action_integral needs a path of at least two samples")
    p = p.reshape(p.shape[0], -1)
    mid = 0.5 * (p[1:] + p[:-1])
    return complex(1j * np.sum(mid.conj() * np.diff(p, axis=0)))


def holonomy_phases(p: SpinorConfig, p_prime: SpinorConfig) -> np.ndarray:
    """Phases phi_r with z_r(P') = exp(i phi_r) z_r(P)."""
    return np.angle(np.einsum("ra,ra->r", p.z.conj(), p_prime.z))


@dataclass
class ContourResult:
    actions: dict
    holonomy_phases: np.ndarray
    S: float
    psi: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "actions": {k: [v.real, v.imag] for k, v in self.actions.items()},
            "holonomy_phases": [float(x) for x in self.holonomy_phases],
            "psi": [float(x) for x in self.psi],
            "S": float(self.S),
            "diagnostics": {k: float(v) for k, v in self.diagnostics.items()},
        }


def _max_along(path: np.ndarray, fn) -> float:
    return max(fn(SpinorConfig.from_stacked(x)) for x in path)


def run_contour(edges, orientation: int = 1, n: int = DEFAULT_SAMPLES, check_paths: bool = False) -> ContourResult:
    """Build P, run all three legs, and integrate the action of each.

    ``n`` is the number of steps per elementary flow (leg 3 has six).
    With ``check_paths`` the diangle and face sums are monitored at every
    sample of legs 1 and 2, which is slow for large n.
    """
    emb = geo.embed(edges, orientation)
    normals = geo.outward_normals(emb.vertices)
    psi = geo.dihedral_angles(emb)
    J = emb.edges
    S = float(np.dot(J, psi))

    P = build_config(emb)
    Q = leg1(P, normals)
    Pp = leg2(Q, normals)
    P_back = leg3(Pp, psi)

    path1 = leg1_path(P, normals, n)
    path2 = leg2_path(Q, normals, n)
    path3 = leg3_path(Pp, psi, n)
    a1, a2, a3 = (action_integral(x) for x in (path1, path2, path3))
    actions = {"leg1": a1, "leg2": a2, "leg3": a3, "total": a1 + a2 + a3}

    norms0 = np.concatenate([P.I, P.Ip])
    diag = {
        "closure": P.distance(P_back),
        "primed_return": float(np.max(np.abs(Pp.zp - P.zp))),
        "norm_drift": float(max(
            np.max(np.abs(np.concatenate([c.I, c.Ip]) - norms0)) for c in (Q, Pp, P_back)
        )),
        "face_sums_P": float(np.max(np.abs(P.face_sums()))),
        "diangle_P": float(np.max(np.abs(P.diangle_sums()))),
        "diangle_Q": float(np.max(np.abs(Q.diangle_sums()))),
        "inversion_Q": float(np.max(np.abs(Q.J + P.J))),
    }
    if check_paths:
        diag["diangle_leg1"] = _max_along(path1, lambda c: np.max(np.abs(c.diangle_sums())))
        diag["face_leg2"] = _max_along(path2, lambda c: np.max(np.abs(c.face_sums())))
    return ContourResult(actions, holonomy_phases(P, Pp), S, psi, diag)


# ---------------------------------------------------------------- Stokes sweep

def linear_family(base, direction) -> Callable[[float], np.ndarray]:
    base = geo.as_edges(base)
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (6,):
        raise ValueError("direction must have six components")
    return lambda lam: base + lam * direction


@dataclass
class SweepPoint:
    lam: float
    edges: np.ndarray
    psi: np.ndarray
    S: float
    P: SpinorConfig
    P_prime: SpinorConfig


def sweep_points(family, lam0: float, lam1: float, n_lambda: int) -> list[SweepPoint]:
    """P and P' along a family, with the section charts pinned at lambda0."""
    if n_lambda < 2:
        raise ValueError("n_lambda must be at least 2")
    charts = None
    out = []
    for lam in np.linspace(lam0, lam1, n_lambda + 1):
        J = geo.as_edges(family(lam))
        cls = geo.classify(J)
        if cls is not geo.ExistenceClass.NONDEGENERATE:
            raise geo.GeometryError(f"family leaves the nondegenerate region at lambda={lam!r} ({cls.name})")
        emb = geo.embed(J)
        charts = charts or default_charts(emb)
        normals = geo.outward_normals(emb.vertices)
        psi = geo.dihedral_angles(emb)
        P = build_config(emb, charts)
        Pp = leg2(leg1(P, normals), normals)
        out.append(SweepPoint(float(lam), J, psi, float(J @ psi), P, Pp))
    return out


@dataclass
class StokesReport:
    lam: np.ndarray
    edges: np.ndarray
    psi: np.ndarray
    S: np.ndarray
    residual: np.ndarray
    wall_numeric: float
    wall_formula: float
    two_delta_S: float

    @property
    def discrepancy(self) -> float:
        """Largest pairwise gap among the three evaluations of 2 dS."""
        v = (self.wall_numeric, self.wall_formula, self.two_delta_S)
        return max(abs(a - b) for a in v for b in v)

    def summary(self) -> dict:
        return {
            "wall_numeric": self.wall_numeric,
            "wall_formula": self.wall_formula,
            "two_delta_S": self.two_delta_S,
            "discrepancy": self.discrepancy,
            "max_pointwise_residual": float(np.max(np.abs(self.residual))),
        }

    def rows(self):
        for k, lam in enumerate(self.lam):
            yield [lam, self.S[k], *self.psi[k], self.residual[k]]


def _wall_integral(points: list[SweepPoint], lam: np.ndarray, n_alpha: int) -> float:
    t = np.linspace(0.0, 1.0, n_alpha + 1)
    psi = np.array([p.psi for p in points])
    w = np.array([p.P_prime.z for p in points])  # (L, 6, 2)
    # surface swept by leg 3: z_r(lambda, t) = exp(-i psi_r t) z_r(P')
    Z = np.exp(-1j * psi[:, None, :, None] * t[None, :, None, None]) * w[:, None]
    X = np.gradient(Z, lam, axis=0, edge_order=2)
    # tangent along the flow is its generator applied to the point
    Y = -1j * psi[:, None, :, None] * Z
    density = -2.0 * np.imag(np.sum(X.conj() * Y, axis=(2, 3)))
    return float(simpson(simpson(density, x=t, axis=1), x=lam))


def stokes_sweep(family, lam0: float, lam1: float, n_lambda: int = 200, n_alpha: int = 200) -> StokesReport:
    """Integrate the symplectic form over the wall traced by leg 3.

    Three numbers should agree: the wall integral of omega over the actual
    spinor surface, the closed form 2 sum_r int psi_r dI_r, and 2 dS.
    """
    points = sweep_points(family, lam0, lam1, n_lambda)
    lam = np.array([p.lam for p in points])
    J = np.array([p.edges for p in points])
    psi = np.array([p.psi for p in points])
    S = np.array([p.S for p in points])
    if lam1 == lam0:
        zero = np.zeros(len(lam))
        return StokesReport(lam, J, psi, S, zero, 0.0, 0.0, 0.0)
    dJ = np.gradient(J, lam, axis=0, edge_order=2)
    dpsi = np.gradient(psi, lam, axis=0, edge_order=2)
    formula = 2.0 * float(simpson(np.sum(psi * dJ, axis=1), x=lam))
    wall = _wall_integral(points, lam, n_alpha)
    residual = np.sum(J * dpsi, axis=1)
    return StokesReport(lam, J, psi, S, residual, wall, formula, 2.0 * (S[-1] - S[0]))
