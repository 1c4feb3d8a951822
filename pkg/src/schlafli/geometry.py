"""Tetrahedra from edge lengths: existence, embedding, signed dihedral angles.

Edges are labelled 1..6 (stored 0..5) on the vertex pairs

    1 = AB, 2 = AC, 3 = BC, 4 = CD, 5 = BD, 6 = AD

so the four faces carry the edge triples {1,2,3} (ABC), {1,5,6} (ABD),
{2,6,4} (ACD) and {3,4,5} (BCD), the triads of the 6j-symbol.

The dihedral angle at an edge is the angle between the outward normals of
the two faces meeting there (the exterior angle), taken negative when the
signed volume is negative.
"""
from __future__ import annotations

import enum
from itertools import permutations
from dataclasses import dataclass

import numpy as np

#: vertex index pairs for edges 1..6
EDGE_VERTICES = ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3))

#: faces as (vertices, opposite vertex, edges); edges are 0-based
FACE_VERTICES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
FACE_OPPOSITE = (3, 2, 1, 0)
FACE_EDGES = ((0, 1, 2), (0, 4, 5), (1, 5, 3), (2, 3, 4))
FACE_NAMES = ("123", "156", "264", "345")

#: the two faces meeting at each edge, in FACE_* numbering
EDGE_FACES = tuple(
    tuple(f for f, edges in enumerate(FACE_EDGES) if r in edges) for r in range(6)
)

# Vertex orderings whose cross product is the outward normal when V > 0.
_ORIENTED_FACES = ((0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3))

FLAT_TOL = 1e-12
AREA_TOL = 1e-12


class GeometryError(ValueError):
    """Raised when edge lengths do not give a usable tetrahedron."""


class NonexistentTetrahedron(GeometryError):
    pass


class DegenerateFace(GeometryError):
    pass


class ExistenceClass(enum.Enum):
    NONDEGENERATE = "NONDEGENERATE"
    FLAT = "FLAT"
    DEGENERATE_FACE = "DEGENERATE_FACE"
    NONEXISTENT = "NONEXISTENT"


def as_edges(edges) -> np.ndarray:
    J = np.asarray(edges, dtype=float).reshape(-1)
    if J.shape != (6,):
        raise GeometryError(f"expected six edge lengths, got {J.shape[0]}")
    if np.any(J < 0) or not np.all(np.isfinite(J)):
        raise GeometryError("edge lengths must be finite and nonnegative")
    return J


def cayley_menger(edges) -> float:
    """Return 288 V**2 from the Cayley-Menger determinant."""
    J = as_edges(edges)
    d2 = np.zeros((4, 4))
    for r, (a, b) in enumerate(EDGE_VERTICES):
        d2[a, b] = d2[b, a] = J[r] ** 2
    cm = np.ones((5, 5))
    cm[0, 0] = 0.0
    cm[1:, 1:] = d2
    return float(np.linalg.det(cm))


def _gram_volume_sq(J: np.ndarray) -> float:
    # 36 V**2 as the Gram determinant of the edge vectors out of A; better
    # conditioned than the 5x5 bordered determinant near the flat stratum.
    a2, b2, c2 = J[0] ** 2, J[1] ** 2, J[5] ** 2  # AB, AC, AD
    ab = 0.5 * (a2 + b2 - J[2] ** 2)
    ac = 0.5 * (a2 + c2 - J[4] ** 2)
    bc = 0.5 * (b2 + c2 - J[3] ** 2)
    gram = np.array([[a2, ab, ac], [ab, b2, bc], [ac, bc, c2]])
    return float(np.linalg.det(gram))


def face_areas(edges) -> np.ndarray:
    """Heron areas of the four faces, NaN where a triangle inequality fails."""
    J = as_edges(edges)
    areas = np.empty(4)
    for f, (i, j, k) in enumerate(FACE_EDGES):
        a, b, c = sorted((J[i], J[j], J[k]), reverse=True)
        # Kahan's ordering-stable Heron formula
        q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
        areas[f] = 0.25 * np.sqrt(q) if q >= 0 else np.nan
    return areas


def _scales(J: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(J))
    return FLAT_TOL * mean**6, AREA_TOL * mean**2


def classify(edges) -> ExistenceClass:
    J = as_edges(edges)
    flat_tol, area_tol = _scales(J)
    areas = face_areas(J)
    if np.any(np.isnan(areas)):
        return ExistenceClass.NONEXISTENT
    vol288 = 8.0 * _gram_volume_sq(J)
    if vol288 > flat_tol:
        return ExistenceClass.NONDEGENERATE
    if vol288 < -flat_tol:
        return ExistenceClass.NONEXISTENT
    if np.any(areas <= area_tol):
        return ExistenceClass.DEGENERATE_FACE
    return ExistenceClass.FLAT


@dataclass(frozen=True)
class TetraEmbedding:
    """Four vertices in R^3 with derived volume, normals and angles.

    ``normals`` are outward unit normals, one per face in FACE_* order. For
    a flat shape they are the limit of the outward normals as the volume
    goes to zero from above.
    """

    vertices: np.ndarray
    volume: float
    normals: np.ndarray
    psi: np.ndarray

    @property
    def edges(self) -> np.ndarray:
        return np.array(
            [np.linalg.norm(self.vertices[a] - self.vertices[b]) for a, b in EDGE_VERTICES]
        )

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "volume": self.volume,
            "normals": self.normals.tolist(),
            "psi": self.psi.tolist(),
        }


def signed_volume(vertices) -> float:
    A, B, C, D = np.asarray(vertices, dtype=float)
    return float(np.dot(B - A, np.cross(C - A, D - A)) / 6.0)


def oriented_normals(vertices) -> np.ndarray:
    """Unit face normals that are outward for V > 0 and inward for V < 0."""
    P = np.asarray(vertices, dtype=float)
    out = np.empty((4, 3))
    for f, (i, j, k) in enumerate(_ORIENTED_FACES):
        n = np.cross(P[j] - P[i], P[k] - P[i])
        out[f] = n / np.linalg.norm(n)
    return out


def outward_normals(vertices) -> np.ndarray:
    vol = signed_volume(vertices)
    n = oriented_normals(vertices)
    return -n if vol < 0 else n


def embed(edges, orientation: int = 1) -> TetraEmbedding:
    """Place A at the origin, B on the x axis, C in the xy plane (y > 0).

    D gets z of the same sign as ``orientation``; for flat shapes z = 0.
    """
    J = as_edges(edges)
    cls = classify(J)
    if cls is ExistenceClass.NONEXISTENT:
        raise NonexistentTetrahedron(f"no tetrahedron has edge lengths {J.tolist()}")
    if cls is ExistenceClass.DEGENERATE_FACE:
        raise DegenerateFace(f"edge lengths {J.tolist()} have a degenerate face")
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")

    j1, j2, j3, j4, j5, j6 = J
    cx = (j1**2 + j2**2 - j3**2) / (2 * j1)
    cy = np.sqrt(max(j2**2 - cx**2, 0.0))
    dx = (j1**2 + j6**2 - j5**2) / (2 * j1)
    dy = (0.5 * (j6**2 - j4**2 + j2**2) - cx * dx) / cy
    if cls is ExistenceClass.FLAT:
        dz = 0.0
    else:
        # |V| = j1 * cy * |dz| / 6 with 36 V^2 the Gram determinant
        dz = orientation * np.sqrt(_gram_volume_sq(J)) / (j1 * cy)
    verts = np.array([[0.0, 0.0, 0.0], [j1, 0.0, 0.0], [cx, cy, 0.0], [dx, dy, dz]])
    vol = signed_volume(verts) if dz != 0.0 else 0.0
    normals = outward_normals(verts) if vol != 0.0 else oriented_normals(verts)
    return TetraEmbedding(verts, vol, normals, _angles(normals, vol))


def _angles(normals: np.ndarray, volume: float) -> np.ndarray:
    psi = np.empty(6)
    for r, (f, g) in enumerate(EDGE_FACES):
        a, b = normals[f], normals[g]
        psi[r] = np.arctan2(np.linalg.norm(np.cross(a, b)), np.dot(a, b))
    return -psi if volume < 0 else psi


def dihedral_angles(emb: TetraEmbedding) -> np.ndarray:
    """Signed exterior dihedral angles, recomputed from the vertices."""
    verts = emb.vertices
    _, area_tol = _scales(emb.edges)
    for f, (i, j, k) in enumerate(FACE_VERTICES):
        area = 0.5 * np.linalg.norm(np.cross(verts[j] - verts[i], verts[k] - verts[i]))
        if area <= area_tol:
            raise DegenerateFace(f"face {FACE_NAMES[f]} has zero area")
    if emb.volume == 0.0:
        return _angles(oriented_normals(verts), 0.0)
    vol = signed_volume(verts)
    return _angles(outward_normals(verts), vol)


def pr_phase(edges, orientation: int = 1) -> float:
    """Ponzano-Regge phase S = sum_r J_r psi_r."""
    J = as_edges(edges)
    return float(np.dot(J, embed(J, orientation).psi))


def _psi(J: np.ndarray, orientation: int) -> np.ndarray:
    return embed(J, orientation).psi


def _admissible(J: np.ndarray) -> bool:
    return np.all(J > 0) and classify(J) is ExistenceClass.NONDEGENERATE


def _directional_derivative(func, J: np.ndarray, s: int, h: float):
    """Central difference along edge s, one-sided when a side leaves the domain."""
    e = np.zeros(6)
    e[s] = h
    plus, minus = J + e, J - e
    ok_p, ok_m = _admissible(plus), _admissible(minus)
    if ok_p and ok_m:
        return (func(plus) - func(minus)) / (2 * h)
    if ok_p and _admissible(J + 2 * e):
        return (-3 * func(J) + 4 * func(plus) - func(J + 2 * e)) / (2 * h)
    if ok_m and _admissible(J - 2 * e):
        return (3 * func(J) - 4 * func(minus) + func(J - 2 * e)) / (2 * h)
    raise GeometryError(f"finite-difference stencil along edge {s + 1} leaves the existence region")


def default_step(edges) -> float:
    return 1e-5 * float(np.mean(as_edges(edges)))


def jacobian_psi(edges, h: float | None = None, orientation: int = 1) -> np.ndarray:
    """D[r, s] ~ d psi_r / d J_s by central differences at fixed orientation."""
    J = as_edges(edges)
    if classify(J) is not ExistenceClass.NONDEGENERATE:
        raise GeometryError("jacobian requires a nondegenerate tetrahedron")
    h = default_step(J) if h is None else h
    D = np.empty((6, 6))
    for s in range(6):
        D[:, s] = _directional_derivative(lambda x: _psi(x, orientation), J, s, h)
    return D


def schlafli_residual(edges, h: float | None = None, orientation: int = 1) -> float:
    """max_s |sum_r J_r dpsi_r/dJ_s|."""
    J = as_edges(edges)
    return float(np.max(np.abs(J @ jacobian_psi(J, h, orientation))))


def euler_residual(edges, h: float | None = None, orientation: int = 1) -> float:
    """max_s |sum_r J_r dpsi_s/dJ_r| (homogeneity of degree zero)."""
    J = as_edges(edges)
    return float(np.max(np.abs(jacobian_psi(J, h, orientation) @ J)))


def symmetry_residual(edges, h: float | None = None, orientation: int = 1) -> float:
    D = jacobian_psi(edges, h, orientation)
    return float(np.max(np.abs(D - D.T)))


def genfun_residual(edges, h: float | None = None, orientation: int = 1) -> float:
    """max_r |dS/dJ_r - psi_r| with S differentiated numerically."""
    J = as_edges(edges)
    if classify(J) is not ExistenceClass.NONDEGENERATE:
        raise GeometryError("generating-function check requires a nondegenerate tetrahedron")
    h = default_step(J) if h is None else h
    psi = _psi(J, orientation)
    grad = np.array(
        [
            _directional_derivative(lambda x: float(np.dot(x, _psi(x, orientation))), J, s, h)
            for s in range(6)
        ]
    )
    return float(np.max(np.abs(grad - psi)))


def residual_report(edges, h: float | None = None) -> dict:
    J = as_edges(edges)
    h = default_step(J) if h is None else h
    D = jacobian_psi(J, h)
    return {
        "edges": J.tolist(),
        "h": h,
        "schlafli_residual": float(np.max(np.abs(J @ D))),
        "euler_residual": float(np.max(np.abs(D @ J))),
        "symmetry_residual": float(np.max(np.abs(D - D.T))),
        "genfun_residual": genfun_residual(J, h),
    }


def random_nondegenerate(rng: np.random.Generator, n: int, low: float = 0.5, high: float = 3.0):
    """Draw n edge sets uniformly from [low, high]^6, keeping NONDEGENERATE ones."""
    out = []
    while len(out) < n:
        J = rng.uniform(low, high, size=6)
        if classify(J) is ExistenceClass.NONDEGENERATE:
            out.append(J)
    return np.array(out)


def _vertex_permutation_to_edges(perm) -> tuple[int, ...]:
    """Edge permutation induced by a vertex permutation: new edge r <- old edge."""
    lookup = {frozenset(p): r for r, p in enumerate(EDGE_VERTICES)}
    return tuple(lookup[frozenset((perm[a], perm[b]))] for a, b in EDGE_VERTICES)


#: the 24 edge relabelings induced by permuting the vertices
RELABELINGS = tuple(_vertex_permutation_to_edges(p) for p in permutations(range(4)))
