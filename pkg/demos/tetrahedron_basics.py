"""Embed a few tetrahedra, read off their angles, and check the Schlafli identity numerically."""
import numpy as np

from schlafli import geometry as geo

J = np.ones(6)  # regular, unit edges
emb = geo.embed(J)
print("volume", emb.volume)  # 1/(6 sqrt 2)
print("psi", emb.psi)  # all arccos(-1/3)
print("S", geo.pr_phase(J), 6 * np.arccos(-1 / 3))

# the mirror image flips volume and angles
print("mirror volume", geo.embed(J, -1).volume)

# folding a unit square along a diagonal, the tetrahedron flattens as the fold closes
for fold in [1.0, 0.5, 0.1, 0.0]:
    A, B, C = np.zeros(3), np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    mid, axis = (B + C) / 2, (C - B) / np.sqrt(2)
    r = np.array([0.5, 0.5, 0])
    r = r * np.cos(fold) + np.cross(axis, r) * np.sin(fold)
    D = mid + r
    pts = [A, B, C, D]
    edges = [np.linalg.norm(pts[a] - pts[b]) for a, b in geo.EDGE_VERTICES]
    print(f"fold {fold:4.1f}", geo.classify(edges).name)

# some shapes that fail
print(geo.classify([1, 1, 1, 1, 1, 10]).name)
# A, B, C collinear: the face ABC has no area
pts = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0.0]])
print(geo.classify([np.linalg.norm(pts[a] - pts[b]) for a, b in geo.EDGE_VERTICES]).name)

# the Jacobian d psi / d J is symmetric and kills J (scale invariance of angles)
rng = np.random.default_rng(1)
J = geo.random_nondegenerate(rng, 1)[0]
D = geo.jacobian_psi(J)
print("asymmetry", np.abs(D - D.T).max())
print("D J", D @ J)
print("Schlafli  sum J dpsi", geo.schlafli_residual(J))

# the finite-difference error is second order in the step
for h in [1e-2, 5e-3, 2.5e-3]:
    print(h, geo.schlafli_residual(J, h))
