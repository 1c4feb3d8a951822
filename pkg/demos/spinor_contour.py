"""Walk the twelve spinors around the three-leg loop and watch the actions add up to 2S."""
import numpy as np

from schlafli import contour as ct
from schlafli import geometry as geo

J = np.array([1.2, 1.1, 0.9, 1.3, 1.0, 1.05])
emb = geo.embed(J)
normals = geo.outward_normals(emb.vertices)

P = ct.build_config(emb)
print("face sums at P", np.abs(P.face_sums()).max())
print("diangle sums at P", np.abs(P.diangle_sums()).max())

# leg 1 rotates each diangle by pi about its face normal, leg 2 rotates back about the other face
Q = ct.leg1(P, normals)
Pp = ct.leg2(Q, normals)
print("J at Q is -J at P:", np.allclose(Q.J, -P.J))
print("primed spinors come home:", np.abs(Pp.zp - P.zp).max())

# the unprimed spinors pick up a phase, which is the dihedral angle
phase = np.angle(np.einsum("ra,ra->r", P.z.conj(), Pp.z))
print("phases", phase)
print("psi   ", emb.psi)

# leg 3 undoes those phases one edge at a time
print("back at P:", P.distance(ct.leg3(Pp, emb.psi)))

# actions along each leg
for n in [100, 1000, 10000]:
    r = ct.run_contour(J, n=n)
    print(n, {k: round(v.real, 10) for k, v in r.actions.items()}, "2S =", 2 * r.S)

# mirror image: everything flips sign
r = ct.run_contour(J, orientation=-1, n=10000)
print("mirror", r.actions["total"].real, 2 * r.S)
