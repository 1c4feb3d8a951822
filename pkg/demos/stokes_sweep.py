"""Grow one edge of a tetrahedron and compare the change in 2S with the swept-out symplectic area."""
import numpy as np

from schlafli import contour as ct
from schlafli import reduction as rd

base = np.ones(6)
family = ct.linear_family(base, np.eye(6)[0])  # stretch edge AB

rep = ct.stokes_sweep(family, 0.0, 0.1, n_lambda=100, n_alpha=100)
s = rep.summary()
print("2 dS           ", s["two_delta_S"])
print("wall, numeric  ", s["wall_numeric"])
print("wall, psi dJ   ", s["wall_formula"])
print("worst loop action - 2S along the sweep", np.abs(rep.residual).max())

# the same area seen on the (tau, J) cylinders after both reductions
cyl = rd.cylinder_contour_check(family, 0.0, 0.1, n_lambda=100, n_tau=1000)
print(cyl.summary())

# per edge: bottom, side, top, closing
np.set_printoptions(precision=6, suppress=True)
print(cyl.pieces_down)

# uniform scaling has a closed form
fam = ct.linear_family(base, base)
rep = ct.stokes_sweep(fam, 0.0, 0.1, n_lambda=50, n_alpha=50)
print(rep.two_delta_S, 2 * 0.1 * 6 * np.arccos(-1 / 3))
