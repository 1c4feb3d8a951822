"""Deformed angular momenta: composition by matrix product, and closing a triangle in hyperbolic space."""
import numpy as np

from schlafli import qdeform as qd

rng = np.random.default_rng(3)
J1, J2, J3 = (qd.random_J(rng) for _ in range(3))

s12 = qd.comult2(J1, J2)
s21 = qd.comult2(J2, J1)
print("J1 + J2", s12)
print("J2 + J1", s21)  # different: not commutative

# but associative, and it agrees with multiplying the 2x2 matrices
print(qd.comult2(qd.comult2(J1, J2), J3))
print(qd.comult2(J1, qd.comult2(J2, J3)))
print(qd.J_from_b(qd.b_from_J(J1) @ qd.b_from_J(J2) @ qd.b_from_J(J3)))

# a diangle: the partner that brings the total back to zero
partner = qd.diangle_closure(J1)
print("closure", qd.comult2(J1, partner))

# large J0 recovers plain vector addition
for J0 in [1, 10, 100, 1000]:
    s = qd.comult2(J1, J2, J0)
    print(J0, abs(s.Jminus - (J1.Jminus + J2.Jminus)))

# the group acts on hyperbolic space; edges of a closed triangle become geodesic lengths
out = qd.triangle_demo(J1, J2)
print(out["lengths"])
print(out["distances"])
