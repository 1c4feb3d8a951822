"""Exact 6j symbols against the semiclassical cosine, for the scaled regular tetrahedron."""
from fractions import Fraction


from schlafli import sixj

print(sixj.exact_6j([1] * 6))
print(sixj.exact_6j(["1/2", "1/2", 1, "1/2", "1/2", 1]))
print(sixj.exact_6j([0, 0, 0, "1/2", "1/2", "1/2"]))
print(sixj.exact_6j([1, 1, 3, 1, 1, 1]))  # triangle rule fails

# exact values carry a squarefree radicand, so large arguments stay exact
v = sixj.exact_6j([30] * 6)
print(v.radicand, float(v))

rows, notes = sixj.compare_sweep([1] * 6, range(2, 41, 2))
print(f"{'k':>3} {'exact':>12} {'asym':>12} {'err/amp':>9}")
for r in rows:
    print(f"{r.k:3d} {float(r.exact):12.3e} {r.asym:12.3e} {r.rel_err:9.4f}")

# the windowed error shrinks roughly like 1/k
for k0 in [10, 20, 40, 80]:
    print(k0, sixj.windowed_rms([1] * 6, k0))

# a non-regular shape
rows, notes = sixj.compare_sweep([1, 1, 1, Fraction(3, 2), Fraction(3, 2), 1], [10, 20, 30])
print([round(r.rel_err, 4) for r in rows], notes)

# the quantum-allowed but classically forbidden case is reported, not computed
print(sixj.compare_sweep(["1/2", "1/2", 1, "1/2", "1/2", 1], [1])[1])
