"""Trigonometry of the model planes and the triangle solvers.

The same three functions sn, cs and md cover the sphere (kappa > 0), the
plane (kappa = 0) and the hyperbolic plane (kappa < 0), so one law of
cosines serves all three.
"""

import math

import numpy as np

from curvbound import AlexandrovConfig, alexandrov_compare, angle_from_sss, side_from_sas, sn

print("Generalized sine at x = 1 for three curvatures:")
for kappa in (1.0, 0.0, -1.0):
    print(f"  sn_{kappa:+.0f}(1) = {sn(kappa, 1.0):.15f}")
print(f"  (compare sin 1 = {math.sin(1.0):.15f}, sinh 1 = {math.sinh(1.0):.15f})")

print("\nA right-angled hinge with legs 3 and 4:")
for kappa in (1.0 / 25, 0.0, -1.0 / 25):
    c = side_from_sas(kappa, 3.0, 4.0, math.pi / 2)
    back = angle_from_sss(kappa, 3.0, 4.0, c)
    print(f"  kappa = {kappa:+.3f}: opposite side {c:.12f}, angle recovered {back:.15f}")
print("Positive curvature pulls the far ends together, negative curvature pushes them apart.")

print("\nThe opposite side grows strictly with the hinge angle (kappa = 1, sides 1 and 0.7):")
gammas = np.linspace(0.0, math.pi, 7)
sides = side_from_sas(1.0, 1.0, 0.7, gammas)
for g, c in zip(gammas, sides):
    print(f"  gamma = {g:.3f}  ->  c = {c:.12f}")

print("\nFour points of the plane, with x past q as seen from p: the two Alexandrov quantities")
print("(pi minus the two angles at q, and the angle at p minus its comparison angle) share a sign.")
p, q, x, y = (np.array(v) for v in ([0.0, 0.0], [1.0, 0.0], [2.0, 0.5], [0.5, 1.0]))
d = lambda u, v: float(np.linalg.norm(u - v))  # noqa: E731
cfg = AlexandrovConfig(d_pq=d(p, q), d_qx=d(q, x), d_qy=d(q, y), d_py=d(p, y), d_xy=d(x, y))
defect, gap = alexandrov_compare(0.0, cfg)
print(f"  defect at q = {defect:+.12f}, angle gap at p = {gap:+.12f}")
