"""The thin-hinge iteration and its two monotone sequences.

A thin hinge has a short side b below a/5.  Each step slides the vertex
along the long side and swaps the ends; l_n decreases towards the chord
|x0 y0| while the model chords stay above it.
"""

import math

from curvbound import Hinge, Plane, Sphere, thin_hinge_iteration

plane = Plane()
trace = thin_hinge_iteration(0.0, plane, Hinge.from_sas(plane, [0.0, 0.0], 0.9, 5.0, math.pi / 2))
print(f"plane, a = 5, b = 0.9, right angle: chord {trace.chord_0:.12f}, b' = {trace.b_prime}")
print("    n          l_n   model chord    gamma_n  gamma_bar_n")
for s in trace.steps[:6] + trace.steps[-2:]:
    print(f"  {s.n:3d}  {s.l_n:.9f}  {s.comparison_chord_n:.9f}  {s.gamma_n:.6f}  {s.gamma_bar_n:.6f}")
print(f"final gap l_N - chord = {trace.final_gap:.2e} after {len(trace.steps) - 1} steps")

s = Sphere(1.0)
trace = thin_hinge_iteration(1.0, s, Hinge.from_sas(s, s.point(1.0, 0.3), 0.2, 1.2, 2.0))
last = trace.steps[-1]
print(f"\nunit sphere, a = 1.2, b = 0.2, angle 2: chord {trace.chord_0:.12f}")
print(f"  after {last.n} steps: l_N = {last.l_n:.12f}, model chord {last.comparison_chord_n:.12f}")
print(f"  pi - gamma_bar_N = {math.pi - last.gamma_bar_n:.2e}; worst auxiliary margin {min(trace.aux_margins()):+.1e}")
