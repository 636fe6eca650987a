"""From thin pieces to any hinge, and locating where a bound fails.

globalize_check cuts side px into thin pieces and runs the iteration on
each.  When a hinge fails, defect_descent repeatedly picks a failing
sub-hinge of at most 4/5 the perimeter; on a cone the vertices close in
on the apex, the only point where the bound breaks.
"""

import math

from curvbound import Cone, Hinge, Sphere, check_property, defect_descent, globalize_check

s = Sphere(1.0)
h = Hinge.from_sas(s, s.point(1.0, 0.3), 1.5, 1.8, 2.2)
g = globalize_check(1.0, s, h)
d = check_property("A", 1.0, s, h)
print(f"unit sphere hinge of perimeter {h.perimeter(s):.3f} ({g.details['pieces']} thin pieces):")
print(f"  assembled check: passed={g.passed}, margin {g.worst_margin:+.2e}")
print(f"  direct check:    passed={d.passed}, margin {d.worst_margin:+.2e}")

cone = Cone(2.5 * math.pi)
phi = 0.25 * cone.total_angle + 0.6
h = Hinge.from_points(cone, cone.point(1.0, 0.0), cone.point(1.5, phi), cone.point(1.5, -phi))
print(f"\ncone 2.5pi, hinge across the apex: assembled check passed={globalize_check(0.0, cone, h).passed}")
trace = defect_descent(0.0, cone, h, max_depth=40)
print("  level   perimeter   A-margin   distance of vertex to apex")
for level, (hinge, per, margin) in enumerate(trace.hinges):
    if level % 4 == 0 or level == len(trace.hinges) - 1:
        r = float(cone.distance(hinge.p, cone.apex))
        print(f"  {level:5d}  {per:.3e}  {margin:+.4f}   {r:.3e}")
print(f"  stopped: {trace.stop_reason}")
