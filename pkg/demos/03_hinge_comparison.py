"""Comparison checks on hinges and an estimate of the curvature floor.

A hinge is a vertex p with segments to x and y.  The angle comparison
asks whether its angle is at least the model angle with the same three
side lengths.  Model spaces pass with margin zero; cones of total angle
above 2 pi fail once the hinge wraps around the apex.
"""

import math

from curvbound import Cone, Hinge, HyperbolicPlane, Plane, Sphere, check_property, estimate_curvature_floor, upper_angle

s = Sphere(1.0)
octant = Hinge.from_points(s, s.point(0.0, 0.0), s.point(math.pi / 2, 0.0), s.point(math.pi / 2, math.pi / 2))
est = upper_angle(1.0, s, octant)
print(f"octant hinge on the unit sphere: angle {est.value:.12f} +- {est.uncertainty:.1e} (pi/2)")
for prop in "AHD":
    v = check_property(prop, 1.0, s, octant)
    print(f"  property {prop} at kappa = 1: passed={v.passed}, worst margin {v.worst_margin:+.2e}")
v = check_property("A", 1.2, s, octant)
print(f"  the same hinge at kappa = 1.2 (more curvature than the sphere has): passed={v.passed}, margin {v.worst_margin:+.3f}")

cone = Cone(2.5 * math.pi)
h = Hinge.from_points(cone, cone.point(1.0, 0.0), cone.point(2.0, 0.625 * math.pi), cone.point(2.0, -0.625 * math.pi))
v = check_property("A", 0.0, cone, h)
print(f"\ncone 2.5pi, hinge wrapping the apex: passed={v.passed}, margin {v.worst_margin:+.6f}")

print("\nLargest kappa passed by small sampled hinges (expected values in brackets):")
for name, space, base, scale, expected in [
    ("sphere r=2", Sphere(2.0), Sphere(2.0).point(2.0, 0.3), 0.2, 0.25),
    ("plane", Plane(), [0.0, 0.0], 0.5, 0.0),
    ("hyperbolic", HyperbolicPlane(), HyperbolicPlane.point(0.0, 0.0), 0.5, -1.0),
    ("cone 1.5pi away from the apex", Cone(1.5 * math.pi), [1.0, 0.0], 0.5, 0.0),
]:
    print(f"  {name:32s} {estimate_curvature_floor(space, base, scale):+.3f}  [{expected:+.3f}]")
