"""Distances and segments in the four concrete spaces.

The cone of total angle theta > 2 pi has curvature below every kappa at
its apex: two points whose angular gap is at least pi are joined only
through the apex.
"""

import math

import numpy as np

from curvbound import Cone, HyperbolicPlane, Plane, Sphere, distance, segment

plane, sphere, hyp = Plane(), Sphere(1.0), HyperbolicPlane()
print(f"plane       |(0,0)(3,4)|        = {distance(plane, [0.0, 0.0], [3.0, 4.0])}")
pole, eq = sphere.point(0.0, 0.0), sphere.point(math.pi / 2, 0.7)
print(f"unit sphere |pole, equator|     = {distance(sphere, pole, eq):.15f} (pi/2 = {math.pi / 2:.15f})")
print(f"hyperbolic  |origin, radius 1.7| = {distance(hyp, hyp.point(0.0, 0.0), hyp.point(1.7, 2.0)):.15f}")

cone = Cone(3 * math.pi)
p, q = cone.point(1.0, 0.0), cone.point(1.0, 1.2 * math.pi)
seg = segment(cone, p, q)
print(f"\ncone 3pi: points at radius 1, angular gap 1.2 pi -> distance {seg.length} (through the apex)")
for s in np.linspace(0.0, seg.length, 5):
    r, phi = seg.point_at(s)
    print(f"  s = {s:.2f}: radius {r:.3f}, angle {phi:.3f}")

print("\nSegments are unit-speed: distances between samples equal arclength differences.")
arc = segment(sphere, sphere.point(0.3, 0.1), sphere.point(1.7, 2.0))
pts = arc.point_at(np.linspace(0.0, arc.length, 6))
err = max(abs(float(sphere.distance(pts[0], u)) - s) for u, s in zip(pts, np.linspace(0, arc.length, 6)))
print(f"  sphere arc of length {arc.length:.6f}: largest deviation {err:.1e}")
