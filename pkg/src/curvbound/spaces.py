"""Concrete geodesic metric spaces with explicit unit-speed segments.

Four spaces are provided:

* :class:`Plane` -- the Euclidean plane, points ``(x, y)``;
* :class:`Sphere` -- the round sphere of radius ``r`` in R^3;
* :class:`HyperbolicPlane` -- the upper sheet of the hyperboloid
  ``-x0**2 + x1**2 + x2**2 = -1`` in Minkowski space;
* :class:`Cone` -- the Euclidean cone of total angle ``theta``, points
  ``(r, phi)`` with ``phi`` in ``[0, theta)``.

Distances and segment evaluation broadcast over leading array axes, so a
whole grid of points can be handled in one call.  Points are numpy arrays.
"""

import abc
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import AmbiguityError, DomainError

__all__ = [
    "Segment",
    "GeodesicSpace",
    "Plane",
    "Sphere",
    "HyperbolicPlane",
    "Cone",
    "space_from_json",
    "distance",
    "segment",
    "interpolate",
    "minkowski",
]

CONSTRAINT_TOL = 1e-12


def _out(arr):
    arr = np.asarray(arr, float)
    return float(arr) if arr.ndim == 0 else arr


@dataclass(frozen=True, eq=False)
class Segment:
    """Unit-speed shortest curve from ``p`` to ``q``.

    ``point_at(s)`` accepts a scalar or an array of arclengths in
    ``[0, length]`` and returns points (stacked along leading axes).
    """

    p: np.ndarray
    q: np.ndarray
    length: float
    _evaluate: Callable = field(repr=False)

    def point_at(self, s):
        slack = 1e-12 * max(self.length, 1.0)
        if np.ndim(s) == 0:
            t = float(s)
            if not -slack <= t <= self.length + slack:
                raise DomainError(f"arclength outside [0, {self.length}]")
            if t <= 0.0:
                return self.p.copy()
            if t >= self.length:
                return self.q.copy()
            return self._evaluate(t)
        s_arr = np.asarray(s, float)
        if s_arr.size == 0:
            return self._evaluate(s_arr)
        lo, hi = float(s_arr.min()), float(s_arr.max())
        if not (-slack <= lo and hi <= self.length + slack):
            raise DomainError(f"arclength outside [0, {self.length}]")
        if lo < 0.0 or hi > self.length:
            s_arr = np.clip(s_arr, 0.0, self.length)
        pts = self._evaluate(s_arr)
        # endpoints are returned exactly, whatever the rounding of evaluate
        if lo <= 0.0:
            pts = np.where((s_arr == 0.0)[..., None], self.p, pts)
        if hi >= self.length:
            pts = np.where((s_arr == self.length)[..., None], self.q, pts)
        return pts

    def sub(self, s0, s1):
        """The piece between arclengths ``s0`` and ``s1`` (reversed if ``s1 < s0``)."""
        s0, s1 = float(s0), float(s1)
        start, end = self.point_at(s0), self.point_at(s1)
        sign = 1.0 if s1 >= s0 else -1.0
        parent = self._evaluate
        length = abs(s1 - s0)
        return Segment(start, end, length, lambda t: parent(s0 + sign * t))

    def reversed(self):
        return self.sub(self.length, 0.0)


class GeodesicSpace(abc.ABC):
    """A complete geodesic metric space with computable segments.

    ``curvature_floor`` is the known Alexandrov lower curvature bound (or
    ``None`` if there is none); it is reference data for tests only.
    """

    name = None
    dim = None

    @property
    @abc.abstractmethod
    def curvature_floor(self) -> Optional[float]:
        ...

    @abc.abstractmethod
    def distance(self, p, q):
        """Distance between (arrays of) points; no validation."""

    @abc.abstractmethod
    def _segment(self, p, q, d):
        ...

    @abc.abstractmethod
    def validate(self, p):
        """Return ``p`` as a float array or raise :class:`DomainError`."""

    @abc.abstractmethod
    def exp(self, p, direction, t):
        """Point reached from ``p`` by moving ``t`` along ``direction`` (an angle)."""

    @abc.abstractmethod
    def to_json(self):
        ...

    def segment(self, p, q):
        p = self.validate(p)
        q = self.validate(q)
        d = float(self.distance(p, q))
        if d == 0.0:
            raise DomainError("segment endpoints coincide")
        return self._segment(p, q, d)

    def sample_near(self, base, radius, rng):
        """A random point within ``radius`` of ``base``."""
        t = radius * math.sqrt(rng.uniform())
        return self.exp(base, rng.uniform(0.0, 2.0 * math.pi), t)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_json()})"

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(tuple(sorted(self.to_json().items())))


class Plane(GeodesicSpace):
    name = "plane"
    dim = 2

    @property
    def curvature_floor(self):
        return 0.0

    def validate(self, p):
        p = np.asarray(p, float)
        if p.shape != (2,) or not np.all(np.isfinite(p)):
            raise DomainError(f"not a point of the plane: {p!r}")
        return p

    def distance(self, p, q):
        d = np.asarray(q, float) - np.asarray(p, float)
        return _out(np.hypot(d[..., 0], d[..., 1]))

    def _segment(self, p, q, d):
        unit = (q - p) / d
        return Segment(p, q, d, lambda s: p + np.asarray(s)[..., None] * unit)

    def exp(self, p, direction, t):
        return np.asarray(p, float) + t * np.array([math.cos(direction), math.sin(direction)])

    def to_json(self):
        return {"space": "plane"}


class Sphere(GeodesicSpace):
    """Round sphere of the given radius, centred at the origin of R^3."""

    name = "sphere"
    dim = 3

    def __init__(self, radius=1.0):
        if not radius > 0:
            raise DomainError("sphere radius must be positive")
        self.radius = float(radius)

    @property
    def curvature_floor(self):
        return 1.0 / self.radius**2

    def point(self, colatitude, longitude):
        st = math.sin(colatitude)
        return self.radius * np.array(
            [st * math.cos(longitude), st * math.sin(longitude), math.cos(colatitude)]
        )

    def validate(self, p):
        p = np.asarray(p, float)
        if p.shape != (3,) or not math.isfinite(p @ p):
            raise DomainError(f"not a point of R^3: {p!r}")
        if abs(math.sqrt(p @ p) - self.radius) > CONSTRAINT_TOL * max(1.0, self.radius):
            raise DomainError(f"point is not on the sphere of radius {self.radius}")
        return p

    def distance(self, p, q):
        u = np.asarray(p, float)
        v = np.asarray(q, float)
        u0, u1, u2 = u[..., 0], u[..., 1], u[..., 2]
        v0, v1, v2 = v[..., 0], v[..., 1], v[..., 2]
        # |u x v| spelled out: np.cross carries heavy overhead on short arrays
        sin_part = np.sqrt((u1 * v2 - u2 * v1) ** 2 + (u2 * v0 - u0 * v2) ** 2
                           + (u0 * v1 - u1 * v0) ** 2)
        cos_part = u0 * v0 + u1 * v1 + u2 * v2
        return _out(self.radius * np.arctan2(sin_part, cos_part))

    def _segment(self, p, q, d):
        r = self.radius
        u = p / r
        v = q / r
        n = _cross(u, v)
        nn = math.sqrt(n @ n)
        if nn < 1e-12 and np.dot(u, v) < 0:
            raise AmbiguityError("antipodal points are joined by infinitely many segments")
        if nn > 0:
            w = _cross(n / nn, u)
        else:
            raise DomainError("segment endpoints coincide")

        def evaluate(s):
            if np.ndim(s) == 0:
                th = float(s) / r
                return r * (math.cos(th) * u + math.sin(th) * w)
            th = np.asarray(s)[..., None] / r
            return r * (np.cos(th) * u + np.sin(th) * w)

        return Segment(p, q, d, evaluate)

    def _frame(self, u):
        ref = np.array([0.0, 0.0, 1.0]) if abs(u[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        e1 = np.cross(ref, u)
        e1 /= np.linalg.norm(e1)
        return e1, np.cross(u, e1)

    def exp(self, p, direction, t):
        r = self.radius
        u = np.asarray(p, float) / r
        e1, e2 = self._frame(u)
        w = math.cos(direction) * e1 + math.sin(direction) * e2
        return r * (math.cos(t / r) * u + math.sin(t / r) * w)

    def to_json(self):
        return {"space": "sphere", "radius": self.radius}


def _cross(u, v):
    return np.array([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                     u[0] * v[1] - u[1] * v[0]])


def minkowski(x, y):
    """Bilinear form ``-x0 y0 + x1 y1 + x2 y2`` (broadcasting)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    return _out(-x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] + x[..., 2] * y[..., 2])


class HyperbolicPlane(GeodesicSpace):
    """Hyperboloid model of curvature -1."""

    name = "hyperbolic"
    dim = 3

    @property
    def curvature_floor(self):
        return -1.0

    @staticmethod
    def point(r, theta):
        """Point at distance ``r`` from the origin ``(1, 0, 0)`` in direction ``theta``."""
        sh = math.sinh(r)
        return np.array([math.cosh(r), sh * math.cos(theta), sh * math.sin(theta)])

    def validate(self, p):
        p = np.asarray(p, float)
        if p.shape != (3,) or not np.all(np.isfinite(p)) or p[0] <= 0:
            raise DomainError(f"not a point of the upper hyperboloid sheet: {p!r}")
        if abs(minkowski(p, p) + 1.0) > CONSTRAINT_TOL * max(1.0, p[0] * p[0]):
            raise DomainError("point violates the Minkowski constraint <p, p> = -1")
        return p

    def distance(self, p, q):
        # 2 asinh(|p - q|_L / 2) keeps full relative accuracy at short range
        diff = np.asarray(q, float) - np.asarray(p, float)
        m = -diff[..., 0] ** 2 + diff[..., 1] ** 2 + diff[..., 2] ** 2
        return _out(2.0 * np.arcsinh(0.5 * np.sqrt(np.maximum(m, 0.0))))

    def _segment(self, p, q, d):
        w = (q - math.cosh(d) * p) / math.sinh(d)

        def evaluate(s):
            s = np.asarray(s)[..., None]
            x = np.cosh(s) * p + np.sinh(s) * w
            # re-project onto the sheet; x0 is the dependent coordinate
            x0 = np.sqrt(1.0 + x[..., 1] ** 2 + x[..., 2] ** 2)
            return np.concatenate([x0[..., None], x[..., 1:]], axis=-1)

        return Segment(p, q, d, evaluate)

    def exp(self, p, direction, t):
        p = np.asarray(p, float)
        p0, pv = p[0], p[1:]
        # boost carrying (1, 0, 0) to p applied to the standard tangent frame
        e = [np.concatenate([[pv[i]], np.eye(2)[i] + pv[i] * pv / (1.0 + p0)]) for i in range(2)]
        w = math.cos(direction) * e[0] + math.sin(direction) * e[1]
        x = math.cosh(t) * p + math.sinh(t) * w
        x[0] = math.sqrt(1.0 + x[1] ** 2 + x[2] ** 2)
        return x

    def to_json(self):
        return {"space": "hyperbolic"}


class Cone(GeodesicSpace):
    """Euclidean cone of total angle ``theta`` over its apex ``(0, 0)``.

    For ``theta < 2 pi`` it has curvature >= 0 (the apex is a positive
    curvature concentration); for ``theta > 2 pi`` no lower bound exists.
    Two points whose angular gap is at least ``pi`` are joined through
    the apex.
    """

    name = "cone"
    dim = 2

    def __init__(self, total_angle):
        if not total_angle > 0:
            raise DomainError("cone total angle must be positive")
        self.total_angle = float(total_angle)

    @property
    def curvature_floor(self):
        return 0.0 if self.total_angle <= 2.0 * math.pi else None

    @property
    def apex(self):
        return np.zeros(2)

    def point(self, r, phi):
        return np.array([float(r), float(phi) % self.total_angle])

    def validate(self, p):
        p = np.asarray(p, float)
        if p.shape != (2,) or not np.all(np.isfinite(p)):
            raise DomainError(f"not a cone point (r, phi): {p!r}")
        if p[0] < -CONSTRAINT_TOL:
            raise DomainError("cone radius must be nonnegative")
        return np.array([max(p[0], 0.0), p[1] % self.total_angle])

    def angular_gap(self, phi1, phi2):
        """Shorter angular separation ``min(|d|, theta - |d|)`` of two directions."""
        th = self.total_angle
        d = np.abs(np.asarray(phi1, float) - np.asarray(phi2, float)) % th
        return _out(np.minimum(d, th - d))

    def distance(self, p, q):
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        r1, r2 = p[..., 0], q[..., 0]
        gap = np.asarray(self.angular_gap(p[..., 1], q[..., 1]))
        chord = np.sqrt((r1 - r2) ** 2 + 4.0 * r1 * r2 * np.sin(0.5 * np.minimum(gap, math.pi)) ** 2)
        return _out(np.where(gap <= math.pi, chord, r1 + r2))

    def _segment(self, p, q, d):
        th = self.total_angle
        r1, phi1 = p
        r2, phi2 = q
        if r1 == 0.0:
            return Segment(p, q, d, lambda s: _polar(np.asarray(s), phi2))
        if r2 == 0.0:
            return Segment(p, q, d, lambda s: _polar(r1 - np.asarray(s), phi1))
        delta = (phi2 - phi1) % th
        sign = 1.0
        if th - delta < delta:
            delta, sign = th - delta, -1.0
        if delta >= math.pi:

            def through_apex(s):
                s = np.asarray(s)
                return np.where(
                    (s <= r1)[..., None], _polar(r1 - s, phi1), _polar(s - r1, phi2)
                )

            return Segment(p, q, d, through_apex)

        # develop the sector between the two rays into the plane
        start = np.array([r1, 0.0])
        step = (np.array([r2 * math.cos(delta), r2 * math.sin(delta)]) - start) / d

        def unrolled(s):
            w = start + np.asarray(s)[..., None] * step
            ang = np.arctan2(w[..., 1], w[..., 0])
            return _polar(np.hypot(w[..., 0], w[..., 1]), (phi1 + sign * ang) % th)

        return Segment(p, q, d, unrolled)

    def exp(self, p, direction, t):
        """``direction`` is measured from the outward radial ray at ``p``
        (at the apex it is the angular coordinate itself)."""
        r0, phi0 = np.asarray(p, float)
        if r0 == 0.0:
            return np.array([t, direction % self.total_angle])
        w = np.array([r0 + t * math.cos(direction), t * math.sin(direction)])
        return np.array([math.hypot(*w), (phi0 + math.atan2(w[1], w[0])) % self.total_angle])

    def sample_near(self, base, radius, rng):
        base = np.asarray(base, float)
        if base[0] == 0.0:
            return np.array([radius * math.sqrt(rng.uniform()), rng.uniform(0.0, self.total_angle)])
        lo, hi = max(0.0, base[0] - radius), base[0] + radius
        while True:
            cand = np.array([rng.uniform(lo, hi), rng.uniform(0.0, self.total_angle)])
            if self.distance(base, cand) <= radius:
                return cand

    def to_json(self):
        return {"space": "cone", "total_angle": self.total_angle}


def _polar(r, phi):
    r, phi = np.broadcast_arrays(np.asarray(r, float), np.asarray(phi, float))
    return np.stack([r, phi], axis=-1)


def space_from_json(obj):
    """Inverse of ``space.to_json()``."""
    kind = obj.get("space")
    if kind == "plane":
        return Plane()
    if kind == "sphere":
        return Sphere(obj.get("radius", 1.0))
    if kind == "hyperbolic":
        return HyperbolicPlane()
    if kind == "cone":
        if "total_angle" not in obj:
            raise DomainError("cone descriptor needs 'total_angle'")
        return Cone(obj["total_angle"])
    raise DomainError(f"unknown space descriptor: {obj!r}")


def distance(space, p, q):
    """Validated distance ``|pq|``."""
    return space.distance(space.validate(p), space.validate(q))


def segment(space, p, q):
    return space.segment(p, q)


def interpolate(seg, s):
    """Point of ``seg`` at arclength ``s`` (exact at both endpoints)."""
    return seg.point_at(s)
