"""Independent reference computations for the test suite.

Nothing in this module imports :mod:`curvbound`.  Scalar special functions
come from mpmath at 50 digits; model-plane geometry comes from explicit
coordinates (the Euclidean plane, the unit sphere, the unit hyperboloid)
rescaled to curvature ``kappa``.  Angles at a vertex are measured between
tangent vectors of the embedding, never through a law of cosines.
"""

import math

import mpmath as mp
import numpy as np

mp.mp.dps = 50


# ------------------------------------------------------------ mpmath kernels


def mp_sn(kappa, x):
    k, x = mp.mpf(kappa), mp.mpf(x)
    if k > 0:
        return mp.sin(mp.sqrt(k) * x) / mp.sqrt(k)
    if k < 0:
        return mp.sinh(mp.sqrt(-k) * x) / mp.sqrt(-k)
    return x


def mp_cs(kappa, x):
    k, x = mp.mpf(kappa), mp.mpf(x)
    if k > 0:
        return mp.cos(mp.sqrt(k) * x)
    if k < 0:
        return mp.cosh(mp.sqrt(-k) * x)
    return mp.mpf(1)


def mp_md(kappa, x):
    """``(1 - cs)/kappa``, or ``x^2/2`` at ``kappa = 0``: the other closed form."""
    k, x = mp.mpf(kappa), mp.mpf(x)
    if k == 0:
        return x * x / 2
    return (1 - mp_cs(k, x)) / k


def mp_sas(kappa, a, b, gamma):
    """Third side of a model triangle from coordinates at 50 digits.

    ``x`` sits at distance ``b`` from the base point along direction 0 and
    ``y`` at distance ``a`` along direction ``gamma``.
    """
    k = mp.mpf(kappa)
    a, b, g = mp.mpf(a), mp.mpf(b), mp.mpf(gamma)
    if k == 0:
        x = mp.matrix([b, 0])
        y = mp.matrix([a * mp.cos(g), a * mp.sin(g)])
        return mp.norm(x - y)
    r = 1 / mp.sqrt(abs(k))
    if k > 0:
        def pt(t, th):
            return mp.matrix([mp.sin(t / r) * mp.cos(th), mp.sin(t / r) * mp.sin(th), mp.cos(t / r)])
        u, v = pt(b, 0), pt(a, g)
        cross = mp.matrix([u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]])
        return r * mp.atan2(mp.norm(cross), u[0] * v[0] + u[1] * v[1] + u[2] * v[2])

    def pt(t, th):
        return mp.matrix([mp.cosh(t / r), mp.sinh(t / r) * mp.cos(th), mp.sinh(t / r) * mp.sin(th)])
    u, v = pt(b, 0), pt(a, g)
    inner = -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    return r * mp.acosh(-inner)


# ------------------------------------------------------- float embeddings


class ModelEmbedding:
    """The model plane of curvature ``kappa`` in explicit coordinates.

    Points are arrays with a trailing coordinate axis: 2 coordinates for
    ``kappa = 0``, 3 otherwise (unit sphere or unit hyperboloid; lengths
    are rescaled by ``1/sqrt(|kappa|)``).  All methods broadcast.
    """

    def __init__(self, kappa):
        self.kappa = float(kappa)
        self.scale = 1.0 if kappa == 0 else 1.0 / math.sqrt(abs(kappa))

    def point(self, t, theta):
        """Point at distance ``t`` from the base point in direction ``theta``."""
        t = np.asarray(t, float) / self.scale
        th = np.asarray(theta, float)
        t, th = np.broadcast_arrays(t, th)
        if self.kappa == 0:
            return np.stack([t * np.cos(th), t * np.sin(th)], axis=-1)
        if self.kappa > 0:
            return np.stack([np.sin(t) * np.cos(th), np.sin(t) * np.sin(th), np.cos(t)], axis=-1)
        return np.stack([np.cosh(t), np.sinh(t) * np.cos(th), np.sinh(t) * np.sin(th)], axis=-1)

    def _inner(self, u, v):
        prod = u * v
        if self.kappa < 0:
            return -prod[..., 0] + prod[..., 1] + prod[..., 2]
        return prod.sum(axis=-1)

    def distance(self, u, v):
        u, v = np.asarray(u, float), np.asarray(v, float)
        if self.kappa == 0:
            return np.linalg.norm(u - v, axis=-1)
        if self.kappa > 0:
            return self.scale * np.arctan2(np.linalg.norm(np.cross(u, v), axis=-1), self._inner(u, v))
        w = u - v
        chord = np.sqrt(np.maximum(self._inner(w, w), 0.0))
        return self.scale * 2.0 * np.arcsinh(0.5 * chord)

    def midpoint(self, u, v):
        """Midpoint of the segment ``uv``: the normalized sum of the endpoints."""
        w = np.asarray(u, float) + np.asarray(v, float)
        if self.kappa == 0:
            return 0.5 * w
        return w / np.sqrt(np.abs(self._inner(w, w)))[..., None]

    def _tangent(self, p, q):
        if self.kappa == 0:
            t = q - p
        elif self.kappa > 0:
            t = q - self._inner(p, q)[..., None] * p
        else:
            t = q + self._inner(p, q)[..., None] * p
        return t / np.sqrt(self._inner(t, t))[..., None]

    def angle(self, p, q, r):
        """Angle at ``p`` between the directions towards ``q`` and ``r``."""
        p, q, r = (np.asarray(v, float) for v in (p, q, r))
        u, v = self._tangent(p, q), self._tangent(p, r)
        d, s = u - v, u + v
        return 2.0 * np.arctan2(np.sqrt(np.maximum(self._inner(d, d), 0.0)),
                                np.sqrt(np.maximum(self._inner(s, s), 0.0)))

    def sas(self, a, b, gamma):
        """Third side opposite ``gamma`` between sides ``a`` and ``b``."""
        return self.distance(self.point(b, 0.0), self.point(a, gamma))

    def angle_for_sides(self, a, b, c, iterations=64):
        """Angle opposite ``c`` between ``a`` and ``b``, by bisection on :meth:`sas`."""
        a, b, c = np.broadcast_arrays(*(np.asarray(v, float) for v in (a, b, c)))
        lo = np.zeros(a.shape)
        hi = np.full(a.shape, math.pi)
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            short = self.sas(a, b, mid) < c
            lo = np.where(short, mid, lo)
            hi = np.where(short, hi, mid)
        return 0.5 * (lo + hi)


# ------------------------------------------------------------ cone oracles


def cone_unrolled_distance(theta, p, q):
    """Cone distance by unrolling the sector between the two rays."""
    (r1, f1), (r2, f2) = p, q
    d = abs(f1 - f2) % theta
    gap = min(d, theta - d)
    if gap >= math.pi:
        return r1 + r2
    return math.hypot(r2 * math.cos(gap) - r1, r2 * math.sin(gap))


def cone_hinge_angle_symmetric(r_p, r_far, half_gap):
    """Angle at ``p = (r_p, 0)`` of the hinge towards ``(r_far, +-half_gap)``.

    The two sides are mirror images in the ray through ``p``; each makes
    the angle ``psi`` with the outward radial direction in the unrolled
    sector, and the hinge angle is the smaller of ``2 psi`` and ``2 pi - 2 psi``.
    """
    psi = math.atan2(r_far * math.sin(half_gap), r_far * math.cos(half_gap) - r_p)
    return min(2.0 * psi, 2.0 * math.pi - 2.0 * psi)
