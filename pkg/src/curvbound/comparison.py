"""Hinges, Alexandrov angles and the comparison properties A, H and D.

For a hinge ``H_p(x, y)`` in a geodesic space and a curvature ``kappa``:

* (A) the hinge angle is at least the comparison angle of ``(p, x, y)``;
* (H) ``|xy|`` is at most the opposite side of the model hinge with the
  same side lengths and the same angle;
* (D) for all ``u`` on ``px`` and ``v`` on ``py``, ``|uv|`` is at least the
  distance of the corresponding points in the model comparison triangle.

The hinge angle (the Alexandrov upper angle) is a limit of comparison
angles along the two sides; it is evaluated on a geometric ladder of
scales, see :func:`upper_angle`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EstimationError
from .model import angle_from_sss, side_from_sas
from .trig import model_diameter, sn

__all__ = [
    "ANGLE_TOL",
    "DISTANCE_RTOL",
    "Hinge",
    "AngleEstimate",
    "Verdict",
    "perimeter",
    "comparison_angle",
    "upper_angle",
    "upper_angles",
    "check_property",
    "check_balanced",
    "estimate_curvature_floor",
]

ANGLE_TOL = 1e-6
DISTANCE_RTOL = 1e-8
DEFAULT_RUNGS = 20
DEFAULT_GRID = 16
MONOTONE_TOL = 1e-9
EPS = np.finfo(float).eps
# absolute error of a computed distance, in units of eps times the coordinate size
ROUNDING_ULPS = 4.0


@dataclass(frozen=True, eq=False)
class Hinge:
    """Vertex ``p`` with two nondegenerate segments ``px`` and ``py``."""

    side_x: object
    side_y: object

    def __post_init__(self):
        if not (self.side_x.length > 0 and self.side_y.length > 0):
            raise DomainError("hinge sides must be nondegenerate")

    @classmethod
    def from_points(cls, space, p, x, y):
        return cls(space.segment(p, x), space.segment(p, y))

    @classmethod
    def from_sas(cls, space, p, b, a, gamma, heading=0.0):
        """Hinge at ``p`` with ``|px| = b``, ``|py| = a`` and opening ``gamma``.

        ``x`` is shot along ``heading`` and ``y`` along ``heading + gamma``
        with the space's exponential map.
        """
        x = space.exp(p, heading, b)
        y = space.exp(p, heading + gamma, a)
        return cls.from_points(space, p, x, y)

    @property
    def p(self):
        return self.side_x.p

    @property
    def x(self):
        return self.side_x.q

    @property
    def y(self):
        return self.side_y.q

    def lengths(self, space):
        """``(|px|, |py|, |xy|)``."""
        return self.side_x.length, self.side_y.length, float(space.distance(self.x, self.y))

    def perimeter(self, space):
        return perimeter(*self.lengths(space))

    def swapped(self):
        return Hinge(self.side_y, self.side_x)

    def to_json(self):
        return {"p": self.p.tolist(), "x": self.x.tolist(), "y": self.y.tolist()}


@dataclass(frozen=True)
class AngleEstimate:
    value: float
    uncertainty: float
    samples: tuple  # ((scale, comparison angle), ...) from coarse to fine
    monotone: bool


@dataclass
class Verdict:
    """Outcome of one comparison check.

    ``passed`` is true exactly when ``worst_margin >= -tolerance``.
    """

    property: str
    kappa: float
    passed: bool
    worst_margin: float
    tolerance: float
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "property": self.property,
            "kappa": self.kappa,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "witness": self.witness,
        }
        if self.details:
            out["details"] = self.details
        return out


def _verdict(prop, kappa, margin, tol, witness, details=None):
    return Verdict(prop, float(kappa), bool(margin >= -tol), float(margin), float(tol),
                   witness, details or {})


def perimeter(d_px, d_py, d_xy):
    return d_px + d_py + d_xy


def comparison_angle(kappa, space, p, x, y):
    """Angle at ``pbar`` of a model triangle with the distances of ``(p, x, y)``."""
    d_px = float(space.distance(p, x))
    d_py = float(space.distance(p, y))
    d_xy = float(space.distance(x, y))
    return angle_from_sss(kappa, d_px, d_py, d_xy)


def upper_angle(kappa, space, hinge, s0=None, rungs=DEFAULT_RUNGS, factor=2.0):
    """Alexandrov angle of ``hinge`` from comparison angles at shrinking scales.

    Comparison angles are taken at ``u = px(s)``, ``v = py(s)`` for
    ``s = s0 * factor**-i``, ``i = 0 .. rungs``.  Since ``|pu| = |pv| = s``
    exactly, only ``|uv|`` is measured.  Shrinking ``s`` removes the
    curvature bias of the comparison angle but amplifies rounding (an angle
    near 0 or pi computed from lengths of size ``s`` carries an error of
    order ``sqrt(eps / s)``).  Each sample is therefore scored by the larger
    change to its two neighbours plus its propagated rounding error, and
    the estimate is the sample with the smallest score; that score is the
    reported uncertainty.  Samples clamped to exactly 0 or pi are rounding
    artefacts near a straight angle and are skipped unless nothing else is
    available.  ``monotone`` tells whether the samples move in one
    direction up to their rounding errors plus ``1e-9``.
    """
    return upper_angles(kappa, space, [hinge], s0=s0, rungs=rungs, factor=factor)[0]


def upper_angles(kappa, space, hinges, s0=None, rungs=DEFAULT_RUNGS, factor=2.0):
    """:func:`upper_angle` for many hinges at once (one vectorized solve).

    ``s0`` (if given) applies to every hinge; by default each hinge starts
    at its shorter side.
    """
    if not hinges:
        return []
    ladder = float(factor) ** -np.arange(rungs + 1)
    scales, us, vs, sizes = [], [], [], []
    for hinge in hinges:
        short = min(hinge.side_x.length, hinge.side_y.length)
        start = short if s0 is None else s0
        if not 0 < start <= short * (1 + 1e-12):
            raise DomainError("initial scale must be positive and at most the shorter side")
        s = min(start, short) * ladder
        scales.append(s)
        sizes.append(max(1.0, float(np.max(np.abs(hinge.p)))))
        us.append(hinge.side_x.point_at(s))
        vs.append(hinge.side_y.point_at(s))
    s = np.stack(scales)
    # |uv| <= |pu| + |pv| holds in any metric space; coordinate rounding
    # can exceed it by a few ulps of the point's position at tiny scales
    duv = np.minimum(np.asarray(space.distance(np.stack(us), np.stack(vs))), 2.0 * s)
    angles = _isosceles_angle(kappa, s, duv)
    noise = _rounding_error(angles, s, ROUNDING_ULPS * EPS * np.array(sizes)[:, None])
    steps = np.diff(angles, axis=-1)
    slack = MONOTONE_TOL + noise[:, :-1] + noise[:, 1:]
    monotone = np.all(steps >= -slack, axis=-1) | np.all(steps <= slack, axis=-1)
    values, uncs = _stable_samples(angles, noise)
    return [
        AngleEstimate(float(values[i]), float(uncs[i]), tuple(zip(s[i].tolist(), angles[i].tolist())),
                      bool(monotone[i]))
        for i in range(len(hinges))
    ]


def _isosceles_angle(kappa, s, c):
    """Model angle between two sides of length ``s`` with ``c`` opposite.

    The sn form of the law of cosines with ``a = b = s`` reduces to
    ``sin(gamma/2) = sn(c/2) / sn(s)``; the complementary
    ``cos(gamma/2)**2`` is formed as a product so ``atan2`` stays accurate
    near both ends.  Requires ``0 <= c <= 2 s`` and ``s < D_kappa``.
    """
    if kappa > 0 and np.any(s >= model_diameter(kappa)):
        raise DomainError("upper-angle scales must stay below D_kappa")
    sn_s = sn(kappa, s)
    sn_h = sn(kappa, 0.5 * c)
    cos_part = np.sqrt(np.maximum((sn_s - sn_h) * (sn_s + sn_h), 0.0))
    return 2.0 * np.arctan2(sn_h, cos_part)


def _rounding_error(angles, s, dist_err):
    """Angle error caused by an absolute error ``dist_err`` in ``|uv|``.

    With ``|pu| = |pv| = s`` the chord grows like ``s cos(gamma/2)`` per
    unit angle; near ``gamma = pi`` that rate vanishes and the error
    saturates at ``2 sqrt(dist_err / s)``.
    """
    ratio = dist_err / s
    cos_half = np.cos(0.5 * angles)
    with np.errstate(divide="ignore"):
        linear = np.where(cos_half > 0, ratio / cos_half, np.inf)
    return np.minimum(linear, 2.0 * np.sqrt(ratio))


def _stable_samples(angles, noise):
    """Most stable sample of each row of ``angles`` and its uncertainty."""
    rows = np.arange(angles.shape[0])
    if angles.shape[1] < 3:
        return angles[:, -1], np.abs(angles[:, -1] - angles[:, 0]) + noise[:, -1]
    steps = np.abs(np.diff(angles, axis=-1))
    # score[:, k] belongs to angles[:, k + 1]
    score = np.maximum(steps[:, :-1], steps[:, 1:]) + noise[:, 1:-1]
    inner = (angles > 0.0) & (angles < math.pi)
    usable = inner[:, :-2] & inner[:, 1:-1] & inner[:, 2:]
    score = np.where(usable | ~np.any(usable, axis=-1, keepdims=True), score, np.inf)
    k = np.argmin(score, axis=-1)
    return angles[rows, k + 1], score[rows, k]


def _check_perimeter(kappa, per):
    if kappa > 0 and not per < 2 * model_diameter(kappa):
        raise DomainError("hinge perimeter must be below 2 D_kappa")


def _grid(length, n):
    return length * np.arange(1, n + 1) / n


def _distance_margins(kappa, su, sv, duv, d_px, d_py, d_xy):
    """``|uv| - |ubar vbar|`` over a grid of interior arclengths (broadcasting)."""
    gamma = angle_from_sss(kappa, d_px, d_py, d_xy)
    return duv - side_from_sas(kappa, su, sv, gamma)


def check_property(prop, kappa, space, hinge, grid=DEFAULT_GRID, tolerance=None, angle=None):
    """Check comparison property ``"A"``, ``"H"`` or ``"D"`` on one hinge.

    Margins are signed so that a negative value is a violation: angle units
    for A (tolerance ``ANGLE_TOL``), length units for H and D (tolerance
    ``DISTANCE_RTOL`` times the perimeter).  ``angle`` may supply a
    precomputed :class:`AngleEstimate` for the hinge.
    """
    d_px, d_py, d_xy = hinge.lengths(space)
    per = perimeter(d_px, d_py, d_xy)
    _check_perimeter(kappa, per)

    if prop == "A":
        est = angle or upper_angle(kappa, space, hinge)
        comp = angle_from_sss(kappa, d_px, d_py, d_xy)
        tol = ANGLE_TOL if tolerance is None else tolerance
        witness = {"angle": est.value, "comparison_angle": comp, "uncertainty": est.uncertainty}
        return _verdict("A", kappa, est.value - comp, tol, witness)

    if prop == "H":
        est = angle or upper_angle(kappa, space, hinge)
        hat = side_from_sas(kappa, d_px, d_py, est.value)
        tol = DISTANCE_RTOL * per if tolerance is None else tolerance
        witness = {"angle": est.value, "model_side": hat, "side": d_xy}
        return _verdict("H", kappa, hat - d_xy, tol, witness)

    if prop == "D":
        su = _grid(d_px, grid)
        sv = _grid(d_py, grid)
        u = hinge.side_x.point_at(su)
        v = hinge.side_y.point_at(sv)
        duv = np.asarray(space.distance(u[:, None, :], v[None, :, :]))
        margins = _distance_margins(kappa, su[:, None], sv[None, :], duv, d_px, d_py, d_xy)
        i, j = np.unravel_index(int(np.argmin(margins)), margins.shape)
        worst, wu, wv = float(margins[i, j]), float(su[i]), float(sv[j])
        # corner pairs with u = p or v = p: the model distance is the other arclength
        for cu, cv in ((0.0, d_py), (d_px, 0.0)):
            a = hinge.side_x.point_at(cu)
            b = hinge.side_y.point_at(cv)
            m = float(space.distance(a, b)) - (cu + cv)
            if m < worst:
                worst, wu, wv = m, cu, cv
        tol = DISTANCE_RTOL * per if tolerance is None else tolerance
        return _verdict("D", kappa, worst, tol, {"u": wu, "v": wv})

    raise DomainError(f"unknown comparison property {prop!r}")


def check_balanced(space, seg, probes, tolerance=ANGLE_TOL, kappa=0.0):
    """Check that ``seg`` is balanced at the given probes.

    Each probe is ``(t, y)``: the point ``q = seg(t)`` (strictly interior)
    and a point ``y`` joined to ``q`` by a fresh segment.  The margin is
    ``pi - angle_q(p, y) - angle_q(x, y)``; the segment passes when every
    margin is within ``tolerance`` of zero.  ``details["max_angle_sum_deficit"]``
    records the largest violation of the always-true inequality
    ``angle_q(p, y) + angle_q(x, y) >= pi``.
    """
    worst_abs, witness = -1.0, {}
    deficit = -math.inf
    for t, y in probes:
        t = float(t)
        if not 0.0 < t < seg.length:
            raise DomainError("probe point must be strictly interior to the segment")
        to_p = seg.sub(t, 0.0)
        to_x = seg.sub(t, seg.length)
        q = to_p.p
        to_y = space.segment(q, y)
        a1 = upper_angle(kappa, space, Hinge(to_p, to_y)).value
        a2 = upper_angle(kappa, space, Hinge(to_x, to_y)).value
        margin = math.pi - a1 - a2
        deficit = max(deficit, margin)
        if abs(margin) > worst_abs:
            worst_abs = abs(margin)
            witness = {"t": t, "y": np.asarray(y, float).tolist(), "angle_sum": a1 + a2}
    return _verdict("balanced", kappa, -worst_abs, tolerance, witness,
                    {"max_angle_sum_deficit": deficit})


@dataclass
class _HingeSample:
    d_px: np.ndarray
    d_py: np.ndarray
    d_xy: np.ndarray
    su: np.ndarray
    sv: np.ndarray
    duv: np.ndarray


def sample_hinges(space, base_point, scale, n_hinges, seed=0):
    """Fixed pseudo-random hinges with all three points within ``scale/2`` of ``base_point``."""
    rng = np.random.default_rng(seed)
    base = space.validate(base_point)
    hinges = []
    while len(hinges) < n_hinges:
        p, x, y = (space.sample_near(base, 0.5 * scale, rng) for _ in range(3))
        if min(space.distance(p, x), space.distance(p, y)) < 0.05 * scale:
            continue
        hinges.append(Hinge.from_points(space, p, x, y))
    return hinges


def _precompute(space, hinges, grid):
    rows = []
    for h in hinges:
        d_px, d_py, d_xy = h.lengths(space)
        su, sv = _grid(d_px, grid), _grid(d_py, grid)
        u, v = h.side_x.point_at(su), h.side_y.point_at(sv)
        rows.append((d_px, d_py, d_xy, su, sv, space.distance(u[:, None, :], v[None, :, :])))
    cols = list(zip(*rows))
    return _HingeSample(*(np.array(c) for c in cols))


def estimate_curvature_floor(space, base_point, scale, kappa_bracket=(-5.0, 5.0),
                             n_hinges=48, grid=8, seed=0, width=1e-2):
    """Largest kappa for which sampled small hinges near ``base_point`` satisfy (D).

    Bisection on the predicate "every sampled hinge passes (D_kappa)".  The
    hinge sample is drawn once from ``seed`` so the predicate is a fixed,
    monotone function of kappa.

    Raises
    ------
    EstimationError
        If the predicate does not hold at the lower bracket end or does
        not fail at the upper end.
    """
    hinges = sample_hinges(space, base_point, scale, n_hinges, seed)
    data = _precompute(space, hinges, grid)
    per = data.d_px + data.d_py + data.d_xy

    def all_pass(kappa):
        if kappa > 0 and np.any(per >= 2 * model_diameter(kappa)):
            return False
        margins = _distance_margins(
            kappa, data.su[:, :, None], data.sv[:, None, :], data.duv,
            data.d_px[:, None, None], data.d_py[:, None, None], data.d_xy[:, None, None],
        )
        return bool(np.all(margins.min(axis=(1, 2)) >= -DISTANCE_RTOL * per))

    lo, hi = (float(k) for k in kappa_bracket)
    if not all_pass(lo) or all_pass(hi):
        raise EstimationError(f"bracket {kappa_bracket} does not separate pass from fail")
    while hi - lo >= width:
        mid = 0.5 * (lo + hi)
        if all_pass(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
