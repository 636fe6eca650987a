"""Triangle solvers in the model plane of constant curvature kappa.

Everything here is coordinate free: triangles are given by side lengths
and angles only.  Side naming follows the usual convention for a triangle
``x, y, z``: ``a = |yz|``, ``b = |zx|``, ``c = |xy|`` and ``gamma`` is the
angle at ``z`` (between the sides of length ``a`` and ``b``).

The law of cosines is used in its ``sn`` form,

    sn(c/2)**2 = sn((a-b)/2)**2 + sn(a) sn(b) sin(gamma/2)**2
               = sn((a+b)/2)**2 - sn(a) sn(b) cos(gamma/2)**2,

which has no division by kappa and no catastrophic cancellation near
``gamma = 0`` (first line) or ``gamma = pi`` (second line).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InconsistencyError
from .trig import cs, md, model_diameter, sn, sn_inverse

__all__ = [
    "CLAMP_TOL",
    "TRIANGLE_TOL",
    "ALEXANDROV_TOL",
    "TriangleData",
    "HingeSAS",
    "AlexandrovConfig",
    "side_from_sas",
    "angle_from_sss",
    "triple_exists",
    "midpoint_distance",
    "alexandrov_compare",
    "signs_agree",
]

# squared sines/cosines may leave [0, 1] by this much before it is an error
CLAMP_TOL = 1e-9
# relative slack on the triangle inequality and on per <= 2 D_kappa
TRIANGLE_TOL = 1e-9
ALEXANDROV_TOL = 1e-8


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _is_scalar(*args):
    return all(isinstance(v, (int, float)) for v in args)


@dataclass(frozen=True)
class TriangleData:
    """Side lengths ``a = |yz|``, ``b = |zx|``, ``c = |xy|`` of a model triangle."""

    a: float
    b: float
    c: float

    def angle(self, kappa):
        """Angle opposite ``c``."""
        return angle_from_sss(kappa, self.a, self.b, self.c)

    def is_admissible(self, kappa):
        try:
            _check_triangle(kappa, self.a, self.b, self.c)
        except DomainError:
            return False
        return True


@dataclass(frozen=True)
class HingeSAS:
    """Two sides issuing from a vertex and the angle between them."""

    b_side: float
    a_side: float
    gamma: float

    def opposite_side(self, kappa):
        return side_from_sas(kappa, self.a_side, self.b_side, self.gamma)


@dataclass(frozen=True)
class AlexandrovConfig:
    """Distances among four points ``p, q, x, y`` of the model plane.

    ``q`` is thought of as a break point: the comparison hinge at ``p`` is
    built with side ``|pq| + |qx|`` toward ``x``.
    """

    d_pq: float
    d_qx: float
    d_qy: float
    d_py: float
    d_xy: float


def _check_sides(kappa, a, b):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise DomainError("hinge sides must be positive")
    d = model_diameter(kappa)
    if np.any(a >= d) or np.any(b >= d):
        raise DomainError(f"hinge sides must be shorter than the model diameter {d}")


def _check_triangle(kappa, a, b, c):
    a, b, c = (np.asarray(v, float) for v in (a, b, c))
    if np.any(~np.isfinite(a)) or np.any(~np.isfinite(b)) or np.any(~np.isfinite(c)):
        raise DomainError("side lengths must be finite")
    if np.any(a < 0) or np.any(b < 0) or np.any(c < 0):
        raise DomainError("side lengths must be nonnegative")
    per = a + b + c
    slack = TRIANGLE_TOL * per
    if np.any(c > a + b + slack) or np.any(a > b + c + slack) or np.any(b > a + c + slack):
        raise DomainError("side lengths violate the triangle inequality")
    if kappa > 0:
        d = model_diameter(kappa)
        if np.any(per > 2 * d * (1 + TRIANGLE_TOL)):
            raise DomainError("perimeter exceeds 2 D_kappa: no comparison triangle exists")
        if np.any(np.maximum(np.maximum(a, b), c) > d * (1 + TRIANGLE_TOL)):
            raise DomainError("a side exceeds the model diameter")


def side_from_sas(kappa, a, b, gamma):
    """Length of the side opposite ``gamma`` in a model hinge with sides ``a``, ``b``.

    This is the function ``gamma -> c_{a,b}(gamma)``; it is continuous and
    strictly increasing on ``[0, pi]``.  Broadcasts over array arguments.

    Raises
    ------
    DomainError
        If a side is not in ``(0, D_kappa)`` or ``gamma`` is not in ``[0, pi]``.
    """
    if _is_scalar(a, b, gamma):
        return _side_scalar(kappa, float(a), float(b), float(gamma))
    _check_sides(kappa, a, b)
    gamma = np.asarray(gamma, float)
    if np.any(~((gamma >= 0) & (gamma <= math.pi))):
        raise DomainError("hinge angle must lie in [0, pi]")
    a = np.asarray(a, float)
    b = np.asarray(b, float)

    snab = sn(kappa, a) * sn(kappa, b)
    h_minus = sn(kappa, 0.5 * (a - b))
    h_plus = sn(kappa, 0.5 * (a + b))
    half = 0.5 * gamma
    s2 = np.where(
        gamma <= 0.5 * math.pi,
        h_minus * h_minus + snab * np.sin(half) ** 2,
        h_plus * h_plus - snab * np.cos(half) ** 2,
    )
    s = np.sqrt(np.maximum(s2, 0.0))
    if kappa > 0:
        s = np.minimum(s, 1.0 / math.sqrt(kappa))
    return _out(2.0 * np.asarray(sn_inverse(kappa, s)))


def angle_from_sss(kappa, a, b, c):
    """Model angle between the sides ``a`` and ``b`` of a triangle with third side ``c``.

    Returns the unique ``gamma`` in ``[0, pi]`` with
    ``side_from_sas(kappa, a, b, gamma) == c``.  Both ``sin(gamma/2)**2`` and
    ``cos(gamma/2)**2`` are formed and combined with ``atan2`` so the result
    is accurate near ``0`` and near ``pi``.  Broadcasts over arrays.

    Raises
    ------
    DomainError
        If ``a`` or ``b`` is not in ``(0, D_kappa)``, or the triple is not
        realizable in the model plane.
    InconsistencyError
        If rounding pushes a squared sine or cosine outside ``[0, 1]`` by
        more than ``CLAMP_TOL``.
    """
    if _is_scalar(a, b, c):
        return _angle_scalar(kappa, float(a), float(b), float(c))
    _check_triangle(kappa, a, b, c)
    _check_sides(kappa, a, b)
    a, b, c = (np.asarray(v, float) for v in (a, b, c))

    snab = sn(kappa, a) * sn(kappa, b)
    h_minus = sn(kappa, 0.5 * (a - b)) ** 2
    h_plus = sn(kappa, 0.5 * (a + b)) ** 2
    h_c = sn(kappa, 0.5 * c) ** 2
    sin2 = (h_c - h_minus) / snab
    cos2 = (h_plus - h_c) / snab
    # relative to the largest term, the rounding floor of both differences
    scale = np.maximum(h_plus, h_c) / snab
    if np.any(sin2 < -CLAMP_TOL * scale) or np.any(cos2 < -CLAMP_TOL * scale):
        raise InconsistencyError("side lengths are inconsistent beyond the clamp tolerance")
    gamma = 2.0 * np.arctan2(np.sqrt(np.maximum(sin2, 0.0)), np.sqrt(np.maximum(cos2, 0.0)))
    return _out(gamma)


def _side_scalar(kappa, a, b, gamma):
    d = model_diameter(kappa)
    if not (0 < a < d and 0 < b < d):
        raise DomainError(f"hinge sides must lie in (0, {d}), got {a!r}, {b!r}")
    if not 0 <= gamma <= math.pi:
        raise DomainError(f"hinge angle must lie in [0, pi], got {gamma!r}")
    snab = sn(kappa, a) * sn(kappa, b)
    if gamma <= 0.5 * math.pi:
        h = sn(kappa, 0.5 * (a - b))
        s2 = h * h + snab * math.sin(0.5 * gamma) ** 2
    else:
        h = sn(kappa, 0.5 * (a + b))
        s2 = h * h - snab * math.cos(0.5 * gamma) ** 2
    s = math.sqrt(max(s2, 0.0))
    if kappa > 0:
        s = min(s, 1.0 / math.sqrt(kappa))
    return 2.0 * sn_inverse(kappa, s)


def _angle_scalar(kappa, a, b, c):
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
        raise DomainError("side lengths must be finite")
    if a < 0 or b < 0 or c < 0:
        raise DomainError("side lengths must be nonnegative")
    per = a + b + c
    slack = TRIANGLE_TOL * per
    if c > a + b + slack or a > b + c + slack or b > a + c + slack:
        raise DomainError(f"({a!r}, {b!r}, {c!r}) violates the triangle inequality")
    d = model_diameter(kappa)
    if kappa > 0:
        if per > 2 * d * (1 + TRIANGLE_TOL):
            raise DomainError("perimeter exceeds 2 D_kappa: no comparison triangle exists")
        if c > d * (1 + TRIANGLE_TOL):
            raise DomainError("a side exceeds the model diameter")
    if not (0 < a < d and 0 < b < d):
        raise DomainError("the sides adjacent to the angle must lie in (0, D_kappa)")

    snab = sn(kappa, a) * sn(kappa, b)
    h_minus = sn(kappa, 0.5 * (a - b)) ** 2
    h_plus = sn(kappa, 0.5 * (a + b)) ** 2
    h_c = sn(kappa, 0.5 * c) ** 2
    sin2 = (h_c - h_minus) / snab
    cos2 = (h_plus - h_c) / snab
    scale = max(h_plus, h_c) / snab
    if sin2 < -CLAMP_TOL * scale or cos2 < -CLAMP_TOL * scale:
        raise InconsistencyError("side lengths are inconsistent beyond the clamp tolerance")
    return 2.0 * math.atan2(math.sqrt(max(sin2, 0.0)), math.sqrt(max(cos2, 0.0)))


def triple_exists(kappa, d_px, d_py, d_xy):
    """Whether a comparison triple in the model plane exists for these distances.

    Always true for ``kappa <= 0``; for ``kappa > 0`` true iff the
    perimeter is at most ``2 D_kappa``.

    Raises
    ------
    DomainError
        If the distances violate the triangle inequality.
    """
    sides = (d_px, d_py, d_xy)
    if any(v < 0 for v in sides):
        raise DomainError("distances must be nonnegative")
    per = d_px + d_py + d_xy
    slack = TRIANGLE_TOL * per
    if d_xy > d_px + d_py + slack or d_px > d_py + d_xy + slack or d_py > d_px + d_xy + slack:
        raise DomainError("distances violate the triangle inequality")
    if kappa <= 0:
        return True
    return per <= 2 * model_diameter(kappa) * (1 + TRIANGLE_TOL)


def midpoint_distance(kappa, a, b, c):
    """Distance from the midpoint of side ``c`` to the opposite vertex.

    Solves ``2 cs(c/2) md(l) = md(a) + md(b) - 2 md(c/2)`` for ``l``.

    Raises
    ------
    DomainError
        For inadmissible triangles or when ``cs(c/2) <= 0``.
    """
    _check_triangle(kappa, a, b, c)
    half = 0.5 * c
    ch = cs(kappa, half)
    if ch <= 0:
        raise DomainError("cs(c/2) must be positive for the midpoint formula")
    rhs = md(kappa, a) + md(kappa, b) - 2.0 * md(kappa, half)
    md_l = rhs / (2.0 * ch)
    scale = max(md(kappa, a), md(kappa, b), 1e-300)
    if md_l < -CLAMP_TOL * scale:
        raise InconsistencyError("negative modified distance beyond the clamp tolerance")
    s = math.sqrt(max(md_l, 0.0) / 2.0)
    if kappa > 0:
        bound = 1.0 / math.sqrt(kappa)
        if s > bound * (1 + CLAMP_TOL):
            raise InconsistencyError("midpoint distance exceeds the model diameter")
        s = min(s, bound)
    return 2.0 * sn_inverse(kappa, s)


def alexandrov_compare(kappa, cfg):
    """Both sides of the equivalence in Alexandrov's lemma.

    Returns ``(defect_at_q, angle_gap_at_p)`` where

    * ``defect_at_q = pi - angle_q(p, y) - angle_q(x, y)`` and
    * ``angle_gap_at_p = angle_p(q, y) - angle_pbar(xbar, ybar)``, the latter
      taken in the model triple with sides ``|pq| + |qx|``, ``|py|``, ``|xy|``.

    The lemma says ``defect_at_q >= 0`` iff ``angle_gap_at_p >= 0`` (and the
    same with ``<=``); see :func:`signs_agree`.
    """
    d = model_diameter(kappa)
    if not (cfg.d_py < d and cfg.d_qy < d and cfg.d_pq + cfg.d_qx < d):
        raise DomainError("|py|, |qy| and |pq|+|qx| must be shorter than D_kappa")
    at_q_p = angle_from_sss(kappa, cfg.d_pq, cfg.d_qy, cfg.d_py)
    at_q_x = angle_from_sss(kappa, cfg.d_qx, cfg.d_qy, cfg.d_xy)
    at_p = angle_from_sss(kappa, cfg.d_pq, cfg.d_py, cfg.d_qy)
    at_pbar = angle_from_sss(kappa, cfg.d_pq + cfg.d_qx, cfg.d_py, cfg.d_xy)
    return math.pi - at_q_p - at_q_x, at_p - at_pbar


def signs_agree(defect_at_q, angle_gap_at_p, tol=ALEXANDROV_TOL):
    """False only if the two quantities are separated from zero with opposite signs."""
    if defect_at_q > tol and angle_gap_at_p < -tol:
        return False
    if defect_at_q < -tol and angle_gap_at_p > tol:
        return False
    return True
