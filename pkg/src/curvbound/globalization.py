"""From local comparison to comparison in the large.

Three constructions live here:

* :func:`subdivision_check` -- break a hinge at a point ``q`` of one side
  and test whether the angle comparison of the three smaller hinges plus
  balance at ``q`` carries over to the whole hinge;
* :func:`thin_hinge_iteration` -- for a thin hinge (short side ``b`` less
  than a fifth of the long side ``a``) build the ping-pong sequence of
  hinges ``H_n`` in the space and, from distances alone, the companion
  model hinges.  The sums ``l_n = |p_n x_n| + |p_n y_n|`` decrease to at
  least ``|x_0 y_0|`` and, when the space satisfies the comparison at
  smaller scale, the model chords ``|xbar_n ybar_n|`` decrease too and the
  two sequences meet;
* :func:`defect_descent` -- starting from a hinge that violates the angle
  comparison, repeatedly find a violating hinge with at most 4/5 of the
  perimeter, which pins down where the curvature bound fails.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .comparison import ANGLE_TOL, Hinge, Verdict, check_property, upper_angle, upper_angles
from .errors import DomainError, InconsistencyError, PreconditionError
from .model import angle_from_sss, side_from_sas
from .trig import model_diameter

__all__ = [
    "IterationStep",
    "IterationTrace",
    "SubdivisionRecord",
    "DescentTrace",
    "subdivision_check",
    "thin_hinge_iteration",
    "thin_pieces",
    "globalize_check",
    "defect_descent",
    "TRACE_COLUMNS",
]

TRACE_COLUMNS = ("n", "l_n", "comparison_chord_n", "gamma_n", "gamma_bar_n", "omega_bar_n")
L_DECREMENT_STOP = 1e-12
DEFAULT_N_MAX = 200
SHRINK = 0.8  # perimeter factor 4/5
PIECE_SAFETY = 0.9
MAX_PIECES = 2000
RESOLUTION = 1e-6  # relative perimeter below which coordinates no longer resolve hinges
STRONG_FAILURE = 0.5  # descent follows candidates failing at least half as badly as the worst


def _a_margin(kappa, space, hinge):
    d_px, d_py, d_xy = hinge.lengths(space)
    return upper_angle(kappa, space, hinge).value - angle_from_sss(kappa, d_px, d_py, d_xy)


def _check_perimeter(kappa, space, hinge):
    per = hinge.perimeter(space)
    if kappa > 0 and not per < 2 * model_diameter(kappa):
        raise DomainError("hinge perimeter must be below 2 D_kappa")
    return per


@dataclass
class SubdivisionRecord:
    margin_p_qy: float
    margin_q_py: float
    margin_q_xy: float
    balance_defect: float
    margin_whole: float
    hypotheses_hold: bool
    implication_holds: bool

    def to_json(self):
        return dict(self.__dict__)


def subdivision_check(kappa, space, hinge, q, seg_qy=None, tolerance=ANGLE_TOL):
    """Test the subdivision implication at arclength ``q`` of side ``px``.

    Computes the angle-comparison margins of ``H_p(q, y)``, ``H_q(p, y)``,
    ``H_q(x, y)``, the balance defect ``pi - angle_q(p,y) - angle_q(x,y)``
    and the margin of the whole hinge.  The implication holds unless all
    hypotheses hold (margins >= -tol, |defect| <= tol) while the whole
    hinge fails.
    """
    _check_perimeter(kappa, space, hinge)
    side = hinge.side_x
    q = float(q)
    if not 0.0 < q < side.length:
        raise DomainError("q must be strictly interior to the side px")
    point_q = side.point_at(q)
    if space.distance(point_q, hinge.y) == 0.0:
        raise DomainError("q must differ from y")
    if seg_qy is None:
        seg_qy = space.segment(point_q, hinge.y)

    h_p_qy = Hinge(side.sub(0.0, q), hinge.side_y)
    h_q_py = Hinge(side.sub(q, 0.0), seg_qy)
    h_q_xy = Hinge(side.sub(q, side.length), seg_qy)
    ang_p = upper_angle(kappa, space, h_q_py).value
    ang_x = upper_angle(kappa, space, h_q_xy).value
    m1 = _a_margin(kappa, space, h_p_qy)
    m2 = ang_p - angle_from_sss(kappa, *h_q_py.lengths(space))
    m3 = ang_x - angle_from_sss(kappa, *h_q_xy.lengths(space))
    defect = math.pi - ang_p - ang_x
    whole = _a_margin(kappa, space, hinge)
    hyp = min(m1, m2, m3) >= -tolerance and abs(defect) <= tolerance
    return SubdivisionRecord(m1, m2, m3, defect, whole, hyp, (not hyp) or whole >= -tolerance)


@dataclass
class IterationStep:
    n: int
    l_n: float
    comparison_chord_n: float
    gamma_n: float
    gamma_bar_n: float
    omega_bar_n: Optional[float]
    side_py: float  # |p_n y_n|
    aux_perimeter: Optional[float] = None  # per(p_{n-1}, p_n, y_n)
    forward_margin: Optional[float] = None  # A-margin of H_{p_{n-1}}(p_n, y_n)
    backward_margin: Optional[float] = None  # A-margin of H_{p_n}(p_{n-1}, y_n)
    hinge: Optional[Hinge] = field(default=None, repr=False)
    aux_hinges: tuple = field(default=(), repr=False)

    def row(self):
        return tuple(getattr(self, c) for c in TRACE_COLUMNS)

    def to_json(self):
        return {
            "n": self.n,
            "l_n": self.l_n,
            "comparison_chord_n": self.comparison_chord_n,
            "gamma_n": self.gamma_n,
            "gamma_bar_n": self.gamma_bar_n,
            "omega_bar_n": self.omega_bar_n,
            "side_py": self.side_py,
            "aux_perimeter": self.aux_perimeter,
            "forward_margin": self.forward_margin,
            "backward_margin": self.backward_margin,
        }


@dataclass
class IterationTrace:
    kappa: float
    a_0: float
    b_0: float
    b_prime: float
    chord_0: float
    steps: List[IterationStep] = field(default_factory=list)

    @property
    def a_margin(self):
        """Angle-comparison margin of the initial hinge."""
        s = self.steps[0]
        return s.gamma_n - angle_from_sss(self.kappa, self.b_0, self.a_0, self.chord_0)

    @property
    def final_gap(self):
        """``l_N - |xbar_N ybar_N|`` at the last step."""
        s = self.steps[-1]
        return s.l_n - s.comparison_chord_n

    def aux_margins(self):
        out = []
        for s in self.steps[1:]:
            out.extend(m for m in (s.forward_margin, s.backward_margin) if m is not None)
        return out

    def to_json(self):
        return {
            "kappa": self.kappa,
            "a_0": self.a_0,
            "b_0": self.b_0,
            "b_prime": self.b_prime,
            "chord_0": self.chord_0,
            "steps": [s.to_json() for s in self.steps],
        }

    def rows(self):
        return [s.row() for s in self.steps]


def thin_hinge_iteration(kappa, space, hinge, n_max=DEFAULT_N_MAX, aux=True):
    """Run the thin-hinge construction on ``hinge = H_{p0}(x0, y0)``.

    ``|p0 x0| = b`` must be below ``min(a/5, D_kappa - a)`` with
    ``a = |p0 y0|``.  Step ``n`` moves the vertex to the point ``p_n`` of
    ``p_{n-1} y_{n-1}`` at distance ``b' = 2a/5`` from ``y_{n-1}`` and swaps
    the endpoints (``x_n = y_{n-1}``, ``y_n = x_{n-1}``).  The model ladder
    uses only distances:

    * ``omega_bar_n`` is the model angle at ``p_{n-1}`` of the triple
      ``(p_{n-1}, p_n, y_n)``;
    * ``comparison_chord_n = side_from_sas(|p_{n-1} y_{n-1}|, |p_{n-1} y_n|, omega_bar_n)``;
    * ``gamma_bar_n = pi -`` the model angle at ``p_n`` of the same triple.

    Stops after ``n_max`` steps or once ``l_{n-1} - l_n < 1e-12``.  With
    ``aux`` the angle comparison of the two auxiliary hinges at each step
    (``H_{p_{n-1}}(p_n, y_n)`` and ``H_{p_n}(p_{n-1}, y_n)``) is recorded.
    """
    a = hinge.side_y.length
    b = hinge.side_x.length
    d = model_diameter(kappa)
    if not b < min(a / 5.0, d - a):
        raise DomainError(f"hinge is not thin: |px| = {b} must be < min(|py|/5, D - |py|)")
    bp = 0.4 * a
    chord_0 = float(space.distance(hinge.x, hinge.y))
    trace = IterationTrace(float(kappa), a, b, bp, chord_0)
    trace.steps.append(IterationStep(0, a + b, 0.0, 0.0, 0.0, None, a, hinge=hinge))

    # the construction uses distances only; hinge angles are filled in afterwards
    backward = []
    prev = hinge
    for n in range(1, n_max + 1):
        long_side = prev.side_y
        length = long_side.length
        t = length - bp
        side_x = long_side.sub(t, length)
        side_y = space.segment(side_x.p, prev.x)
        current = Hinge(side_x, side_y)
        d_prev_y = prev.side_x.length  # |p_{n-1} y_n|
        d_new_y = side_y.length  # |p_n y_n|
        omega = angle_from_sss(kappa, t, d_prev_y, d_new_y)
        chord = side_from_sas(kappa, length, d_prev_y, omega)
        beta = angle_from_sss(kappa, t, d_new_y, d_prev_y)
        step = IterationStep(n, bp + d_new_y, chord, 0.0, math.pi - beta, omega, d_new_y,
                             aux_perimeter=t + d_prev_y + d_new_y, hinge=current)
        if aux:
            step.aux_hinges = (Hinge(long_side.sub(0.0, t), prev.side_x),
                               Hinge(long_side.sub(t, 0.0), side_y))
            backward.append(step.aux_hinges[1])
        trace.steps.append(step)
        prev = current
        if trace.steps[-2].l_n - step.l_n < L_DECREMENT_STOP:
            break

    angles = upper_angles(kappa, space, [s.hinge for s in trace.steps] + backward)
    for s, est in zip(trace.steps, angles):
        s.gamma_n = est.value
    first = trace.steps[0]
    first.gamma_bar_n = first.gamma_n
    first.comparison_chord_n = side_from_sas(kappa, b, a, first.gamma_n)
    if aux:
        for prev_step, s, est in zip(trace.steps, trace.steps[1:], angles[len(trace.steps):]):
            s.forward_margin = prev_step.gamma_n - s.omega_bar_n
            s.backward_margin = est.value - (math.pi - s.gamma_bar_n)
    return trace


def thin_pieces(kappa, space, hinge):
    """Break points ``0 = t_0 < ... < t_m = |px|`` making every piece thin.

    Each step from ``q_j = px(t_j)`` is ``0.9 * min(|q_j y|/6, (D - |q_j y|)/2)``,
    which keeps both ``H_{q_j}(q_{j+1}, y)`` and ``H_{q_{j+1}}(q_j, y)`` thin.
    """
    side = hinge.side_x
    d = model_diameter(kappa)
    ts = [0.0]
    while ts[-1] < side.length:
        a_q = float(space.distance(side.point_at(ts[-1]), hinge.y))
        h = PIECE_SAFETY * min(a_q / 6.0, 0.5 * (d - a_q))
        if not h > 0:
            raise DomainError("side px meets y; the hinge cannot be subdivided into thin pieces")
        ts.append(min(ts[-1] + h, side.length))
        if len(ts) > MAX_PIECES:
            raise DomainError("hinge too degenerate: thin subdivision does not terminate")
    return ts


def _decompose(kappa, space, hinge):
    """Thin hinges and balance points of the subdivision of ``px``.

    Returns ``(forward, backward)`` where ``forward[j] = H_{q_j}(q_{j+1}, y)``
    and ``backward[j] = H_{q_{j+1}}(q_j, y)`` for interior ``q_{j+1}``.
    """
    side = hinge.side_x
    ts = thin_pieces(kappa, space, hinge)
    to_y = [hinge.side_y] + [space.segment(side.point_at(t), hinge.y) for t in ts[1:-1]]
    forward = [Hinge(side.sub(ts[j], ts[j + 1]), to_y[j]) for j in range(len(ts) - 1)]
    backward = [Hinge(side.sub(ts[j + 1], ts[j]), to_y[j + 1]) for j in range(len(ts) - 2)]
    return ts, forward, backward


def globalize_check(kappa, space, hinge, tolerance=ANGLE_TOL, n_max=DEFAULT_N_MAX):
    """Angle comparison of a (possibly thick) hinge assembled from thin pieces.

    Side ``px`` is cut into thin pieces (:func:`thin_pieces`); each thin
    hinge is run through :func:`thin_hinge_iteration`; the pieces are glued
    by the subdivision implication, which needs balance at every cut.  The
    verdict margin is the minimum of all piece margins, all auxiliary
    margins of the iterations and ``-|balance defect|`` at every cut.
    """
    per = _check_perimeter(kappa, space, hinge)
    ts, forward, backward = _decompose(kappa, space, hinge)

    worst, witness = math.inf, {}
    max_gap = 0.0

    def consider(margin, info):
        nonlocal worst, witness
        if margin < worst:
            worst, witness = margin, info

    gammas_fwd, gammas_bwd = [], []
    for kind, pieces, gammas in (("forward", forward, gammas_fwd), ("backward", backward, gammas_bwd)):
        for j, piece in enumerate(pieces):
            trace = thin_hinge_iteration(kappa, space, piece, n_max=n_max)
            gammas.append(trace.steps[0].gamma_n)
            max_gap = max(max_gap, abs(trace.final_gap))
            consider(trace.a_margin, {"check": f"{kind}_piece", "index": j, "t": ts[j]})
            for s in trace.steps[1:]:
                consider(s.forward_margin, {"check": f"{kind}_aux_forward", "index": j, "step": s.n})
                consider(s.backward_margin, {"check": f"{kind}_aux_backward", "index": j, "step": s.n})
    for j in range(1, len(ts) - 1):
        defect = math.pi - gammas_bwd[j - 1] - gammas_fwd[j]
        consider(-abs(defect), {"check": "balance", "index": j, "t": ts[j]})

    details = {"pieces": len(forward), "perimeter": per, "max_final_gap": max_gap}
    return Verdict("A", float(kappa), bool(worst >= -tolerance), float(worst), float(tolerance),
                   witness, details)


@dataclass
class DescentTrace:
    kappa: float
    hinges: list  # (Hinge, perimeter, A-margin)
    limit_point_estimate: np.ndarray
    stop_reason: str

    @property
    def perimeters(self):
        return [h[1] for h in self.hinges]

    @property
    def vertices(self):
        return [h[0].p for h in self.hinges]

    def to_json(self):
        return {
            "kappa": self.kappa,
            "stop_reason": self.stop_reason,
            "limit_point_estimate": np.asarray(self.limit_point_estimate).tolist(),
            "hinges": [
                {"level": i, **h.to_json(), "perimeter": per, "a_margin": m}
                for i, (h, per, m) in enumerate(self.hinges)
            ],
        }

    def rows(self):
        return [(i, per, m, *h.p.tolist()) for i, (h, per, m) in enumerate(self.hinges)]


def _oriented(hinge):
    # cut the shorter side: fewer thin pieces
    if hinge.side_x.length > hinge.side_y.length:
        return hinge.swapped()
    return hinge


def _failing_candidates(kappa, space, hinge, per, tolerance, n_max):
    """Violating hinges of perimeter < 4/5 ``per`` from the decomposition of ``hinge``."""
    _, forward, backward = _decompose(kappa, space, hinge)
    found = []
    for piece in forward + backward:
        try:
            margin = _a_margin(kappa, space, piece)
            if margin >= -tolerance:
                continue
            piece_per = piece.perimeter(space)
            if piece_per < SHRINK * per:
                found.append((piece, piece_per, margin))
            trace = thin_hinge_iteration(kappa, space, piece, n_max=n_max)
            for s in trace.steps[1:]:
                for aux_hinge, m in zip(s.aux_hinges, (s.forward_margin, s.backward_margin)):
                    if m < -tolerance and s.aux_perimeter < SHRINK * per:
                        found.append((aux_hinge, s.aux_perimeter, _a_margin(kappa, space, aux_hinge)))
        except InconsistencyError:
            # lengths below the rounding resolution of the coordinates
            continue
    return [c for c in found if c[2] < -tolerance]


def defect_descent(kappa, space, failing_hinge, max_depth=40, tolerance=ANGLE_TOL,
                   n_max=DEFAULT_N_MAX):
    """Follow violating hinges of shrinking perimeter toward a curvature defect.

    At each level the candidates are the thin pieces of the current hinge
    and the auxiliary hinges of their iterations that violate the angle
    comparison and have perimeter below 4/5 of the current one.  Among the
    candidates failing at least half as badly as the worst one, the
    smallest is taken; barely failing hinges are usually far from the
    defect and would stall the localization.  Stops after ``max_depth``
    levels, when no candidate violates, or once the perimeter falls below
    ``1e-6`` of the initial one, where coordinate rounding dominates the
    side lengths (``stop_reason`` says which).

    Raises
    ------
    PreconditionError
        If ``failing_hinge`` satisfies the angle comparison.
    """
    per = _check_perimeter(kappa, space, failing_hinge)
    margin = check_property("A", kappa, space, failing_hinge, tolerance=tolerance).worst_margin
    if margin >= -tolerance:
        raise PreconditionError("the starting hinge satisfies the angle comparison")
    hinges = [(failing_hinge, per, margin)]
    reason = "max_depth"
    for _ in range(max_depth):
        current, cur_per, _ = hinges[-1]
        if cur_per < RESOLUTION * per:
            reason = "resolution"
            break
        cands = _failing_candidates(kappa, space, _oriented(current), cur_per, tolerance, n_max)
        if not cands:
            reason = "no_failing_candidate"
            break
        worst = min(c[2] for c in cands)
        strong = [c for c in cands if c[2] <= STRONG_FAILURE * worst]
        hinges.append(min(strong, key=lambda c: (c[1], c[2])))
    return DescentTrace(float(kappa), hinges, hinges[-1][0].p.copy(), reason)
