import json
import math

import numpy as np
import pytest

from curvbound import (
    Cone,
    DomainError,
    EstimationError,
    Hinge,
    HyperbolicPlane,
    Plane,
    Sphere,
    check_balanced,
    check_property,
    comparison_angle,
    estimate_curvature_floor,
    perimeter,
    upper_angle,
)
from curvbound.comparison import sample_hinges

from oracles import cone_hinge_angle_symmetric, cone_unrolled_distance

PI = math.pi
# A-margin of the cone hinge p = (1, 0), x = (2, 5pi/8), y = (2, -5pi/8) on the
# cone of total angle 5pi/2, from the unrolling oracle (hinge angle minus the
# Euclidean comparison angle); see test_cone_failing_margin_is_frozen
CONE_FAILING_MARGIN = -0.18132039523255106

MODEL_SPACES = [(1.0, Sphere(1.0)), (0.0, Plane()), (-1.0, HyperbolicPlane())]


def _base(space):
    if isinstance(space, Sphere):
        return space.point(1.0, 0.3)
    if isinstance(space, HyperbolicPlane):
        return HyperbolicPlane.point(0.4, 1.0)
    if isinstance(space, Cone):
        return space.point(1.0, 0.0)
    return np.array([0.2, -0.1])


def _hinges(space, n, scale, seed=0):
    return sample_hinges(space, _base(space), scale, n, seed=seed)


def _cone_failing_hinge():
    c = Cone(2.5 * PI)
    return c, Hinge.from_points(c, c.point(1.0, 0.0), c.point(2.0, 0.625 * PI), c.point(2.0, -0.625 * PI))


class TestPerimeterAndComparisonAngle:
    def test_perimeter(self):
        assert perimeter(3, 4, 5) == 12
        assert perimeter(1, 1, 0) == 2
        assert perimeter(PI / 2, PI / 2, PI / 2) == pytest.approx(1.5 * PI)

    def test_comparison_angle(self):
        plane = Plane()
        assert comparison_angle(0.0, plane, [0.0, 0.0], [3.0, 0.0], [0.0, 4.0]) == pytest.approx(PI / 2)
        s = Sphere(1.0)
        octant = (s.point(0.0, 0.0), s.point(PI / 2, 0.0), s.point(PI / 2, PI / 2))
        assert comparison_angle(1.0, s, *octant) == pytest.approx(PI / 2, rel=1e-14)
        assert comparison_angle(0.0, plane, [0.0, 0.0], [-1.0, 0.0], [2.0, 0.0]) == pytest.approx(PI)

    def test_comparison_angle_needs_small_perimeter(self):
        s = Sphere(1.0)
        with pytest.raises(DomainError):
            comparison_angle(4.0, s, s.point(0.0, 0.0), s.point(PI / 2, 0.0), s.point(PI / 2, PI / 2))


class TestUpperAngle:
    def test_plane_right_angle(self):
        h = Hinge.from_points(Plane(), [0.0, 0.0], [1.0, 0.0], [0.0, 1.0])
        est = upper_angle(0.0, Plane(), h)
        assert est.value == pytest.approx(PI / 2, abs=1e-12)
        assert est.uncertainty < 1e-10

    def test_sphere_meridians(self):
        s = Sphere(1.0)
        h = Hinge.from_points(s, s.point(0.0, 0.0), s.point(1.2, 0.3), s.point(0.8, 1.3))
        est = upper_angle(1.0, s, h)
        assert est.value == pytest.approx(1.0, abs=1e-9)
        # any kappa gives the same angle: the comparison bias vanishes at small scales
        assert upper_angle(0.0, s, h).value == pytest.approx(1.0, abs=1e-6)

    def test_cone_apex(self):
        c = Cone(3 * PI)
        h = Hinge.from_points(c, c.apex, c.point(1.0, 0.0), c.point(1.0, 2.5 * PI))
        est = upper_angle(0.0, c, h)
        assert est.value == pytest.approx(0.5 * PI, abs=1e-12)
        # at the apex rays farther apart than pi meet at angle pi
        h = Hinge.from_points(c, c.apex, c.point(1.0, 0.0), c.point(1.0, 1.3 * PI))
        assert upper_angle(0.0, c, h).value == pytest.approx(PI, abs=1e-7)

    def test_samples(self):
        h = Hinge.from_points(Plane(), [0.0, 0.0], [2.0, 0.0], [0.0, 1.0])
        est = upper_angle(0.0, Plane(), h, rungs=10)
        scales = [s for s, _ in est.samples]
        assert len(scales) == 11
        assert scales[0] == 1.0 and scales[-1] == 2.0**-10
        assert 0.0 <= est.value <= PI and est.uncertainty >= 0

    def test_initial_scale_too_large(self):
        h = Hinge.from_points(Plane(), [0.0, 0.0], [2.0, 0.0], [0.0, 1.0])
        with pytest.raises(DomainError):
            upper_angle(0.0, Plane(), h, s0=1.5)

    def test_cone_against_unrolling(self):
        for theta in (1.5 * PI, 2.5 * PI):
            c = Cone(theta)
            for r_far, half in ((2.0, 0.3), (1.5, 0.6), (3.0, 0.9)):
                h = Hinge.from_points(c, c.point(1.0, 0.0), c.point(r_far, half), c.point(r_far, -half))
                ref = cone_hinge_angle_symmetric(1.0, r_far, half)
                assert upper_angle(0.0, c, h).value == pytest.approx(ref, abs=1e-9)

    @pytest.mark.parametrize("kappa,space", MODEL_SPACES + [(0.0, Cone(1.5 * PI)), (0.0, Cone(3 * PI))],
                             ids=["sphere", "plane", "hyperbolic", "cone-1.5pi", "cone-3pi"])
    def test_kappa_independence(self, kappa, space):
        for h in _hinges(space, 20, 1.0, seed=3):
            ests = [upper_angle(k, space, h) for k in (-1.0, 0.0, 1.0)]
            ref = ests[1]
            for e in ests:
                assert abs(e.value - ref.value) <= e.uncertainty + ref.uncertainty + 1e-12

    @pytest.mark.parametrize("kappa,space", MODEL_SPACES + [(0.0, Cone(1.5 * PI)), (0.0, Cone(2.5 * PI))],
                             ids=["sphere", "plane", "hyperbolic", "cone-1.5pi", "cone-2.5pi"])
    def test_angle_triangle_inequality(self, kappa, space):
        rng = np.random.default_rng(8)
        p = _base(space)
        for _ in range(15):
            x, y, z = (space.exp(p, rng.uniform(0, 2 * PI), rng.uniform(0.3, 1.0)) for _ in range(3))
            xy = upper_angle(kappa, space, Hinge.from_points(space, p, x, y)).value
            yz = upper_angle(kappa, space, Hinge.from_points(space, p, y, z)).value
            xz = upper_angle(kappa, space, Hinge.from_points(space, p, x, z)).value
            assert xy + yz >= xz - 1e-6

    @pytest.mark.parametrize("kappa,space", MODEL_SPACES, ids=["sphere", "plane", "hyperbolic"])
    def test_model_space_samples_monotone(self, kappa, space):
        for h in _hinges(space, 30, 1.0, seed=5):
            est = upper_angle(kappa, space, h)
            if 0.05 < est.value < PI - 0.05:
                assert est.monotone

    def test_cone_samples_monotone(self):
        c = Cone(1.5 * PI)
        for h in _hinges(c, 30, 1.5, seed=6):
            assert upper_angle(0.0, c, h).monotone


class TestCheckProperty:
    def test_sphere_octant_distance_comparison(self):
        s = Sphere(1.0)
        h = Hinge.from_points(s, s.point(0.0, 0.0), s.point(PI / 2, 0.0), s.point(PI / 2, PI / 2))
        v = check_property("D", 1.0, s, h)
        assert v.passed and abs(v.worst_margin) < 1e-6
        assert set(v.witness) == {"u", "v"}

    def test_plane_angle_comparison(self):
        h = Hinge.from_sas(Plane(), np.zeros(2), 1.3, 2.0, 1.1)
        v = check_property("A", 0.0, Plane(), h)
        assert v.passed and abs(v.worst_margin) < 1e-9

    def test_cone_failing_margin_is_frozen(self):
        th = 2.5 * PI
        half = 0.625 * PI
        d_px = cone_unrolled_distance(th, (1.0, 0.0), (2.0, half))
        d_xy = cone_unrolled_distance(th, (2.0, half), (2.0, -half))
        oracle = cone_hinge_angle_symmetric(1.0, 2.0, half) - 2 * math.asin(0.5 * d_xy / d_px)
        assert oracle == pytest.approx(CONE_FAILING_MARGIN, abs=1e-15)

    def test_cone_fails_angle_comparison(self):
        c, h = _cone_failing_hinge()
        v = check_property("A", 0.0, c, h)
        assert not v.passed
        assert v.worst_margin == pytest.approx(CONE_FAILING_MARGIN, abs=1e-9)
        for prop in ("H", "D"):
            assert not check_property(prop, 0.0, c, h).passed

    def test_verdict_json(self):
        h = Hinge.from_sas(Plane(), np.zeros(2), 1.0, 1.0, 1.0)
        out = check_property("A", 0.0, Plane(), h).to_json()
        assert out["property"] == "A" and out["passed"] is True
        assert {"kappa", "worst_margin", "witness", "tolerance"} <= set(out)
        json.dumps(out)

    def test_pass_iff_margin_above_minus_tolerance(self):
        c, h = _cone_failing_hinge()
        assert check_property("A", 0.0, c, h, tolerance=0.2).passed
        assert not check_property("A", 0.0, c, h, tolerance=0.18).passed

    def test_errors(self):
        s = Sphere(1.0)
        h = Hinge.from_points(s, s.point(0.0, 0.0), s.point(PI / 2, 0.0), s.point(PI / 2, PI / 2))
        with pytest.raises(DomainError):
            check_property("A", 4.0, s, h)  # perimeter 3pi/2 >= 2 D = pi
        h = Hinge.from_sas(Plane(), np.zeros(2), 1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            check_property("Z", 0.0, Plane(), h)
        with pytest.raises(DomainError):
            Hinge.from_points(Plane(), [0.0, 0.0], [0.0, 0.0], [1.0, 0.0])

    def test_hinge_with_equal_endpoints(self):
        # x = y: the comparison angle is 0 and every property holds
        plane = Plane()
        h = Hinge(plane.segment([0.0, 0.0], [1.0, 1.0]), plane.segment([0.0, 0.0], [1.0, 1.0]))
        for prop in ("A", "H", "D"):
            assert check_property(prop, 0.0, plane, h).passed

    @pytest.mark.parametrize("kappa,space", MODEL_SPACES + [(0.0, Cone(1.5 * PI)), (0.0, Cone(2.5 * PI)),
                                                           (0.5, Sphere(1.0)), (-2.0, HyperbolicPlane())],
                             ids=["sphere", "plane", "hyperbolic", "cone-1.5pi", "cone-2.5pi",
                                  "sphere-k0.5", "hyperbolic-k-2"])
    def test_implication_chain(self, kappa, space):
        for h in _hinges(space, 25, 2.0, seed=11):
            a, hh, d = (check_property(p, kappa, space, h) for p in ("A", "H", "D"))
            if d.passed:
                assert a.passed and hh.passed
            assert a.passed == hh.passed

    @pytest.mark.parametrize("kappa,space", MODEL_SPACES + [(0.0, Cone(1.5 * PI))],
                             ids=["sphere", "plane", "hyperbolic", "cone-1.5pi"])
    def test_angle_comparison_on_sub_hinges_gives_distance_comparison(self, kappa, space):
        for h in _hinges(space, 10, 2.0, seed=12):
            subs = []
            # sub-hinges with one side inside a side of h and the far endpoint on the other side
            for t in (0.25, 0.5, 0.75):
                subs += [Hinge(h.side_x.sub(0.0, t * h.side_x.length), h.side_y),
                         Hinge(h.side_x, h.side_y.sub(0.0, t * h.side_y.length))]
            if all(check_property("A", kappa, space, s).passed for s in subs):
                assert check_property("D", kappa, space, h).passed


class TestBalanced:
    def test_plane(self):
        plane = Plane()
        seg = plane.segment([0.0, 0.0], [3.0, 1.0])
        probes = [(0.5, [1.0, 2.0]), (1.7, [-2.0, 0.5]), (2.9, [4.0, -3.0])]
        v = check_balanced(plane, seg, probes)
        assert v.passed and abs(v.worst_margin) < 1e-8

    def test_sphere(self):
        s = Sphere(1.0)
        seg = s.segment(s.point(PI / 2, 0.0), s.point(PI / 2, 1.5))
        probes = [(0.3, s.point(0.9, 0.2)), (0.8, s.point(2.2, 1.0)), (1.2, s.point(0.4, 2.5))]
        v = check_balanced(s, seg, probes, kappa=1.0)
        assert v.passed and abs(v.worst_margin) < 1e-6

    def test_cone_through_apex_is_not_balanced(self):
        c = Cone(3 * PI)
        seg = c.segment(c.point(1.0, 0.0), c.point(1.0, PI))
        assert seg.length == pytest.approx(2.0)
        v = check_balanced(c, seg, [(1.0, c.point(1.0, 2 * PI))])
        assert not v.passed
        assert v.witness["angle_sum"] == pytest.approx(2 * PI, abs=1e-9)
        assert v.details["max_angle_sum_deficit"] <= 1e-9  # the sum is never below pi

    @pytest.mark.parametrize("kappa,space", MODEL_SPACES + [(0.0, Cone(1.5 * PI)), (0.0, Cone(2 * PI))],
                             ids=["sphere", "plane", "hyperbolic", "cone-1.5pi", "cone-2pi"])
    def test_curvature_bounded_spaces_are_balanced(self, kappa, space):
        rng = np.random.default_rng(13)
        for h in _hinges(space, 6, 1.5, seed=14):
            seg = h.side_y
            probes = []
            while len(probes) < 4:
                t = float(rng.uniform(0.1, 0.9)) * seg.length
                y = space.sample_near(seg.point_at(t), 0.8, rng)
                if float(space.distance(seg.point_at(t), y)) > 0.05:
                    probes.append((t, y))
            v = check_balanced(space, seg, probes, kappa=kappa)
            assert v.passed
            assert v.details["max_angle_sum_deficit"] <= 1e-6

    def test_endpoint_probe_rejected(self):
        plane = Plane()
        seg = plane.segment([0.0, 0.0], [1.0, 0.0])
        with pytest.raises(DomainError):
            check_balanced(plane, seg, [(0.0, [0.0, 1.0])])


class TestCurvatureEstimate:
    def test_sphere(self):
        s = Sphere(1.0)
        est = estimate_curvature_floor(s, s.point(1.0, 0.3), 0.1)
        assert est == pytest.approx(1.0, abs=0.05)

    def test_plane(self):
        assert estimate_curvature_floor(Plane(), np.zeros(2), 0.5) == pytest.approx(0.0, abs=0.05)

    def test_hyperbolic(self):
        h = HyperbolicPlane()
        est = estimate_curvature_floor(h, HyperbolicPlane.point(0.0, 0.0), 0.5)
        assert est == pytest.approx(-1.0, abs=0.05)

    def test_bracket_must_separate(self):
        with pytest.raises(EstimationError):
            estimate_curvature_floor(Plane(), np.zeros(2), 0.5, kappa_bracket=(1.0, 2.0))
        with pytest.raises(EstimationError):
            estimate_curvature_floor(Plane(), np.zeros(2), 0.5, kappa_bracket=(-2.0, -1.0))

    def test_predicate_oracle_around_the_sphere_floor(self):
        # the hinges used by the estimator pass (D) at 0.9 and some fail at 1.1
        s = Sphere(1.0)
        hinges = sample_hinges(s, s.point(1.0, 0.3), 0.1, 48)
        assert all(check_property("D", 0.9, s, h, grid=8).passed for h in hinges)
        assert not all(check_property("D", 1.1, s, h, grid=8).passed for h in hinges)

    def test_deterministic(self):
        s = Sphere(1.0)
        a = estimate_curvature_floor(s, s.point(1.0, 0.3), 0.2, seed=4)
        b = estimate_curvature_floor(s, s.point(1.0, 0.3), 0.2, seed=4)
        assert a == b
