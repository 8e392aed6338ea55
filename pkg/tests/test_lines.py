import math

import numpy as np
import pytest

from ruledgeo import dual
from ruledgeo.dual import DualVector3
from ruledgeo.errors import DegenerateError, NotALineError
from ruledgeo.lines import (
    Line,
    dual_angle_between_lines,
    dual_to_line,
    foot_point,
    line_from_point_dir,
    line_to_dual,
)


def closest_approach(p1, d1, p2, d2):
    """Independent oracle: minimize |p1 + t d1 - p2 - s d2| analytically."""
    p1, d1, p2, d2 = (np.asarray(x, dtype=float) for x in (p1, d1, p2, d2))
    d1 = d1 / np.linalg.norm(d1)
    d2 = d2 / np.linalg.norm(d2)
    n = np.cross(d1, d2)
    w = p2 - p1
    nn = np.dot(n, n)
    if nn < 1e-16:
        return float(np.linalg.norm(np.cross(w, d1)))
    return abs(float(np.dot(w, n))) / math.sqrt(nn)


def random_line(rng, span=10.0):
    p = rng.uniform(-span, span, 3)
    d = rng.normal(size=3)
    while np.linalg.norm(d) < 1e-3:
        d = rng.normal(size=3)
    return p, d


class TestConstruction:
    def test_axis_through_origin(self):
        line = line_from_point_dir((0, 0, 0), (0, 0, 5))
        assert np.allclose(line.direction, (0, 0, 1))
        assert np.allclose(line.moment, 0)

    def test_offset_axis(self):
        line = line_from_point_dir((1, 0, 0), (0, 0, 1))
        assert np.allclose(line.moment, (0, -1, 0))

    def test_cone_ruling_dual_image(self):
        line = line_from_point_dir((0, 1, 0), (1, 0, 1))
        v = line_to_dual(line)
        r = 1 / math.sqrt(2)
        assert np.allclose(v.real, (r, 0, r))
        assert np.allclose(v.dual, (r, 0, -r))

    def test_zero_direction_rejected(self):
        with pytest.raises(DegenerateError):
            line_from_point_dir((1, 1, 1), (0, 0, 0))

    def test_constructor_absorbs_noise(self):
        line = Line((0, 0, 1 + 1e-13), (1e-14, -1, 1e-13))
        assert np.linalg.norm(line.direction) == pytest.approx(1, abs=1e-15)
        assert abs(np.dot(line.direction, line.moment)) < 1e-15


class TestStudyMap:
    def test_z_axis(self):
        v = line_to_dual(line_from_point_dir((0, 0, 0), (0, 0, 1)))
        assert np.allclose(v.real, (0, 0, 1)) and np.allclose(v.dual, 0)

    def test_dual_image_is_unit(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            p, d = random_line(rng)
            v = line_to_dual(line_from_point_dir(p, d))
            assert dual.is_unit(v, tol=1e-12)

    def test_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            p, d = random_line(rng)
            line = line_from_point_dir(p, d)
            back = dual_to_line(line_to_dual(line))
            assert np.allclose(back.direction, line.direction, atol=1e-12)
            assert np.allclose(back.moment, line.moment, atol=1e-12)

    def test_valid_offset_line(self):
        line = dual_to_line(DualVector3((0, 0, 1), (1, 0, 0)))
        assert np.allclose(foot_point(line), (0, 1, 0))

    def test_non_unit_rejected(self):
        with pytest.raises(NotALineError):
            dual_to_line(DualVector3((0, 0, 2), (0, 0, 0)))

    def test_non_perpendicular_moment_rejected(self):
        with pytest.raises(NotALineError):
            dual_to_line(DualVector3((0, 0, 1), (0, 0, 1)))


class TestFootPoint:
    def test_axis(self):
        assert np.allclose(foot_point(line_from_point_dir((0, 0, 7), (0, 0, 1))), 0)

    def test_offset_axis(self):
        line = Line((0, 0, 1), (0, -1, 0))
        assert np.allclose(foot_point(line), (1, 0, 0))

    def test_foot_is_closest_point(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p, d = random_line(rng)
            line = line_from_point_dir(p, d)
            f = foot_point(line)
            # the closest point of t -> |f + t d| sits at t = 0
            assert abs(np.dot(f, line.direction)) < 1e-9
            ts = np.linspace(-2, 2, 41)
            dists = [np.linalg.norm(f + t * line.direction) for t in ts]
            assert np.argmin(dists) == 20


class TestDualAngleBetweenLines:
    def test_self(self):
        line = line_from_point_dir((1, 2, 3), (4, 5, 6))
        ang = dual_angle_between_lines(line, line)
        assert ang.theta == pytest.approx(0, abs=1e-12)
        assert ang.theta_star == pytest.approx(0, abs=1e-12)

    def test_parallel_unit_distance(self):
        a = line_from_point_dir((0, 0, 0), (0, 0, 1))
        b = line_from_point_dir((1, 0, 0), (0, 0, 1))
        ang = dual_angle_between_lines(a, b)
        assert ang.theta == pytest.approx(0, abs=1e-12)
        assert ang.theta_star == pytest.approx(1, abs=1e-12)

    def test_perpendicular_skew(self):
        # x-parallel line through (0, 3, 0): perpendicular to the z-axis at
        # distance 3 (a line through (0, 0, 3) would intersect the axis)
        a = line_from_point_dir((0, 0, 0), (0, 0, 1))
        b = line_from_point_dir((0, 3, 0), (1, 0, 0))
        ang = dual_angle_between_lines(a, b)
        assert ang.theta == pytest.approx(math.pi / 2, abs=1e-12)
        assert abs(ang.theta_star) == pytest.approx(3, abs=1e-12)
        assert closest_approach((0, 0, 0), (0, 0, 1), (0, 3, 0), (1, 0, 0)) == pytest.approx(3)

    def test_intersecting_lines_have_zero_distance(self):
        a = line_from_point_dir((0, 0, 0), (0, 0, 1))
        b = line_from_point_dir((0, 0, 3), (1, 0, 0))
        ang = dual_angle_between_lines(a, b)
        assert ang.theta == pytest.approx(math.pi / 2, abs=1e-12)
        assert ang.theta_star == pytest.approx(0, abs=1e-12)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            la = line_from_point_dir(*random_line(rng))
            lb = line_from_point_dir(*random_line(rng))
            ab = dual_angle_between_lines(la, lb)
            ba = dual_angle_between_lines(lb, la)
            assert ab.theta == pytest.approx(ba.theta, abs=1e-12)
            assert abs(ab.theta_star) == pytest.approx(abs(ba.theta_star), abs=1e-9)

    def test_cos_matches_dual_dot(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            la = line_from_point_dir(*random_line(rng))
            lb = line_from_point_dir(*random_line(rng))
            ang = dual_angle_between_lines(la, lb)
            c = ang.cos()
            d = dual.dot(line_to_dual(la), line_to_dual(lb))
            assert c.real == pytest.approx(d.real, abs=1e-9)
            assert c.dual == pytest.approx(d.dual, abs=1e-9)

    def test_distance_against_closest_approach_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            p1, d1 = random_line(rng)
            p2, d2 = random_line(rng)
            ang = dual_angle_between_lines(
                line_from_point_dir(p1, d1), line_from_point_dir(p2, d2)
            )
            assert abs(ang.theta_star) == pytest.approx(
                closest_approach(p1, d1, p2, d2), abs=1e-9
            )

    def test_exactly_parallel_pairs(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            p1, d = random_line(rng)
            p2 = rng.uniform(-10, 10, 3)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            ang = dual_angle_between_lines(
                line_from_point_dir(p1, d), line_from_point_dir(p2, sign * d)
            )
            expected_theta = 0.0 if sign > 0 else math.pi
            assert ang.theta == pytest.approx(expected_theta, abs=1e-9)
            assert ang.theta_star == pytest.approx(
                closest_approach(p1, d, p2, sign * d), abs=1e-9
            )
