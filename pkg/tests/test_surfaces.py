import math

import numpy as np
import pytest

from ruledgeo import catalog, dual
from ruledgeo.curves import CurveSampler, differentiate
from ruledgeo.errors import (
    CylindricalError,
    MoebiusClosureError,
    NotClosedError,
    OrientationError,
)
from ruledgeo.surfaces import (
    angle_of_pitch,
    area_vector,
    distribution_parameter,
    drall_samples,
    dual_curve_to_surface,
    invariant_report,
    is_developable,
    moving_frame,
    pitch,
    projected_area,
    ruled_surface,
    striction_curve,
    surface_to_dual_curve,
)

TWO_PI = 2 * math.pi
SQ2 = math.sqrt(2)


def circle_sampler(radius=1.0, z=0.0):
    return CurveSampler(
        TWO_PI,
        lambda t: np.array([radius * math.cos(t), radius * math.sin(t), z]),
        lambda t: np.array([-radius * math.sin(t), radius * math.cos(t), 0.0]),
    )


def constant_sampler(v):
    v = np.asarray(v, dtype=float)
    return CurveSampler(TWO_PI, lambda t: v, lambda t: np.zeros(3))


class TestConstruction:
    def test_closure_detection(self):
        assert catalog.paper_cone().closed
        assert not catalog.helicoid().closed

    def test_director_normalized_on_ingest(self):
        surface = catalog.paper_cone()  # raw director (cos t, sin t, 1) is not unit
        for t in np.linspace(0, TWO_PI, 9):
            assert np.linalg.norm(surface.director.evaluate(float(t))) == pytest.approx(1, abs=1e-12)

    def test_moebius_director_rejected(self):
        half_turn = CurveSampler(
            TWO_PI,
            lambda t: np.array([math.cos(t / 2), math.sin(t / 2), 0.0]),
            lambda t: np.array([-math.sin(t / 2) / 2, math.cos(t / 2) / 2, 0.0]),
        )
        with pytest.raises(MoebiusClosureError):
            ruled_surface(circle_sampler(), half_turn)

    def test_explicit_closed_mismatch(self):
        heli = catalog.helicoid()
        with pytest.raises(NotClosedError):
            ruled_surface(heli.base, heli.director, closed=True)


class TestStriction:
    def test_cone_striction_is_apex(self):
        st = striction_curve(catalog.paper_cone())
        assert st.point_degenerate
        assert np.allclose(st.point, (0, 1, 0), atol=1e-9)

    def test_helicoid_striction_defining_property(self):
        heli = catalog.helicoid()
        st = striction_curve(heli)
        assert not st.point_degenerate
        for t in np.linspace(0.5, 5.5, 11):
            dc = np.asarray(differentiate(st.curve, float(t)))
            dq = np.asarray(differentiate(heli.director, float(t)))
            assert abs(float(np.dot(dc, dq))) < 1e-9

    def test_helicoid_striction_closed_form(self):
        # c(t) = base - q: (sin t - t cos t, 1 - cos t - t sin t, t)
        st = striction_curve(catalog.helicoid())
        for t in (0.7, 2.0, 4.4):
            expected = (
                math.sin(t) - t * math.cos(t),
                1 - math.cos(t) - t * math.sin(t),
                t,
            )
            assert np.allclose(st.curve.evaluate(t), expected, atol=1e-10)

    def test_tangent_developable_striction_is_the_curve(self):
        surface = catalog.tangent_developable_of_helix()
        st = striction_curve(surface)
        assert not st.point_degenerate
        for t in (0.3, 2.0, 5.0):
            assert np.allclose(
                st.curve.evaluate(t), (math.cos(t), math.sin(t), t), atol=1e-9
            )

    def test_cylinder_rejected(self):
        surface = ruled_surface(circle_sampler(), constant_sampler((0, 0, 1)))
        with pytest.raises(CylindricalError):
            striction_curve(surface)


class TestDrall:
    def test_cone_is_torsal(self):
        assert np.max(np.abs(drall_samples(catalog.paper_cone(), 64))) < 1e-12

    @pytest.mark.parametrize("t", np.linspace(0.2, 6.0, 16))
    def test_helicoid_unit_drall(self, t):
        assert distribution_parameter(catalog.helicoid(), float(t)) == pytest.approx(1.0, abs=1e-9)

    def test_helix_tangent_surface_is_developable(self):
        surface = catalog.tangent_developable_of_helix()
        ts = np.linspace(0.3, TWO_PI - 0.3, 32)
        assert max(abs(distribution_parameter(surface, float(t))) for t in ts) < 1e-8

    def test_latitude_wobble_drall(self):
        surface = catalog.latitude_circle_director(wobble=0.35)
        for t in (0.0, 1.0, 2.5):
            assert distribution_parameter(surface, t) == pytest.approx(
                0.35 * math.cos(t), abs=1e-9
            )

    def test_base_curve_independence(self):
        surface = catalog.latitude_circle_director()
        shifted_base = CurveSampler(
            TWO_PI,
            lambda t: np.asarray(surface.base.evaluate(t)) + math.sin(t) * np.asarray(surface.director.evaluate(t)),
            None,
        )
        shifted = ruled_surface(shifted_base, surface.director)
        for t in (0.4, 1.7, 3.9):
            assert distribution_parameter(shifted, t) == pytest.approx(
                distribution_parameter(surface, t), abs=1e-9
            )

    def test_is_developable(self):
        assert is_developable(catalog.paper_cone())
        assert not is_developable(catalog.helicoid())
        assert is_developable(
            ruled_surface(circle_sampler(), constant_sampler((0, 0, 1)))
        )


class TestMovingFrame:
    def test_cone_frame_at_zero(self):
        frame = moving_frame(catalog.paper_cone(), 64)
        r = 1 / SQ2
        assert np.allclose(frame.q[0], (r, 0, r), atol=1e-12)
        assert np.allclose(frame.h[0], (0, 1, 0), atol=1e-10)
        assert np.allclose(frame.a[0], (-r, 0, r), atol=1e-10)
        assert frame.sigma is None  # point striction

    def test_helicoid_central_normal_axis(self):
        frame = moving_frame(catalog.helicoid(), 64, strict_orientation=False)
        assert np.allclose(frame.a, np.tile((0, 0, 1), (64, 1)), atol=1e-9)

    def test_helicoid_violates_orientation_convention(self):
        # the striction tangent of this helicoid has negative q-component,
        # so the striction angle leaves (-pi/2, pi/2): strict mode refuses
        with pytest.raises(OrientationError):
            moving_frame(catalog.helicoid(), 64)

    def test_orthonormality_and_structure_equations(self):
        for surface in (catalog.paper_cone(), catalog.helicoid(),
                        catalog.tangent_developable_of_helix()):
            frame = moving_frame(surface, 128, strict_orientation=False)
            for trio in np.stack([frame.q, frame.h, frame.a], axis=1):
                gram = trio @ trio.T
                assert np.allclose(gram, np.eye(3), atol=1e-9)
                assert np.linalg.det(trio) == pytest.approx(1.0, abs=1e-9)
            # dh = -k1 q + k2 a and da = -k2 h, densities in t
            h_sampler = CurveSampler(
                surface.period,
                lambda t: np.asarray(differentiate(surface.director, t))
                / np.linalg.norm(np.asarray(differentiate(surface.director, t))),
                None,
                surface.closed,
            )
            idx = [3, 40, 97]
            for i in idx:
                t = float(frame.ts[i])
                dh = np.asarray(differentiate(h_sampler, t))
                expected = -frame.k1_t[i] * frame.q[i] + frame.k2_t[i] * frame.a[i]
                assert np.allclose(dh, expected, atol=1e-6)

    def test_developable_striction_angle_is_zero(self):
        frame = moving_frame(catalog.tangent_developable_of_helix(), 64)
        finite = frame.sigma[np.isfinite(frame.sigma)]
        assert np.max(np.abs(finite)) < 1e-8

    def test_orientation_violation_raises_by_default(self):
        surface = catalog.latitude_circle_director()  # striction wobbles on the axis
        with pytest.raises(OrientationError):
            moving_frame(surface, 64)
        frame = moving_frame(surface, 64, strict_orientation=False)
        assert frame.sigma is not None

    def test_cylinder_rejected(self):
        with pytest.raises(CylindricalError):
            moving_frame(ruled_surface(circle_sampler(), constant_sampler((0, 0, 1))))


class TestIntegralInvariants:
    def test_cone_pitch_vanishes(self):
        assert pitch(catalog.paper_cone()) == pytest.approx(0, abs=1e-12)

    def test_cylinder_pitch_vanishes(self):
        surface = ruled_surface(circle_sampler(), constant_sampler((0, 0, 1)))
        assert pitch(surface) == pytest.approx(0, abs=1e-12)

    def test_circle_tangent_pitch(self):
        assert pitch(catalog.circle_tangent_surface()) == pytest.approx(-TWO_PI, abs=1e-9)

    def test_pitch_requires_closed(self):
        with pytest.raises(NotClosedError):
            pitch(catalog.helicoid())

    def test_cone_angle_of_pitch_both_routes(self):
        inv = angle_of_pitch(catalog.paper_cone(), 256)
        assert inv.lambda_bar.real == pytest.approx(-SQ2 * math.pi, abs=1e-9)
        assert inv.lambda_bar.dual == pytest.approx(0, abs=1e-9)
        assert inv.route_discrepancy < 1e-9
        assert inv.steiner_route_spread < 1e-9

    def test_cone_steiner_vector(self):
        inv = angle_of_pitch(catalog.paper_cone(), 256)
        assert np.allclose(inv.steiner.real, (0, 0, TWO_PI), atol=1e-9)
        assert np.allclose(inv.steiner.dual, (TWO_PI, 0, 0), atol=1e-9)

    def test_latitude_angle_of_pitch(self):
        phi = math.pi / 3
        inv = angle_of_pitch(catalog.latitude_circle_director(phi=phi), 256)
        assert inv.lambda_bar.real == pytest.approx(-TWO_PI * math.cos(phi), abs=1e-9)
        assert inv.lambda_bar.dual == pytest.approx(0, abs=1e-9)

    def test_central_normal_angle_of_pitch_vanishes(self):
        # the h-director of any closed motion is perpendicular to the
        # instantaneous screw, so its dual angle of pitch is zero
        report = invariant_report(catalog.latitude_circle_director(), 256)
        lam_h = report.entries["h"].invariants.lambda_bar
        assert abs(lam_h.real) < 1e-9 and abs(lam_h.dual) < 1e-9

    def test_cone_a_director_angle_of_pitch(self):
        report = invariant_report(catalog.paper_cone(), 256)
        lam_a = report.entries["a"].invariants.lambda_bar
        assert lam_a.real == pytest.approx(-SQ2 * math.pi, abs=1e-9)


class TestAreas:
    def test_unit_circle_area_vector(self):
        v = area_vector(circle_sampler_as_periodic())
        assert np.allclose(v, (0, 0, TWO_PI), atol=1e-10)
        assert projected_area(v, (0, 0, 1)) == pytest.approx(math.pi, abs=1e-10)
        assert projected_area(v, (1, 0, 0)) == pytest.approx(0, abs=1e-12)

    def test_cone_director_spherical_image(self):
        surface = catalog.paper_cone()
        image = CurveSampler(
            TWO_PI,
            lambda t: np.asarray(surface.director.evaluate(t)),
            None,
            periodic=True,
        )
        v = area_vector(image)
        assert v[2] == pytest.approx(math.pi, abs=1e-10)  # 2*pi*r^2 with r^2 = 1/2
        assert np.allclose(v[:2], 0, atol=1e-10)


def circle_sampler_as_periodic():
    return CurveSampler(
        TWO_PI,
        lambda t: np.array([math.cos(t), math.sin(t), 0.0]),
        None,
        periodic=True,
    )


class TestDualCurveBridge:
    def test_cone_matches_closed_form(self):
        curve = surface_to_dual_curve(catalog.paper_cone())
        for t in np.linspace(0, TWO_PI, 64, endpoint=False):
            got = curve.evaluate(float(t))
            expected = catalog.cone_dual_curve_exact(float(t))
            assert np.allclose(got.real, expected.real, atol=1e-12)
            assert np.allclose(got.dual, expected.dual, atol=1e-12)

    def test_helicoid_dual_curve_closed_form(self):
        curve = surface_to_dual_curve(catalog.helicoid())
        for t in (0.5, 2.2, 5.0):
            got = curve.evaluate(t)
            assert np.allclose(got.real, (-math.sin(t), math.cos(t), 0), atol=1e-12)
            assert np.allclose(
                got.dual,
                (-t * math.cos(t), -t * math.sin(t), math.sin(t) - t),
                atol=1e-12,
            )

    def test_round_trip_preserves_line_set(self):
        surface = catalog.latitude_circle_director()
        curve = surface_to_dual_curve(surface)
        back = surface_to_dual_curve(dual_curve_to_surface(curve))
        for t in np.linspace(0, TWO_PI, 32, endpoint=False):
            v1 = curve.evaluate(float(t))
            v2 = back.evaluate(float(t))
            assert np.allclose(v1.real, v2.real, atol=1e-12)
            assert np.allclose(v1.dual, v2.dual, atol=1e-12)

    def test_images_are_dual_unit(self):
        curve = surface_to_dual_curve(catalog.latitude_circle_director())
        for t in np.linspace(0, TWO_PI, 16):
            assert dual.is_unit(curve.evaluate(float(t)), tol=1e-12)


class TestInvariantReport:
    def test_cone_report(self):
        report = invariant_report(catalog.paper_cone(), 256)
        assert report.surface_pitch == pytest.approx(0, abs=1e-12)
        assert report.developable
        assert report.point_striction
        assert report.sigma_range is None
        inv = report.q
        assert inv.lambda_bar.real == pytest.approx(-SQ2 * math.pi, abs=1e-9)
        assert report.pole is not None and report.pole_spread < 1e-9

    def test_latitude_report_consistency(self):
        report = invariant_report(catalog.latitude_circle_director(), 256)
        inv = report.q
        # the central cross-check: dual part of the Steiner contraction
        # equals minus the pitch
        assert inv.lambda_steiner.dual == pytest.approx(-report.surface_pitch, abs=1e-6)
        assert inv.route_discrepancy < 1e-6
        assert not report.developable
        assert not report.point_striction

    def test_report_requires_closed(self):
        with pytest.raises(NotClosedError):
            invariant_report(catalog.helicoid())
