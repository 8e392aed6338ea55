import math

import numpy as np
import pytest

from ruledgeo import catalog
from ruledgeo.curves import (
    CurveSampler,
    QuadratureSpec,
    arclength_reparam,
    closed_integral,
    cumulative_integral,
    differentiate,
    fourier_derivative,
    interpolate_periodic,
)
from ruledgeo.dual import DualVector3
from ruledgeo.errors import DegenerateError
from ruledgeo.surfaces import surface_to_dual_curve

TWO_PI = 2 * math.pi


def circle(radius=1.0):
    return CurveSampler(
        TWO_PI,
        lambda t: np.array([radius * math.cos(t), radius * math.sin(t), 0.0]),
        None,
        periodic=True,
    )


class TestDifferentiate:
    def test_first_order(self):
        c = circle()
        assert np.allclose(differentiate(c, 0.0, 1), (0, 1, 0), atol=1e-10)

    def test_second_order(self):
        c = circle()
        assert np.allclose(differentiate(c, 0.0, 2), (-1, 0, 0), atol=1e-8)

    def test_third_order(self):
        c = circle()
        assert np.allclose(differentiate(c, 0.0, 3), (0, -1, 0), atol=1e-7)

    def test_analytic_derivative_prefers_exactness(self):
        c = CurveSampler(
            TWO_PI,
            lambda t: np.array([math.cos(t), math.sin(t), 0.0]),
            lambda t: np.array([-math.sin(t), math.cos(t), 0.0]),
            periodic=True,
        )
        assert np.allclose(differentiate(c, 0.3, 1), (-math.sin(0.3), math.cos(0.3), 0))
        assert np.allclose(differentiate(c, 0.3, 2), (-math.cos(0.3), -math.sin(0.3), 0), atol=1e-9)
        assert np.allclose(differentiate(c, 0.3, 3), (math.sin(0.3), -math.cos(0.3), 0), atol=1e-8)

    def test_cone_dual_curve_derivative(self):
        curve = surface_to_dual_curve(catalog.paper_cone())
        v = differentiate(curve, math.pi / 2, 1)
        r = 1 / math.sqrt(2)
        assert isinstance(v, DualVector3)
        assert np.allclose(v.real, (-r, 0, 0), atol=1e-10)
        assert np.allclose(v.dual, (0, 0, r), atol=1e-10)

    def test_central_difference_error_scales_quadratically(self):
        # plain (non-extrapolated) central differences of sin at 0.4
        f = math.sin
        exact = math.cos(0.4)

        def central(h):
            return (f(0.4 + h) - f(0.4 - h)) / (2 * h)

        e1 = abs(central(1e-3) - exact)
        e2 = abs(central(5e-4) - exact)
        assert e1 / e2 == pytest.approx(4.0, rel=0.05)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            differentiate(circle(), 0.0, 4)


class TestClosedIntegral:
    def test_sin_squared(self):
        value = closed_integral(lambda t: math.sin(t) ** 2, TWO_PI)
        assert value == pytest.approx(math.pi, abs=1e-12)

    def test_vector_valued(self):
        value = closed_integral(lambda t: np.array([0.0, 0.0, 1.0]), TWO_PI)
        assert np.allclose(value, (0, 0, TWO_PI))

    def test_exact_derivative_integrates_to_zero(self):
        value = closed_integral(lambda t: math.cos(t) * math.exp(math.sin(t)), TWO_PI)
        assert abs(value) < 1e-10

    def test_trapezoid_is_spectral_on_smooth_periodic(self):
        # geometric convergence: doubling the grid gains far more than one
        # order of magnitude for an analytic periodic integrand
        f = lambda t: math.exp(math.sin(t)) / (1.25 + math.cos(t))
        exact = closed_integral(f, TWO_PI, QuadratureSpec(4096))
        e16 = abs(closed_integral(f, TWO_PI, QuadratureSpec(16)) - exact)
        e32 = abs(closed_integral(f, TWO_PI, QuadratureSpec(32)) - exact)
        assert e16 > 10 * e32

    def test_simpson_rule(self):
        spec = QuadratureSpec(256, rule="simpson")
        value = closed_integral(lambda t: t * t, 1.0, spec)
        assert value == pytest.approx(1 / 3, abs=1e-10)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(4)
        with pytest.raises(ValueError):
            QuadratureSpec(64, rule="gauss")


class TestCumulativeIntegral:
    def test_constant(self):
        F = cumulative_integral(lambda t: 1.0, TWO_PI)
        assert F(math.pi) == pytest.approx(math.pi, abs=1e-10)
        assert F(0.0) == 0.0

    def test_cone_dual_curvature_form(self):
        curve = surface_to_dual_curve(catalog.paper_cone())

        def k1(t):
            from ruledgeo.dual import DualVector3
            from ruledgeo import dual as d

            return d.norm(differentiate(curve, t)).real

        F = cumulative_integral(k1, TWO_PI)
        assert F(TWO_PI) == pytest.approx(math.sqrt(2) * math.pi, abs=1e-9)


class TestInterpolation:
    def test_periodic_cosine(self):
        samples = np.cos(np.arange(64) * TWO_PI / 64)
        sampler = interpolate_periodic(samples, TWO_PI)
        ts = np.linspace(0, TWO_PI, 777)
        err = max(abs(float(sampler.evaluate(t)) - math.cos(t)) for t in ts)
        assert err < 1e-6

    def test_vector_samples_round_trip(self):
        ts = np.arange(32) * TWO_PI / 32
        samples = np.stack([np.cos(ts), np.sin(ts), 0 * ts], axis=1)
        sampler = interpolate_periodic(samples, TWO_PI)
        assert np.allclose(sampler.evaluate(ts[5]), samples[5], atol=1e-12)


class TestArclength:
    def test_circle_radius_two(self):
        c = circle(radius=2.0)
        r = arclength_reparam(c)
        assert r.period == pytest.approx(4 * math.pi, abs=1e-8)
        assert np.allclose(r.evaluate(2 * math.pi), (-2, 0, 0), atol=1e-6)
        speeds = [np.linalg.norm(differentiate(r, s)) for s in np.linspace(1, 10, 7)]
        assert np.allclose(speeds, 1.0, atol=1e-6)

    def test_unit_speed_identity(self):
        c = CurveSampler(
            1.0, lambda t: np.array([t, 0.0, 0.0]), lambda t: np.array([1.0, 0.0, 0.0])
        )
        r = arclength_reparam(c)
        assert r.period == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(r.evaluate(0.5), (0.5, 0, 0), atol=1e-10)

    def test_point_curve_rejected(self):
        c = CurveSampler(TWO_PI, lambda t: np.array([0.0, 1.0, 0.0]), None, periodic=True)
        with pytest.raises(DegenerateError):
            arclength_reparam(c)


class TestFourier:
    def test_spectral_accuracy(self):
        n = 128
        ts = np.arange(n) * TWO_PI / n
        values = np.exp(np.sin(ts))
        exact = np.cos(ts) * values
        got = fourier_derivative(values, TWO_PI)
        assert np.max(np.abs(got - exact)) < 1e-11
