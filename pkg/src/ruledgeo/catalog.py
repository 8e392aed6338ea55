"""Built-in surfaces.

* paper-cone: rulings through (0, 1, 0) with direction (cos u, sin u, 1);
  its dual curve is (1/sqrt2)(cos u, sin u, 1) + eps (1/sqrt2)(1, 0, -cos u).
  Point-degenerate striction (apex), developable, closed.
* helicoid: base (-u cos u, 1 - u sin u, u), director (-sin u, cos u, 0);
  skew with unit drall, open.
* tangent-developable-of-helix: tangent lines of a circular helix; the
  striction line is the helix itself, with constant curvature/torsion.
* latitude-circle-director: director on the latitude circle at polar angle
  phi, base a unit circle with a vertical wobble.  Skew and closed; the
  wobble makes the dual curvature's dual part integrate to zero over one
  period while keeping the drall nonzero.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .curves import CurveSampler
from .surfaces import RuledSurface, ruled_surface

TWO_PI = 2.0 * math.pi


def _sampler(f: Callable, df: Callable, period: float) -> CurveSampler:
    return CurveSampler(
        period,
        lambda t: np.asarray(f(t), dtype=float),
        lambda t: np.asarray(df(t), dtype=float),
    )


def paper_cone() -> RuledSurface:
    base = _sampler(lambda t: (0.0, 1.0, 0.0), lambda t: (0.0, 0.0, 0.0), TWO_PI)
    director = _sampler(
        lambda t: (math.cos(t), math.sin(t), 1.0),
        lambda t: (-math.sin(t), math.cos(t), 0.0),
        TWO_PI,
    )
    return ruled_surface(base, director)


def cone_dual_curve_exact(t: float):
    """Closed form of the cone's dual curve (for tests and verification)."""
    from .dual import DualVector3

    r = 1.0 / math.sqrt(2.0)
    return DualVector3(
        (r * math.cos(t), r * math.sin(t), r),
        (r, 0.0, -r * math.cos(t)),
    )


def helicoid() -> RuledSurface:
    base = _sampler(
        lambda t: (-t * math.cos(t), 1.0 - t * math.sin(t), t),
        lambda t: (-math.cos(t) + t * math.sin(t), -math.sin(t) - t * math.cos(t), 1.0),
        TWO_PI,
    )
    director = _sampler(
        lambda t: (-math.sin(t), math.cos(t), 0.0),
        lambda t: (-math.cos(t), -math.sin(t), 0.0),
        TWO_PI,
    )
    return ruled_surface(base, director)


def helix_curve(radius: float = 1.0, slope: float = 1.0, span: float = TWO_PI) -> CurveSampler:
    """Circular helix (radius*cos t, radius*sin t, slope*t)."""
    return _sampler(
        lambda t: (radius * math.cos(t), radius * math.sin(t), slope * t),
        lambda t: (-radius * math.sin(t), radius * math.cos(t), slope),
        span,
    )


def helix_curvature_torsion(radius: float = 1.0, slope: float = 1.0) -> tuple[float, float]:
    c2 = radius * radius + slope * slope
    return radius / c2, slope / c2


def tangent_developable(curve: CurveSampler) -> RuledSurface:
    """Tangent-line surface of a curve; its striction line is the curve."""
    if curve.derivative is None:
        raise ValueError("tangent developable needs a curve with analytic derivative")
    director = CurveSampler(curve.period, curve.derivative, None, curve.periodic)
    return ruled_surface(curve, director)


def tangent_developable_of_helix(
    radius: float = 1.0, slope: float = 1.0, span: float = TWO_PI
) -> RuledSurface:
    return tangent_developable(helix_curve(radius, slope, span))


def latitude_circle_director(
    phi: float = math.pi / 3.0, wobble: float = 0.35, radius: float = 1.0
) -> RuledSurface:
    """Closed skew surface: latitude director + vertically wobbled circle base.

    The striction runs on the z-axis (oscillating), the drall is
    wobble*cos(t), and the dual part of the dual curvature form integrates
    to zero over the period.  Its angle of pitch is -2*pi*cos(phi) with
    zero pitch.
    """
    sp, cp = math.sin(phi), math.cos(phi)
    base = _sampler(
        lambda t: (radius * math.cos(t), radius * math.sin(t), wobble * math.sin(t)),
        lambda t: (-radius * math.sin(t), radius * math.cos(t), wobble * math.cos(t)),
        TWO_PI,
    )
    director = _sampler(
        lambda t: (sp * math.cos(t), sp * math.sin(t), cp),
        lambda t: (-sp * math.sin(t), sp * math.cos(t), 0.0),
        TWO_PI,
    )
    return ruled_surface(base, director)


def circle_tangent_surface(radius: float = 1.0) -> RuledSurface:
    """Tangent lines of a circle: closed, developable, pitch -2*pi*radius."""
    base = _sampler(
        lambda t: (radius * math.cos(t), radius * math.sin(t), 0.0),
        lambda t: (-radius * math.sin(t), radius * math.cos(t), 0.0),
        TWO_PI,
    )
    director = _sampler(
        lambda t: (-math.sin(t), math.cos(t), 0.0),
        lambda t: (-math.cos(t), -math.sin(t), 0.0),
        TWO_PI,
    )
    return ruled_surface(base, director)


def wavy_circle_tangent_surface(amplitude: float = 0.25) -> RuledSurface:
    """Closed developable with nonzero total torsion: tangent surface of a
    circle carrying an asymmetric vertical wave."""
    curve = _sampler(
        lambda t: (
            math.cos(t),
            math.sin(t),
            amplitude * (math.sin(2.0 * t) + 0.5 * math.cos(3.0 * t)),
        ),
        lambda t: (
            -math.sin(t),
            math.cos(t),
            amplitude * (2.0 * math.cos(2.0 * t) - 1.5 * math.sin(3.0 * t)),
        ),
        TWO_PI,
    )
    return tangent_developable(curve)


def mannheim_compatible_developable(
    theta0: float = math.pi / 4.0,
    theta_star0: float = -2.0,
    kappa: float = 0.25,
    span: float = 4.0,
    grid: int = 2001,
) -> tuple[RuledSurface, CurveSampler]:
    """Tangent developable whose Mannheim offsets stay developable.

    The striction curve has constant curvature `kappa` and torsion
    tau(s) = -tan(theta0 - kappa*s)/theta_star0, which is exactly the
    profile that keeps sin(theta) + theta_star*tau*cos(theta) = 0 along
    the integrated offset angle theta(s) = theta0 - kappa*s with constant
    offset distance theta_star0.  Returns (surface, striction curve); the
    parameter is arclength shifted to [0, span].
    """
    from scipy.integrate import solve_ivp

    half = 0.5 * span

    def tau(s: float) -> float:
        return -math.tan(theta0 - kappa * s) / theta_star0

    def rhs(s, y):
        T, N, B = y[3:6], y[6:9], y[9:12]
        tz = tau(s)
        return np.concatenate([T, kappa * N, -kappa * T + tz * B, -tz * N])

    y0 = np.concatenate([np.zeros(3), (1, 0, 0), (0, 1, 0), (0, 0, 1)]).astype(float)
    ss = np.linspace(-half, half, grid)
    sol = solve_ivp(
        rhs, (-half, half), y0, t_eval=ss, rtol=1e-12, atol=1e-12, method="DOP853"
    )
    if not sol.success:
        raise RuntimeError(f"Frenet integration failed: {sol.message}")
    from scipy.interpolate import make_interp_spline

    # quintic fit: the striction torsion needs a smooth third derivative
    alpha_sp = make_interp_spline(ss + half, sol.y[0:3].T, k=5)
    tangent_sp = make_interp_spline(ss + half, sol.y[3:6].T, k=5)
    normal_sp = make_interp_spline(ss + half, sol.y[6:9].T, k=5)

    curve = CurveSampler(
        span,
        lambda t: np.asarray(alpha_sp(t), dtype=float),
        lambda t: np.asarray(tangent_sp(t), dtype=float),
    )
    director = CurveSampler(
        span,
        lambda t: np.asarray(tangent_sp(t), dtype=float),
        lambda t: kappa * np.asarray(normal_sp(t), dtype=float),
    )
    return ruled_surface(curve, director), curve


CATALOG: dict[str, Callable[..., RuledSurface]] = {
    "paper-cone": paper_cone,
    "cone": paper_cone,
    "helicoid": helicoid,
    "tangent-developable-of-helix": tangent_developable_of_helix,
    "helix-tangent": tangent_developable_of_helix,
    "latitude-circle-director": latitude_circle_director,
}


def build(name: str, **params) -> RuledSurface:
    try:
        factory = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(set(CATALOG)))
        raise KeyError(f"unknown catalog surface {name!r}; known: {known}") from None
    return factory(**params)
