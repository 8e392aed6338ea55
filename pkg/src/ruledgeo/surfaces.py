"""Differential geometry of (closed) trajectory ruled surfaces.

A ruled surface is base curve + director: phi(t, v) = k(t) + v q(t).
This module computes the striction curve, distribution parameter, moving
trihedron {q, h, a} with its structural forms, the dual curve on the dual
unit sphere, and the integral invariants (pitch, angle of pitch, dual
angle of pitch, Steiner vector, area vectors).

Closed-surface invariants are computed on a uniform grid with spectral
(FFT) differentiation, which keeps two stacked differentiations at ~1e-10
accuracy; open surfaces fall back to Richardson finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import dual
from .curves import (
    CurveSampler,
    QuadratureSpec,
    cumulative_integral,
    differentiate,
    fourier_derivative,
)
from .dual import DualNumber, DualVector3
from .errors import (
    CylindricalError,
    DegenerateError,
    MoebiusClosureError,
    NotClosedError,
    OrientationError,
)
from .tol import DEFAULT

_POINT_TOL = 1e-8     # striction collapses to a point below this spread
_SPEED_TOL = 1e-9     # minimum regular striction / director speed


@dataclass(frozen=True)
class RuledSurface:
    """Base curve + unit director over one parameter interval."""

    base: CurveSampler
    director: CurveSampler  # normalized on ingest
    period: float
    closed: bool


def _normalized_director(director: CurveSampler) -> CurveSampler:
    raw_eval = director.evaluate
    raw_deriv = director.derivative

    def evaluate(t: float) -> np.ndarray:
        d = np.asarray(raw_eval(t), dtype=float)
        n = np.linalg.norm(d)
        if n < DEFAULT.division:
            raise DegenerateError("director vanishes; direction undefined")
        return d / n

    derivative = None
    if raw_deriv is not None:
        def derivative(t: float) -> np.ndarray:
            d = np.asarray(raw_eval(t), dtype=float)
            dp = np.asarray(raw_deriv(t), dtype=float)
            n = np.linalg.norm(d)
            return dp / n - d * (np.dot(d, dp) / n**3)

    return CurveSampler(director.period, evaluate, derivative, director.periodic)


def ruled_surface(
    base: CurveSampler,
    director: CurveSampler,
    closed: Optional[bool] = None,
    tol: float = DEFAULT.geometric,
) -> RuledSurface:
    """Build a RuledSurface; detects closure and rejects Moebius-type directors."""
    if abs(base.period - director.period) > tol:
        raise ValueError("base and director must share one parameter period")
    T = base.period
    q = _normalized_director(director)
    gap_k = float(np.linalg.norm(np.asarray(base.evaluate(0.0)) - np.asarray(base.evaluate(T))))
    q0, qT = q.evaluate(0.0), q.evaluate(T)
    gap_q = float(np.linalg.norm(q0 - qT))
    flip_q = float(np.linalg.norm(q0 + qT))
    detected = gap_k <= tol and gap_q <= tol
    if gap_k <= tol and flip_q <= tol:
        raise MoebiusClosureError(
            "director closes onto its negative after one period; not supported"
        )
    if closed is True and not detected:
        raise NotClosedError(
            f"surface does not close: |k(0)-k(T)| = {gap_k:.2e}, |q(0)-q(T)| = {gap_q:.2e}"
        )
    is_closed = detected if closed is None else closed
    base = CurveSampler(T, base.evaluate, base.derivative, periodic=is_closed)
    q = CurveSampler(T, q.evaluate, q.derivative, periodic=is_closed)
    return RuledSurface(base, q, T, is_closed)


# ---------------------------------------------------------------------------
# striction and distribution parameter

@dataclass(frozen=True)
class Striction:
    """Striction curve, or the single point it degenerates to (cone-like)."""

    curve: CurveSampler
    point_degenerate: bool
    point: Optional[np.ndarray]


def _director_speed_guard(surface: RuledSurface, ts: np.ndarray) -> None:
    speeds = [
        float(np.linalg.norm(np.asarray(differentiate(surface.director, float(t)))))
        for t in ts
    ]
    if min(speeds) < _SPEED_TOL:
        raise CylindricalError(
            "director is (locally) constant; striction and frame are undefined"
        )


def striction_curve(surface: RuledSurface, samples: int = 256) -> Striction:
    """c = k - (<dq,dk>/<dq,dq>) q, flagged when it collapses to a point.

    When the base curve is already central (tangent developables, bases
    chosen on the striction) the base sampler itself is returned, keeping
    its analytic derivative available for Frenet work downstream.
    """
    ts = np.linspace(0.0, surface.period, samples, endpoint=False)
    _director_speed_guard(surface, ts)
    k, q = surface.base, surface.director

    def shift(t: float) -> float:
        dq = np.asarray(differentiate(q, t), dtype=float)
        dk = np.asarray(differentiate(k, t), dtype=float)
        return float(np.dot(dq, dk) / np.dot(dq, dq))

    def evaluate(t: float) -> np.ndarray:
        return np.asarray(k.evaluate(t), dtype=float) - shift(t) * np.asarray(
            q.evaluate(t), dtype=float
        )

    shifts = np.array([abs(shift(float(t))) for t in ts])
    pts = np.array([evaluate(float(t)) for t in ts])
    center = pts.mean(axis=0)
    spread = float(np.max(np.linalg.norm(pts - center, axis=1)))
    degenerate = spread < _POINT_TOL * (1.0 + float(np.linalg.norm(center)))
    if degenerate:
        sampler = CurveSampler(surface.period, evaluate, None, periodic=surface.closed)
        return Striction(sampler, True, center)
    scale = 1.0 + float(np.max(np.linalg.norm(pts, axis=1)))
    if float(shifts.max()) < 1e-10 * scale:
        return Striction(k, False, None)
    sampler = CurveSampler(surface.period, evaluate, None, periodic=surface.closed)
    return Striction(sampler, False, None)


def distribution_parameter(surface: RuledSurface, t: float) -> float:
    """Drall delta = <dk, q x dq> / <dq, dq>; zero exactly on torsal rulings."""
    dq = np.asarray(differentiate(surface.director, t), dtype=float)
    n2 = float(np.dot(dq, dq))
    if math.sqrt(n2) < _SPEED_TOL:
        raise CylindricalError("drall undefined where the director is stationary")
    dk = np.asarray(differentiate(surface.base, t), dtype=float)
    q = np.asarray(surface.director.evaluate(t), dtype=float)
    return float(np.dot(dk, np.cross(q, dq)) / n2)


def drall_samples(surface: RuledSurface, samples: int = 256) -> np.ndarray:
    ts = np.linspace(0.0, surface.period, samples, endpoint=False)
    return np.array([distribution_parameter(surface, float(t)) for t in ts])


def is_developable(
    surface: RuledSurface, tol: float = DEFAULT.relation, samples: int = 256
) -> bool:
    """Max |drall| below tol; cylindrical surfaces count as developable."""
    try:
        return float(np.max(np.abs(drall_samples(surface, samples)))) < tol
    except CylindricalError:
        return True


# ---------------------------------------------------------------------------
# dual curve of a surface (E. Study image) and back

def surface_to_dual_curve(surface: RuledSurface) -> CurveSampler:
    """q~(t) = q(t) + eps (k(t) x q(t)): the surface as a dual spherical curve."""
    k, q = surface.base, surface.director

    def evaluate(t: float) -> DualVector3:
        qv = np.asarray(q.evaluate(t), dtype=float)
        kv = np.asarray(k.evaluate(t), dtype=float)
        return DualVector3(qv, np.cross(kv, qv))

    derivative = None
    if k.derivative is not None and q.derivative is not None:
        def derivative(t: float) -> DualVector3:
            qv = np.asarray(q.evaluate(t), dtype=float)
            kv = np.asarray(k.evaluate(t), dtype=float)
            qp = np.asarray(q.derivative(t), dtype=float)
            kp = np.asarray(k.derivative(t), dtype=float)
            return DualVector3(qp, np.cross(kp, qv) + np.cross(kv, qp))

    return CurveSampler(surface.period, evaluate, derivative, periodic=surface.closed)


def dual_curve_to_surface(
    curve: CurveSampler, closed: Optional[bool] = None
) -> RuledSurface:
    """Reconstruct a surface from a dual curve; base = foot point per ruling."""

    def base_eval(t: float) -> np.ndarray:
        v = curve.evaluate(t)
        return np.cross(v.real, v.dual)

    def director_eval(t: float) -> np.ndarray:
        return curve.evaluate(t).real

    base_deriv = director_deriv = None
    if curve.derivative is not None:
        def base_deriv(t: float) -> np.ndarray:
            v = curve.evaluate(t)
            vp = curve.derivative(t)
            return np.cross(vp.real, v.dual) + np.cross(v.real, vp.dual)

        def director_deriv(t: float) -> np.ndarray:
            return curve.derivative(t).real

    base = CurveSampler(curve.period, base_eval, base_deriv, curve.periodic)
    director = CurveSampler(curve.period, director_eval, director_deriv, curve.periodic)
    return ruled_surface(base, director, closed=closed)


# ---------------------------------------------------------------------------
# pointwise dual frame (open surfaces, offset construction)

@dataclass(frozen=True)
class DualFramePoint:
    q: DualVector3
    h: DualVector3
    a: DualVector3
    k1: DualNumber  # dual curvature density w.r.t. the curve parameter


def dual_frame_at(curve: CurveSampler, t: float) -> DualFramePoint:
    """{q~, h~ = dq~/||dq~||, a~ = q~ x h~} at parameter t."""
    q = curve.evaluate(t)
    qp = differentiate(curve, t)
    k1 = dual.norm(qp)
    if k1.real < _SPEED_TOL:
        raise CylindricalError("dual curve is stationary; frame undefined")
    h = qp / k1
    a = dual.cross(q, h)
    return DualFramePoint(q, h, a, k1)


# ---------------------------------------------------------------------------
# sampled dual frame and integral invariants (closed surfaces)

@dataclass(frozen=True)
class DualCurveFrame:
    """Dual frame and forms sampled on a uniform grid over one period.

    Arrays are (N, 3) for vectors, (N,) for forms; all form values are
    densities with respect to the curve parameter t.
    """

    ts: np.ndarray
    period: float
    q_r: np.ndarray
    q_d: np.ndarray
    h_r: np.ndarray
    h_d: np.ndarray
    a_r: np.ndarray
    a_d: np.ndarray
    k1: np.ndarray
    k1_d: np.ndarray
    k2: np.ndarray
    k2_d: np.ndarray


def _sample_dual_curve(curve: CurveSampler, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ts = np.arange(n) * (curve.period / n)
    R = np.empty((n, 3))
    D = np.empty((n, 3))
    for i, t in enumerate(ts):
        v = curve.evaluate(float(t))
        R[i] = v.real
        D[i] = v.dual
    return ts, R, D


def closed_dual_frame(curve: CurveSampler, samples: int = 256) -> DualCurveFrame:
    if not curve.periodic:
        raise NotClosedError("dual frame sampling requires a closed dual curve")
    ts, R, D = _sample_dual_curve(curve, samples)
    return _frame_from_samples(ts, curve.period, R, D)


def _frame_from_samples(
    ts: np.ndarray, period: float, R: np.ndarray, D: np.ndarray
) -> DualCurveFrame:
    Rp = fourier_derivative(R, period)
    Dp = fourier_derivative(D, period)
    k1 = np.linalg.norm(Rp, axis=1)
    if float(np.min(k1)) < _SPEED_TOL:
        raise CylindricalError("dual curve has stationary points; frame undefined")
    k1_d = np.einsum("ij,ij->i", Rp, Dp) / k1
    h_r = Rp / k1[:, None]
    h_d = (Dp - k1_d[:, None] * h_r) / k1[:, None]
    a_r = np.cross(R, h_r)
    a_d = np.cross(R, h_d) + np.cross(D, h_r)
    hp_r = fourier_derivative(h_r, period)
    hp_d = fourier_derivative(h_d, period)
    k2 = np.einsum("ij,ij->i", hp_r, a_r)
    k2_d = np.einsum("ij,ij->i", hp_r, a_d) + np.einsum("ij,ij->i", hp_d, a_r)
    return DualCurveFrame(ts, period, R, D, h_r, h_d, a_r, a_d, k1, k1_d, k2, k2_d)


@dataclass(frozen=True)
class DualCurveInvariants:
    """Integral invariants of one closed dual spherical curve.

    lambda_bar is the dual angle of pitch from the connection form
    (-circuit integral of the k2-form); the Steiner contraction
    -<q~(t), d~> is reported with its mean and spread across samples, the
    two being independent evaluation routes of the same invariant.
    """

    lambda_bar: DualNumber
    steiner: DualVector3
    lambda_steiner: DualNumber
    steiner_route_spread: float
    samples: int

    @property
    def angle_of_pitch(self) -> float:
        return self.lambda_bar.real

    @property
    def pitch_from_dual(self) -> float:
        # lambda_bar = lambda - eps*ell
        return -self.lambda_bar.dual

    @property
    def route_discrepancy(self) -> float:
        return max(
            abs(self.lambda_bar.real - self.lambda_steiner.real),
            abs(self.lambda_bar.dual - self.lambda_steiner.dual),
        )

    @property
    def spherical_area(self) -> DualNumber:
        return DualNumber(2.0 * math.pi) - self.lambda_bar


def invariants_from_frame(frame: DualCurveFrame) -> DualCurveInvariants:
    n = len(frame.ts)
    w = frame.period / n
    lam = DualNumber(-w * float(np.sum(frame.k2)), -w * float(np.sum(frame.k2_d)))
    psi_r = frame.k2[:, None] * frame.q_r + frame.k1[:, None] * frame.a_r
    psi_d = (
        frame.k2_d[:, None] * frame.q_r
        + frame.k2[:, None] * frame.q_d
        + frame.k1_d[:, None] * frame.a_r
        + frame.k1[:, None] * frame.a_d
    )
    steiner = DualVector3(w * psi_r.sum(axis=0), w * psi_d.sum(axis=0))
    lam2_r = -frame.q_r @ steiner.real
    lam2_d = -(frame.q_r @ steiner.dual + frame.q_d @ steiner.real)
    lam2 = DualNumber(float(lam2_r.mean()), float(lam2_d.mean()))
    spread = max(
        float(np.max(np.abs(lam2_r - lam2.real))),
        float(np.max(np.abs(lam2_d - lam2.dual))),
    )
    return DualCurveInvariants(lam, steiner, lam2, spread, n)


def dual_curve_invariants(curve: CurveSampler, samples: int = 256) -> DualCurveInvariants:
    return invariants_from_frame(closed_dual_frame(curve, samples))


# ---------------------------------------------------------------------------
# real moving frame with striction data

@dataclass(frozen=True)
class FrameField:
    """Real trihedron {q, h, a} with forms and striction data on a grid.

    k1_t / k2_t are densities w.r.t. the surface parameter; `s_of_t` maps
    the parameter to striction arclength (or to dual-curve arclength when
    the striction degenerates to a point and no striction length exists).
    """

    ts: np.ndarray
    period: float
    q: np.ndarray
    h: np.ndarray
    a: np.ndarray
    k1_t: np.ndarray
    k2_t: np.ndarray
    striction: Striction
    striction_points: np.ndarray
    striction_speed: np.ndarray
    sigma: Optional[np.ndarray]
    s_of_t: Callable[[float], float]


def moving_frame(
    surface: RuledSurface, samples: int = 256, strict_orientation: bool = True
) -> FrameField:
    """Trihedron {q, h, a} with forms, striction and striction angle.

    With `strict_orientation` (default) a striction angle outside
    (-pi/2, pi/2) raises OrientationError; diagnostics can opt out and
    read the offending angles from the field instead.
    """
    ts = np.linspace(0.0, surface.period, samples, endpoint=False)
    _director_speed_guard(surface, ts)
    q_curve = surface.director

    def h_eval(t: float) -> np.ndarray:
        dq = np.asarray(differentiate(q_curve, t), dtype=float)
        return dq / np.linalg.norm(dq)

    h_sampler = CurveSampler(surface.period, h_eval, None, surface.closed)

    q = np.array([q_curve.evaluate(float(t)) for t in ts])
    dq = np.array([np.asarray(differentiate(q_curve, float(t))) for t in ts])
    k1_t = np.linalg.norm(dq, axis=1)
    h = dq / k1_t[:, None]
    a = np.cross(q, h)
    dh = np.array([np.asarray(differentiate(h_sampler, float(t))) for t in ts])
    k2_t = np.einsum("ij,ij->i", dh, a)

    stric = striction_curve(surface, samples)
    pts = np.array([stric.curve.evaluate(float(t)) for t in ts])
    dc = np.array([np.asarray(differentiate(stric.curve, float(t))) for t in ts])
    speed = np.linalg.norm(dc, axis=1)

    sigma = None
    if not stric.point_degenerate:
        sigma = np.full(samples, np.nan)
        regular = speed > _SPEED_TOL
        u = dc[regular] / speed[regular, None]
        cos_s = np.einsum("ij,ij->i", u, q[regular])
        sin_s = np.einsum("ij,ij->i", u, a[regular])
        if strict_orientation and np.any(cos_s <= 0.0):
            raise OrientationError(
                "striction angle left (-pi/2, pi/2); re-orient the surface"
            )
        sigma[regular] = np.arctan2(sin_s, cos_s)

    if stric.point_degenerate:
        # no striction length: use the arclength of the dual spherical image
        dcurve = surface_to_dual_curve(surface)

        def density(t: float) -> float:
            v = differentiate(dcurve, t)
            return float(np.linalg.norm(v.real))
    else:
        def density(t: float) -> float:
            return float(np.linalg.norm(np.asarray(differentiate(stric.curve, t))))

    s_of_t = cumulative_integral(density, surface.period)

    return FrameField(
        ts, surface.period, q, h, a, k1_t, k2_t,
        stric, pts, speed, sigma, s_of_t,
    )


# ---------------------------------------------------------------------------
# real integral invariants

def pitch(surface: RuledSurface, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Pitch of a closed surface: -circuit integral of <dk, q>."""
    if not surface.closed:
        raise NotClosedError("pitch is defined only for closed surfaces")
    k, q = surface.base, surface.director

    def integrand(t: float) -> float:
        dk = np.asarray(differentiate(k, t), dtype=float)
        return float(np.dot(dk, np.asarray(q.evaluate(t), dtype=float)))

    from .curves import closed_integral

    return -float(closed_integral(integrand, surface.period, spec))


def angle_of_pitch(surface: RuledSurface, samples: int = 256) -> DualCurveInvariants:
    """Dual angle of pitch of the q-director, both routes (see DualCurveInvariants)."""
    if not surface.closed:
        raise NotClosedError("angle of pitch is defined only for closed surfaces")
    return dual_curve_invariants(surface_to_dual_curve(surface), samples)


def steiner_vector(surface: RuledSurface, samples: int = 256) -> DualVector3:
    return angle_of_pitch(surface, samples).steiner


def area_vector(curve: CurveSampler, samples: int = 256) -> np.ndarray:
    """v = circuit integral of x cross dx for a closed real curve."""
    if not curve.periodic:
        raise NotClosedError("area vector is defined only for closed curves")
    ts = np.arange(samples) * (curve.period / samples)
    x = np.array([np.asarray(curve.evaluate(float(t)), dtype=float) for t in ts])
    dx = fourier_derivative(x, curve.period)
    return (curve.period / samples) * np.cross(x, dx).sum(axis=0)


def projected_area(v: np.ndarray, direction: np.ndarray) -> float:
    """Area of projection f with 2f = <v, direction>."""
    return 0.5 * float(np.dot(np.asarray(v, dtype=float), np.asarray(direction, dtype=float)))


def dual_area_vector(curve: CurveSampler, samples: int = 256) -> DualVector3:
    """Dual area vector of a closed dual curve: circuit of q~ x dq~."""
    if not curve.periodic:
        raise NotClosedError("dual area vector requires a closed dual curve")
    ts, R, D = _sample_dual_curve(curve, samples)
    Rp = fourier_derivative(R, curve.period)
    Dp = fourier_derivative(D, curve.period)
    w = curve.period / samples
    vr = np.cross(R, Rp).sum(axis=0) * w
    vd = (np.cross(R, Dp) + np.cross(D, Rp)).sum(axis=0) * w
    return DualVector3(vr, vd)


# ---------------------------------------------------------------------------
# full report

@dataclass(frozen=True)
class DirectorInvariants:
    name: str
    invariants: Optional[DualCurveInvariants]   # None when the image degenerates
    line_pitch: Optional[float]                 # -circuit <dc, x> along the striction


@dataclass(frozen=True)
class InvariantReport:
    surface_pitch: float
    entries: dict[str, DirectorInvariants]
    steiner: DualVector3
    pole: Optional[DualVector3]
    pole_spread: Optional[float]
    area_vector_spherical: np.ndarray
    dual_area_vector: DualVector3
    drall_min: float
    drall_max: float
    developable: bool
    sigma_range: Optional[tuple[float, float]]
    point_striction: bool
    samples: int

    @property
    def q(self) -> DualCurveInvariants:
        return self.entries["q"].invariants


def invariant_report(surface: RuledSurface, samples: int = 256) -> InvariantReport:
    """All integral invariants of a closed surface in one pass."""
    if not surface.closed:
        raise NotClosedError("invariant report requires a closed surface")
    dcurve = surface_to_dual_curve(surface)
    frame = closed_dual_frame(dcurve, samples)
    inv_q = invariants_from_frame(frame)

    def sub_invariants(R, D) -> Optional[DualCurveInvariants]:
        try:
            return invariants_from_frame(_frame_from_samples(frame.ts, frame.period, R, D))
        except (CylindricalError, DegenerateError):
            return None

    inv_h = sub_invariants(frame.h_r, frame.h_d)
    inv_a = sub_invariants(frame.a_r, frame.a_d)

    # pole of the motion: normalized instantaneous screw, sample spread reported
    psi_r = frame.k2[:, None] * frame.q_r + frame.k1[:, None] * frame.a_r
    psi_d = (
        frame.k2_d[:, None] * frame.q_r
        + frame.k2[:, None] * frame.q_d
        + frame.k1_d[:, None] * frame.a_r
        + frame.k1[:, None] * frame.a_d
    )
    pole = pole_spread = None
    norms = np.linalg.norm(psi_r, axis=1)
    if float(np.min(norms)) > _SPEED_TOL:
        p_r = psi_r / norms[:, None]
        p_d = (psi_d - (np.einsum("ij,ij->i", psi_r, psi_d) / norms**2)[:, None] * psi_r) / norms[:, None]
        pole = DualVector3(p_r.mean(axis=0), p_d.mean(axis=0))
        pole_spread = float(
            max(np.max(np.linalg.norm(p_r - p_r.mean(axis=0), axis=1)),
                np.max(np.linalg.norm(p_d - p_d.mean(axis=0), axis=1)))
        )

    stric = striction_curve(surface, samples)
    line_pitches: dict[str, Optional[float]] = {"q": None, "h": None, "a": None}
    w = surface.period / samples
    dc = np.array([np.asarray(differentiate(stric.curve, float(t))) for t in frame.ts])
    for name, vecs in (("q", frame.q_r), ("h", frame.h_r), ("a", frame.a_r)):
        line_pitches[name] = -w * float(np.einsum("ij,ij->i", dc, vecs).sum())

    try:
        drall = drall_samples(surface, samples)
        dmin, dmax = float(drall.min()), float(drall.max())
    except CylindricalError:
        dmin = dmax = 0.0

    sigma_range = None
    mf = moving_frame(surface, samples, strict_orientation=False)
    if mf.sigma is not None:
        finite = mf.sigma[np.isfinite(mf.sigma)]
        if finite.size:
            sigma_range = (float(finite.min()), float(finite.max()))

    director_image = CurveSampler(
        surface.period,
        lambda t: np.asarray(surface.director.evaluate(t), dtype=float),
        surface.director.derivative,
        periodic=True,
    )

    return InvariantReport(
        surface_pitch=pitch(surface, QuadratureSpec(sample_count=samples)),
        entries={
            "q": DirectorInvariants("q", inv_q, line_pitches["q"]),
            "h": DirectorInvariants("h", inv_h, line_pitches["h"]),
            "a": DirectorInvariants("a", inv_a, line_pitches["a"]),
        },
        steiner=inv_q.steiner,
        pole=pole,
        pole_spread=pole_spread,
        area_vector_spherical=area_vector(director_image, samples),
        dual_area_vector=dual_area_vector(dcurve, samples),
        drall_min=dmin,
        drall_max=dmax,
        developable=is_developable(surface, samples=samples),
        sigma_range=sigma_range,
        point_striction=stric.point_degenerate,
        samples=samples,
    )
