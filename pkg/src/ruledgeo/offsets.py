"""Mannheim offsets of ruled surfaces.

An offset is built by rotating the director inside the {q~, h~} plane of
the dual frame by a dual angle theta + eps*theta_star; the offset shares
its central normal with the source's central tangent exactly when the
dual angle solves d(theta_bar) = -k1_bar ds.  This module constructs the
offsets, integrates that equation, and verifies every characterization
(dual pitch relation, developability, Mannheim partner striction lines,
projected-area relations) numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import dual
from .curves import CurveSampler, cumulative_integral, differentiate
from .dual import DualAngle, DualNumber, DualVector3
from .errors import DegenerateError, NotClosedError
from .surfaces import (
    DualCurveInvariants,
    RuledSurface,
    Striction,
    closed_dual_frame,
    distribution_parameter,
    dual_curve_invariants,
    dual_curve_to_surface,
    dual_frame_at,
    invariants_from_frame,
    is_developable,
    pitch,
    striction_curve,
    surface_to_dual_curve,
    _frame_from_samples,
)
from .tol import DEFAULT


# ---------------------------------------------------------------------------
# offset angle

@dataclass(frozen=True)
class OffsetAngle:
    """Offset angle theta(t) and offset distance theta_star(t).

    `theta_prime`/`theta_star_prime` carry analytic t-derivatives when the
    angle came from integrating the dual curvature form.
    """

    theta: Callable[[float], float]
    theta_star: Callable[[float], float]
    theta_prime: Optional[Callable[[float], float]] = None
    theta_star_prime: Optional[Callable[[float], float]] = None
    constant: bool = False

    @staticmethod
    def const(theta: float, theta_star: float) -> "OffsetAngle":
        return OffsetAngle(
            theta=lambda t, v=float(theta): v,
            theta_star=lambda t, v=float(theta_star): v,
            theta_prime=lambda t: 0.0,
            theta_star_prime=lambda t: 0.0,
            constant=True,
        )

    def at(self, t: float) -> DualAngle:
        return DualAngle(self.theta(t), self.theta_star(t))

    def constant_value(self, period: float, tol: float = 1e-9) -> DualAngle:
        """The single dual angle, verifying constancy on a coarse grid."""
        a0 = self.at(0.0)
        if not self.constant:
            for t in np.linspace(0.0, period, 33):
                a = self.at(float(t))
                if abs(a.theta - a0.theta) > tol or abs(a.theta_star - a0.theta_star) > tol:
                    raise ValueError("offset angle is not constant over the period")
        return a0


def mannheim_angle(
    surface: RuledSurface, theta0: DualAngle, n: int = 1025
) -> OffsetAngle:
    """Integrate d(theta_bar)/dt = -k1_bar(t): the Mannheim offset angle.

    theta(t) = theta0 - int_0^t k1, theta_star(t) = theta0* - int_0^t k1*;
    the integrand is the dual curvature density of the surface's dual
    curve with respect to the surface parameter.
    """
    dcurve = surface_to_dual_curve(surface)

    def k1_at(t: float) -> DualNumber:
        return dual.norm(differentiate(dcurve, t))

    F_real = cumulative_integral(lambda t: k1_at(t).real, surface.period, n)
    F_dual = cumulative_integral(lambda t: k1_at(t).dual, surface.period, n)
    return OffsetAngle(
        theta=lambda t: theta0.theta - F_real(t),
        theta_star=lambda t: theta0.theta_star - F_dual(t),
        theta_prime=lambda t: -k1_at(t).real,
        theta_star_prime=lambda t: -k1_at(t).dual,
        constant=False,
    )


# ---------------------------------------------------------------------------
# offset construction

@dataclass(frozen=True)
class OffsetResult:
    """An offset surface with its frame and provenance."""

    source: RuledSurface
    angle: OffsetAngle
    dual_curve: CurveSampler
    surface: RuledSurface

    def source_frame_at(self, t: float):
        from .surfaces import dual_frame_at as _dfa

        return _dfa(surface_to_dual_curve(self.source), t)

    def frame_at(self, t: float) -> tuple[DualVector3, DualVector3, DualVector3]:
        """Offset trihedron rows (q1~, h1~, a1~); h1~ is the source a~."""
        fp = self.source_frame_at(t)
        th = self.angle.at(t)
        c, s = th.cos(), th.sin()
        q1 = fp.q * c + fp.h * s
        a1 = fp.q * s - fp.h * c
        return q1, fp.a, a1


def rotate_offset(surface: RuledSurface, angle: OffsetAngle) -> OffsetResult:
    """q1~ = cos(theta_bar) q~ + sin(theta_bar) h~, reconstructed as a surface."""
    dcurve = surface_to_dual_curve(surface)

    def evaluate(t: float) -> DualVector3:
        fp = dual_frame_at(dcurve, t)
        th = angle.at(t)
        return fp.q * th.cos() + fp.h * th.sin()

    q1_curve = CurveSampler(
        surface.period, evaluate, None, periodic=_closes(evaluate, surface.period)
    )
    offset_surface = dual_curve_to_surface(q1_curve)
    return OffsetResult(
        surface, angle, surface_to_dual_curve(offset_surface), offset_surface
    )


def _closes(evaluate, period: float, tol: float = DEFAULT.geometric) -> bool:
    gap = evaluate(0.0) - evaluate(period)
    return (
        float(np.linalg.norm(gap.real)) <= tol
        and float(np.linalg.norm(gap.dual)) <= tol
    )


# ---------------------------------------------------------------------------
# Mannheim characterization: tangent alignment (the offset-angle equation)

@dataclass(frozen=True)
class TangentAlignment:
    """Sine of the deviation between the offset tangent dq1~ and the source a~.

    Samples where the offset dual curve is (nearly) stationary are skipped:
    there sin(theta_bar) ~ 0, the curve has a cusp and no tangent direction.
    The deviation is orientation-blind (a cross product), matching the
    parallelism statement of the offset-angle theorem.  The ODE residual
    differences the actual angle callables, so an integrated angle is
    tested against the dual curvature it was built from.
    """

    max_sine_real: float
    max_sine_dual: float
    max_ode_residual_real: float
    max_ode_residual_dual: float
    skipped_cusps: int

    @property
    def max_sine(self) -> float:
        return max(self.max_sine_real, self.max_sine_dual)


def tangent_alignment(
    result: OffsetResult, samples: int = 128, cusp_fraction: float = 3e-3
) -> TangentAlignment:
    """How parallel dq1~ is to a~: zero exactly for Mannheim offsets."""
    dcurve = surface_to_dual_curve(result.source)
    ts = np.linspace(0.0, result.source.period, samples, endpoint=False)
    tangents = [differentiate(result.dual_curve, float(t)) for t in ts]
    scale = max(float(np.linalg.norm(u.real)) for u in tangents)
    floor = cusp_fraction * scale
    sr = sd = orr = ord_ = 0.0
    skipped = 0
    fd_step = 1e-4 * result.source.period
    ang = result.angle
    for t, u in zip(ts, tangents):
        t = float(t)
        k1 = dual.norm(differentiate(dcurve, t))
        tp = (ang.theta(t + fd_step) - ang.theta(t - fd_step)) / (2 * fd_step)
        tsp = (ang.theta_star(t + fd_step) - ang.theta_star(t - fd_step)) / (2 * fd_step)
        orr = max(orr, abs(tp + k1.real))
        ord_ = max(ord_, abs(tsp + k1.dual))
        if float(np.linalg.norm(u.real)) < floor:
            skipped += 1
            continue
        uhat = u / dual.norm(u)
        a = dual_frame_at(dcurve, t).a
        c = dual.cross(uhat, a)
        sr = max(sr, float(np.linalg.norm(c.real)))
        sd = max(sd, float(np.linalg.norm(c.dual)))
    return TangentAlignment(sr, sd, orr, ord_, skipped)


# ---------------------------------------------------------------------------
# Mannheim pair test: a~(s) = h1~(s1)

@dataclass(frozen=True)
class MannheimPairResult:
    is_pair: bool
    max_deviation_real: float
    max_deviation_dual: float
    shared_parameter: bool
    skipped_cusps: int = 0


def _nearest_ruling_params(s1: RuledSurface, s2_duals, n_grid: int = 1024):
    """For each ruling of s2, the s1 parameter whose ruling is closest."""
    grid = np.linspace(0.0, s1.period, n_grid, endpoint=False)
    d1 = surface_to_dual_curve(s1)
    R1 = np.empty((n_grid, 3))
    D1 = np.empty((n_grid, 3))
    for i, t in enumerate(grid):
        v = d1.evaluate(float(t))
        R1[i], D1[i] = v.real, v.dual
    out = []
    for v in s2_duals:
        cos_t = np.clip(R1 @ v.real, -1.0, 1.0)
        theta = np.arccos(cos_t)
        sin_t = np.sqrt(np.clip(1.0 - cos_t**2, 1e-18, None))
        tstar = -(R1 @ v.dual + D1 @ v.real) / sin_t
        score = theta**2 + tstar**2
        out.append(float(grid[int(np.argmin(score))]))
    return out


def is_mannheim_pair(
    s1: RuledSurface,
    s2: RuledSurface,
    tol: float = DEFAULT.relation,
    samples: int = 128,
    shared_parameter: Optional[bool] = None,
) -> MannheimPairResult:
    """Check a~ (of s1) = h1~ (of s2) across corresponding rulings.

    Correspondence is by shared parameter when both surfaces live on the
    same interval (construction provenance); otherwise each s2 ruling is
    matched to the closest s1 ruling, a heuristic.
    """
    if shared_parameter is None:
        shared_parameter = abs(s1.period - s2.period) < 1e-12
    d1 = surface_to_dual_curve(s1)
    d2 = surface_to_dual_curve(s2)
    ts2 = np.linspace(0.0, s2.period, samples, endpoint=False)
    if shared_parameter:
        ts1 = ts2
    else:
        ts1 = _nearest_ruling_params(s1, [d2.evaluate(float(t)) for t in ts2])
    tangents = [differentiate(d2, float(t)) for t in ts2]
    scale = max(float(np.linalg.norm(u.real)) for u in tangents)
    floor = 3e-3 * scale
    dev_r = dev_d = 0.0
    skipped = 0
    for t1, t2, u in zip(ts1, ts2, tangents):
        if float(np.linalg.norm(u.real)) < floor:
            skipped += 1  # cusp of the s2 dual curve: h1~ undefined there
            continue
        a = dual_frame_at(d1, float(t1)).a
        h1 = u / dual.norm(u)
        dev_r = max(dev_r, float(np.linalg.norm(a.real - h1.real)))
        dev_d = max(dev_d, float(np.linalg.norm(a.dual - h1.dual)))
    return MannheimPairResult(
        max(dev_r, dev_d) < tol, dev_r, dev_d, shared_parameter, skipped
    )


# ---------------------------------------------------------------------------
# dual angle-of-pitch relation (constant offset angle)

@dataclass(frozen=True)
class DualPitchRelation:
    """Both sides of the offset pitch-angle rotation identity.

    All pitches here are the dual parts of the respective dual angles of
    pitch (lambda_bar = lambda - eps*ell); the raw translation pitch of
    the base curve is reported separately as `pitch_line_integral_*`.
    """

    theta: DualAngle
    lam_q: DualNumber
    lam_h: DualNumber
    lam_q1: DualNumber
    rhs: DualNumber
    residual_real: float
    residual_dual: float
    pitch_line_integral_source: float
    pitch_line_integral_offset: float

    @property
    def residual(self) -> float:
        return max(self.residual_real, self.residual_dual)


def source_frame_invariants(surface: RuledSurface, samples: int = 256):
    """Invariants of the q-, h- and a-director curves of one closed surface."""
    frame = closed_dual_frame(surface_to_dual_curve(surface), samples)
    inv_q = invariants_from_frame(frame)
    inv_h = _maybe_invariants(frame, frame.h_r, frame.h_d)
    inv_a = _maybe_invariants(frame, frame.a_r, frame.a_d)
    return frame, inv_q, inv_h, inv_a


def _maybe_invariants(frame, R, D) -> Optional[DualCurveInvariants]:
    # h- or a-director images can be stationary (straight/torsion-free cases)
    from .errors import GeometryError

    try:
        return invariants_from_frame(_frame_from_samples(frame.ts, frame.period, R, D))
    except GeometryError:
        return None


def dual_pitch_relation(
    surface: RuledSurface, result: OffsetResult, samples: int = 256
) -> DualPitchRelation:
    """lambda_bar_q1 vs lambda_bar_q cos(theta_bar) + lambda_bar_h sin(theta_bar)."""
    if not (surface.closed and result.surface.closed):
        raise NotClosedError("the dual pitch relation needs closed surfaces")
    th = result.angle.constant_value(surface.period)
    _, inv_q, inv_h, _ = source_frame_invariants(surface, samples)
    if inv_h is None:
        raise DegenerateError("central normal surface degenerates; relation undefined")
    inv_q1 = dual_curve_invariants(result.dual_curve, samples)
    rhs = inv_q.lambda_bar * th.cos() + inv_h.lambda_bar * th.sin()
    lhs = inv_q1.lambda_bar
    return DualPitchRelation(
        theta=th,
        lam_q=inv_q.lambda_bar,
        lam_h=inv_h.lambda_bar,
        lam_q1=lhs,
        rhs=rhs,
        residual_real=abs(lhs.real - rhs.real),
        residual_dual=abs(lhs.dual - rhs.dual),
        pitch_line_integral_source=pitch(surface),
        pitch_line_integral_offset=pitch(result.surface),
    )


# ---------------------------------------------------------------------------
# Frenet data of striction lines

@dataclass(frozen=True)
class FrenetPoint:
    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray
    curvature: float
    torsion: float


def frenet_at(curve: CurveSampler, t: float) -> FrenetPoint:
    """Frenet frame by derivatives up to third order (any parametrization)."""
    c1 = np.asarray(differentiate(curve, t, 1), dtype=float)
    c2 = np.asarray(differentiate(curve, t, 2), dtype=float)
    c3 = np.asarray(differentiate(curve, t, 3), dtype=float)
    speed = float(np.linalg.norm(c1))
    if speed < 1e-9:
        raise DegenerateError("curve not regular; Frenet frame undefined")
    cr = np.cross(c1, c2)
    area = float(np.linalg.norm(cr))
    if area < 1e-12:
        raise DegenerateError("curvature vanishes; Frenet frame undefined")
    tangent = c1 / speed
    binormal = cr / area
    normal = np.cross(binormal, tangent)
    kappa = area / speed**3
    tau = float(np.dot(cr, c3)) / area**2
    return FrenetPoint(tangent, normal, binormal, kappa, tau)


# ---------------------------------------------------------------------------
# developability of offsets

@dataclass(frozen=True)
class DevelopabilityReport:
    """Offset developability: the angle/torsion balance vs the direct drall.

    residual(t) = sin(theta) + theta_star * tau_alpha * cos(theta) must
    vanish for the offset to be developable; `drall_formula` is that
    residual over tau*sin(theta) and `drall_direct` is the distribution
    parameter measured on the constructed offset surface.
    """

    ts: np.ndarray
    theta: np.ndarray
    theta_star: np.ndarray
    torsion: np.ndarray
    curvature: np.ndarray
    residual: np.ndarray
    drall_formula: np.ndarray
    drall_direct: np.ndarray
    singular_rotation: bool  # |sin theta| ~ 0 branch: offset coincides with source

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual)))

    @property
    def max_drall_direct(self) -> float:
        return float(np.max(np.abs(self.drall_direct)))


def developability_condition(
    surface: RuledSurface,
    angle: OffsetAngle,
    samples: int = 128,
    interior_margin: float = 0.02,
) -> DevelopabilityReport:
    """Evaluate the developable-offset condition along a developable source.

    The source must be developable with a regular striction line (a
    point-striction cone has no torsion to speak of).  Samples stay away
    from the parameter ends by `interior_margin` (as a fraction of the
    period) so third derivatives remain accurate on open surfaces.
    """
    if not is_developable(surface, samples=samples):
        raise ValueError("source surface is not developable")
    stric = striction_curve(surface, samples)
    if stric.point_degenerate:
        raise DegenerateError(
            "striction degenerates to a point; the torsion condition is inapplicable"
        )
    result = rotate_offset(surface, angle)
    lo = interior_margin * surface.period
    hi = surface.period * (1.0 - interior_margin)
    if surface.closed:
        lo, hi = 0.0, surface.period * (1.0 - 1.0 / samples)
    ts = np.linspace(lo, hi, samples)
    theta = np.array([angle.theta(float(t)) for t in ts])
    theta_star = np.array([angle.theta_star(float(t)) for t in ts])
    fr = [frenet_at(stric.curve, float(t)) for t in ts]
    tau = np.array([f.torsion for f in fr])
    kappa = np.array([f.curvature for f in fr])
    residual = np.sin(theta) + theta_star * tau * np.cos(theta)
    denom = tau * np.sin(theta)
    singular = bool(np.any(np.abs(np.sin(theta)) < 1e-12))
    with np.errstate(divide="ignore", invalid="ignore"):
        formula = np.where(np.abs(denom) > 1e-12, residual / denom, np.nan)
    direct = np.array([distribution_parameter(result.surface, float(t)) for t in ts])
    return DevelopabilityReport(
        ts, theta, theta_star, tau, kappa, residual, formula, direct, singular
    )


@dataclass(frozen=True)
class PartnerCurveResult:
    """Mannheim partner test for two striction lines.

    max_angle_sine is the largest sine of the angle between the binormal
    of the source striction and the principal normal of the offset
    striction across corresponding parameters.
    """

    is_partner: bool
    max_angle_sine: float


def offset_striction_curve(result: OffsetResult, samples: int = 128) -> CurveSampler:
    """Striction line of an offset: source striction + theta_star * a.

    Exactly evaluable (no stacked differencing), and identical to the
    striction computed on the reconstructed offset surface whenever the
    offset is developable or satisfies the Mannheim angle equation.
    """
    alpha = striction_curve(result.source, samples)
    dcurve = surface_to_dual_curve(result.source)
    angle = result.angle

    def evaluate(t: float) -> np.ndarray:
        a = dual_frame_at(dcurve, t).a
        return np.asarray(alpha.curve.evaluate(t)) + angle.theta_star(t) * a.real

    return CurveSampler(result.source.period, evaluate, None, result.surface.closed)


def mannheim_partner_check(
    surface: RuledSurface,
    result: OffsetResult,
    samples: int = 64,
    tol: float = DEFAULT.relation,
    interior_margin: float = 0.05,
) -> PartnerCurveResult:
    """Binormal of the source striction vs principal normal of the offset's.

    Both surfaces must be developable with regular striction lines; the
    offset striction is taken as source striction + theta_star * a.
    """
    for s, label in ((surface, "source"), (result.surface, "offset")):
        if not is_developable(s, samples=samples):
            raise ValueError(f"{label} surface is not developable")
    alpha = striction_curve(surface, samples)
    if alpha.point_degenerate:
        raise DegenerateError("point-degenerate striction; partner test undefined")
    beta = offset_striction_curve(result, samples)
    lo = interior_margin * surface.period
    hi = surface.period * (1.0 - interior_margin)
    if surface.closed:
        lo, hi = 0.0, surface.period * (1.0 - 1.0 / samples)
    worst = 0.0
    for t in np.linspace(lo, hi, samples):
        fa = frenet_at(alpha.curve, float(t))
        fb = frenet_at(beta, float(t))
        worst = max(worst, float(np.linalg.norm(np.cross(fa.binormal, fb.normal))))
    return PartnerCurveResult(worst < tol, worst)


@dataclass(frozen=True)
class DevelopablePitchRoutes:
    """Pitch of a developable source's offset, three ways.

    route_tangent integrates <d(beta), q1> directly (= cos(theta) -
    theta_star tau sin(theta) against striction arclength); route_printed
    uses cos(theta) in the second term instead (a published variant kept
    for comparison); pitch_direct evaluates the base-curve line integral
    on the constructed offset surface.
    """

    route_tangent: float
    route_printed: float
    pitch_direct: Optional[float]


def developable_offset_pitch(
    surface: RuledSurface, angle: OffsetAngle, samples: int = 512
) -> DevelopablePitchRoutes:
    if not surface.closed:
        raise NotClosedError("offset pitch routes need a closed source")
    if not is_developable(surface, samples=min(samples, 256)):
        raise ValueError("source surface is not developable")
    stric = striction_curve(surface, samples=min(samples, 256))
    if stric.point_degenerate:
        raise DegenerateError("point-degenerate striction; torsion undefined")
    ts = np.linspace(0.0, surface.period, samples, endpoint=False)
    w = surface.period / samples
    ra = rb = 0.0
    for t in ts:
        t = float(t)
        th = angle.theta(t)
        ts_ = angle.theta_star(t)
        f = frenet_at(stric.curve, t)
        ds = float(np.linalg.norm(np.asarray(differentiate(stric.curve, t))))
        ra += (math.cos(th) - ts_ * f.torsion * math.sin(th)) * ds
        rb += (math.cos(th) - ts_ * f.torsion * math.cos(th)) * ds
    direct = None
    res = rotate_offset(surface, angle)
    if res.surface.closed:
        direct = pitch(res.surface)
    return DevelopablePitchRoutes(-w * ra, -w * rb, direct)


# ---------------------------------------------------------------------------
# projected areas of spherical images

@dataclass(frozen=True)
class ProjectedAreaRelations:
    """Projections of the offset's dual area vector onto the source frame.

    Each `proj_*` is the mean over samples of <w~_q1, x~> with
    w~_q1 = d~ + lambda_bar_q1 q1~; `spread_*` is the max deviation from
    that mean (zero when the Steiner contraction is parameter-free).
    """

    theta: DualAngle
    lam_q: DualNumber
    lam_h: DualNumber
    lam_a: Optional[DualNumber]
    lam_q1: DualNumber
    proj_q: DualNumber
    proj_h: DualNumber
    proj_a: DualNumber
    spread_q: float
    spread_h: float
    spread_a: float
    rhs_q: DualNumber
    rhs_h: DualNumber

    def residual_q(self) -> DualNumber:
        return self.proj_q - self.rhs_q

    def residual_h(self) -> DualNumber:
        return self.proj_h - self.rhs_h

    def residual_a_first(self) -> Optional[DualNumber]:
        if self.lam_a is None:
            return None
        return self.proj_a + self.lam_a


def projected_area_relations(
    surface: RuledSurface, result: OffsetResult, samples: int = 256
) -> ProjectedAreaRelations:
    if not (surface.closed and result.surface.closed):
        raise NotClosedError("projected-area relations need closed surfaces")
    th = result.angle.constant_value(surface.period)
    frame, inv_q, inv_h, inv_a = source_frame_invariants(surface, samples)
    if inv_h is None:
        raise DegenerateError("central normal surface degenerates")
    inv_q1 = dual_curve_invariants(result.dual_curve, samples)
    d = inv_q.steiner
    lam1 = inv_q1.lambda_bar

    dq1 = surface_to_dual_curve(result.surface)
    n = samples
    w_r = np.empty((n, 3))
    w_d = np.empty((n, 3))
    for i, t in enumerate(frame.ts):
        q1 = dq1.evaluate(float(t))
        wq1 = DualVector3(d.real, d.dual) + q1 * lam1
        w_r[i], w_d[i] = wq1.real, wq1.dual

    def contraction(R, D) -> tuple[DualNumber, float]:
        re = np.einsum("ij,ij->i", w_r, R)
        du = np.einsum("ij,ij->i", w_r, D) + np.einsum("ij,ij->i", w_d, R)
        mean = DualNumber(float(re.mean()), float(du.mean()))
        spread = max(
            float(np.max(np.abs(re - mean.real))), float(np.max(np.abs(du - mean.dual)))
        )
        return mean, spread

    proj_q, spread_q = contraction(frame.q_r, frame.q_d)
    proj_h, spread_h = contraction(frame.h_r, frame.h_d)
    proj_a, spread_a = contraction(frame.a_r, frame.a_d)

    return ProjectedAreaRelations(
        theta=th,
        lam_q=inv_q.lambda_bar,
        lam_h=inv_h.lambda_bar,
        lam_a=None if inv_a is None else inv_a.lambda_bar,
        lam_q1=lam1,
        proj_q=proj_q,
        proj_h=proj_h,
        proj_a=proj_a,
        spread_q=spread_q,
        spread_h=spread_h,
        spread_a=spread_a,
        rhs_q=-inv_q.lambda_bar + lam1 * th.cos(),
        rhs_h=-inv_h.lambda_bar + lam1 * th.sin(),
    )
