"""Oriented lines in normalized Pluecker coordinates and the E. Study map.

A line is (direction, moment) with ||direction|| = 1 and moment = p x direction
for any point p on the line.  Attaching the moment as the dual part of the
direction gives a dual unit vector; that correspondence (the E. Study map)
is a bijection between oriented lines and the dual unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dual
from .dual import DualAngle, DualVector3
from .errors import DegenerateError, NotALineError
from .tol import DEFAULT


@dataclass(frozen=True, eq=False)
class Line:
    """Oriented line: unit direction + moment, re-orthogonalized on construction."""

    direction: np.ndarray
    moment: np.ndarray

    def __post_init__(self):
        d = np.array(self.direction, dtype=float)
        m = np.array(self.moment, dtype=float)
        n = np.linalg.norm(d)
        if n < DEFAULT.division:
            raise DegenerateError("line direction must be nonzero")
        d = d / n
        m = m / n
        # absorb input noise: the moment of a line is perpendicular to it
        m = m - np.dot(d, m) * d
        d.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "moment", m)

    def reversed(self) -> "Line":
        return Line(-self.direction, -self.moment)

    def point_at(self, t: float) -> np.ndarray:
        return foot_point(self) + t * self.direction


def line_from_point_dir(point, direction) -> Line:
    """Line through `point` with direction `direction` (need not be unit)."""
    d = np.asarray(direction, dtype=float)
    n = np.linalg.norm(d)
    if n < DEFAULT.division:
        raise DegenerateError("line direction must be nonzero")
    d = d / n
    return Line(d, np.cross(np.asarray(point, dtype=float), d))


def line_to_dual(line: Line) -> DualVector3:
    """direction + eps*moment: a dual unit vector."""
    return DualVector3(line.direction, line.moment)


def dual_to_line(v: DualVector3, tol: float = DEFAULT.geometric) -> Line:
    """Inverse Study map; rejects dual vectors that are not unit lines."""
    n = np.linalg.norm(v.real)
    if abs(n - 1.0) > tol:
        raise NotALineError(f"real part norm {n!r} != 1; not a line")
    if abs(np.dot(v.real, v.dual)) > tol:
        raise NotALineError("direction and moment are not perpendicular; not a line")
    return Line(v.real, v.dual)


def foot_point(line: Line) -> np.ndarray:
    """Point of the line closest to the origin: direction x moment."""
    return np.cross(line.direction, line.moment)


def dual_angle_between_lines(
    l1: Line, l2: Line, parallel_tol: float = 1e-8
) -> DualAngle:
    """Dual angle theta + eps*theta_star between two oriented lines.

    theta in [0, pi] is the angle between the directions; theta_star is the
    shortest distance, signed by the screw sense <d1 x d2, p2 - p1>.  Both
    parts are extracted from the cosine (dual dot) and the sine (dual norm
    of the cross product) together, so perpendicular and near-parallel
    configurations are equally well conditioned.  For (anti)parallel lines
    theta_star is the unsigned distance between them.
    """
    a = line_to_dual(l1)
    b = line_to_dual(l2)
    c = dual.dot(a, b)                       # cos(theta_bar)
    cr = dual.cross(a, b)
    sin_real = float(np.linalg.norm(cr.real))
    theta = math.atan2(sin_real, c.real)

    if sin_real < parallel_tol:
        # cosine route is singular; the cross product's dual part carries the
        # offset between the parallel lines: ||d x (m2 -+ m1)|| = distance
        dist = float(np.linalg.norm(cr.dual))
        return DualAngle(theta, dist)

    s = dual.norm(cr)                        # sin(theta_bar), real part >= 0
    # c = cos t - eps t* sin t, s = sin t + eps t* cos t
    # => t* = s.dual*cos t - c.dual*sin t  (exact, no division)
    theta_star = s.dual * math.cos(theta) - c.dual * math.sin(theta)
    return DualAngle(theta, theta_star)
