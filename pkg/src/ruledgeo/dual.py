"""Dual numbers, dual 3-vectors and dual angles.

A dual number is a + eps*b with eps^2 = 0.  Dual 3-vectors are pairs of
real 3-vectors (real part, dual part); under the E. Study map the dual
unit vectors are exactly the oriented lines of Euclidean 3-space, so this
algebra is the substrate for everything else in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DegenerateError
from .tol import DEFAULT

Scalar = Union[int, float]


@dataclass(frozen=True)
class DualNumber:
    """a + eps*b with eps^2 = 0."""

    real: float
    dual: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "real", float(self.real))
        object.__setattr__(self, "dual", float(self.dual))

    def __add__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return DualNumber(self.real + other.real, self.dual + other.dual)

    __radd__ = __add__

    def __sub__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return DualNumber(self.real - other.real, self.dual - other.dual)

    def __rsub__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, DualVector3):
            return other * self
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        # (a + eps a*)(b + eps b*) = ab + eps(ab* + a*b); eps^2 term dropped exactly
        return DualNumber(
            self.real * other.real,
            self.real * other.dual + self.dual * other.real,
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        if abs(other.real) < DEFAULT.division:
            raise ZeroDivisionError(
                "dual division undefined: divisor real part is (near) zero"
            )
        real = self.real / other.real
        dual = (self.dual * other.real - self.real * other.dual) / other.real**2
        return DualNumber(real, dual)

    def __rtruediv__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self) -> "DualNumber":
        return DualNumber(-self.real, -self.dual)

    def __abs__(self) -> float:
        return abs(self.real)

    def __repr__(self) -> str:
        sign = "+" if self.dual >= 0 else "-"
        return f"{self.real:g} {sign} {abs(self.dual):g}eps"


def _as_dual(x):
    if isinstance(x, DualNumber):
        return x
    if isinstance(x, (int, float)):
        return DualNumber(float(x), 0.0)
    return NotImplemented


# Analytic functions lift to dual arguments through f(a + eps b) = f(a) + eps b f'(a).

_ANALYTIC: dict[str, tuple[Callable[[float], float], Callable[[float], float]]] = {
    "sin": (math.sin, math.cos),
    "cos": (math.cos, lambda x: -math.sin(x)),
    "tan": (math.tan, lambda x: 1.0 / math.cos(x) ** 2),
    "sqrt": (math.sqrt, lambda x: 0.5 / math.sqrt(x)),
    "exp": (math.exp, math.exp),
    "log": (math.log, lambda x: 1.0 / x),
    "asin": (math.asin, lambda x: 1.0 / math.sqrt(1.0 - x * x)),
    "acos": (math.acos, lambda x: -1.0 / math.sqrt(1.0 - x * x)),
    "atan": (math.atan, lambda x: 1.0 / (1.0 + x * x)),
    "sinh": (math.sinh, math.cosh),
    "cosh": (math.cosh, math.sinh),
    "abs": (abs, lambda x: math.copysign(1.0, x)),
}


def apply_analytic(name: str, x: DualNumber) -> DualNumber:
    """f(a + eps b) = f(a) + eps b f'(a) for a named analytic function."""
    try:
        f, fprime = _ANALYTIC[name]
    except KeyError:
        raise KeyError(f"unknown analytic function {name!r}") from None
    try:
        value = f(x.real)
        slope = fprime(x.real)
    except ValueError as exc:
        raise ValueError(f"{name} undefined at real part {x.real!r}: {exc}") from None
    return DualNumber(value, x.dual * slope)


def sin(x: DualNumber) -> DualNumber:
    return apply_analytic("sin", x)


def cos(x: DualNumber) -> DualNumber:
    return apply_analytic("cos", x)


def sqrt(x: DualNumber) -> DualNumber:
    return apply_analytic("sqrt", x)


@dataclass(frozen=True, eq=False)
class DualVector3:
    """Pair of real 3-vectors: real + eps*dual, componentwise three DualNumbers."""

    real: np.ndarray
    dual: np.ndarray

    def __post_init__(self):
        r = np.array(self.real, dtype=float)
        d = np.array(self.dual, dtype=float)
        if r.shape != (3,) or d.shape != (3,):
            raise ValueError("DualVector3 parts must be 3-vectors")
        r.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "real", r)
        object.__setattr__(self, "dual", d)

    @staticmethod
    def from_real(v) -> "DualVector3":
        return DualVector3(v, np.zeros(3))

    def component(self, i: int) -> DualNumber:
        return DualNumber(self.real[i], self.dual[i])

    def __add__(self, other: "DualVector3") -> "DualVector3":
        return DualVector3(self.real + other.real, self.dual + other.dual)

    def __sub__(self, other: "DualVector3") -> "DualVector3":
        return DualVector3(self.real - other.real, self.dual - other.dual)

    def __neg__(self) -> "DualVector3":
        return DualVector3(-self.real, -self.dual)

    def __mul__(self, s) -> "DualVector3":
        if isinstance(s, DualNumber):
            return DualVector3(
                s.real * self.real,
                s.real * self.dual + s.dual * self.real,
            )
        return DualVector3(self.real * float(s), self.dual * float(s))

    __rmul__ = __mul__

    def __truediv__(self, s) -> "DualVector3":
        if isinstance(s, DualNumber):
            if abs(s.real) < DEFAULT.division:
                raise ZeroDivisionError("dual vector division by (near-)pure-dual scalar")
            inv = DualNumber(1.0 / s.real, -s.dual / s.real**2)
            return self * inv
        return DualVector3(self.real / float(s), self.dual / float(s))

    def __repr__(self) -> str:
        return f"DualVector3({np.array2string(self.real)}, {np.array2string(self.dual)})"


def dot(a: DualVector3, b: DualVector3) -> DualNumber:
    """<a,b> + eps(<a,b*> + <a*,b>)."""
    return DualNumber(
        float(np.dot(a.real, b.real)),
        float(np.dot(a.real, b.dual) + np.dot(a.dual, b.real)),
    )


def cross(a: DualVector3, b: DualVector3) -> DualVector3:
    """a x b + eps(a x b* + a* x b)."""
    return DualVector3(
        np.cross(a.real, b.real),
        np.cross(a.real, b.dual) + np.cross(a.dual, b.real),
    )


def norm(a: DualVector3) -> DualNumber:
    """||a|| + eps <a, a*>/||a||.

    Undefined for pure-dual vectors: the real norm sits in the denominator.
    """
    n = float(np.linalg.norm(a.real))
    if n < DEFAULT.division:
        raise DegenerateError("norm undefined for a (near-)pure-dual vector")
    return DualNumber(n, float(np.dot(a.real, a.dual)) / n)


def normalize(a: DualVector3) -> DualVector3:
    """a / ||a||; the result is a dual unit vector."""
    return a / norm(a)


def is_unit(a: DualVector3, tol: float = DEFAULT.geometric) -> bool:
    d = dot(a, a)
    return abs(d.real - 1.0) <= tol and abs(d.dual) <= tol


@dataclass(frozen=True)
class DualAngle:
    """theta + eps*theta_star: angle between two lines plus their distance."""

    theta: float
    theta_star: float = 0.0

    def as_dual(self) -> DualNumber:
        return DualNumber(self.theta, self.theta_star)

    def cos(self) -> DualNumber:
        # cos(theta + eps t*) = cos(theta) - eps t* sin(theta)
        return apply_analytic("cos", self.as_dual())

    def sin(self) -> DualNumber:
        # sin(theta + eps t*) = sin(theta) + eps t* cos(theta)
        return apply_analytic("sin", self.as_dual())


def dual_acos(c: DualNumber, tol: float = DEFAULT.geometric) -> DualAngle:
    """Invert cos(theta_bar) = c.

    Fails when sin(theta) ~ 0 (parallel lines): the distance cannot be
    recovered from the cosine alone; use the two-argument extraction in
    the line-geometry module instead.
    """
    if abs(c.real) > 1.0 + tol:
        raise ValueError(f"dual_acos real part {c.real!r} outside [-1, 1]")
    creal = min(1.0, max(-1.0, c.real))
    theta = math.acos(creal)
    s = math.sin(theta)
    if s < tol:
        raise DegenerateError(
            "dual_acos is singular for (anti)parallel directions (sin(theta) ~ 0)"
        )
    return DualAngle(theta, -c.dual / s)
