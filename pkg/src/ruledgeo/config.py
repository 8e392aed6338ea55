"""Surface configuration documents.

A config is a line-oriented text document, `key = value` per line with
`#` comments.  Exactly one of three surface sources:

    surface = catalog
    name = paper-cone
    param.phi = pi/3            # catalog parameters, constant expressions

    surface = expression
    base = (cos(t), sin(t), 0)
    director = (-sin(t), cos(t), 0)
    period = 2*pi
    closed = auto               # auto | true | false

    surface = tabulated
    period = 6.283185307179586
    periodic = true
    base_samples = [[x, y, z], ...]          # JSON, uniform in t
    director_samples = [[x, y, z], ...]

Angles are radians; offset distances in model length units.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import catalog as _catalog
from .curves import CurveSampler, interpolate_periodic
from .errors import ParseError
from .exprdsl import Expression, parse_expression, parse_vector
from .surfaces import RuledSurface, ruled_surface


@dataclass(frozen=True)
class SurfaceConfig:
    kind: str  # catalog | expression | tabulated
    name: Optional[str] = None
    params: dict = field(default_factory=dict)
    base: Optional[tuple[Expression, Expression, Expression]] = None
    director: Optional[tuple[Expression, Expression, Expression]] = None
    period: Optional[float] = None
    closed: Optional[bool] = None  # None = auto-detect
    base_samples: Optional[np.ndarray] = None
    director_samples: Optional[np.ndarray] = None
    periodic: bool = True

    def build(self) -> RuledSurface:
        if self.kind == "catalog":
            return _catalog.build(self.name, **self.params)
        if self.kind == "expression":
            return ruled_surface(
                _expr_sampler(self.base, self.period),
                _expr_sampler(self.director, self.period),
                closed=self.closed,
            )
        base = _tabulated_sampler(self.base_samples, self.period, self.periodic)
        director = _tabulated_sampler(self.director_samples, self.period, self.periodic)
        return ruled_surface(base, director, closed=self.closed)

    def to_text(self) -> str:
        lines = [f"surface = {self.kind}"]
        if self.kind == "catalog":
            lines.append(f"name = {self.name}")
            for key, value in sorted(self.params.items()):
                lines.append(f"param.{key} = {value!r}")
        elif self.kind == "expression":
            lines.append(f"base = ({self.base[0].source}, {self.base[1].source}, {self.base[2].source})")
            lines.append(
                f"director = ({self.director[0].source}, {self.director[1].source}, {self.director[2].source})"
            )
            lines.append(f"period = {self.period!r}")
            lines.append(
                "closed = auto" if self.closed is None else f"closed = {str(self.closed).lower()}"
            )
        else:
            lines.append(f"period = {self.period!r}")
            lines.append(f"periodic = {str(self.periodic).lower()}")
            lines.append(f"base_samples = {json.dumps(self.base_samples.tolist())}")
            lines.append(f"director_samples = {json.dumps(self.director_samples.tolist())}")
        return "\n".join(lines) + "\n"


def _expr_sampler(exprs, period: float) -> CurveSampler:
    ex, ey, ez = exprs

    def evaluate(t: float) -> np.ndarray:
        return np.array([ex(t), ey(t), ez(t)])

    def derivative(t: float) -> np.ndarray:
        return np.array([ex.derivative(t), ey.derivative(t), ez.derivative(t)])

    return CurveSampler(period, evaluate, derivative)


def _tabulated_sampler(samples: np.ndarray, period: float, periodic: bool) -> CurveSampler:
    if periodic:
        return interpolate_periodic(samples, period)
    from scipy.interpolate import CubicSpline

    ts = np.linspace(0.0, period, len(samples))
    spline = CubicSpline(ts, samples)
    dspline = spline.derivative()
    return CurveSampler(
        period,
        lambda t: np.asarray(spline(t), dtype=float),
        lambda t: np.asarray(dspline(t), dtype=float),
        periodic=False,
    )


def constant_of(expr_text: str, line: int = 1) -> float:
    """Evaluate a constant expression (no t) to a float."""
    expr = parse_expression(expr_text)
    if not expr.is_constant():
        raise ParseError("expected a constant expression (no 't')", line, 1)
    return expr(0.0)


def parse_config(text: str) -> SurfaceConfig:
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ParseError("empty key or value", lineno, 1)
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        entries[key] = (value, lineno)

    def take(key: str, required: bool = False) -> Optional[tuple[str, int]]:
        if key in entries:
            return entries.pop(key)
        if required:
            raise ParseError(f"missing required key {key!r}", 1, 1)
        return None

    kind_entry = take("surface", required=True)
    kind = kind_entry[0]
    if kind not in ("catalog", "expression", "tabulated"):
        raise ParseError(
            f"surface must be catalog, expression or tabulated, not {kind!r}",
            kind_entry[1], 1,
        )

    if kind == "catalog":
        name = take("name", required=True)[0]
        if name not in _catalog.CATALOG:
            raise ParseError(f"unknown catalog surface {name!r}", kind_entry[1], 1)
        params = {}
        for key in list(entries):
            if key.startswith("param."):
                value, lineno = entries.pop(key)
                params[key[len("param."):]] = constant_of(value, lineno)
        config = SurfaceConfig(kind="catalog", name=name, params=params)
    elif kind == "expression":
        base_txt, base_line = take("base", required=True)
        director_txt, director_line = take("director", required=True)
        period_txt, period_line = take("period", required=True)
        closed_entry = take("closed")
        closed: Optional[bool] = None
        if closed_entry is not None and closed_entry[0] != "auto":
            closed = _parse_bool(*closed_entry)
        try:
            base = parse_vector(base_txt)
        except ParseError as exc:
            raise ParseError(f"in base: {exc}", base_line, exc.column) from None
        try:
            director = parse_vector(director_txt)
        except ParseError as exc:
            raise ParseError(f"in director: {exc}", director_line, exc.column) from None
        period = constant_of(period_txt, period_line)
        if not (period > 0.0):
            raise ParseError("period must be positive", period_line, 1)
        config = SurfaceConfig(
            kind="expression", base=base, director=director, period=period, closed=closed
        )
        _probe_expressions(config)
    else:
        period_txt, period_line = take("period", required=True)
        period = constant_of(period_txt, period_line)
        periodic_entry = take("periodic")
        periodic = True if periodic_entry is None else _parse_bool(*periodic_entry)
        base_samples = _parse_samples(*take("base_samples", required=True))
        director_samples = _parse_samples(*take("director_samples", required=True))
        if len(base_samples) != len(director_samples):
            raise ParseError("base_samples and director_samples must have equal length", 1, 1)
        config = SurfaceConfig(
            kind="tabulated",
            period=period,
            periodic=periodic,
            closed=None,
            base_samples=base_samples,
            director_samples=director_samples,
        )

    if entries:
        key = next(iter(entries))
        raise ParseError(f"unknown key {key!r}", entries[key][1], 1)
    return config


def _parse_bool(text: str, lineno: int) -> bool:
    if text.lower() in ("true", "yes", "1"):
        return True
    if text.lower() in ("false", "no", "0"):
        return False
    raise ParseError(f"expected true/false, found {text!r}", lineno, 1)


def _parse_samples(text: str, lineno: int) -> np.ndarray:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON sample array: {exc.msg}", lineno, exc.colno) from None
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 8:
        raise ParseError("samples must be an Nx3 array with N >= 8", lineno, 1)
    if not np.all(np.isfinite(arr)):
        raise ParseError("samples contain non-finite values", lineno, 1)
    return arr


def _probe_expressions(config: SurfaceConfig) -> None:
    """Reject expressions that go non-finite over the domain."""
    for t in np.linspace(0.0, config.period, 17):
        for label, exprs in (("base", config.base), ("director", config.director)):
            for e in exprs:
                try:
                    v = e(float(t))
                except (ArithmeticError, ValueError) as exc:
                    raise ParseError(
                        f"{label} component {e.source!r} fails at t = {t:.6g}: {exc}", 1, 1
                    ) from None
                if not math.isfinite(v):
                    raise ParseError(
                        f"{label} component {e.source!r} is non-finite at t = {t:.6g}", 1, 1
                    )
