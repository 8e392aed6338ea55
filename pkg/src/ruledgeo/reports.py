"""Machine-readable reports: relation checks and invariant summaries."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .dual import DualNumber, DualVector3

Value = Union[float, DualNumber, None]


def _value_to_json(v):
    if v is None:
        return None
    if isinstance(v, DualNumber):
        return {"real": v.real, "dual": v.dual}
    if isinstance(v, DualVector3):
        return {"real": list(v.real), "dual": list(v.dual)}
    if isinstance(v, np.ndarray):
        return v.tolist()
    return float(v)


def residual_of(lhs: Value, rhs: Value) -> float:
    if lhs is None or rhs is None:
        return math.nan
    diff = lhs - rhs
    if isinstance(diff, DualNumber):
        return max(abs(diff.real), abs(diff.dual))
    return abs(diff)


@dataclass(frozen=True)
class RelationRow:
    """One verified relation: |lhs - rhs| against a tolerance.

    Non-asserted rows are informational; they never fail a run (claims the
    source identities make but whose general validity is doubtful are
    carried this way so they stay auditable)."""

    id: str
    lhs: Value
    rhs: Value
    residual: float
    tol: float
    asserted: bool = True
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol) if math.isfinite(self.residual) else False

    @staticmethod
    def compare(id: str, lhs: Value, rhs: Value, tol: float, asserted: bool = True, note: str = "") -> "RelationRow":
        return RelationRow(id, lhs, rhs, residual_of(lhs, rhs), tol, asserted, note)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "lhs": _value_to_json(self.lhs),
            "rhs": _value_to_json(self.rhs),
            "residual": None if math.isnan(self.residual) else self.residual,
            "tol": self.tol,
            "pass": self.passed,
            "asserted": self.asserted,
            "note": self.note,
        }


@dataclass
class VerifyReport:
    rows: list[RelationRow] = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    def add(self, row: RelationRow) -> None:
        self.rows.append(row)

    @property
    def failures(self) -> list[RelationRow]:
        return [r for r in self.rows if r.asserted and not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "environment": self.environment,
            "relations": [r.to_dict() for r in self.rows],
            "pass": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = []
        width = max((len(r.id) for r in self.rows), default=4)
        for r in self.rows:
            status = ("PASS" if r.passed else "FAIL") if r.asserted else ("info" if r.passed else "INFO")
            resid = "n/a" if math.isnan(r.residual) else f"{r.residual:.3e}"
            line = f"{status}  {r.id:<{width}}  residual={resid}  tol={r.tol:.1e}"
            if r.note:
                line += f"  ({r.note})"
            lines.append(line)
        lines.append(f"asserted: {sum(r.asserted for r in self.rows)}, failures: {len(self.failures)}")
        return "\n".join(lines)


def invariant_report_dict(report) -> dict:
    """JSON form of a surfaces.InvariantReport."""
    entries = {}
    for name, entry in report.entries.items():
        inv = entry.invariants
        entries[name] = None if inv is None else {
            "angle_of_pitch": inv.lambda_bar.real,
            "dual_angle_of_pitch": _value_to_json(inv.lambda_bar),
            "pitch_from_dual": inv.pitch_from_dual,
            "steiner_contraction": _value_to_json(inv.lambda_steiner),
            "route_discrepancy": inv.route_discrepancy,
            "steiner_contraction_spread": inv.steiner_route_spread,
            "spherical_area": _value_to_json(inv.spherical_area),
            "line_pitch": entry.line_pitch,
        }
    return {
        "pitch": report.surface_pitch,
        "directors": entries,
        "steiner_vector": _value_to_json(report.steiner),
        "pole": _value_to_json(report.pole),
        "pole_spread": report.pole_spread,
        "area_vector_spherical_image": _value_to_json(report.area_vector_spherical),
        "dual_area_vector": _value_to_json(report.dual_area_vector),
        "drall_range": [report.drall_min, report.drall_max],
        "developable": report.developable,
        "sigma_range": list(report.sigma_range) if report.sigma_range else None,
        "point_striction": report.point_striction,
        "samples": report.samples,
    }
