"""Wavefront OBJ export of ruled surfaces.

Vertices run row-major over the (t, v) grid; faces are quads.  The
striction line, when regular, is emitted as a second object made of `l`
polyline elements.  Output is deterministic for fixed inputs.
"""

from __future__ import annotations

import io

import numpy as np

from .surfaces import RuledSurface, striction_curve
from .errors import GeometryError


def surface_grid(
    surface: RuledSurface,
    v_min: float = -1.0,
    v_max: float = 1.0,
    t_samples: int = 64,
    v_samples: int = 16,
) -> np.ndarray:
    """(t_samples, v_samples, 3) grid of points k(t) + v q(t)."""
    if t_samples < 2 or v_samples < 2:
        raise ValueError("mesh grid needs at least 2x2 samples")
    ts = np.linspace(0.0, surface.period, t_samples)
    vs = np.linspace(v_min, v_max, v_samples)
    pts = np.empty((t_samples, v_samples, 3))
    for i, t in enumerate(ts):
        k = np.asarray(surface.base.evaluate(float(t)), dtype=float)
        q = np.asarray(surface.director.evaluate(float(t)), dtype=float)
        pts[i] = k[None, :] + vs[:, None] * q[None, :]
    return pts


def export_obj(
    surface: RuledSurface,
    v_min: float = -1.0,
    v_max: float = 1.0,
    t_samples: int = 64,
    v_samples: int = 16,
    with_striction: bool = True,
) -> str:
    """OBJ document: quad mesh of the surface plus the striction polyline."""
    pts = surface_grid(surface, v_min, v_max, t_samples, v_samples)
    out = io.StringIO()
    out.write("# ruled surface mesh\n")
    out.write("o surface\n")
    for row in pts.reshape(-1, 3):
        out.write(f"v {row[0]:.9g} {row[1]:.9g} {row[2]:.9g}\n")
    for i in range(t_samples - 1):
        for j in range(v_samples - 1):
            a = i * v_samples + j + 1  # OBJ indices are 1-based
            b = a + 1
            c = a + v_samples + 1
            d = a + v_samples
            out.write(f"f {a} {b} {c} {d}\n")
    if with_striction:
        try:
            stric = striction_curve(surface)
        except GeometryError:
            stric = None
        if stric is not None and not stric.point_degenerate:
            base_index = t_samples * v_samples
            n_line = t_samples * 2
            out.write("o striction\n")
            ts = np.linspace(0.0, surface.period, n_line)
            for t in ts:
                p = np.asarray(stric.curve.evaluate(float(t)), dtype=float)
                out.write(f"v {p[0]:.9g} {p[1]:.9g} {p[2]:.9g}\n")
            indices = " ".join(str(base_index + i + 1) for i in range(n_line))
            out.write(f"l {indices}\n")
    return out.getvalue()
