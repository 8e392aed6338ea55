"""Command line interface.

Subcommands:
    invariants  integral invariants of a closed surface
    offset      build a Mannheim offset: mesh + striction + ruling coordinates
    verify      run the characterization battery, nonzero exit on failure
    mesh        export the surface as a Wavefront OBJ
    dualcurve   sample the dual spherical image (line coordinates)

Exit codes: 0 ok; 1 an asserted relation failed; 2 input/parse error;
3 geometric degeneracy.  Angles are radians; distances in model units.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import parse_config
from .errors import GeometryError, ParseError
from .meshio import export_obj
from .reports import invariant_report_dict, VerifyReport
from .surfaces import (
    RuledSurface,
    invariant_report,
    striction_curve,
    surface_to_dual_curve,
)
from .verify import OffsetSpec, make_offset_angle, run_verify
from .offsets import rotate_offset

EXIT_OK = 0
EXIT_RELATION_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATE = 3


def _load_surface(path: str) -> RuledSurface:
    text = Path(path).read_text()
    return parse_config(text).build()


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_invariants(args) -> int:
    surface = _load_surface(args.config)
    report = invariant_report(surface, samples=args.samples)
    payload = invariant_report_dict(report)
    q = payload["directors"]["q"]
    lines = [
        f"pitch               {payload['pitch']: .9g}",
        f"angle of pitch      {q['angle_of_pitch']: .9g}",
        f"route discrepancy   {q['route_discrepancy']:.3e}",
        f"developable         {payload['developable']}",
        f"drall range         [{payload['drall_range'][0]:.6g}, {payload['drall_range'][1]:.6g}]",
        f"point striction     {payload['point_striction']}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_dualcurve(args) -> int:
    surface = _load_surface(args.config)
    curve = surface_to_dual_curve(surface)
    rows = []
    for i in range(args.samples):
        t = surface.period * i / args.samples
        v = curve.evaluate(t)
        rows.append({"t": t, "direction": list(v.real), "moment": list(v.dual)})
    _write_or_print(json.dumps(rows, indent=2), args.out)
    return EXIT_OK


def cmd_mesh(args) -> int:
    surface = _load_surface(args.config)
    obj = export_obj(
        surface,
        v_min=args.v_min,
        v_max=args.v_max,
        t_samples=args.samples,
        v_samples=args.v_samples,
    )
    _write_or_print(obj, args.out)
    return EXIT_OK


def cmd_offset(args) -> int:
    surface = _load_surface(args.config)
    spec = OffsetSpec(theta=args.theta, theta_star=args.theta_star, mode=args.mode)
    angle = make_offset_angle(surface, spec)
    result = rotate_offset(surface, angle)
    out = Path(args.out) if args.out else Path("offset")
    obj = export_obj(
        result.surface,
        v_min=args.v_min,
        v_max=args.v_max,
        t_samples=args.samples,
        v_samples=args.v_samples,
    )
    mesh_path = out.with_suffix(".obj")
    mesh_path.write_text(obj)
    rows = []
    for i in range(args.samples):
        t = surface.period * i / args.samples
        v = result.dual_curve.evaluate(t)
        rows.append({
            "t": t,
            "theta": angle.theta(t),
            "theta_star": angle.theta_star(t),
            "direction": list(v.real),
            "moment": list(v.dual),
        })
    data_path = out.with_suffix(".rulings.json")
    data_path.write_text(json.dumps({
        "mode": args.mode,
        "closed": result.surface.closed,
        "rulings": rows,
    }, indent=2))
    sys.stdout.write(f"wrote {mesh_path} and {data_path}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    surface = _load_surface(args.config)
    spec = OffsetSpec(theta=args.theta, theta_star=args.theta_star, mode=args.mode)
    report = run_verify(surface, spec, samples=args.samples, tol=args.tol)
    sys.stdout.write(report.to_text() + "\n")
    if args.out:
        Path(args.out).write_text(report.to_json())
    return EXIT_OK if report.ok else EXIT_RELATION_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ruledgeo",
        description="Line-geometry kernel: ruled surfaces, dual curves, Mannheim offsets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, mesh=False):
        p.add_argument("config", help="surface config file")
        p.add_argument("--samples", type=int, default=256, help="parameter samples (default 256)")
        p.add_argument("--out", default=None, help="output path")
        if mesh:
            p.add_argument("--v-min", type=float, default=-1.0)
            p.add_argument("--v-max", type=float, default=1.0)
            p.add_argument("--v-samples", type=int, default=16)

    p = sub.add_parser("invariants", help="integral invariants of a closed surface")
    common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("dualcurve", help="sample the dual spherical image")
    common(p)
    p.set_defaults(func=cmd_dualcurve)

    p = sub.add_parser("mesh", help="export a Wavefront OBJ mesh")
    common(p, mesh=True)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("offset", help="construct a Mannheim offset surface")
    common(p, mesh=True)
    p.add_argument("--theta", default="0", help="offset angle (radians; expression in t)")
    p.add_argument("--theta-star", default="0", help="offset distance (expression in t)")
    p.add_argument("--mode", choices=("constant", "mannheim"), default="constant",
                   help="constant: use the angle as given; mannheim: integrate "
                        "the offset-angle equation from the given start value")
    p.set_defaults(func=cmd_offset)

    p = sub.add_parser("verify", help="run the characterization battery")
    common(p)
    p.add_argument("--theta", default="0")
    p.add_argument("--theta-star", default="0")
    p.add_argument("--mode", choices=("constant", "mannheim"), default="constant")
    p.add_argument("--tol", type=float, default=1e-6, help="relation tolerance (default 1e-6)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR
    except GeometryError as exc:
        code = type(exc).__name__
        sys.stderr.write(f"error [{code}]: {exc}\n")
        return EXIT_DEGENERATE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
