"""
heisgeom command line.

Usage:
    python -m app.cli curve --expr "cos(t)+1, sin(t), 0" --t0 0 --t1 6.2832 --grid 100
    python -m app.cli surface --u "x3" --points "1,0,0;0,2,0" --quantity K0
    python -m app.cli gauss-bonnet --scene docs/scenes/koranyi.json
    python -m app.cli steiner --region docs/scenes/cylinder.json --order 4 --eps 0.1,0.25,0.5
    python -m app.cli sweep-L --expr-curve "cos(t), sin(t), t" --t 1.0 --L 1e2,1e4,1e6
    python -m app.cli gallery run all --format csv

Reports go to stdout (JSON by default, CSV with --format csv); logs go to
stderr. Exit codes: 0 success, 1 input error, 2 failed check or any other
engine error.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple
import argparse
import logging
import sys

import numpy as np

from app.config import settings, initialize_settings
from app.errors import CheckFailure, HeisgeomError, InputError
from app.heisenberg.lift import horizontal_lift
from app.services.expr.compiler import curve_from_text, field_from_text
from app.geometry.subriemannian import (
    curve_curvature_0,
    gaussian_curvature_0,
    mean_curvature_0,
    signed_geodesic_curvature_0,
)
from app.geometry.surface import gauss_curvature_L, mean_curvature_L
from app.quadrature.engine import QuadratureSpec
from app.gauss_bonnet import gauss_bonnet_defect, load_scene, scaled_gauss_bonnet_sweep
from app.steiner import simplified_series
from app.gallery import list_entries, run_all, run_entry
from app.utils.formatting import error_object, to_csv, to_json, with_schema

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CHECK = 2


class ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage errors as InputError instead of exiting"""

    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def point_list(text: str) -> np.ndarray:
    """"x1,x2,x3;x1,x2,x3;..." as an (n, 3) array"""
    try:
        pts = [[float(c) for c in p.split(",")] for p in text.split(";") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected points 'x1,x2,x3;...', got {text!r}")
    if not pts or any(len(p) != 3 for p in pts):
        raise argparse.ArgumentTypeError("every point needs three coordinates")
    return np.asarray(pts, dtype=float)


def constant(text: str) -> Tuple[str, float]:
    name, sep, raw = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"constant {name.strip()} needs a number, got {raw!r}")


# ----------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------

class Outcome:
    """A command result: JSON payload, CSV rows and whether its checks passed"""

    def __init__(self, payload: Any, rows: Optional[List[Dict[str, Any]]] = None, passed: bool = True):
        self.payload = payload
        self.rows = rows
        self.passed = passed


def _constants(args) -> Dict[str, float]:
    return dict(args.const or [])


def _parameters(args) -> np.ndarray:
    if args.t is not None:
        return np.asarray(args.t, dtype=float)
    if args.grid < 2:
        raise InputError("--grid needs at least 2 points", grid=args.grid)
    return np.linspace(args.t0, args.t1, args.grid)


def _curve(text: str, args):
    curve = curve_from_text(text, args.t0, args.t1, planar=args.planar, constants=_constants(args))
    return horizontal_lift(curve) if args.planar else curve


def cmd_curve(args) -> Outcome:
    curve = _curve(args.expr, args)
    t = _parameters(args)
    sweep = args.L if args.L else None
    if args.surface:
        report = signed_geodesic_curvature_0(field_from_text(args.surface, _constants(args)), curve, t,
                                             L_sweep=sweep, unsigned=args.unsigned)
    else:
        report = curve_curvature_0(curve, t, L_sweep=sweep)
    return Outcome(report.to_dict(), report.report_rows())


SURFACE_QUANTITIES = {
    "K0": gaussian_curvature_0,
    "H0": mean_curvature_0,
    "KL": gauss_curvature_L,
    "HL": mean_curvature_L,
}


def cmd_surface(args) -> Outcome:
    u = field_from_text(args.u, _constants(args))
    if args.quantity in ("K0", "H0"):
        report = SURFACE_QUANTITIES[args.quantity](u, args.points, L_sweep=args.L or None)
        return Outcome(report.to_dict(), report.report_rows())
    if not args.L:
        raise InputError(f"{args.quantity} needs --L")
    rows = []
    for L in args.L:
        values = SURFACE_QUANTITIES[args.quantity](u, args.points, L)
        for p, v in zip(args.points, np.ravel(values)):
            rows.append({"L": L, "x1": p[0], "x2": p[1], "x3": p[2], args.quantity: float(v)})
    return Outcome({"quantity": args.quantity, "values": rows}, rows)


def cmd_sweep_l(args) -> Outcome:
    sweep = args.L or settings.L_SWEEP
    if args.expr_curve:
        curve = _curve(args.expr_curve, args)
        report = curve_curvature_0(curve, np.asarray(args.t, dtype=float), L_sweep=sweep)
    elif args.u:
        if args.points is None:
            raise InputError("sweep-L with --u needs --points")
        report = gaussian_curvature_0(field_from_text(args.u, _constants(args)), args.points, L_sweep=sweep)
    else:
        raise InputError("sweep-L needs --expr-curve or --u")
    return Outcome(report.to_dict(), report.report_rows(), passed=bool(report.monotone))


def cmd_gauss_bonnet(args) -> Outcome:
    scene = load_scene(args.scene)
    if args.L:
        results = scaled_gauss_bonnet_sweep(scene, args.L, QuadratureSpec())
        rows = [r.to_dict() for r in results]
        return Outcome({"scene": scene.name, "scaled": rows}, rows)
    report = gauss_bonnet_defect(scene, QuadratureSpec())
    return Outcome(report.to_dict(), report.report_rows(), report.passed)


def cmd_steiner(args) -> Outcome:
    scene = load_scene(args.region)
    delta = field_from_text(args.delta, scene.spec.constants) if args.delta else None
    eps = args.eps or settings.EPS_SEQUENCE
    report = simplified_series(scene, args.order, eps, delta=delta, reference=args.reference)
    return Outcome(report.to_dict(), report.report_rows(), report.passed)


def cmd_gallery(args) -> Outcome:
    if args.action == "list":
        entries = [e.to_dict() for e in list_entries()]
        return Outcome({"entries": entries},
                       [{"name": e["name"], "title": e["title"], "citation": e["citation"]} for e in entries])
    if args.name in (None, "all"):
        reports = run_all(args.samples, args.seed)
    else:
        reports = [run_entry(args.name, args.samples, args.seed)]
    passed = all(r.passed for r in reports)
    rows = [row for r in reports for row in r.report_rows()]
    return Outcome({"passed": passed, "entries": [r.to_dict() for r in reports]}, rows, passed)


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Report format")
    common.add_argument("--tol", type=float, help="Quadrature tolerance")
    common.add_argument("--tau-h", type=float, help="Horizontal-point threshold")
    common.add_argument("--tau-char", type=float, help="Characteristic-point threshold")
    common.add_argument("--eps", type=float_list, help="Exclusion radii, strictly decreasing (tube radii for steiner)")
    common.add_argument("--L", type=float_list, help="L values")
    common.add_argument("--threads", type=int, help="Worker threads (default HEISGEOM_THREADS)")
    common.add_argument("--strict", action="store_true", help="Raise on failed checks")
    common.add_argument("--const", type=constant, action="append", help="Named constant name=value")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return common


def _curve_arguments(p: argparse.ArgumentParser):
    p.add_argument("--t0", type=float, default=0.0, help="Parameter start")
    p.add_argument("--t1", type=float, default=1.0, help="Parameter end")
    p.add_argument("--planar", action="store_true", help="Planar expression, lifted horizontally")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = ArgumentParser(prog="heisgeom", description="Sub-Riemannian geometry of the Heisenberg group")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("curve", parents=[common], help="k⁰ (or k^{0,s} on a surface) along a curve")
    p.add_argument("--expr", required=True, help="Curve expression in t")
    _curve_arguments(p)
    p.add_argument("--grid", type=int, default=101, help="Number of equally spaced parameters")
    p.add_argument("--t", type=float_list, help="Explicit parameters, overrides --grid")
    p.add_argument("--surface", help="Defining function u; reports k^{0,s} on {u = 0}")
    p.add_argument("--unsigned", action="store_true", help="Report |k^{0,s}|")
    p.set_defaults(handler=cmd_curve)

    p = sub.add_parser("surface", parents=[common], help="K₀, H₀, K_L or H_L at points")
    p.add_argument("--u", required=True, help="Defining function in x1, x2, x3")
    p.add_argument("--points", type=point_list, required=True, help="'x1,x2,x3;...'")
    p.add_argument("--quantity", choices=list(SURFACE_QUANTITIES), default="K0")
    p.set_defaults(handler=cmd_surface)

    p = sub.add_parser("sweep-L", parents=[common], help="Finite-L values converging to the limit")
    p.add_argument("--expr-curve", help="Curve expression in t")
    _curve_arguments(p)
    p.add_argument("--t", type=float_list, default=[0.5], help="Curve parameters")
    p.add_argument("--u", help="Defining function, for K_L → K₀")
    p.add_argument("--points", type=point_list, help="Surface points")
    p.set_defaults(handler=cmd_sweep_l)

    p = sub.add_parser("gauss-bonnet", parents=[common], help="Gauss–Bonnet defect of a scene")
    p.add_argument("--scene", required=True, help="Scene JSON file")
    p.set_defaults(handler=cmd_gauss_bonnet)

    p = sub.add_parser("steiner", parents=[common], help="Tube-volume series of a scene")
    p.add_argument("--region", required=True, help="Scene JSON file")
    p.add_argument("--delta", help="Eikonal function; the scene's delta or u when omitted")
    p.add_argument("--order", type=int, default=4, help="Highest power of ε")
    p.add_argument("--reference", type=float_list, help="Exact values per radius")
    p.set_defaults(handler=cmd_steiner)

    p = sub.add_parser("gallery", parents=[common], help="Worked examples with closed-form references")
    p.add_argument("action", choices=["list", "run"])
    p.add_argument("name", nargs="?", help="Entry name or 'all'")
    p.add_argument("--samples", type=int, help="Random samples per check")
    p.add_argument("--seed", type=int, help="Sampling seed")
    p.set_defaults(handler=cmd_gallery)
    return parser


def _apply_overrides(args):
    try:
        settings.apply_overrides({
            "tol": args.tol,
            "tau_h": args.tau_h,
            "tau_char": args.tau_char,
            "eps": None if args.command == "steiner" else args.eps,
            "L": args.L,
            "threads": args.threads,
        })
    except ValueError as e:
        raise InputError(str(e))


def _render(outcome: Outcome, fmt: str) -> str:
    if fmt == "csv" and outcome.rows is not None:
        return to_csv(outcome.rows)
    return to_json(with_schema(outcome.payload)) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and print its report.

    Returns:
        Exit code: 0 success, 1 input error, 2 failed check or engine error
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    verbose = "-v" in argv or "--verbose" in argv
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        args = build_parser().parse_args(argv)
        _apply_overrides(args)
        initialize_settings()
        outcome = args.handler(args)
        if args.strict and not outcome.passed:
            raise CheckFailure(f"{args.command} checks failed", command=args.command)
    except InputError as e:
        logger.error(e.message)
        sys.stdout.write(to_json(error_object(e)) + "\n")
        return EXIT_INPUT
    except HeisgeomError as e:
        logger.error(e.message)
        sys.stdout.write(to_json(error_object(e)) + "\n")
        return EXIT_CHECK

    sys.stdout.write(_render(outcome, args.format))
    if not outcome.passed:
        logger.warning(f"{args.command}: checks failed")
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
