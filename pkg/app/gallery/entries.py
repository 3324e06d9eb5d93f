"""
Catalogue of worked examples with closed-form reference values.

Every entry builds its surface or curve, runs the generic K₀ / k⁰ / k^{0,s}
pipeline on random samples and compares with the closed form. Samples come
from a generator seeded by settings.GALLERY_SEED, so reports are reproducible.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional
import logging
import math

import numpy as np

from app.config import settings
from app.errors import CheckFailure, GeometryError, UnknownEntryError
from app.heisenberg.curves import JetCurve
from app.jets.horizontal import ScalarField, horizontal_jet
from app.jets.jet import Jet, jexp
from app.services.expr.compiler import curve_from_text, field_from_text, patch_from_text
from app.geometry.surface import characteristic_ratio
from app.geometry.subriemannian import (
    classify_surface_points,
    curve_curvature_0,
    gaussian_curvature_0,
    signed_geodesic_curvature_0,
)
from app.quadrature.measures import perimeter_density_parametric
from app.gauss_bonnet.defect import boundary_term, gauss_bonnet_defect
from app.gauss_bonnet.scene import load_scene
from app.gallery.checks import CheckResult, EntryReport, condition, integral, pointwise, value
from app.gallery.fenchel import fenchel_check

logger = logging.getLogger(__name__)

SCENE_DIR = Path(__file__).resolve().parents[2] / "docs" / "scenes"

Runner = Callable[[np.random.Generator, int], List[CheckResult]]


@dataclass
class GalleryEntry:
    """
    Attributes:
        name: Catalogue key
        title: One-line description
        citation: The result the reference values come from
        construction: Expressions and parametrizations used
        checks: Names of the checks the runner produces
        runner: (rng, samples) -> check results
    """
    name: str
    title: str
    citation: str
    construction: Dict[str, str]
    checks: List[str]
    runner: Runner = field(repr=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "title": self.title,
            "citation": self.citation,
            "construction": self.construction,
            "checks": self.checks,
        }


REGISTRY: Dict[str, GalleryEntry] = {}


def gallery_entry(name: str, title: str, citation: str, construction: Dict[str, str], checks: List[str]):
    def register(runner: Runner) -> Runner:
        if not citation:
            raise ValueError(f"gallery entry {name} needs a citation")
        REGISTRY[name] = GalleryEntry(name, title, citation, construction, checks, runner)
        return runner

    return register


# ----------------------------------------------------------------------
# Sampling
# ----------------------------------------------------------------------

def _collect(rng: np.random.Generator, n: int, draw: Callable[[np.random.Generator, int], np.ndarray],
             keep: Callable[[np.ndarray], np.ndarray], rounds: int = 20) -> np.ndarray:
    """Draw batches until n samples pass keep"""
    kept = []
    total = 0
    for _ in range(rounds):
        batch = draw(rng, 2 * n)
        batch = batch[keep(batch)]
        kept.append(batch)
        total += len(batch)
        if total >= n:
            break
    samples = np.concatenate(kept)
    if len(samples) < n:
        raise RuntimeError(f"only {len(samples)} of {n} samples passed the filter")
    return samples[:n]


def _away_from_characteristic(field_: ScalarField, floor: float = 1e-2):
    def keep(points: np.ndarray) -> np.ndarray:
        return characteristic_ratio(horizontal_jet(field_, points)) > floor

    return keep


def _graph_sampler(f: Callable[[np.ndarray, np.ndarray], np.ndarray], box: float = 1.5):
    """Points (x1, x2, f(x1, x2)) of an x3-graph"""

    def draw(rng, n):
        x1, x2 = rng.uniform(-box, box, n), rng.uniform(-box, box, n)
        return np.stack([x1, x2, f(x1, x2)], axis=-1)

    return draw


def _radial_sampler(height: Callable[[np.ndarray], np.ndarray], r_range=(0.2, 1.5)):
    """Points (r cos θ, r sin θ, height(r))"""

    def draw(rng, n):
        r, th = rng.uniform(*r_range, n), rng.uniform(0.0, 2 * math.pi, n)
        return np.stack([r * np.cos(th), r * np.sin(th), height(r)], axis=-1)

    return draw


def _k0(field_: ScalarField, points: np.ndarray) -> np.ndarray:
    return gaussian_curvature_0(field_, points).value


# ----------------------------------------------------------------------
# Curves
# ----------------------------------------------------------------------

@gallery_entry(
    "heisenberg-curve",
    "Circle of radius 1 centered at (1, 0), lifted at height 0",
    "k⁰ of a curve that is horizontal at a single point",
    {"curve": "cos(t) + 1, sin(t), 0", "t": "[0, 2π]"},
    ["k0", "omega", "k0 at t=π", "L-sweep"],
)
def _heisenberg_curve(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    curve = curve_from_text("cos(t) + 1, sin(t), 0", 0.0, 2 * math.pi)
    t = _collect(rng, samples, lambda g, n: g.uniform(0.0, 2 * math.pi, n), lambda t: np.abs(1 + np.cos(t)) > 0.02)
    sweep = _collect(rng, 20, lambda g, n: g.uniform(0.0, 2 * math.pi, n), lambda t: 1 + np.cos(t) > 0.5)
    report = curve_curvature_0(curve, sweep, L_sweep=settings.L_SWEEP)
    terminal = report.errors[max(report.errors)] / np.abs(report.value)
    return [
        pointwise("k0", curve_curvature_0(curve, t).value, 2.0 / np.abs(1 + np.cos(t)), relative=True),
        pointwise("omega", curve.omega(t), -(1 + np.cos(t)) / 2.0),
        value("k0 at t=π", curve_curvature_0(curve, np.array([math.pi])).value[0], 1.0),
        condition("L-sweep", bool(report.monotone) and float(np.max(terminal)) <= 1e-3,
                  {"terminal_relative_error": float(np.max(terminal))}),
    ]


@gallery_entry(
    "unit-circle",
    "Unit circle in the plane x3 = 0",
    "k⁰ of a curve with constant contact form",
    {"curve": "cos(t), sin(t), 0", "t": "[0, 2π]"},
    ["k0", "omega"],
)
def _unit_circle(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    curve = curve_from_text("cos(t), sin(t), 0", 0.0, 2 * math.pi)
    t = rng.uniform(0.0, 2 * math.pi, samples)
    return [
        pointwise("k0", curve_curvature_0(curve, t).value, np.full(samples, 2.0)),
        pointwise("omega", curve.omega(t), np.full(samples, -0.5)),
    ]


@gallery_entry(
    "fenchel-lemniscate",
    "Horizontal lift of the lemniscate (sin t, sin t cos t)",
    "total curvature of closed horizontal curves exceeds 2π",
    {"planar": "sin(t), sin(t)*cos(t)", "t": "[0, 2π]"},
    ["margin", "stability", "doubled", "unit circle rejected"],
)
def _fenchel_lemniscate(_rng: np.random.Generator, _samples: int) -> List[CheckResult]:
    report = fenchel_check(curve_from_text("sin(t), sin(t)*cos(t)", 0.0, 2 * math.pi, planar=True))
    doubled = fenchel_check(curve_from_text("sin(t), sin(t)*cos(t)", 0.0, 4 * math.pi, planar=True))
    try:
        fenchel_check(curve_from_text("cos(t), sin(t)", 0.0, 2 * math.pi, planar=True))
        rejected = False
    except GeometryError:
        rejected = True
    return [
        condition("margin", report.passed, report.to_dict()),
        CheckResult("stability", "value", report.stability, 1e-6, 1, {"refined": report.refined}),
        condition("doubled", doubled.total >= 4 * math.pi - settings.GALLERY_INTEGRAL_TOL,
                  {"total": doubled.total}),
        condition("unit circle rejected", rejected),
    ]


# ----------------------------------------------------------------------
# Closed-form K₀
# ----------------------------------------------------------------------

@gallery_entry(
    "vertical-ruled",
    "Vertically ruled surfaces f(x1, x2) = 0",
    "vertically ruled surfaces have K₀ = 0",
    {"plane": "x1", "cylinder": "sqrt(x1^2 + x2^2) - 1", "parabolic": "x2 - x1^2"},
    ["plane", "cylinder", "parabolic"],
)
def _vertical_ruled(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    z = rng.uniform(-2.0, 2.0, samples)
    s = rng.uniform(-1.5, 1.5, samples)
    th = rng.uniform(0.0, 2 * math.pi, samples)
    cases = {
        "plane": ("x1", np.stack([np.zeros(samples), s, z], axis=-1)),
        "cylinder": ("sqrt(x1^2 + x2^2) - 1", np.stack([np.cos(th), np.sin(th), z], axis=-1)),
        "parabolic": ("x2 - x1^2", np.stack([s, s ** 2, z], axis=-1)),
    }
    return [pointwise(name, _k0(field_from_text(u), pts), np.zeros(samples))
            for name, (u, pts) in cases.items()]


@gallery_entry(
    "horizontal-plane",
    "The plane x3 = 0",
    "K₀ of the horizontal plane through the origin",
    {"u": "x3"},
    ["K0"],
)
def _horizontal_plane(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    pts = _radial_sampler(lambda r: np.zeros_like(r), (0.2, 2.0))(rng, samples)
    r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    return [pointwise("K0", _k0(field_from_text("x3"), pts), -2.0 / r2, relative=True)]


KORANYI_U = "(x1^2 + x2^2)^2 + 16*x3^2 - 1"
KORANYI_PATCH = "sqrt(cos(v))*cos(w), sqrt(cos(v))*sin(w), sin(v)/4"


@gallery_entry(
    "koranyi-sphere",
    "Korányi sphere (x1² + x2²)² + 16x3² = 1",
    "K₀ of the Korányi sphere and its vanishing total curvature",
    {"u": KORANYI_U, "patch": KORANYI_PATCH, "scene": "docs/scenes/koranyi.json"},
    ["on surface", "K0", "perimeter density", "total curvature"],
)
def _koranyi(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    u = field_from_text(KORANYI_U)
    patch = patch_from_text(KORANYI_PATCH)
    phi = rng.uniform(-1.3, 1.3, samples)
    theta = rng.uniform(0.0, 2 * math.pi, samples)
    pts = patch.point(phi, theta)
    c = np.cos(phi)
    report = gauss_bonnet_defect(load_scene(SCENE_DIR / "koranyi.json"))
    return [
        pointwise("on surface", u.value(pts), np.zeros(samples), tolerance=1e-12),
        pointwise("K0", _k0(u, pts), -2.0 / c + 6.0 * c, relative=True),
        pointwise("perimeter density", perimeter_density_parametric(patch, phi, theta), np.sqrt(c) / 4.0),
        integral("total curvature", report.surface_integral, 0.0, estimate=report.surface_error),
    ]


@gallery_entry(
    "paraboloid",
    "Paraboloid x3 = α(x1² + x2²), α = 0.75",
    "K₀ of the paraboloid",
    {"u": "x3 - alpha*(x1^2 + x2^2)", "alpha": "0.75"},
    ["K0"],
)
def _paraboloid(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    alpha = 0.75
    u = field_from_text("x3 - alpha*(x1^2 + x2^2)", {"alpha": alpha})
    pts = _radial_sampler(lambda r: alpha * r ** 2)(rng, samples)
    r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    return [pointwise("K0", _k0(u, pts), -2.0 / (r2 * (1 + 16 * alpha ** 2)), relative=True)]


def x3_graph_k0(points: np.ndarray, f1, f2, f11, f12, f22) -> np.ndarray:
    """
    K₀ of u = x3 − f(x1, x2) from the partials of f:
    −1/(2‖∇_H u‖²) − Hess f(∇_H u, J∇_H u)/‖∇_H u‖⁴ with J(a, b) = (b, −a).
    """
    x1, x2 = points[:, 0], points[:, 1]
    g1, g2 = -x2 / 2 - f1, x1 / 2 - f2
    l2 = g1 ** 2 + g2 ** 2
    hess = f11 * g1 * g2 - f12 * g1 ** 2 + f12 * g2 ** 2 - f22 * g1 * g2
    return -1.0 / (2 * l2) - hess / l2 ** 2


@gallery_entry(
    "x3-graph",
    "x3-graph with f = x1³/3 + x1x2²",
    "closed form of K₀ for x3-graphs",
    {"u": "x3 - (x1^3/3 + x1*x2^2)"},
    ["K0"],
)
def _x3_graph(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    u = field_from_text("x3 - (x1^3/3 + x1*x2^2)")
    pts = _collect(rng, samples, _graph_sampler(lambda a, b: a ** 3 / 3 + a * b ** 2), _away_from_characteristic(u))
    x1, x2 = pts[:, 0], pts[:, 1]
    expected = x3_graph_k0(pts, x1 ** 2 + x2 ** 2, 2 * x1 * x2, 2 * x1, 2 * x2, 2 * x1)
    return [pointwise("K0", _k0(u, pts), expected, relative=True)]


@gallery_entry(
    "x3-graph-degenerate",
    "x3-graph with f = x1x2/2 + x1³, where X2u vanishes",
    "x3-graphs with linearly dependent X1u, X2u have K₀ = 0",
    {"u": "x3 - (x1*x2/2 + x1^3)"},
    ["X2u", "K0"],
)
def _x3_graph_degenerate(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    u = field_from_text("x3 - (x1*x2/2 + x1^3)")
    pts = _collect(rng, samples, _graph_sampler(lambda a, b: a * b / 2 + a ** 3),
                   lambda p: np.abs(p[:, 1] + 3 * p[:, 0] ** 2) > 0.1)
    hj = horizontal_jet(u, pts)
    return [
        pointwise("X2u", hj.X[:, 1], np.zeros(samples), tolerance=1e-12),
        pointwise("K0", _k0(u, pts), np.zeros(samples)),
    ]


def x1_graph_k0(points: np.ndarray, f2, f3, f22, f23, f33) -> np.ndarray:
    """K₀ of u = x1 − f(x2, x3) from the partials of f"""
    x1, x2 = points[:, 0], points[:, 1]
    a = 1 + x2 * f3 / 2
    b = -f2 - x1 * f3 / 2
    l2 = a ** 2 + b ** 2
    X1a = -x2 ** 2 * f33 / 4
    X2a = f3 / 2 + x2 * (f23 + x1 * f33 / 2) / 2
    X1b = x2 * f23 / 2 - f3 / 2 + x1 * x2 * f33 / 4
    X2b = -f22 - x1 * f23 - x1 ** 2 * f33 / 4
    return (-f3 ** 2 / l2
            - (b * x2 * f33 / 2 + a * (f23 + x1 * f33 / 2)) / l2
            + f3 * (a * (a * X2a + b * X2b) - b * (a * X1a + b * X1b)) / l2 ** 2)


@gallery_entry(
    "x1-graph",
    "x1-graph with f = x2x3 + x3³/3",
    "closed form of K₀ for x1-graphs",
    {"u": "x1 - (x2*x3 + x3^3/3)"},
    ["K0"],
)
def _x1_graph(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    u = field_from_text("x1 - (x2*x3 + x3^3/3)")

    def draw(g, n):
        x2, x3 = g.uniform(-1.0, 1.0, n), g.uniform(-1.0, 1.0, n)
        return np.stack([x2 * x3 + x3 ** 3 / 3, x2, x3], axis=-1)

    pts = _collect(rng, samples, draw, _away_from_characteristic(u))
    x2, x3 = pts[:, 1], pts[:, 2]
    expected = x1_graph_k0(pts, x3, x2 + x3 ** 2, np.zeros(samples), np.ones(samples), 2 * x3)
    return [pointwise("K0", _k0(u, pts), expected, relative=True)]


@gallery_entry(
    "cylindrical-symmetry",
    "Surface x3 = f(r²/4) with f(s) = s²",
    "K₀ of cylindrically symmetric surfaces",
    {"u": "x3 - ((x1^2 + x2^2)/4)^2"},
    ["K0"],
)
def _cylindrical_symmetry(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    u = field_from_text("x3 - ((x1^2 + x2^2)/4)^2")
    pts = _radial_sampler(lambda r: (r ** 2 / 4) ** 2)(rng, samples)
    r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    fp, fpp = r2 / 2, 2.0
    expected = -2.0 / (r2 * (1 + fp ** 2)) + fp * fpp / (1 + fp ** 2) ** 2
    return [pointwise("K0", _k0(u, pts), expected, relative=True)]


# ----------------------------------------------------------------------
# Surfaces where Gauss–Bonnet fails
# ----------------------------------------------------------------------

SADDLE_U = "x3 - x1*x2/2"
SADDLE_CIRCLE = "cos(t), sin(t), sin(2*t)/4"


@gallery_entry(
    "circle-on-saddle",
    "Unit disk of x3 = x1x2/2, characteristic along the x1-axis",
    "a characteristic curve breaks Gauss–Bonnet: the defect is 4",
    {"u": SADDLE_U, "boundary": SADDLE_CIRCLE, "scene": "docs/scenes/saddle-disk.json"},
    ["K0", "k0s", "boundary term", "defect"],
)
def _circle_on_saddle(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    u = field_from_text(SADDLE_U)
    curve = curve_from_text(SADDLE_CIRCLE, 0.0, 2 * math.pi)
    pts = _collect(rng, samples, _graph_sampler(lambda a, b: a * b / 2, box=1.0), lambda p: np.abs(p[:, 1]) > 0.05)
    t = _collect(rng, samples, lambda g, n: g.uniform(0.0, 2 * math.pi, n), lambda t: np.abs(np.sin(t)) > 0.05)
    term = boundary_term(curve, u)
    report = gauss_bonnet_defect(load_scene(SCENE_DIR / "saddle-disk.json"))
    return [
        pointwise("K0", _k0(u, pts), np.zeros(samples), tolerance=1e-10),
        pointwise("k0s", signed_geodesic_curvature_0(u, curve, t).value, 1.0 / np.abs(np.sin(t)), relative=True),
        integral("boundary term", term.value, 4.0, tolerance=1e-6, estimate=term.error),
        integral("defect", report.defect, 4.0, tolerance=1e-6, estimate=report.surface_error),
    ]


def _glue(x1: Jet) -> Jet:
    """exp(−(x1 + 1)⁻²) left of −1, 0 on [−1, 1], exp(−(x1 − 1)⁻²) right of 1"""
    v = x1.value
    left, right = v < -1.0, v > 1.0
    # off-branch values are replaced before the exponential is formed
    xl = x1.where(left, x1.like(-2.0))
    xr = x1.where(right, x1.like(2.0))
    el = jexp(-1.0 / ((xl + 1.0) * (xl + 1.0)))
    er = jexp(-1.0 / ((xr - 1.0) * (xr - 1.0)))
    return el.where(left, er.where(right, x1.like(0.0)))


def exp_glued_field(x1: Jet, x2: Jet, x3: Jet) -> Jet:
    """u = x3 − x1x2/2 + x2·h(x1), with h the C^∞ gluing factor"""
    return x3 - x1 * x2 * 0.5 + x2 * _glue(x1)


def exp_glued_segments(eps: float) -> List[JetCurve]:
    """The two straight boundary pieces at x2 = ±ε, s ∈ [−1, 1]"""
    return [
        JetCurve(lambda s: [-s, eps, -0.5 * eps * s], -1.0, 1.0, name=f"upper ε={eps:g}"),
        JetCurve(lambda s: [s, -eps, -0.5 * eps * s], -1.0, 1.0, name=f"lower ε={eps:g}"),
    ]


@gallery_entry(
    "exp-glued-segment",
    "Saddle glued smoothly to other graphs outside |x1| ≤ 1",
    "a characteristic segment contributes 4 independently of the excision width",
    {"u": "x3 - x1*x2/2 + x2*h(x1)", "h": "exp(-(x1 ∓ 1)^-2) outside [-1, 1], 0 inside",
     "segments": "(-s, ε, -sε/2), (s, -ε, -sε/2)"},
    ["characteristic segment", "segment sum"],
)
def _exp_glued(rng: np.random.Generator, samples: int) -> List[CheckResult]:
    x1 = rng.uniform(-1.0, 1.0, samples)
    segment = np.stack([x1, np.zeros(samples), np.zeros(samples)], axis=-1)
    labels = classify_surface_points(exp_glued_field, segment)
    checks = [condition("characteristic segment", all(label == "characteristic" for label in labels))]
    for eps in settings.EPS_SEQUENCE:
        total = math.fsum(boundary_term(c, exp_glued_field).value for c in exp_glued_segments(eps))
        checks.append(value(f"segment sum ε={eps:g}", total, 4.0))
    return checks


# ----------------------------------------------------------------------
# Running
# ----------------------------------------------------------------------

def list_entries() -> List[GalleryEntry]:
    return list(REGISTRY.values())


def run_entry(name: str, samples: Optional[int] = None, seed: Optional[int] = None,
              strict: bool = False) -> EntryReport:
    """
    Run one gallery entry.

    Args:
        name: Entry name
        samples: Random samples per pointwise check, settings.GALLERY_SAMPLES when omitted
        seed: Generator seed, settings.GALLERY_SEED when omitted
        strict: Raise CheckFailure when a check fails

    Raises:
        UnknownEntryError: No such entry
        CheckFailure: strict and some check failed
    """
    entry = REGISTRY.get(name)
    if entry is None:
        raise UnknownEntryError(name, sorted(REGISTRY))
    rng = np.random.default_rng(settings.GALLERY_SEED if seed is None else seed)
    n = settings.GALLERY_SAMPLES if samples is None else int(samples)
    report = EntryReport(entry.name, entry.title, entry.citation, entry.runner(rng, n))
    failed = [c.name for c in report.checks if not c.passed]
    if failed:
        logger.warning(f"Gallery entry '{name}' failed: {', '.join(failed)}")
        if strict:
            raise CheckFailure(f"gallery entry '{name}' failed", entry=name, checks=failed)
    else:
        logger.info(f"Gallery entry '{name}' passed {len(report.checks)} check(s)")
    return report


def run_all(samples: Optional[int] = None, seed: Optional[int] = None, strict: bool = False) -> List[EntryReport]:
    """Run every entry, in parallel up to settings.THREADS, reporting in catalogue order"""
    names = list(REGISTRY)
    workers = min(max(1, int(settings.THREADS)), len(names))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(lambda name: run_entry(name, samples, seed), names))
    failed = [r.name for r in reports if not r.passed]
    if strict and failed:
        raise CheckFailure(f"{len(failed)} gallery entr{'y' if len(failed) == 1 else 'ies'} failed", entries=failed)
    return reports
