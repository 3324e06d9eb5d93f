"""
Isometries and dilations acting on curves and surfaces.

Left translations, rotations about the x3-axis and dilations are affine in
exponential coordinates. Curves are transformed by their affine action; scalar
fields by composition with the inverse map, evaluated on coordinate jets so
the transformed field keeps exact derivatives.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence
import logging
import math

import numpy as np

from app.config import settings
from app.errors import InputError
from app.heisenberg.curves import CurveModel
from app.heisenberg.group import (
    dilate_array,
    dilation_matrix,
    group_mul_array,
    left_translation_matrix,
    mul_coords,
    rotation_matrix,
)
from app.jets.horizontal import ScalarField
from app.jets.jet import Jet
from app.geometry.subriemannian import (
    curve_curvature_0,
    gaussian_curvature_0,
    signed_geodesic_curvature_0,
)

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Curves
# ----------------------------------------------------------------------

def translate_curve(curve: CurveModel, g: Sequence[float]) -> CurveModel:
    """t ↦ g ∗ γ(t)"""
    g = np.asarray(g, dtype=float)
    return curve.transformed(left_translation_matrix(g), g)


def rotate_curve(curve: CurveModel, theta: float) -> CurveModel:
    return curve.transformed(rotation_matrix(theta))


def dilate_curve(curve: CurveModel, r: float) -> CurveModel:
    """t ↦ δ_r γ(t)"""
    return curve.transformed(dilation_matrix(r))


# ----------------------------------------------------------------------
# Scalar fields: (T·u)(x) = u(T⁻¹x), so T maps {u = 0} onto {T·u = 0}
# ----------------------------------------------------------------------

def translate_field(field_: ScalarField, g: Sequence[float]) -> ScalarField:
    inverse = [-float(c) for c in g]

    def translated(x1: Jet, x2: Jet, x3: Jet) -> Jet:
        return field_(*mul_coords(inverse, (x1, x2, x3)))

    return translated


def rotate_field(field_: ScalarField, theta: float) -> ScalarField:
    c, s = math.cos(theta), math.sin(theta)

    def rotated(x1: Jet, x2: Jet, x3: Jet) -> Jet:
        return field_(c * x1 + s * x2, -s * x1 + c * x2, x3)

    return rotated


def dilate_field(field_: ScalarField, r: float) -> ScalarField:
    if not r > 0:
        raise InputError(f"dilation factor must be positive, got {r}", r=r)
    k = 1.0 / r

    def dilated(x1: Jet, x2: Jet, x3: Jet) -> Jet:
        return field_(k * x1, k * x2, (k * k) * x3)

    return dilated


def translate_points(points, g) -> np.ndarray:
    return group_mul_array(np.broadcast_to(np.asarray(g, dtype=float), np.shape(points)), points)


def rotate_points(points, theta: float) -> np.ndarray:
    return np.asarray(points, dtype=float) @ rotation_matrix(theta).T


# ----------------------------------------------------------------------
# Invariance suite
# ----------------------------------------------------------------------

@dataclass
class InvarianceReport:
    """
    Largest deviations over random isometries.

    Attributes:
        quantity: k0, k0s or K0
        translation_error: max |q(g∗·) − q| over translations
        rotation_error: max |q(R·) − q| over rotations
        dilation_error: max |r·q(δ_r·) − q| for curve curvatures
        dilation_ratios: K₀(δ_rΣ)(δ_r p)/K₀(p), reported without an asserted law
        trials: Number of random isometries of each kind
    """
    quantity: str
    translation_error: float
    rotation_error: float
    dilation_error: Optional[float] = None
    dilation_ratios: Dict[str, List[float]] = field(default_factory=dict)
    trials: int = 0
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        errors = [self.translation_error, self.rotation_error]
        if self.dilation_error is not None:
            errors.append(self.dilation_error)
        return max(errors) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "translation_error": self.translation_error,
            "rotation_error": self.rotation_error,
            "dilation_error": self.dilation_error,
            "dilation_ratios": self.dilation_ratios,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def _random_isometries(trials: int, seed: Optional[int]):
    rng = np.random.default_rng(settings.GALLERY_SEED if seed is None else seed)
    translations = rng.uniform(-2.0, 2.0, size=(trials, 3))
    angles = rng.uniform(0.0, 2.0 * math.pi, size=trials)
    return translations, angles


def curve_invariance(curve: CurveModel, t, trials: int = 50, dilations: Sequence[float] = (0.5, 2.0, 3.0),
                     seed: Optional[int] = None, tolerance: float = 1e-10) -> InvarianceReport:
    """k⁰ under left translations, x3-rotations and dilations δ_r (which scale it by 1/r)"""
    t = np.asarray(t, dtype=float)
    base = curve_curvature_0(curve, t).value
    translations, angles = _random_isometries(trials, seed)
    t_err = max(_relative(curve_curvature_0(translate_curve(curve, g), t).value, base) for g in translations)
    r_err = max(_relative(curve_curvature_0(rotate_curve(curve, a), t).value, base) for a in angles)
    d_err = max(_relative(r * curve_curvature_0(dilate_curve(curve, r), t).value, base) for r in dilations)
    return InvarianceReport("k0", t_err, r_err, d_err, trials=trials, tolerance=tolerance)


def surface_invariance(field_: ScalarField, points, trials: int = 50, dilations: Sequence[float] = (0.5, 2.0),
                       seed: Optional[int] = None, tolerance: float = 1e-10) -> InvarianceReport:
    """K₀ under isometries; its behaviour under δ_r is reported, not asserted"""
    pts = np.asarray(points, dtype=float)
    base = gaussian_curvature_0(field_, pts).value
    translations, angles = _random_isometries(trials, seed)
    t_err = max(
        _relative(gaussian_curvature_0(translate_field(field_, g), translate_points(pts, g)).value, base)
        for g in translations
    )
    r_err = max(
        _relative(gaussian_curvature_0(rotate_field(field_, a), rotate_points(pts, a)).value, base)
        for a in angles
    )
    ratios = {}
    for r in dilations:
        scaled = gaussian_curvature_0(dilate_field(field_, r), dilate_array(r, pts)).value
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios[f"{r:g}"] = np.ravel(scaled / base).tolist()
    logger.info(f"K0 dilation ratios (reported only): "
                f"{ {k: float(np.median(v)) for k, v in ratios.items()} }")
    return InvarianceReport("K0", t_err, r_err, None, ratios, trials=trials, tolerance=tolerance)


def geodesic_curvature_invariance(field_: ScalarField, curve: CurveModel, t, trials: int = 50,
                                  dilations: Sequence[float] = (0.5, 2.0), seed: Optional[int] = None,
                                  tolerance: float = 1e-10) -> InvarianceReport:
    """k^{0,s} of a curve on Σ when both are moved by the same map"""
    t = np.asarray(t, dtype=float)
    base = signed_geodesic_curvature_0(field_, curve, t).value
    translations, angles = _random_isometries(trials, seed)
    t_err = max(
        _relative(signed_geodesic_curvature_0(translate_field(field_, g), translate_curve(curve, g), t).value, base)
        for g in translations
    )
    r_err = max(
        _relative(signed_geodesic_curvature_0(rotate_field(field_, a), rotate_curve(curve, a), t).value, base)
        for a in angles
    )
    d_err = max(
        _relative(r * signed_geodesic_curvature_0(dilate_field(field_, r), dilate_curve(curve, r), t).value, base)
        for r in dilations
    )
    return InvarianceReport("k0s", t_err, r_err, d_err, trials=trials, tolerance=tolerance)


def isometry_invariance_suite(curve: Optional[CurveModel] = None, field_: Optional[ScalarField] = None,
                              t=None, points=None, trials: int = 50,
                              seed: Optional[int] = None) -> List[InvarianceReport]:
    """
    Run every invariance check that the given inputs allow.

    A curve alone checks k⁰; a field with points checks K₀; a curve lying on
    the field's zero set additionally checks k^{0,s}.
    """
    reports = []
    if curve is not None:
        t = np.linspace(*curve.span(), settings.GALLERY_SAMPLES) if t is None else t
        reports.append(curve_invariance(curve, t, trials, seed=seed))
        if field_ is not None:
            reports.append(geodesic_curvature_invariance(field_, curve, t, trials, seed=seed))
    if field_ is not None and points is not None:
        reports.append(surface_invariance(field_, points, trials, seed=seed))
    for r in reports:
        logger.info(f"Invariance of {r.quantity}: translation {r.translation_error:.2e}, "
                    f"rotation {r.rotation_error:.2e}, passed={r.passed}")
    return reports
