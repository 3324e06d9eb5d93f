"""
Tube-volume series of a domain bounded by a non-characteristic scene surface.

    L³(Ω_ε) = L³(Ω) + Σ_k (ε^k/k!) ∫_∂Ω c_k dH³_cc

The raw series takes c_k = div^{k−1}; the simplified one uses 1, A, C and then
B^{j−1}D, B^{j−1}(AD − E). Both are integrated and reported with their
difference, which is made of Gauss–Bonnet terms that vanish on closed
surfaces. 1/k! is exact until the final conversion.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence
import logging
import math

import numpy as np
import sympy as sp

from app.errors import InputError, SceneError
from app.jets.horizontal import ScalarField, horizontal_jet
from app.geometry.surface import require_noncharacteristic
from app.quadrature.engine import QuadratureResult, QuadratureSpec
from app.quadrature.measures import perimeter_integral_parametric
from app.gauss_bonnet.scene import CompiledScene
from app.steiner.coefficients import coefficients_at, eikonal_deviation
from app.steiner.gpoly import GAUSS_CURVATURE, GPolynomial, raw_coefficient, simplified_coefficient

logger = logging.getLogger(__name__)


@dataclass
class SeriesTerm:
    """
    Coefficient of ε^k in both series.

    Attributes:
        power: k
        inverse_factorial: 1/k! as a float
        raw, simplified: Integrands as canonical polynomials
        raw_integral, simplified_integral: Their integrals in dH³_cc
        raw_error, simplified_error: Quadrature error estimates
    """
    power: int
    inverse_factorial: float
    raw: str
    simplified: str
    raw_integral: float
    simplified_integral: float
    raw_error: float = 0.0
    simplified_error: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "power": self.power,
            "inverse_factorial": self.inverse_factorial,
            "raw": self.raw,
            "simplified": self.simplified,
            "raw_integral": self.raw_integral,
            "simplified_integral": self.simplified_integral,
            "raw_error": self.raw_error,
            "simplified_error": self.simplified_error,
        }


@dataclass
class SteinerReport:
    """
    Attributes:
        scene: Scene name
        order: Highest power of ε kept
        volume: L³(Ω), or None when the series is the increment L³(Ω_ε) − L³(Ω)
        terms: Per-power coefficients
        eps: Evaluation radii
        raw_values, simplified_values: Series values per ε
        reference: Comparison values per ε, when supplied
        gauss_bonnet_integral: ∫(B + C) dH³_cc, zero on closed surfaces
        eikonal_deviation: max |‖∇_H δ‖ − 1| on the surface samples
    """
    scene: str
    order: int
    volume: Optional[float]
    terms: List[SeriesTerm]
    eps: List[float]
    raw_values: List[float]
    simplified_values: List[float]
    reference: Optional[List[float]] = None
    gauss_bonnet_integral: float = 0.0
    eikonal_deviation: float = 0.0
    tolerance: float = 1e-10

    @property
    def increment(self) -> bool:
        return self.volume is None

    @property
    def difference(self) -> List[float]:
        return [r - s for r, s in zip(self.raw_values, self.simplified_values)]

    @property
    def reference_errors(self) -> Optional[List[float]]:
        if self.reference is None:
            return None
        return [abs(s - r) for s, r in zip(self.simplified_values, self.reference)]

    @property
    def passed(self) -> bool:
        errors = self.reference_errors
        return errors is None or max(errors, default=0.0) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scene": self.scene,
            "order": self.order,
            "volume": self.volume,
            "increment": self.increment,
            "terms": [t.to_dict() for t in self.terms],
            "eps": self.eps,
            "raw_values": self.raw_values,
            "simplified_values": self.simplified_values,
            "difference": self.difference,
            "reference": self.reference,
            "reference_errors": self.reference_errors,
            "gauss_bonnet_integral": self.gauss_bonnet_integral,
            "eikonal_deviation": self.eikonal_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def report_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for k, e in enumerate(self.eps):
            rows.append({
                "eps": e,
                "raw": self.raw_values[k],
                "simplified": self.simplified_values[k],
                "difference": self.difference[k],
                "reference": self.reference[k] if self.reference is not None else None,
            })
        return rows


def inverse_factorial(k: int) -> float:
    return float(sp.Rational(1, sp.factorial(k)))


def _surface_samples(scene: CompiledScene, grid: int) -> np.ndarray:
    pts = []
    for chart in scene.charts:
        V, W = np.meshgrid(np.linspace(*chart.v_range(), grid), np.linspace(*chart.w_range(), grid),
                           indexing="ij")
        pts.append(chart.patch.point(V, W).reshape(-1, 3))
    return np.concatenate(pts)


def coefficient_integral(scene: CompiledScene, delta: ScalarField, poly: GPolynomial,
                         spec: Optional[QuadratureSpec] = None) -> QuadratureResult:
    """∫ poly(A..E) dH³_cc over the scene charts"""
    constant = poly.is_zero() or not poly.symbols

    def integrand(points, _v, _w):
        return coefficients_at(delta, points, tau_eik=math.inf).evaluate(poly)

    total = QuadratureResult(0.0, 0.0)
    if poly.is_zero():
        return total
    for chart in scene.charts:
        total = total + perimeter_integral_parametric(chart.patch, None if constant else integrand,
                                                      chart.v_range(), chart.w_range(), spec)
    if constant:
        total = total.scaled(float(poly.terms()[0][1]))
    return total


def _series_values(base: float, integrals: Sequence[float], eps: Sequence[float]) -> List[float]:
    inv = [inverse_factorial(k) for k in range(1, len(integrals) + 1)]
    return [math.fsum([base] + [c * e ** k * f for k, (c, f) in enumerate(zip(integrals, inv), start=1)])
            for e in eps]


def simplified_series(scene: CompiledScene, order: int, eps: Sequence[float],
                      delta: Optional[ScalarField] = None, spec: Optional[QuadratureSpec] = None,
                      reference: Optional[Sequence[float]] = None, grid: int = 17) -> SteinerReport:
    """
    Raw and simplified tube-volume series of a scene.

    Args:
        scene: Non-characteristic scene without exclusions; its volume, when set, is L³(Ω)
        order: Highest power of ε
        eps: Radii to evaluate at
        delta: Eikonal function; the scene's delta, else its defining function
        spec: Quadrature configuration
        reference: Exact values per ε to compare the simplified series with
        grid: Samples per chart direction for the eikonal and characteristic checks

    Raises:
        InputError: order below 1 or reference of the wrong length
        SceneError: The scene has exclusions
        CharacteristicPointError: The surface has a characteristic point
    """
    if order < 1:
        raise InputError(f"series order must be at least 1, got {order}", order=order)
    eps = [float(e) for e in eps]
    if reference is not None and len(reference) != len(eps):
        raise InputError("reference needs one value per ε", eps=len(eps), reference=len(reference))
    if scene.excised:
        raise SceneError("tube series need a surface without exclusions", scene=scene.name)
    if delta is None:
        delta = scene.delta if scene.delta is not None else scene.field

    samples = _surface_samples(scene, grid)
    require_noncharacteristic(horizontal_jet(scene.field, samples), samples)
    deviation = eikonal_deviation(coefficients_at(delta, samples))

    cache: Dict[GPolynomial, QuadratureResult] = {}

    def integral(poly: GPolynomial) -> QuadratureResult:
        if poly not in cache:
            cache[poly] = coefficient_integral(scene, delta, poly, spec)
        return cache[poly]

    terms = []
    for k in range(1, order + 1):
        raw, simple = raw_coefficient(k), simplified_coefficient(k)
        r, s = integral(raw), integral(simple)
        terms.append(SeriesTerm(k, inverse_factorial(k), str(raw), str(simple), r.value, s.value, r.error, s.error))
        logger.debug(f"ε^{k}: raw ∫{raw} = {r.value:.12g}, simplified ∫{simple} = {s.value:.12g}")

    volume = scene.spec.volume
    base = volume if volume is not None else 0.0
    report = SteinerReport(
        scene=scene.name,
        order=order,
        volume=volume,
        terms=terms,
        eps=eps,
        raw_values=_series_values(base, [t.raw_integral for t in terms], eps),
        simplified_values=_series_values(base, [t.simplified_integral for t in terms], eps),
        reference=[float(r) for r in reference] if reference is not None else None,
        gauss_bonnet_integral=integral(GAUSS_CURVATURE).value,
        eikonal_deviation=deviation,
    )
    logger.info(f"Tube series of '{scene.name}' to order {order}: ∫(B + C) = {report.gauss_bonnet_integral:.3e}")
    return report
