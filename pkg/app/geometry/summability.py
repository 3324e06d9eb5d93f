"""
Summability diagnostic for K₀ near isolated characteristic points.

Around each point the surface is charted as a polar x3-graph and ∫|K₀| dH³_cc
is computed over annuli between consecutive radii of a decreasing sequence.
Geometrically shrinking annulus integrals indicate a finite limit; the ratio
|K₀|·‖∇_H u‖²/‖∇u‖ is sampled as an empirical constant for the bound
|K₀| dσ_H ≤ C/‖∇_H u‖ dH². Nothing is asserted; the report carries the trend.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence
import logging
import math

import numpy as np

from app.config import settings
from app.jets.horizontal import ScalarField, horizontal_jet
from app.geometry.patches import PolarGraphChart
from app.geometry.surface import characteristic_ratio
from app.geometry.subriemannian import gaussian_curvature_0_from_jet
from app.quadrature.engine import QuadratureSpec
from app.quadrature.measures import perimeter_integral_implicit

logger = logging.getLogger(__name__)


class SummabilityTrend(str, Enum):
    CONVERGING = "converging"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


@dataclass
class AnnulusTrend:
    """
    Annulus integrals around one characteristic point.

    Attributes:
        point: The characteristic point
        radii: Decreasing radii; annulus k spans [radii[k+1], radii[k]]
        integrals: ∫|K₀| dH³_cc per annulus
        cumulative: ∫|K₀| dH³_cc over [radii[k+1], radii[0]]
        ratios: integrals[k+1]/integrals[k]
        bound_constants: max |K₀|·‖∇_H u‖²/‖∇u‖ sampled per annulus
        trend: Converging, diverging or inconclusive
        tail_estimate: Geometric tail below the smallest radius, when converging
    """
    point: List[float]
    radii: List[float]
    integrals: List[float]
    cumulative: List[float]
    ratios: List[float]
    bound_constants: List[float]
    trend: SummabilityTrend
    tail_estimate: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": self.point,
            "radii": self.radii,
            "integrals": self.integrals,
            "cumulative": self.cumulative,
            "ratios": self.ratios,
            "bound_constants": self.bound_constants,
            "trend": self.trend.value,
            "tail_estimate": self.tail_estimate,
        }


@dataclass
class SummabilityReport:
    entries: List[AnnulusTrend] = field(default_factory=list)
    skipped: List[List[float]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.entries

    def to_dict(self) -> Dict[str, Any]:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "skipped": self.skipped,
        }

    def report_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for e in self.entries:
            for k, value in enumerate(e.integrals):
                rows.append({
                    "x1": e.point[0], "x2": e.point[1], "x3": e.point[2],
                    "r_inner": e.radii[k + 1], "r_outer": e.radii[k],
                    "integral": value, "cumulative": e.cumulative[k],
                    "bound_constant": e.bound_constants[k], "trend": e.trend.value,
                })
        return rows


def classify_trend(ratios: Sequence[float], threshold: float = 0.9) -> SummabilityTrend:
    if not ratios:
        return SummabilityTrend.INCONCLUSIVE
    if all(r <= threshold for r in ratios):
        return SummabilityTrend.CONVERGING
    if all(r >= 1.0 for r in ratios[-2:]):
        return SummabilityTrend.DIVERGING
    return SummabilityTrend.INCONCLUSIVE


def _bound_constant(field_: ScalarField, chart: PolarGraphChart, r_in: float, r_out: float,
                    samples: int = 16) -> float:
    rho = np.linspace(r_in, r_out, samples)
    theta = np.linspace(0.0, 2.0 * math.pi, 2 * samples, endpoint=False)
    R, T = np.meshgrid(rho, theta, indexing="ij")
    hj = horizontal_jet(field_, chart.point(R, T))
    l2 = hj.X[..., 0] ** 2 + hj.X[..., 1] ** 2
    k0 = gaussian_curvature_0_from_jet(hj)
    return float(np.max(np.abs(k0) * l2 / np.linalg.norm(hj.grad, axis=-1)))


def annulus_trend(field_: ScalarField, point, radii: Sequence[float],
                  spec: Optional[QuadratureSpec] = None) -> AnnulusTrend:
    """∫|K₀| dH³_cc over the annuli of a decreasing radius sequence around one point"""
    chart = PolarGraphChart(field_, point)
    radii = [float(r) for r in radii]

    def abs_k0(points, _v, _w):
        return np.abs(gaussian_curvature_0_from_jet(horizontal_jet(field_, points)))

    integrals, constants = [], []
    for r_out, r_in in zip(radii, radii[1:]):
        result = perimeter_integral_implicit(field_, chart, abs_k0, (r_in, r_out), (0.0, 2.0 * math.pi), spec)
        integrals.append(result.value)
        constants.append(_bound_constant(field_, chart, r_in, r_out))
    cumulative = list(np.cumsum(integrals))
    ratios = [b / a for a, b in zip(integrals, integrals[1:]) if a > 0.0]
    trend = classify_trend(ratios)
    tail = None
    if trend == SummabilityTrend.CONVERGING and ratios:
        r = ratios[-1]
        tail = integrals[-1] * r / (1.0 - r)
    logger.info(f"Summability near {list(np.round(point, 6))}: {trend.value}, ratios {np.round(ratios, 4).tolist()}")
    return AnnulusTrend([float(c) for c in point], radii, integrals, [float(c) for c in cumulative],
                        ratios, constants, trend, tail)


def summability_diagnostic(field_: ScalarField, points, radii: Optional[Sequence[float]] = None,
                           spec: Optional[QuadratureSpec] = None,
                           tau_char: Optional[float] = None) -> SummabilityReport:
    """
    Annulus integrals of |K₀| around characteristic points of {u = 0}.

    Args:
        field_: Defining function u
        points: Candidate characteristic points (possibly empty)
        radii: Decreasing annulus radii; settings.EPS_SEQUENCE when omitted
        spec: Quadrature configuration
        tau_char: Characteristic threshold; candidates above it are skipped

    Returns:
        SummabilityReport, empty when no candidate is characteristic
    """
    radii = list(settings.EPS_SEQUENCE if radii is None else radii)
    tau = settings.TAU_CHAR if tau_char is None else tau_char
    report = SummabilityReport()
    for p in np.asarray(points, dtype=float).reshape(-1, 3):
        ratio = float(characteristic_ratio(horizontal_jet(field_, p[None, :]))[0])
        if ratio > math.sqrt(tau):
            logger.warning(f"Skipping {p.tolist()}: not characteristic (ratio {ratio:.3e})")
            report.skipped.append(p.tolist())
            continue
        report.entries.append(annulus_trend(field_, p, radii, spec))
    return report
