"""
The pointwise quantities A..E of an eikonal function δ and the check of the
g-derivation table along the flow of ∇_H δ.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional
import logging

import numpy as np
from scipy.integrate import solve_ivp

from app.config import settings
from app.errors import FlowDomainError, JetDomainError
from app.jets.horizontal import HorizontalJet, ScalarField, as_points, horizontal_jet
from app.steiner.gpoly import G_TABLE, SYMBOL_NAMES, SYMBOLS, GPolynomial

logger = logging.getLogger(__name__)

G_CHECK_TOL = 1e-6


@dataclass
class SteinerCoefficients:
    """
    A = Δ_H δ, B = −(X3δ)², C = (X1δ)(X3X2δ) − (X2δ)(X3X1δ), D = X3X3δ,
    E = (X3X1δ)² + (X3X2δ)², batched over points.

    Attributes:
        eikonal: ‖∇_H δ‖ at the same points
    """
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    eikonal: Optional[np.ndarray] = None

    def values(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in SYMBOL_NAMES}

    def evaluate(self, poly: GPolynomial) -> np.ndarray:
        return poly.evaluate(self.values())

    def to_dict(self) -> Dict[str, Any]:
        out = {name: np.asarray(v).tolist() for name, v in self.values().items()}
        out["eikonal"] = np.asarray(self.eikonal).tolist()
        return out


def coefficients_from_jet(hj: HorizontalJet) -> SteinerCoefficients:
    X, XX = hj.X, hj.XX
    return SteinerCoefficients(
        A=XX[..., 0, 0] + XX[..., 1, 1],
        B=-X[..., 2] ** 2,
        C=X[..., 0] * XX[..., 2, 1] - X[..., 1] * XX[..., 2, 0],
        D=XX[..., 2, 2],
        E=XX[..., 2, 0] ** 2 + XX[..., 2, 1] ** 2,
        eikonal=np.hypot(X[..., 0], X[..., 1]),
    )


def eikonal_deviation(coeffs: SteinerCoefficients) -> float:
    return float(np.max(np.abs(coeffs.eikonal - 1.0))) if np.size(coeffs.eikonal) else 0.0


def coefficients_at(delta: ScalarField, points, tau_eik: Optional[float] = None) -> SteinerCoefficients:
    """
    A..E of δ at a batch of points.

    Warns when ‖∇_H δ‖ differs from 1 by more than τ_eik; the formulas
    assume δ is eikonal.
    """
    tau = settings.TAU_EIK if tau_eik is None else tau_eik
    coeffs = coefficients_from_jet(horizontal_jet(delta, as_points(points)))
    deviation = eikonal_deviation(coeffs)
    if deviation > tau:
        logger.warning(f"δ is not eikonal: max |‖∇_H δ‖ − 1| = {deviation:.3e} > {tau:g}")
    return coeffs


# ----------------------------------------------------------------------
# g-identity check
# ----------------------------------------------------------------------

def gradient_flow_velocity(delta: ScalarField, x: np.ndarray) -> np.ndarray:
    """Euclidean components of ∇_H δ = (X1δ)X1 + (X2δ)X2"""
    hj = horizontal_jet(delta, np.asarray(x, dtype=float)[None, :])
    a, b = hj.X[0, 0], hj.X[0, 1]
    return np.array([a, b, 0.5 * (x[0] * b - x[1] * a)])


def _flow(delta: ScalarField, start: np.ndarray, s: float) -> np.ndarray:
    def rhs(_t, y):
        return gradient_flow_velocity(delta, y)

    try:
        solution = solve_ivp(rhs, (0.0, s), start, method="DOP853", rtol=1e-13, atol=1e-14)
    except JetDomainError as e:
        raise FlowDomainError(f"∇_H δ flow left the domain of δ: {e.message}", step=s)
    if solution.status != 0 or not np.all(np.isfinite(solution.y[:, -1])):
        raise FlowDomainError(f"∇_H δ flow failed: {solution.message}", step=s)
    return solution.y[:, -1]


@dataclass
class GIdentityReport:
    """
    Finite-difference check of g(s) for s ∈ {1, A, B, C, D, E}.

    Attributes:
        point: Base point
        h: Flow step of the central difference
        measured: Fourth-order central difference of s along the flow
        expected: The table's right side at p
        residuals: |measured − expected|
        tolerance: Largest residual that passes
    """
    point: list
    h: float
    measured: Dict[str, float]
    expected: Dict[str, float]
    residuals: Dict[str, float]
    tolerance: float
    eikonal: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": self.point,
            "h": self.h,
            "measured": self.measured,
            "expected": self.expected,
            "residuals": self.residuals,
            "tolerance": self.tolerance,
            "eikonal": self.eikonal,
            "passed": self.passed,
        }


def g_identity_check(delta: ScalarField, point, h: float = 1e-3,
                     tolerance: float = G_CHECK_TOL) -> GIdentityReport:
    """
    Compare the g-table with derivatives of A..E along the ∇_H δ flow.

    The derivative is the fourth-order central difference over the flow
    points φ_{±h}(p) and φ_{±2h}(p). Residuals are reported, not asserted:
    the table is known for the cc distance, not for every eikonal function.

    Raises:
        FlowDomainError: The flow leaves the domain of δ
    """
    p = np.asarray(point, dtype=float)
    steps = (2.0 * h, h, -h, -2.0 * h)
    ends = coefficients_at(delta, np.stack([_flow(delta, p, s) for s in steps]), tau_eik=np.inf)
    here = coefficients_at(delta, p[None, :])

    values = {name: float(v[0]) for name, v in here.values().items()}
    measured = {"1": 0.0}
    expected = {"1": 0.0}
    for name, symbol in zip(SYMBOL_NAMES, SYMBOLS):
        s2, s1, m1, m2 = getattr(ends, name)
        measured[name] = float((-s2 + 8.0 * s1 - 8.0 * m1 + m2) / (12.0 * h))
        expected[name] = float(GPolynomial(G_TABLE[symbol]).evaluate(values))
    residuals = {k: abs(measured[k] - expected[k]) for k in measured}
    report = GIdentityReport([float(c) for c in p], h, measured, expected, residuals, tolerance,
                             float(here.eikonal[0]))
    logger.info(f"g-identity check at {report.point}: max residual {report.max_residual:.3e}")
    return report
