"""
Sub-Riemannian limit quantities.

k⁰ and k^{0,s} for curves, H₀ and K₀ for surfaces, the point classifications
they depend on, and the checks tying them to the finite-L quantities.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence
import logging

import numpy as np
from scipy.integrate import solve_ivp

from app.config import settings
from app.errors import CharacteristicPointError, FlowDomainError
from app.heisenberg.curves import CurveModel, require_regular
from app.heisenberg.group import contact_form
from app.jets.horizontal import HorizontalJet, ScalarField, as_points, horizontal_jet
from app.jets.jet import Jet, jexp
from app.geometry.riemannian import curve_curvature_L, planar_curvature
from app.geometry.surface import (
    characteristic_ratio,
    gauss_curvature_L,
    mean_curvature_L,
    require_noncharacteristic,
    require_on_surface,
    signed_geodesic_curvature_L,
)

logger = logging.getLogger(__name__)


class PointClass(str, Enum):
    HORIZONTAL = "horizontal"
    NON_HORIZONTAL = "non_horizontal"
    CHARACTERISTIC = "characteristic"
    NON_CHARACTERISTIC = "non_characteristic"


@dataclass
class CurveClassification:
    """
    Horizontal/non-horizontal split of curve points.

    Attributes:
        horizontal: Mask of horizontal points
        measure: |ω(γ̇)| / (|γ̇1| + |γ̇2| + |γ̇3|)
        flagged: Points inside the ambiguity band [τ_h, 10τ_h]
        tau_h: Threshold used
    """
    horizontal: np.ndarray
    measure: np.ndarray
    flagged: np.ndarray
    tau_h: float

    def labels(self) -> List[str]:
        return [
            (PointClass.HORIZONTAL if h else PointClass.NON_HORIZONTAL).value
            for h in np.ravel(self.horizontal)
        ]


def classify_curve_points(pos: np.ndarray, vel: np.ndarray, tau_h: Optional[float] = None) -> CurveClassification:
    """
    Horizontal where |ω(γ̇)|/‖γ̇‖₁ ≤ τ_h.

    Points in the ambiguity band [τ_h, 10τ_h] are flagged in the result and
    logged as a warning, not raised; callers that need a hard failure (the
    boundary term rejects long flagged runs) check `flagged` themselves.
    """
    tau =settings.TAU_H if tau_h is None else tau_h
    w = np.abs(contact_form(pos, vel))
    size = np.sum(np.abs(vel), axis=-1)
    measure = w / size
    horizontal = measure <= tau
    flagged = (measure >= tau) & (measure <= 10.0 * tau)
    if np.any(flagged):
        logger.warning(f"{int(np.count_nonzero(flagged))} curve point(s) within the horizontal ambiguity band")
    return CurveClassification(horizontal, measure, flagged, tau)


@dataclass
class CurvatureReport:
    """
    A limit curvature with its classification and finite-L witnesses.

    Attributes:
        quantity: k0, k0s, K0 or H0
        parameters: Curve parameters or surface points
        value: Limit value at each parameter
        classes: Point class labels
        witnesses: Finite-L values keyed by L
        errors: |witness − value| keyed by L
        monotone: Whether the witness error decreases along the sweep at every sample
        thresholds: Thresholds used for classification
    """
    quantity: str
    parameters: np.ndarray
    value: np.ndarray
    classes: List[str]
    witnesses: Dict[float, np.ndarray] = field(default_factory=dict)
    errors: Dict[float, np.ndarray] = field(default_factory=dict)
    monotone: Optional[bool] = None
    thresholds: Dict[str, float] = field(default_factory=dict)
    flagged: Optional[np.ndarray] = None

    def attach_sweep(self, sweep: Sequence[float], evaluate: Callable[[float], np.ndarray]):
        """Evaluate the finite-L counterpart along a sweep of increasing L"""
        previous = None
        monotone = True
        for L in sorted(float(x) for x in sweep):
            values = evaluate(L)
            err = np.abs(values - self.value)
            self.witnesses[L] = values
            self.errors[L] = err
            if previous is not None and np.any(err > previous + 1e-12):
                monotone = False
            previous = err
        self.monotone = monotone
        return self

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "quantity": self.quantity,
            "parameters": np.asarray(self.parameters).tolist(),
            "value": np.asarray(self.value).tolist(),
            "classes": self.classes,
            "thresholds": self.thresholds,
        }
        if self.flagged is not None:
            data["flagged"] = np.asarray(self.flagged).tolist()
        if self.witnesses:
            data["sweep"] = [
                {"L": L, "value": self.witnesses[L].tolist(), "error": self.errors[L].tolist()}
                for L in sorted(self.witnesses)
            ]
            data["monotone"] = self.monotone
        return data

    def report_rows(self) -> List[Dict[str, Any]]:
        rows = []
        params = np.asarray(self.parameters)
        values = np.ravel(self.value)
        for i, v in enumerate(values):
            row: Dict[str, Any] = {"index": i}
            p = params[i] if params.ndim > 0 and params.shape[0] == values.size else params
            if np.ndim(p) == 0:
                row["t"] = float(p)
            else:
                row.update({f"x{k + 1}": float(c) for k, c in enumerate(np.ravel(p))})
            row["class"] = self.classes[i]
            row[self.quantity] = float(v)
            for L in sorted(self.witnesses):
                row[f"L={L:g}"] = float(np.ravel(self.witnesses[L])[i])
            rows.append(row)
        return rows


# ----------------------------------------------------------------------
# Curves
# ----------------------------------------------------------------------

def curve_curvature_0_values(pos: np.ndarray, vel: np.ndarray, acc: np.ndarray,
                             classes: CurveClassification) -> np.ndarray:
    """Planar curvature at horizontal points, √(γ̇1²+γ̇2²)/|ω(γ̇)| elsewhere"""
    h = np.sqrt(vel[..., 0] ** 2 + vel[..., 1] ** 2)
    w = np.abs(contact_form(pos, vel))
    with np.errstate(divide="ignore", invalid="ignore"):
        non_horizontal = h / w
        horizontal = planar_curvature(vel, acc)
    return np.where(classes.horizontal, horizontal, non_horizontal)


def curve_curvature_0(curve: CurveModel, t, L_sweep: Optional[Sequence[float]] = None,
                      tau_h: Optional[float] = None) -> CurvatureReport:
    """
    Sub-Riemannian curvature k⁰ of a curve.

    Args:
        curve: Regular C² curve
        t: Parameter values
        L_sweep: Optional L values at which k^L is reported alongside
        tau_h: Horizontal threshold, settings.TAU_H when omitted

    Returns:
        CurvatureReport of k⁰

    Raises:
        ZeroVelocityError: γ̇ vanishes
    """
    t = np.asarray(t, dtype=float)
    pos, vel, acc = curve.derivatives(t)
    require_regular(vel)
    classes = classify_curve_points(pos, vel, tau_h)
    value = curve_curvature_0_values(pos, vel, acc, classes)
    report = CurvatureReport("k0", t, value, classes.labels(), thresholds={"tau_h": classes.tau_h},
                             flagged=classes.flagged)
    if L_sweep:
        report.attach_sweep(L_sweep, lambda L: curve_curvature_L(curve, t, L))
    return report


def signed_geodesic_curvature_0_values(field_: ScalarField, pos: np.ndarray, vel: np.ndarray,
                                       classes: CurveClassification, scale: float = 1.0) -> np.ndarray:
    """(p̄γ̇1 + q̄γ̇2)/|ω(γ̇)| at non-horizontal points, exactly 0 at horizontal points"""
    hj = horizontal_jet(field_, pos)
    require_on_surface(hj, pos, scale)
    require_noncharacteristic(hj, pos)
    l = np.hypot(hj.X[..., 0], hj.X[..., 1])
    pbar, qbar = hj.X[..., 0] / l, hj.X[..., 1] / l
    w = np.abs(contact_form(pos, vel))
    with np.errstate(divide="ignore", invalid="ignore"):
        k = (pbar * vel[..., 0] + qbar * vel[..., 1]) / w
    return np.where(classes.horizontal, 0.0, k)


def signed_geodesic_curvature_0(field_: ScalarField, curve: CurveModel, t,
                                L_sweep: Optional[Sequence[float]] = None,
                                tau_h: Optional[float] = None, scale: float = 1.0,
                                unsigned: bool = False) -> CurvatureReport:
    """
    Signed sub-Riemannian geodesic curvature k^{0,s} of a curve on Σ = {u = 0}.

    Raises:
        OffSurfaceError: γ(t) not on Σ
        CharacteristicPointError: γ(t) characteristic
    """
    t = np.asarray(t, dtype=float)
    pos, vel, _ = curve.derivatives(t)
    require_regular(vel)
    classes = classify_curve_points(pos, vel, tau_h)
    value = signed_geodesic_curvature_0_values(field_, pos, vel, classes, scale)
    if unsigned:
        value = np.abs(value)
    report = CurvatureReport("k0" if unsigned else "k0s", t, value, classes.labels(),
                             thresholds={"tau_h": classes.tau_h, "tau_char": settings.TAU_CHAR},
                             flagged=classes.flagged)
    if L_sweep:
        def finite(L):
            k = signed_geodesic_curvature_L(field_, curve, t, L, scale)
            return np.abs(k) if unsigned else k
        report.attach_sweep(L_sweep, finite)
    return report


# ----------------------------------------------------------------------
# Surfaces
# ----------------------------------------------------------------------

@dataclass
class HorizontalGeometry:
    """
    First-order horizontal data of u and the derivatives K₀ and H₀ need.

    Attributes:
        l: ‖∇_H u‖
        pbar, qbar: Components of ν₀
        P0: X3u/‖∇_H u‖
        XP0: (X1P0, X2P0)
        Xpbar: (X1p̄, X2p̄)
        Xqbar: (X1q̄, X2q̄)
    """
    l: np.ndarray
    pbar: np.ndarray
    qbar: np.ndarray
    P0: np.ndarray
    XP0: np.ndarray
    Xpbar: np.ndarray
    Xqbar: np.ndarray


def horizontal_geometry(hj: HorizontalJet) -> HorizontalGeometry:
    p, q, r = hj.X[..., 0], hj.X[..., 1], hj.X[..., 2]
    l = np.hypot(p, q)
    # X_i l for i = 1, 2
    Xl = (p[..., None] * hj.XX[..., :2, 0] + q[..., None] * hj.XX[..., :2, 1]) / l[..., None]
    XP0 = hj.XX[..., :2, 2] / l[..., None] - r[..., None] * Xl / (l ** 2)[..., None]
    Xpbar = hj.XX[..., :2, 0] / l[..., None] - p[..., None] * Xl / (l ** 2)[..., None]
    Xqbar = hj.XX[..., :2, 1] / l[..., None] - q[..., None] * Xl / (l ** 2)[..., None]
    return HorizontalGeometry(l, p / l, q / l, r / l, XP0, Xpbar, Xqbar)


def gaussian_curvature_0_from_jet(hj: HorizontalJet) -> np.ndarray:
    """K₀ = −P₀² − (X2u/l)X1P₀ + (X1u/l)X2P₀"""
    g = horizontal_geometry(hj)
    return -g.P0 ** 2 - g.qbar * g.XP0[..., 0] + g.pbar * g.XP0[..., 1]


def k0_decomposition(hj: HorizontalJet) -> Dict[str, np.ndarray]:
    """−P₀² and −⟨∇_H P₀, Jν₀⟩, whose sum is K₀"""
    g = horizontal_geometry(hj)
    J_nu = np.stack([g.qbar, -g.pbar], axis=-1)
    return {"P0": g.P0, "vertical": -g.P0 ** 2, "horizontal": -np.einsum("...i,...i->...", g.XP0, J_nu)}


def mean_curvature_0_from_jet(hj: HorizontalJet) -> np.ndarray:
    """H₀ = X1(p̄) + X2(q̄)"""
    g = horizontal_geometry(hj)
    return g.Xpbar[..., 0] + g.Xqbar[..., 1]


def _surface_report(quantity: str, field_: ScalarField, points, compute, finite,
                    L_sweep: Optional[Sequence[float]]) -> CurvatureReport:
    pts = as_points(points)
    hj = horizontal_jet(field_, pts)
    require_noncharacteristic(hj, pts)
    value = compute(hj)
    labels = [PointClass.NON_CHARACTERISTIC.value] * int(np.size(value))
    report = CurvatureReport(quantity, pts, value, labels, thresholds={"tau_char": settings.TAU_CHAR})
    if L_sweep:
        report.attach_sweep(L_sweep, lambda L: finite(field_, pts, L))
    return report


def gaussian_curvature_0(field_: ScalarField, points, L_sweep: Optional[Sequence[float]] = None) -> CurvatureReport:
    """
    Sub-Riemannian Gaussian curvature K₀ at points of Σ = {u = 0}.

    Raises:
        CharacteristicPointError: ∇_H u vanishes at some point
    """
    return _surface_report("K0", field_, points, gaussian_curvature_0_from_jet, gauss_curvature_L, L_sweep)


def mean_curvature_0(field_: ScalarField, points, L_sweep: Optional[Sequence[float]] = None) -> CurvatureReport:
    """Sub-Riemannian mean curvature H₀ = div_H ν₀"""
    return _surface_report("H0", field_, points, mean_curvature_0_from_jet, mean_curvature_L, L_sweep)


def classify_surface_points(field_: ScalarField, points, tau_char: Optional[float] = None) -> List[str]:
    tau = settings.TAU_CHAR if tau_char is None else tau_char
    ratio = characteristic_ratio(horizontal_jet(field_, as_points(points)))
    return [
        (PointClass.CHARACTERISTIC if r <= tau else PointClass.NON_CHARACTERISTIC).value
        for r in np.ravel(ratio)
    ]


# ----------------------------------------------------------------------
# Change of defining function
# ----------------------------------------------------------------------

@dataclass
class DefiningFunctionReport:
    """Agreement of K₀, ν₀, P₀ computed from u and from e^σ u"""
    k0_difference: float
    nu_difference: float
    p0_difference: float
    identity_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.k0_difference, self.nu_difference, self.p0_difference,
                   self.identity_residual) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k0_difference": self.k0_difference,
            "nu_difference": self.nu_difference,
            "p0_difference": self.p0_difference,
            "identity_residual": self.identity_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def rescaled_field(field_: ScalarField, sigma: ScalarField) -> ScalarField:
    """v = e^σ u"""
    def v(x1: Jet, x2: Jet, x3: Jet) -> Jet:
        return jexp(sigma(x1, x2, x3)) * field_(x1, x2, x3)
    return v


def defining_function_independence_check(field_: ScalarField, sigma: ScalarField, points,
                                         tolerance: float = 1e-8) -> DefiningFunctionReport:
    """
    Compare the geometry of Σ computed from u and from v = e^σ u.

    Besides K₀, ν₀ and P₀ this checks
    ∇_H P₀(v) = ∇_H P₀(u) + (X3σ − P₀⟨ν₀, ∇_Hσ⟩) ν₀ on Σ.
    """
    pts = as_points(points)
    hu = horizontal_jet(field_, pts)
    hv = horizontal_jet(rescaled_field(field_, sigma), pts)
    hs = horizontal_jet(sigma, pts)
    require_on_surface(hu, pts)
    require_noncharacteristic(hu, pts)
    gu, gv = horizontal_geometry(hu), horizontal_geometry(hv)

    nu = np.stack([gu.pbar, gu.qbar], axis=-1)
    nv = np.stack([gv.pbar, gv.qbar], axis=-1)
    coefficient = hs.X[..., 2] - gu.P0 * np.einsum("...i,...i->...", nu, hs.X[..., :2])
    predicted = gu.XP0 + coefficient[..., None] * nu

    report = DefiningFunctionReport(
        k0_difference=float(np.max(np.abs(gaussian_curvature_0_from_jet(hu) - gaussian_curvature_0_from_jet(hv)))),
        nu_difference=float(np.max(np.abs(nu - nv))),
        p0_difference=float(np.max(np.abs(gu.P0 - gv.P0))),
        identity_residual=float(np.max(np.abs(gv.XP0 - predicted))),
        tolerance=tolerance,
    )
    logger.info(f"Defining-function check on {pts.shape[0] if pts.ndim > 1 else 1} point(s): "
                f"{'passed' if report.passed else 'failed'}")
    return report


# ----------------------------------------------------------------------
# Legendrian curves
# ----------------------------------------------------------------------

@dataclass
class LegendrianReport:
    """Signed horizontal curvature along the E1-flow against −H₀"""
    t: np.ndarray
    points: np.ndarray
    curvature: np.ndarray
    mean_curvature: np.ndarray

    @property
    def max_difference(self) -> float:
        return float(np.max(np.abs(self.curvature + self.mean_curvature)))


def _e1_velocity(field_: ScalarField, x: np.ndarray) -> np.ndarray:
    hj = horizontal_jet(field_, x)
    require_noncharacteristic(hj, x)
    l = np.hypot(hj.X[..., 0], hj.X[..., 1])
    pbar, qbar = hj.X[..., 0] / l, hj.X[..., 1] / l
    return np.stack([qbar, -pbar, -0.5 * (qbar * x[..., 1] + pbar * x[..., 0])], axis=-1)


def legendrian_curvature(field_: ScalarField, point, span: float = 0.1, samples: int = 9,
                         h: float = 1e-5) -> LegendrianReport:
    """
    Integrate the E1-flow through a point and compare its curvature with −H₀.

    The flow is horizontal and unit speed, so its signed horizontal curvature
    is γ̇1γ̈2 − γ̇2γ̈1; γ̈ is the central difference of E1 along the flow.

    Raises:
        FlowDomainError: The flow runs into a characteristic point
    """
    start = np.asarray(point, dtype=float)

    def rhs(_t, y):
        return _e1_velocity(field_, y[None, :])[0]

    try:
        backward = solve_ivp(rhs, (0.0, -span), start, method="RK45", rtol=1e-11, atol=1e-12, dense_output=True)
        forward = solve_ivp(rhs, (0.0, span), start, method="RK45", rtol=1e-11, atol=1e-12, dense_output=True)
    except CharacteristicPointError as e:
        raise FlowDomainError(f"E1-flow reached a characteristic point: {e.message}", span=span)
    for solution in (backward, forward):
        if solution.status != 0:
            raise FlowDomainError(f"E1-flow integration failed: {solution.message}", span=span)

    def position(s):
        s = np.atleast_1d(s)
        out = np.empty(s.shape + (3,))
        neg = s < 0
        if np.any(neg):
            out[neg] = backward.sol(s[neg]).T
        if np.any(~neg):
            out[~neg] = forward.sol(s[~neg]).T
        return out

    inner = 0.8 * span
    t = np.linspace(-inner, inner, samples)
    pts = position(t)
    vel = _e1_velocity(field_, pts)
    acc = (_e1_velocity(field_, position(t + h)) - _e1_velocity(field_, position(t - h))) / (2.0 * h)
    kappa = vel[..., 0] * acc[..., 1] - vel[..., 1] * acc[..., 0]
    H0 = mean_curvature_0_from_jet(horizontal_jet(field_, pts))
    return LegendrianReport(t, pts, kappa, H0)
