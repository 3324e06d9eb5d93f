"""
Curve and surface measures.

Curves: the g_L length ‖γ̇‖_L dt, the horizontal length ‖γ̇_H‖ dt and the
boundary measure dγ̇ = |ω(γ̇)| dt, the scaled limit of the g_L length.
Surfaces: the Heisenberg perimeter measure, parametric (‖M n‖ dv dw, rows of
M the frame fields X1, X2) or implicit (‖∇_H u‖/‖∇u‖ times Euclidean area),
and its finite-L counterpart ‖M_L n‖ with the extra row X3/√L.
"""
from enum import Enum
from typing import Callable, Optional, Sequence
import logging
import math

import numpy as np

from app.errors import GeometryError, InputError
from app.heisenberg.curves import CurveModel
from app.heisenberg.group import contact_form
from app.jets.horizontal import ScalarField, horizontal_jet
from app.geometry.patches import PatchModel
from app.geometry.riemannian import speed_L, validate_L
from app.quadrature.engine import (
    Bounds,
    QuadratureResult,
    QuadratureSpec,
    integrate_interval,
    integrate_rectangle,
)

logger = logging.getLogger(__name__)

# f(points, t) along a curve, f(points, v, w) on a patch
CurveIntegrand = Callable[[np.ndarray, np.ndarray], np.ndarray]
PatchIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


class MeasureKind(str, Enum):
    RIEMANNIAN_LENGTH = "riemannian_length"
    HORIZONTAL_LENGTH = "horizontal_length"
    SUB_RIEMANNIAN_BOUNDARY = "sub_riemannian_boundary"
    PERIMETER_IMPLICIT = "perimeter_implicit"
    PERIMETER_PARAMETRIC = "perimeter_parametric"

    @property
    def is_curve_measure(self) -> bool:
        return self in (MeasureKind.RIEMANNIAN_LENGTH, MeasureKind.HORIZONTAL_LENGTH,
                        MeasureKind.SUB_RIEMANNIAN_BOUNDARY)


# ----------------------------------------------------------------------
# Curves
# ----------------------------------------------------------------------

def length_density(curve: CurveModel, t, kind: MeasureKind, L: Optional[float] = None) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if kind == MeasureKind.RIEMANNIAN_LENGTH:
        if L is None:
            raise InputError("RiemannianLength needs L")
        return speed_L(curve, t, L)
    pos, vel, _ = curve.derivatives(t)
    if kind == MeasureKind.SUB_RIEMANNIAN_BOUNDARY:
        return np.abs(contact_form(pos, vel))
    if kind == MeasureKind.HORIZONTAL_LENGTH:
        return np.hypot(vel[..., 0], vel[..., 1])
    raise InputError(f"{kind.value} is a surface measure", kind=kind.value)


def length_integral(curve: CurveModel, f: Optional[CurveIntegrand] = None,
                    kind: MeasureKind = MeasureKind.SUB_RIEMANNIAN_BOUNDARY, L: Optional[float] = None,
                    spec: Optional[QuadratureSpec] = None, span: Optional[Sequence[float]] = None,
                    singular: Optional[Callable[[Bounds], bool]] = None) -> QuadratureResult:
    """
    ∫_γ f dμ for a curve measure μ.

    Args:
        curve: Regular curve
        f: Integrand f(points, t); 1 when omitted
        kind: RIEMANNIAN_LENGTH (needs L), HORIZONTAL_LENGTH or SUB_RIEMANNIAN_BOUNDARY
        L: Approximation parameter for RIEMANNIAN_LENGTH
        spec: Quadrature configuration
        span: Parameter interval, the curve's own span when omitted

    Raises:
        QuadratureError: Tolerance not met
    """
    if not kind.is_curve_measure:
        raise InputError(f"{kind.value} is a surface measure", kind=kind.value)
    if L is not None:
        L = validate_L(L)
    t0, t1 = span if span is not None else curve.span()

    def integrand(t):
        density = length_density(curve, t, kind, L)
        if f is None:
            return density
        return f(curve.position(t), t) * density

    return integrate_interval(integrand, t0, t1, spec, singular)


# ----------------------------------------------------------------------
# Surfaces
# ----------------------------------------------------------------------

def horizontal_matrix(points, L: Optional[float] = None) -> np.ndarray:
    """
    Rows X1 = (1, 0, −x2/2) and X2 = (0, 1, x1/2), plus (0, 0, 1/√L) when L is given.

    Returns:
        Array of shape (..., 2, 3) or (..., 3, 3)
    """
    p = np.asarray(points, dtype=float)
    one, zero = np.ones(p.shape[:-1]), np.zeros(p.shape[:-1])
    rows = [
        np.stack([one, zero, -0.5 * p[..., 1]], axis=-1),
        np.stack([zero, one, 0.5 * p[..., 0]], axis=-1),
    ]
    if L is not None:
        rows.append(np.stack([zero, zero, one / math.sqrt(validate_L(L))], axis=-1))
    return np.stack(rows, axis=-2)


def perimeter_density_parametric(patch: PatchModel, v, w, L: Optional[float] = None) -> np.ndarray:
    """‖M(f_v × f_w)‖, or ‖M_L(f_v × f_w)‖ = (1/√L)·(g_L area density) when L is given"""
    f, fv, fw, _, _, _ = patch.derivatives(v, w)
    n = np.cross(fv, fw)
    return np.linalg.norm(np.einsum("...ij,...j->...i", horizontal_matrix(f, L), n), axis=-1)


def perimeter_density_implicit(field_: ScalarField, points) -> np.ndarray:
    """‖∇_H u‖/‖∇u‖ against Euclidean area"""
    hj = horizontal_jet(field_, points)
    g = np.linalg.norm(hj.grad, axis=-1)
    if np.any(g <= 0.0):
        raise GeometryError("defining function has a critical point on the chart",
                            count=int(np.count_nonzero(g <= 0.0)))
    return np.hypot(hj.X[..., 0], hj.X[..., 1]) / g


def perimeter_integral_parametric(patch: PatchModel, integrand: Optional[PatchIntegrand],
                                  v_range: Sequence[float], w_range: Sequence[float],
                                  spec: Optional[QuadratureSpec] = None, L: Optional[float] = None,
                                  singular: Optional[Callable[[Bounds], bool]] = None) -> QuadratureResult:
    """
    ∫_D integrand·‖M(f_v × f_w)‖ dv dw.

    Args:
        patch: Immersed patch f(v, w)
        integrand: f(points, v, w); 1 when omitted
        v_range, w_range: Parameter rectangle D
        spec: Quadrature configuration
        L: When given, use the finite-L density ‖M_L n‖ instead
        singular: Cells integrated at the singular order

    Raises:
        QuadratureError: Tolerance not met
    """

    def density(V, W):
        d = perimeter_density_parametric(patch, V, W, L)
        if integrand is None:
            return d
        return integrand(patch.point(V, W), V, W) * d

    return integrate_rectangle(density, v_range, w_range, spec, singular)


def perimeter_integral_implicit(field_: ScalarField, chart: PatchModel, integrand: Optional[PatchIntegrand],
                                v_range: Sequence[float], w_range: Sequence[float],
                                spec: Optional[QuadratureSpec] = None,
                                singular: Optional[Callable[[Bounds], bool]] = None) -> QuadratureResult:
    """
    ∫ f·(‖∇_H u‖/‖∇u‖) dH² over the part of {u = 0} covered by a chart.

    The chart only pulls back Euclidean area; the perimeter density comes from u.

    Raises:
        GeometryError: ∇u vanishes on the chart or the chart degenerates
        QuadratureError: Tolerance not met
    """

    def density(V, W):
        f, fv, fw, _, _, _ = chart.derivatives(V, W)
        area = np.linalg.norm(np.cross(fv, fw), axis=-1)
        if np.any(area <= 0.0):
            raise GeometryError("chart is not immersed", count=int(np.count_nonzero(area <= 0.0)))
        d = perimeter_density_implicit(field_, f) * area
        if integrand is None:
            return d
        return integrand(f, V, W) * d

    return integrate_rectangle(density, v_range, w_range, spec, singular)
