"""
Surfaces Σ = {u = 0} in (ℝ³, g_L).

All frame quantities come from one order-2 jet of the defining function, so
second derivatives of u enter exactly. Vectors are given by coefficients in
the g_L-orthonormal frame F = {X1, X2, X3/√L}.
"""
from dataclasses import dataclass
from typing import Optional
import logging
import math

import numpy as np

from app.config import settings
from app.errors import CharacteristicPointError, OffSurfaceError
from app.heisenberg.curves import CurveModel, require_regular
from app.jets.horizontal import HorizontalJet, ScalarField, as_points, horizontal_jet
from app.geometry.riemannian import (
    validate_L,
    covariant_accel_from_derivatives,
    curvature_from_vectors,
    frame_connection,
    inner_L,
    sectional_curvature,
    velocity_frame_L,
)

logger = logging.getLogger(__name__)


@dataclass
class SurfaceFrame:
    """
    Adapted frame of Σ at a batch of points.

    Attributes:
        pbar, qbar: X1u/l, X2u/l
        rbarL: r/l_L with r = X3^L u = X3u/√L
        l: ‖∇_H u‖
        lL: ‖∇_L u‖_L
        E1: q̄X1 − p̄X2 in F, shape (..., 3)
        E2: r̄_L p̄X1 + r̄_L q̄X2 − (l/l_L)X3^L in F
        nuL: ∇_L u/‖∇_L u‖_L in F
        L: Approximation parameter
    """
    pbar: np.ndarray
    qbar: np.ndarray
    rbarL: np.ndarray
    l: np.ndarray
    lL: np.ndarray
    E1: np.ndarray
    E2: np.ndarray
    nuL: np.ndarray
    L: float

    def gram(self) -> np.ndarray:
        """Gram matrix of (E1, E2, ν_L), identity up to rounding"""
        basis = np.stack([self.E1, self.E2, self.nuL], axis=-2)
        return np.einsum("...ik,...jk->...ij", basis, basis)

    def orthonormality_defect(self) -> float:
        return float(np.max(np.abs(self.gram() - np.eye(3))))


@dataclass
class SecondFundamentalForm:
    """II^L_ab = ⟨∇_{E_a}ν_L, E_b⟩_L, symmetric, shape (..., 2, 2)"""
    matrix: np.ndarray
    L: float
    asymmetry: np.ndarray

    @property
    def trace(self) -> np.ndarray:
        return self.matrix[..., 0, 0] + self.matrix[..., 1, 1]

    @property
    def det(self) -> np.ndarray:
        m = self.matrix
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def characteristic_ratio(hj: HorizontalJet) -> np.ndarray:
    """‖∇_H u‖/‖∇u‖, the scale-free characteristic indicator"""
    l = np.hypot(hj.X[..., 0], hj.X[..., 1])
    g = np.linalg.norm(hj.grad, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(g > 0.0, l / g, 0.0)


def require_noncharacteristic(hj: HorizontalJet, points: np.ndarray, tau_char: Optional[float] = None):
    tau = settings.TAU_CHAR if tau_char is None else tau_char
    bad = characteristic_ratio(hj) <= tau
    if np.any(bad):
        first = np.asarray(points)[bad][0]
        raise CharacteristicPointError(
            f"∇_H u vanishes (ratio ≤ {tau}) at {int(np.count_nonzero(bad))} point(s)",
            count=int(np.count_nonzero(bad)),
            point=[float(c) for c in first],
            tau_char=tau,
        )


def require_on_surface(hj: HorizontalJet, points: np.ndarray, scale: float = 1.0,
                       tau_on: Optional[float] = None):
    """|u| ≤ τ_on·‖∇u‖·scale at every point"""
    tau = settings.TAU_ON if tau_on is None else tau_on
    g = np.linalg.norm(hj.grad, axis=-1)
    bad = np.abs(hj.value) > tau * np.maximum(g, 1e-300) * max(scale, 1.0)
    if np.any(bad):
        worst = float(np.max(np.abs(hj.value)))
        raise OffSurfaceError(
            f"{int(np.count_nonzero(bad))} point(s) off the surface (max |u| = {worst:.3e})",
            count=int(np.count_nonzero(bad)),
            max_residual=worst,
        )


def frame_from_jet(hj: HorizontalJet, L: float) -> SurfaceFrame:
    """Adapted frame from precomputed frame derivatives of u"""
    L = validate_L(L)
    s = math.sqrt(L)
    p, q = hj.X[..., 0], hj.X[..., 1]
    r = hj.X[..., 2] / s
    l = np.hypot(p, q)
    lL = np.sqrt(p * p + q * q + r * r)
    pbar, qbar = p / l, q / l
    rbarL = r / lL
    zero = np.zeros_like(l)
    E1 = np.stack([qbar, -pbar, zero], axis=-1)
    E2 = np.stack([rbarL * pbar, rbarL * qbar, -l / lL], axis=-1)
    nuL = np.stack([p / lL, q / lL, rbarL], axis=-1)
    return SurfaceFrame(pbar, qbar, rbarL, l, lL, E1, E2, nuL, L)


def surface_frame(field: ScalarField, points, L: float, tau_char: Optional[float] = None) -> SurfaceFrame:
    """
    Adapted orthonormal frame {E1, E2, ν_L} of Σ = {u = 0}.

    Args:
        field: Defining function u
        points: Points of Σ, shape (..., 3)
        L: Approximation parameter
        tau_char: Characteristic threshold, settings.TAU_CHAR when omitted

    Raises:
        CharacteristicPointError: ∇_H u vanishes at some point
    """
    pts = as_points(points)
    hj = horizontal_jet(field, pts)
    require_noncharacteristic(hj, pts, tau_char)
    return frame_from_jet(hj, L)


def _normal_derivatives(hj: HorizontalJet, L: float) -> np.ndarray:
    """D[..., i, k] = F_i(ν_k)"""
    s = math.sqrt(L)
    scale = np.array([1.0, 1.0, 1.0 / s])
    Y = hj.X * scale
    # F_i(Y_k) = (X_i X_k u)·scale_i·scale_k
    FY = hj.XX * scale[:, None] * scale[None, :]
    lL = np.linalg.norm(Y, axis=-1)
    FlL = np.einsum("...k,...ik->...i", Y, FY) / lL[..., None]
    return FY / lL[..., None, None] - Y[..., None, :] * FlL[..., :, None] / (lL ** 2)[..., None, None]


def second_fundamental_form_from_jet(hj: HorizontalJet, L: float) -> SecondFundamentalForm:
    L = validate_L(L)
    frame = frame_from_jet(hj, L)
    D = _normal_derivatives(hj, L)
    C = frame_connection(L)
    E = np.stack([frame.E1, frame.E2], axis=-2)
    # ∇_{E_a}ν = Σ_k E_a(ν_k) F_k + Σ_ij (E_a)_i ν_j ∇_{F_i}F_j
    directional = np.einsum("...ai,...ik->...ak", E, D)
    connection = np.einsum("...ai,...j,ijk->...ak", E, frame.nuL, C)
    grad_nu = directional + connection
    raw = np.einsum("...ak,...bk->...ab", grad_nu, E)
    sym = 0.5 * (raw + np.swapaxes(raw, -1, -2))
    return SecondFundamentalForm(sym, L, np.abs(raw[..., 0, 1] - raw[..., 1, 0]))


def second_fundamental_form(field: ScalarField, points, L: float,
                            tau_char: Optional[float] = None) -> SecondFundamentalForm:
    """
    Second fundamental form of Σ in (ℝ³, g_L) in the basis {E1, E2}.

    Raises:
        CharacteristicPointError: ∇_H u vanishes at some point
    """
    pts = as_points(points)
    hj = horizontal_jet(field, pts)
    require_noncharacteristic(hj, pts, tau_char)
    return second_fundamental_form_from_jet(hj, L)


def mean_curvature_L(field: ScalarField, points, L: float) -> np.ndarray:
    return second_fundamental_form(field, points, L).trace


def ambient_sectional_L(frame: SurfaceFrame) -> np.ndarray:
    """K̄_L(E1, E2) from the curvature tensor of g_L"""
    return sectional_curvature(frame.E1, frame.E2, frame.L)


def ambient_sectional_closed_form(rbarL, L: float) -> np.ndarray:
    """L/4 − L r̄_L²"""
    return L / 4.0 - L * np.asarray(rbarL) ** 2


def gauss_curvature_L(field: ScalarField, points, L: float) -> np.ndarray:
    """K_L = K̄_L(E1, E2) + det II^L"""
    pts = as_points(points)
    hj = horizontal_jet(field, pts)
    require_noncharacteristic(hj, pts)
    frame = frame_from_jet(hj, L)
    return ambient_sectional_L(frame) + second_fundamental_form_from_jet(hj, L).det


def _tangential_parts(field: ScalarField, curve: CurveModel, t, L: float, scale: float,
                      tau_on: Optional[float] = None):
    pos, vel, acc = curve.derivatives(t)
    require_regular(vel)
    hj = horizontal_jet(field, pos)
    require_on_surface(hj, pos, scale, tau_on)
    require_noncharacteristic(hj, pos)
    frame = frame_from_jet(hj, L)
    d = covariant_accel_from_derivatives(pos, vel, acc, L)
    v = velocity_frame_L(pos, vel, L)
    a, b = inner_L(v, frame.E1), inner_L(v, frame.E2)
    c, e = inner_L(d, frame.E1), inner_L(d, frame.E2)
    return a, b, c, e


def signed_geodesic_curvature_L(field: ScalarField, curve: CurveModel, t, L: float,
                                scale: float = 1.0, tau_on: Optional[float] = None) -> np.ndarray:
    """
    k^{L,s} = ⟨D_t^Σ γ̇, J_L γ̇⟩_L / ‖γ̇‖_L³ with J_L(aE1 + bE2) = −bE1 + aE2.

    Raises:
        OffSurfaceError: γ(t) not on Σ within τ_on
        CharacteristicPointError: γ(t) characteristic
    """
    a, b, c, e = _tangential_parts(field, curve, t, L, scale, tau_on)
    return (a * e - b * c) / (a * a + b * b) ** 1.5


def geodesic_curvature_L(field: ScalarField, curve: CurveModel, t, L: float, scale: float = 1.0) -> np.ndarray:
    """Unsigned k^L_{γ,Σ} from the tangential projection of D_tγ̇"""
    a, b, c, e = _tangential_parts(field, curve, t, L, scale)
    return curvature_from_vectors(np.stack([c, e], axis=-1), np.stack([a, b], axis=-1))
