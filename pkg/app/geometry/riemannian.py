"""
Finite-L Riemannian geometry of (ℝ³, g_L).

g_L makes {X1, X2, X3/√L} orthonormal. Vector quantities along curves and
surfaces are expressed in that orthonormal frame, written F = {F1, F2, F3}
below, so inner products are plain dot products of coefficient arrays.

Usage:
    from app.geometry.riemannian import curve_curvature_L

    k = curve_curvature_L(curve, np.linspace(0, 1, 50), L=1e4)
"""
from typing import Tuple
import logging
import math

import numpy as np
from pydantic import BaseModel, field_validator

from app.heisenberg.curves import CurveModel, require_regular
from app.heisenberg.frame import frame_from_euclidean_array
from app.heisenberg.group import contact_form
from app.jets.jet import Jet

logger = logging.getLogger(__name__)


class ApproximationParams(BaseModel):
    """Parameter of the Riemannian approximation scheme"""
    L: float

    class Config:
        frozen = True

    @field_validator("L")
    @classmethod
    def _positive(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError("L must be a positive finite number")
        return v


def validate_L(L: float) -> float:
    return ApproximationParams(L=float(L)).L


# ----------------------------------------------------------------------
# Metric and Christoffel symbols in exponential coordinates
# ----------------------------------------------------------------------

def metric_matrix(p, L: float) -> np.ndarray:
    """g_L = dx1² + dx2² + L ω² as a matrix, shape (..., 3, 3)"""
    L = validate_L(L)
    p = np.asarray(p, dtype=float)
    x1, x2 = p[..., 0], p[..., 1]
    g = np.empty(p.shape[:-1] + (3, 3))
    g[..., 0, 0] = 1.0 + L * x2 * x2 / 4.0
    g[..., 1, 1] = 1.0 + L * x1 * x1 / 4.0
    g[..., 2, 2] = L
    g[..., 0, 1] = g[..., 1, 0] = -L * x1 * x2 / 4.0
    g[..., 0, 2] = g[..., 2, 0] = L * x2 / 2.0
    g[..., 1, 2] = g[..., 2, 1] = -L * x1 / 2.0
    return g


def metric_inverse(p, L: float) -> np.ndarray:
    L = validate_L(L)
    p = np.asarray(p, dtype=float)
    x1, x2 = p[..., 0], p[..., 1]
    h = np.zeros(p.shape[:-1] + (3, 3))
    h[..., 0, 0] = 1.0
    h[..., 1, 1] = 1.0
    h[..., 2, 2] = (x1 * x1 + x2 * x2) / 4.0 + 1.0 / L
    h[..., 0, 2] = h[..., 2, 0] = -x2 / 2.0
    h[..., 1, 2] = h[..., 2, 1] = x1 / 2.0
    return h


def christoffel(p, L: float) -> np.ndarray:
    """
    Closed-form Christoffel symbols of g_L.

    Args:
        p: Points, shape (..., 3)
        L: Approximation parameter

    Returns:
        Γ with Γ[..., m, i, j] = Γ^m_ij (1-based m, i, j in the usual notation)
    """
    L = validate_L(L)
    p = np.asarray(p, dtype=float)
    x1, x2 = p[..., 0], p[..., 1]
    G = np.zeros(p.shape[:-1] + (3, 3, 3))

    G[..., 0, 0, 1] = G[..., 0, 1, 0] = x2 * L / 4.0
    G[..., 0, 1, 1] = -x1 * L / 2.0
    G[..., 0, 1, 2] = G[..., 0, 2, 1] = L / 2.0

    G[..., 1, 0, 0] = -x2 * L / 2.0
    G[..., 1, 0, 1] = G[..., 1, 1, 0] = x1 * L / 4.0
    G[..., 1, 0, 2] = G[..., 1, 2, 0] = -L / 2.0

    G[..., 2, 0, 0] = -x1 * x2 * L / 4.0
    G[..., 2, 0, 1] = G[..., 2, 1, 0] = (x1 * x1 - x2 * x2) * L / 8.0
    G[..., 2, 0, 2] = G[..., 2, 2, 0] = -x1 * L / 4.0
    G[..., 2, 1, 1] = x1 * x2 * L / 4.0
    G[..., 2, 1, 2] = G[..., 2, 2, 1] = -x2 * L / 4.0
    return G


def christoffel_from_metric(p, L: float) -> np.ndarray:
    """
    Christoffel symbols from first derivatives of g_L.

    The metric entries are evaluated on coordinate jets, so ∂_k g_ij is exact;
    used as an independent check of the closed-form table.
    """
    L = validate_L(L)
    p = np.asarray(p, dtype=float)
    x1 = Jet.variable(p[..., 0], 0, 3, 1)
    x2 = Jet.variable(p[..., 1], 1, 3, 1)
    one = x1.like(1.0)
    entries = [
        [1.0 * one + L * x2 * x2 / 4.0, -L * x1 * x2 / 4.0, L * x2 / 2.0],
        [None, 1.0 * one + L * x1 * x1 / 4.0, -L * x1 / 2.0],
        [None, None, L * one],
    ]
    dg = np.empty(p.shape[:-1] + (3, 3, 3))  # dg[..., k, i, j] = ∂_k g_ij
    for i in range(3):
        for j in range(i, 3):
            grad = entries[i][j].grad
            for k in range(3):
                dg[..., k, i, j] = dg[..., k, j, i] = grad[..., k]
    # first kind: Γ_kij = ½(∂_i g_jk + ∂_j g_ki − ∂_k g_ij)
    first = 0.5 * (
        np.einsum("...ijk->...kij", dg)
        + np.einsum("...jki->...kij", dg)
        - dg
    )
    return np.einsum("...mk,...kij->...mij", metric_inverse(p, L), first)


# ----------------------------------------------------------------------
# Connection of the orthonormal frame
# ----------------------------------------------------------------------

def frame_bracket(L: float) -> np.ndarray:
    """B[i, j, k]: coefficient of F_k in [F_i, F_j]; only [F1, F2] = √L F3 survives"""
    s = math.sqrt(validate_L(L))
    B = np.zeros((3, 3, 3))
    B[0, 1, 2] = s
    B[1, 0, 2] = -s
    return B


def frame_connection(L: float) -> np.ndarray:
    """
    C[i, j, k]: coefficient of F_k in ∇_{F_i} F_j.

    ∇_{X1}X2 = −∇_{X2}X1 = ½X3, ∇_{X1}X3^L = ∇_{X3^L}X1 = −(√L/2)X2,
    ∇_{X2}X3^L = ∇_{X3^L}X2 = (√L/2)X1.
    """
    h = 0.5 * math.sqrt(validate_L(L))
    C = np.zeros((3, 3, 3))
    C[0, 1, 2] = h
    C[1, 0, 2] = -h
    C[0, 2, 1] = C[2, 0, 1] = -h
    C[1, 2, 0] = C[2, 1, 0] = h
    return C


def koszul_frame(L: float) -> np.ndarray:
    """
    Connection table rebuilt from brackets by the Koszul identity.

    For an orthonormal frame with constant structure,
    ⟨F_k, ∇_{F_i}F_j⟩ = ½(⟨[F_i,F_j],F_k⟩ − ⟨[F_j,F_k],F_i⟩ + ⟨[F_k,F_i],F_j⟩).
    """
    B = frame_bracket(L)
    C = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            for k in range(3):
                C[i, j, k] = 0.5 * (B[i, j, k] - B[j, k, i] + B[k, i, j])
    return C


def covariant_derivative(a: np.ndarray, b: np.ndarray, L: float) -> np.ndarray:
    """∇_a b for frame-coefficient vectors extended with constant coefficients"""
    return np.einsum("...i,...j,ijk->...k", a, b, frame_connection(L))


def bracket(a: np.ndarray, b: np.ndarray, L: float) -> np.ndarray:
    return np.einsum("...i,...j,ijk->...k", a, b, frame_bracket(L))


def curvature_tensor(X: np.ndarray, Y: np.ndarray, Z: np.ndarray, L: float) -> np.ndarray:
    """R(X,Y)Z = ∇_Y∇_X Z − ∇_X∇_Y Z + ∇_{[X,Y]}Z (tensorial, so constant extension suffices)"""
    return (
        covariant_derivative(Y, covariant_derivative(X, Z, L), L)
        - covariant_derivative(X, covariant_derivative(Y, Z, L), L)
        + covariant_derivative(bracket(X, Y, L), Z, L)
    )


def sectional_curvature(a, b, L: float) -> np.ndarray:
    """K(a, b) = ⟨R(a,b)a, b⟩ / |a∧b|² for frame-coefficient vectors"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    num = np.einsum("...k,...k->...", curvature_tensor(a, b, a, L), b)
    aa = np.einsum("...k,...k->...", a, a)
    bb = np.einsum("...k,...k->...", b, b)
    ab = np.einsum("...k,...k->...", a, b)
    return num / (aa * bb - ab * ab)


def connection_from_christoffel(p, L: float) -> np.ndarray:
    """
    ∇_{F_i}F_j at p computed in coordinates from the Christoffel table,
    then rewritten in the frame F. Result has the layout of frame_connection.
    """
    L = validate_L(L)
    p = np.asarray(p, dtype=float)
    s = math.sqrt(L)
    x1, x2 = p[..., 0], p[..., 1]
    zeros = np.zeros_like(x1)
    ones = np.ones_like(x1)
    # Euclidean components of F1, F2, F3
    F = np.stack([
        np.stack([ones, zeros, -x2 / 2.0], axis=-1),
        np.stack([zeros, ones, x1 / 2.0], axis=-1),
        np.stack([zeros, zeros, ones / s], axis=-1),
    ], axis=-2)
    # DF[..., j, m, i] = ∂_i (F_j)^m
    DF = np.zeros(p.shape[:-1] + (3, 3, 3))
    DF[..., 0, 2, 1] = -0.5
    DF[..., 1, 2, 0] = 0.5
    G = christoffel(p, L)
    out = np.empty(p.shape[:-1] + (3, 3, 3))
    for i in range(3):
        for j in range(3):
            directional = np.einsum("...mi,...i->...m", DF[..., j, :, :], F[..., i, :])
            gamma = np.einsum("...mab,...a,...b->...m", G, F[..., i, :], F[..., j, :])
            c = frame_from_euclidean_array(p, directional + gamma)
            out[..., i, j, :] = np.stack([c[..., 0], c[..., 1], s * c[..., 2]], axis=-1)
    return out


# ----------------------------------------------------------------------
# Curves
# ----------------------------------------------------------------------

def velocity_frame_L(pos: np.ndarray, vel: np.ndarray, L: float) -> np.ndarray:
    """γ̇ in F: (γ̇1, γ̇2, √L ω(γ̇))"""
    s = math.sqrt(validate_L(L))
    return np.stack([vel[..., 0], vel[..., 1], s * contact_form(pos, vel)], axis=-1)


def covariant_accel_from_derivatives(pos: np.ndarray, vel: np.ndarray, acc: np.ndarray, L: float) -> np.ndarray:
    """
    D_tγ̇ in F.

    (γ̈1 + Lγ̇2ω(γ̇), γ̈2 − Lγ̇1ω(γ̇), √L ω(γ̈)) with ω(γ̈) = γ̈3 − ½(γ1γ̈2 − γ2γ̈1).
    """
    L = validate_L(L)
    w = contact_form(pos, vel)
    w_acc = contact_form(pos, acc)
    return np.stack([
        acc[..., 0] + L * vel[..., 1] * w,
        acc[..., 1] - L * vel[..., 0] * w,
        math.sqrt(L) * w_acc,
    ], axis=-1)


def covariant_accel(curve: CurveModel, t, L: float) -> np.ndarray:
    """D_tγ̇ in the orthonormal frame {X1, X2, X3^L}, shape S + (3,)"""
    pos, vel, acc = curve.derivatives(t)
    return covariant_accel_from_derivatives(pos, vel, acc, L)


def covariant_accel_euclidean(curve: CurveModel, t, L: float) -> np.ndarray:
    """D_tγ̇ in the Euclidean basis: γ̈_m + Γ^m_ij γ̇_i γ̇_j"""
    pos, vel, acc = curve.derivatives(t)
    G = christoffel(pos, L)
    return acc + np.einsum("...mij,...i,...j->...m", G, vel, vel)


def euclidean_to_frame_L(pos, v, L: float) -> np.ndarray:
    """Euclidean vector to coefficients in F"""
    c = frame_from_euclidean_array(pos, v)
    return np.stack([c[..., 0], c[..., 1], math.sqrt(validate_L(L)) * c[..., 2]], axis=-1)


def curvature_from_vectors(d: np.ndarray, v: np.ndarray) -> np.ndarray:
    """√(|d|²/|v|⁴ − ⟨d,v⟩²/|v|⁶) with a small negative radicand clipped to 0"""
    vv = np.einsum("...k,...k->...", v, v)
    dd = np.einsum("...k,...k->...", d, d)
    dv = np.einsum("...k,...k->...", d, v)
    radicand = dd / vv ** 2 - dv * dv / vv ** 3
    scale = dd / vv ** 2
    if np.any(radicand < -1e-10 * np.maximum(scale, 1.0)):
        logger.warning(f"Curvature radicand below zero beyond rounding: min {float(np.min(radicand)):.3e}")
    return np.sqrt(np.clip(radicand, 0.0, None))


def curve_curvature_L(curve: CurveModel, t, L: float) -> np.ndarray:
    """
    Curvature k^L of a curve in (ℝ³, g_L).

    Args:
        curve: Regular C² curve
        t: Parameter values
        L: Approximation parameter

    Returns:
        k^L at each t

    Raises:
        ZeroVelocityError: γ̇(t) = 0 somewhere
    """
    pos, vel, acc = curve.derivatives(t)
    require_regular(vel)
    d = covariant_accel_from_derivatives(pos, vel, acc, L)
    v = velocity_frame_L(pos, vel, L)
    return curvature_from_vectors(d, v)


def speed_L(curve: CurveModel, t, L: float) -> np.ndarray:
    """‖γ̇‖_L"""
    pos, vel, _ = curve.derivatives(t)
    return np.linalg.norm(velocity_frame_L(pos, vel, L), axis=-1)


def planar_curvature(vel: np.ndarray, acc: np.ndarray) -> np.ndarray:
    """|γ̇1γ̈2 − γ̇2γ̈1| / (γ̇1² + γ̇2²)^{3/2}"""
    h2 = vel[..., 0] ** 2 + vel[..., 1] ** 2
    return np.abs(vel[..., 0] * acc[..., 1] - vel[..., 1] * acc[..., 0]) / h2 ** 1.5


def inner_L(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...k,...k->...", a, b)


def norm_L(a: np.ndarray) -> np.ndarray:
    return np.sqrt(inner_L(a, a))


def frame_L_to_frame(c: np.ndarray, L: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients on {X1, X2, X3} of a vector given in F"""
    return c[..., 0], c[..., 1], c[..., 2] / math.sqrt(validate_L(L))
