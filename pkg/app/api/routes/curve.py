"""Curve and surface curvature endpoints"""
import numpy as np
from fastapi import APIRouter

from app.api.errors import http_error
from app.api.models.requests import CurveRequest, SurfaceRequest
from app.errors import HeisgeomError, InputError
from app.heisenberg.lift import horizontal_lift
from app.services.expr.compiler import curve_from_text, field_from_text
from app.geometry.subriemannian import (
    curve_curvature_0,
    gaussian_curvature_0,
    mean_curvature_0,
    signed_geodesic_curvature_0,
)
from app.geometry.surface import gauss_curvature_L, mean_curvature_L
from app.utils.formatting import with_schema

router = APIRouter()


@router.post("/curve")
def curve_curvature(request: CurveRequest):
    """
    k⁰ along a curve with optional finite-L witnesses.

    **Example:**
    ```
    POST /api/heisgeom/curve
    {"expr": "cos(t)+1, sin(t), 0", "t0": 0, "t1": 6.2832, "grid": 100}
    ```
    """
    try:
        curve = curve_from_text(request.expr, request.t0, request.t1, planar=request.planar,
                                constants=request.constants)
        if request.planar:
            curve = horizontal_lift(curve)
        t = np.asarray(request.t, dtype=float) if request.t else np.linspace(request.t0, request.t1, request.grid)
        sweep = request.L or None
        if request.surface:
            u = field_from_text(request.surface, request.constants)
            report = signed_geodesic_curvature_0(u, curve, t, L_sweep=sweep, unsigned=request.unsigned)
        else:
            report = curve_curvature_0(curve, t, L_sweep=sweep)
    except HeisgeomError as e:
        raise http_error(e)
    return with_schema(report)


@router.post("/surface")
def surface_curvature(request: SurfaceRequest):
    """K₀ or H₀ (with optional L-sweep), or K_L / H_L at the given L values"""
    try:
        u = field_from_text(request.u, request.constants)
        points = np.asarray(request.points, dtype=float)
        if request.quantity == "K0":
            return with_schema(gaussian_curvature_0(u, points, L_sweep=request.L or None))
        if request.quantity == "H0":
            return with_schema(mean_curvature_0(u, points, L_sweep=request.L or None))
        if not request.L:
            raise InputError(f"{request.quantity} needs L values")
        finite = gauss_curvature_L if request.quantity == "KL" else mean_curvature_L
        values = {str(L): np.ravel(finite(u, points, L)) for L in request.L}
    except HeisgeomError as e:
        raise http_error(e)
    return with_schema({"quantity": request.quantity, "points": points, "values": values})
