"""Gauss–Bonnet and tube-volume endpoints"""
from fastapi import APIRouter

from app.api.errors import http_error
from app.api.models.requests import GaussBonnetRequest, SteinerRequest
from app.errors import HeisgeomError
from app.services.expr.compiler import field_from_text
from app.quadrature.engine import QuadratureSpec
from app.gauss_bonnet import compile_scene, gauss_bonnet_defect, parse_scene, scaled_gauss_bonnet_sweep
from app.steiner import simplified_series
from app.utils.formatting import with_schema

router = APIRouter()


@router.post("/gauss-bonnet")
def gauss_bonnet(request: GaussBonnetRequest):
    """Defect of a scene, or the finite-L scaled sums when L values are given"""
    try:
        scene = compile_scene(parse_scene(request.scene))
        if request.L:
            return with_schema({"scene": scene.name,
                                "scaled": scaled_gauss_bonnet_sweep(scene, request.L, QuadratureSpec())})
        report = gauss_bonnet_defect(scene, QuadratureSpec())
    except HeisgeomError as e:
        raise http_error(e)
    return with_schema(report)


@router.post("/steiner")
def steiner(request: SteinerRequest):
    """Raw and simplified tube-volume series of a scene"""
    try:
        scene = compile_scene(parse_scene(request.scene))
        delta = field_from_text(request.delta, scene.spec.constants) if request.delta else None
        report = simplified_series(scene, request.order, request.eps, delta=delta, reference=request.reference)
    except HeisgeomError as e:
        raise http_error(e)
    return with_schema(report)
