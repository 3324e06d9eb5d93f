"""API models package"""
from app.api.models.requests import (
    CurveRequest,
    SurfaceRequest,
    GaussBonnetRequest,
    SteinerRequest,
    GalleryRunRequest,
)

__all__ = [
    "CurveRequest",
    "SurfaceRequest",
    "GaussBonnetRequest",
    "SteinerRequest",
    "GalleryRunRequest",
]
