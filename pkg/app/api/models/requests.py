"""Request models for API endpoints"""
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


class CurveRequest(BaseModel):
    """k⁰ along a curve, or k^{0,s} when a surface is given"""
    expr: str
    t0: float = 0.0
    t1: float = 1.0
    grid: int = Field(default=101, ge=2)
    t: Optional[List[float]] = None
    planar: bool = False
    surface: Optional[str] = None
    unsigned: bool = False
    constants: Dict[str, float] = Field(default_factory=dict)
    L: List[float] = Field(default_factory=list)


class SurfaceRequest(BaseModel):
    """Surface curvature of {u = 0} at points"""
    u: str
    points: List[Tuple[float, float, float]] = Field(min_length=1)
    quantity: Literal["K0", "H0", "KL", "HL"] = "K0"
    constants: Dict[str, float] = Field(default_factory=dict)
    L: List[float] = Field(default_factory=list)


class GaussBonnetRequest(BaseModel):
    """Scene body as in docs/SCENES.md; L values switch to the finite-L sum"""
    scene: Dict[str, Any]
    L: List[float] = Field(default_factory=list)


class SteinerRequest(BaseModel):
    scene: Dict[str, Any]
    order: int = Field(default=4, ge=1)
    eps: List[float] = Field(min_length=1)
    delta: Optional[str] = None
    reference: Optional[List[float]] = None


class GalleryRunRequest(BaseModel):
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
