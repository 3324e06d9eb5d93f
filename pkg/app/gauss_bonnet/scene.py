"""
Scene files for Gauss–Bonnet and Steiner runs.

A scene is JSON: a defining function u, parametric charts covering {u = 0}
(polar charts declare the projection center their first parameter is the
radius around), boundary curves with orientations, the centers of excision
disks, declared characteristic sets and tolerances. See docs/SCENES.md.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union
import json
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from app.config import settings
from app.errors import OffSurfaceError, SceneError
from app.geometry.surface import require_on_surface
from app.heisenberg.curves import CurveModel
from app.jets.horizontal import horizontal_jet
from app.services.expr.compiler import (
    CompiledCurve,
    CompiledPatch,
    CompiledScalarField,
    curve_from_text,
    field_from_text,
    patch_from_text,
)

logger = logging.getLogger(__name__)

Expression = Union[str, List[str]]


def _join(expr: Expression) -> str:
    return expr if isinstance(expr, str) else ", ".join(expr)


class ChartSpec(BaseModel):
    """Parametric chart (v, w) ↦ f(v, w) over the rectangle domain = [v0, v1, w0, w1]"""
    name: str = ""
    f: Expression
    domain: Tuple[float, float, float, float]
    polar_center: Optional[Tuple[float, float]] = None

    @field_validator("domain")
    @classmethod
    def _domain(cls, v):
        if not (v[0] < v[1] and v[2] < v[3]):
            raise ValueError(f"chart domain must satisfy v0 < v1 and w0 < w1, got {list(v)}")
        return v


class BoundarySpec(BaseModel):
    """Boundary component t ↦ γ(t); orientation +1, −1 or null to infer"""
    name: str = ""
    curve: Expression
    t0: float
    t1: float
    orientation: Optional[int] = None

    @field_validator("orientation")
    @classmethod
    def _orientation(cls, v):
        if v not in (None, 1, -1):
            raise ValueError("orientation must be 1, -1 or null")
        return v


class CharacteristicCurveSpec(BaseModel):
    curve: Expression
    t0: float
    t1: float


class CharacteristicSpec(BaseModel):
    points: List[Tuple[float, float, float]] = Field(default_factory=list)
    curves: List[CharacteristicCurveSpec] = Field(default_factory=list)


class ExclusionSpec(BaseModel):
    """Disk of radius ε around center in the (x1, x2) projection"""
    center: Tuple[float, float]


class SceneTolerances(BaseModel):
    defect: float = Field(default_factory=lambda: settings.GALLERY_INTEGRAL_TOL)
    on_surface: float = Field(default_factory=lambda: settings.TAU_ON)
    grid: int = 48


class SceneSurface(BaseModel):
    """
    Scene file model.

    Attributes:
        name: Scene name
        constants: Named constants available to every expression
        u: Defining function in x1, x2, x3
        charts: Charts covering {u = 0} minus the exclusions
        boundaries: Boundary components
        exclusions: Excision centers; their radius runs over eps_sequence
        characteristic: Declared characteristic points and curves
        eps_sequence: Exclusion radii, settings.EPS_SEQUENCE when omitted
        expected_defect: Value the defect is checked against (0 for conforming scenes)
        volume: L³(Ω) for Steiner runs
        delta: Eikonal function for Steiner runs
        tolerances: Per-scene tolerances
    """
    name: str = "scene"
    description: str = ""
    constants: Dict[str, float] = Field(default_factory=dict)
    u: str
    charts: List[ChartSpec] = Field(default_factory=list)
    boundaries: List[BoundarySpec] = Field(default_factory=list)
    exclusions: List[ExclusionSpec] = Field(default_factory=list)
    characteristic: CharacteristicSpec = Field(default_factory=CharacteristicSpec)
    eps_sequence: Optional[List[float]] = None
    expected_defect: float = 0.0
    volume: Optional[float] = None
    delta: Optional[str] = None
    tolerances: SceneTolerances = Field(default_factory=SceneTolerances)

    class Config:
        extra = "forbid"

    @field_validator("eps_sequence")
    @classmethod
    def _eps(cls, v):
        if v is not None and (any(e <= 0 for e in v) or any(b >= a for a, b in zip(v, v[1:]))):
            raise ValueError("eps_sequence must be positive and strictly decreasing")
        return v

    @model_validator(mode="after")
    def _charts(self) -> "SceneSurface":
        if not self.charts:
            raise ValueError("a scene needs at least one chart")
        return self

    @property
    def eps(self) -> List[float]:
        return list(self.eps_sequence if self.eps_sequence is not None else settings.EPS_SEQUENCE)


@dataclass
class Chart:
    name: str
    patch: CompiledPatch
    domain: Tuple[float, float, float, float]
    polar_center: Optional[Tuple[float, float]] = None
    excised: bool = False

    def v_range(self, eps: Optional[float] = None) -> Tuple[float, float]:
        """v interval, cut at ρ = ε when this chart carries an exclusion"""
        v0, v1 = self.domain[0], self.domain[1]
        if self.excised and eps is not None:
            v0 = max(v0, eps)
        return v0, v1

    def w_range(self) -> Tuple[float, float]:
        return self.domain[2], self.domain[3]


@dataclass
class Boundary:
    name: str
    curve: CompiledCurve
    orientation: Optional[int]


@dataclass
class CompiledScene:
    spec: SceneSurface
    field: CompiledScalarField
    charts: List[Chart]
    boundaries: List[Boundary]
    characteristic_points: np.ndarray
    characteristic_curves: List[CurveModel] = field(default_factory=list)
    delta: Optional[CompiledScalarField] = None

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def excised(self) -> bool:
        return any(c.excised for c in self.charts)


def _check_polar(chart: Chart, samples: int = 7):
    """A polar chart's v must be the projected distance to its center"""
    v = np.linspace(*chart.domain[:2], samples)
    w = np.linspace(*chart.domain[2:], samples)
    V, W = np.meshgrid(v, w, indexing="ij")
    pts = chart.patch.point(V, W)
    rho = np.hypot(pts[..., 0] - chart.polar_center[0], pts[..., 1] - chart.polar_center[1])
    if np.max(np.abs(rho - V)) > 1e-9 * max(1.0, float(np.max(np.abs(V)))):
        raise SceneError(f"chart '{chart.name}' is declared polar but v is not the projected radius",
                         chart=chart.name)


def _check_exclusions(scene: SceneSurface, charts: List[Chart], samples: int = 33):
    eps_max = scene.eps[0]
    for ex in scene.exclusions:
        owners = [c for c in charts if c.polar_center is not None
                  and np.allclose(c.polar_center, ex.center, atol=1e-12)]
        if not owners:
            raise SceneError(f"exclusion at {list(ex.center)} has no polar chart around it",
                             center=list(ex.center))
        for c in owners:
            c.excised = True
    for c in charts:
        if c.excised:
            continue
        v = np.linspace(*c.domain[:2], samples)
        w = np.linspace(*c.domain[2:], samples)
        V, W = np.meshgrid(v, w, indexing="ij")
        pts = c.patch.point(V, W)
        for ex in scene.exclusions:
            d = np.hypot(pts[..., 0] - ex.center[0], pts[..., 1] - ex.center[1])
            if np.min(d) < eps_max:
                raise SceneError(f"chart '{c.name}' meets the exclusion disk at {list(ex.center)}",
                                 chart=c.name, center=list(ex.center))


def _check_boundaries(field_: CompiledScalarField, boundaries: List[Boundary], scale: float, tau_on: float,
                      samples: int = 257):
    """Every boundary curve must lie on Σ at a uniform sample of its parameter"""
    for b in boundaries:
        t = np.linspace(*b.curve.span(), samples)
        pos = b.curve.position(t)
        try:
            require_on_surface(horizontal_jet(field_, pos), pos, scale, tau_on)
        except OffSurfaceError as e:
            raise SceneError(f"boundary '{b.name}' leaves the surface: {e.message}",
                             boundary=b.name, max_residual=e.fields["max_residual"])


def compile_scene(scene: SceneSurface) -> CompiledScene:
    """
    Compile every expression of a scene and check its exclusions.

    Raises:
        SceneError: Malformed polar chart or exclusion, or a boundary curve off Σ
        ParseError, UnknownIdentifierError: Bad expressions
    """
    consts = scene.constants
    u = field_from_text(scene.u, consts)
    charts = []
    for k, c in enumerate(scene.charts):
        chart = Chart(c.name or f"chart-{k}", patch_from_text(_join(c.f), consts), tuple(c.domain),
                      tuple(c.polar_center) if c.polar_center is not None else None)
        if chart.polar_center is not None:
            _check_polar(chart)
        charts.append(chart)
    _check_exclusions(scene, charts)

    boundaries = [
        Boundary(b.name or f"boundary-{k}", curve_from_text(_join(b.curve), b.t0, b.t1, constants=consts),
                 b.orientation)
        for k, b in enumerate(scene.boundaries)
    ]
    _check_boundaries(u, boundaries, _charts_scale(charts), scene.tolerances.on_surface)
    char_curves = [curve_from_text(_join(c.curve), c.t0, c.t1, constants=consts)
                   for c in scene.characteristic.curves]
    points = np.asarray(scene.characteristic.points, dtype=float).reshape(-1, 3)
    delta = field_from_text(scene.delta, consts) if scene.delta else None
    logger.info(f"Scene '{scene.name}' loaded: {len(charts)} chart(s), {len(boundaries)} boundary component(s), "
                f"{len(scene.exclusions)} exclusion(s)")
    return CompiledScene(scene, u, charts, boundaries, points, char_curves, delta)


def parse_scene(data: dict) -> SceneSurface:
    try:
        return SceneSurface.model_validate(data)
    except ValidationError as e:
        errors = [{"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]} for err in e.errors()]
        raise SceneError(f"invalid scene: {errors[0]['loc']}: {errors[0]['msg']}", errors=errors)


def load_scene(path: Union[str, Path]) -> CompiledScene:
    """
    Read, validate and compile a scene file.

    Raises:
        SceneError: Unreadable or invalid file
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SceneError(f"cannot read scene file {path}: {e}", path=str(path))
    return compile_scene(parse_scene(data))


def _charts_scale(charts: List[Chart]) -> float:
    extents = []
    for c in charts:
        v = np.linspace(*c.domain[:2], 5)
        w = np.linspace(*c.domain[2:], 5)
        V, W = np.meshgrid(v, w, indexing="ij")
        extents.append(float(np.max(np.abs(c.patch.point(V, W)))))
    return max(1.0, max(extents)) if extents else 1.0


def scene_scale(scene: CompiledScene) -> float:
    """Largest coordinate extent of the charts, used for the on-surface band"""
    return _charts_scale(scene.charts)

