"""
Characteristic-set detection.

A chart grid is scanned for local minima of ‖∇_H u‖/‖∇u‖. Minima that
already pass are kept as they are; the others are grouped into connected
plateaus and the lowest node of each is refined with Nelder–Mead in the
chart parameters. Nearby points are then merged. A candidate is curve-like
when the tangential derivative of ∇_H u has rank one there, isolated when it
has rank two.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence
import logging

import numpy as np
from scipy import ndimage, optimize

from app.errors import UndeclaredCharacteristicError
from app.heisenberg.frame import frame_from_euclidean_array
from app.jets.horizontal import ScalarField, horizontal_jet
from app.geometry.patches import PatchModel
from app.geometry.surface import characteristic_ratio

logger = logging.getLogger(__name__)


class CandidateKind(str, Enum):
    ISOLATED = "isolated"
    CURVE = "curve"


@dataclass
class CharacteristicCandidate:
    """
    Attributes:
        kind: Isolated point or curve-like set
        point: Refined point with the smallest ratio
        members: Refined points of the cluster
        ratio: Smallest ‖∇_H u‖/‖∇u‖ in the cluster
        chart: Chart the candidate was found on
    """
    kind: CandidateKind
    point: np.ndarray
    members: np.ndarray
    ratio: float
    chart: str = ""

    @property
    def extent(self) -> float:
        if len(self.members) < 2:
            return 0.0
        d = self.members[:, None, :] - self.members[None, :, :]
        return float(np.max(np.linalg.norm(d, axis=-1)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "point": self.point.tolist(),
            "members": len(self.members),
            "extent": self.extent,
            "ratio": self.ratio,
            "chart": self.chart,
        }


def _ratio_at(field_: ScalarField, chart: PatchModel, v, w) -> np.ndarray:
    return characteristic_ratio(horizontal_jet(field_, chart.point(v, w)))


def _refine(field_: ScalarField, chart: PatchModel, start, bounds, accept: float) -> np.ndarray:
    def objective(x):
        return float(_ratio_at(field_, chart, np.array(x[0]), np.array(x[1])) ** 2)

    extent = max(hi - lo for lo, hi in bounds)
    result = optimize.minimize(
        objective, np.asarray(start, dtype=float), method="Nelder-Mead", bounds=bounds,
        options={"xatol": 1e-10 * extent, "fatol": (0.01 * accept) ** 2, "maxiter": 400},
    )
    return result.x


def _cluster(points: np.ndarray, radius: float) -> List[List[int]]:
    """Single-linkage clusters (as index lists) of points closer than radius"""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(points[i] - points[j]) < radius:
                parent[find(i)] = find(j)
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda idx: idx[0])


def tangential_rank_ratio(field_: ScalarField, point) -> float:
    """
    s2/s1 for the singular values of ∇_H u differentiated along T_pΣ.

    Near zero the characteristic set through p is a curve; of order one, an
    isolated point.
    """
    p = np.asarray(point, dtype=float)[None, :]
    hj = horizontal_jet(field_, p)
    n = hj.grad[0] / np.linalg.norm(hj.grad[0])
    # two orthonormal tangent vectors
    seed = np.eye(3)[int(np.argmin(np.abs(n)))]
    t1 = np.cross(n, seed)
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(n, t1)
    c = frame_from_euclidean_array(np.repeat(p, 2, axis=0), np.stack([t1, t2]))
    # d(X_j u)(T_k) = Σ_i c_ki X_i X_j u
    J = np.einsum("ki,ij->jk", c, hj.XX[0][:, :2])
    s = np.linalg.svd(J, compute_uv=False)
    return float(s[1] / s[0]) if s[0] > 0 else 0.0


def characteristic_scan(field_: ScalarField, chart: PatchModel, domain: Sequence[float], grid: int = 48,
                        accept: float = 1e-6, curve_ratio: float = 1e-6,
                        name: str = "") -> List[CharacteristicCandidate]:
    """
    Find characteristic points of {u = 0} on a chart.

    Args:
        field_: Defining function u
        chart: Chart of the surface
        domain: (v0, v1, w0, w1)
        grid: Grid points per parameter direction
        accept: Ratio below which a refined minimum counts as characteristic
        curve_ratio: Tangential rank ratio below which a candidate is curve-like
        name: Chart name for the report

    Returns:
        Candidates, isolated or curve-like
    """
    v0, v1, w0, w1 = (float(c) for c in domain)
    V, W = np.meshgrid(np.linspace(v0, v1, grid), np.linspace(w0, w1, grid), indexing="ij")
    P = chart.point(V, W)
    ratio = _ratio_at(field_, chart, V, W)
    minima = ratio <= ndimage.minimum_filter(ratio, size=3, mode="nearest")
    spacing = float(np.max(np.linalg.norm(P[1:, :] - P[:-1, :], axis=-1)))

    refined, ratios = [], []
    # grid nodes that already pass; a polar chart maps its whole center row to one point
    for i, j in np.argwhere(minima & (ratio <= accept)):
        if refined and np.min(np.linalg.norm(np.asarray(refined) - P[i, j], axis=-1)) <= 1e-9 * spacing:
            continue
        refined.append(P[i, j])
        ratios.append(float(ratio[i, j]))

    # one Nelder–Mead start per connected plateau of the remaining minima
    labels, count = ndimage.label(minima & (ratio > accept) & (ratio < 0.5), structure=np.ones((3, 3)))
    starts = ndimage.minimum_position(ratio, labels, range(1, count + 1)) if count else []
    bounds = [(v0, v1), (w0, w1)]
    for i, j in starts:
        x = _refine(field_, chart, (V[i, j], W[i, j]), bounds, accept)
        r = float(_ratio_at(field_, chart, np.array(x[0]), np.array(x[1])))
        if r <= accept:
            refined.append(chart.point(np.array(x[0]), np.array(x[1])))
            ratios.append(r)
    logger.debug(f"Chart '{name}': {len(refined)} point(s) after {len(starts)} refinement(s)")
    if not refined:
        logger.debug(f"Chart '{name}': no characteristic points")
        return []

    pts = np.asarray(refined)
    ratios = np.asarray(ratios)
    candidates = []
    for idx in _cluster(pts, 2.5 * spacing):
        members = pts[idx]
        best = idx[int(np.argmin(ratios[idx]))]
        rank = tangential_rank_ratio(field_, pts[best])
        kind = CandidateKind.CURVE if rank <= curve_ratio else CandidateKind.ISOLATED
        candidates.append(CharacteristicCandidate(kind, pts[best], members, float(ratios[best]), name))
    logger.info(f"Chart '{name}': {len(candidates)} characteristic candidate(s) "
                f"({', '.join(c.kind.value for c in candidates)})")
    return candidates


@dataclass
class CharacteristicSummary:
    """Scan outcome for a scene"""
    candidates: List[CharacteristicCandidate] = field(default_factory=list)
    handling: str = "none"

    @property
    def isolated(self) -> List[CharacteristicCandidate]:
        return [c for c in self.candidates if c.kind == CandidateKind.ISOLATED]

    @property
    def curves(self) -> List[CharacteristicCandidate]:
        return [c for c in self.candidates if c.kind == CandidateKind.CURVE]

    def to_dict(self) -> Dict[str, Any]:
        return {"handling": self.handling, "candidates": [c.to_dict() for c in self.candidates]}


def _near_declared_curve(members: np.ndarray, curves, tol: float) -> bool:
    for curve in curves:
        samples = curve.position(np.linspace(*curve.span(), 2001))
        tol = max(tol, float(np.max(np.linalg.norm(np.diff(samples, axis=0), axis=-1))))
        d = np.min(np.linalg.norm(members[:, None, :] - samples[None, :, :], axis=-1), axis=1)
        if np.all(d <= tol):
            return True
    return False


def scan_scene(scene, grid: Optional[int] = None) -> CharacteristicSummary:
    """
    Scan every chart and match the candidates against the scene's declarations.

    Isolated points must lie inside an exclusion disk (largest ε) or match a
    declared point; curve-like sets must follow a declared characteristic curve.

    Raises:
        UndeclaredCharacteristicError: A candidate matches no declaration
    """
    grid = grid or scene.spec.tolerances.grid
    eps_max = scene.spec.eps[0]
    centers = [ex.center for ex in scene.spec.exclusions]
    summary = CharacteristicSummary()
    undeclared = []
    for chart in scene.charts:
        found = characteristic_scan(scene.field, chart.patch, chart.domain, grid, name=chart.name)
        for c in found:
            if c.kind == CandidateKind.ISOLATED:
                in_exclusion = any(np.hypot(c.point[0] - x, c.point[1] - y) < eps_max for x, y in centers)
                declared = len(scene.characteristic_points) and np.min(
                    np.linalg.norm(scene.characteristic_points - c.point, axis=-1)) <= 1e-6
                ok = in_exclusion or bool(declared)
            else:
                ok = _near_declared_curve(c.members, scene.characteristic_curves, tol=1e-6)
            if not ok:
                undeclared.append(c)
            summary.candidates.append(c)
    if undeclared:
        raise UndeclaredCharacteristicError(
            f"{len(undeclared)} undeclared characteristic set(s) found",
            candidates=[c.to_dict() for c in undeclared],
        )
    if summary.curves:
        summary.handling = "declared-curve"
    elif summary.isolated:
        summary.handling = "excised" if scene.excised else "declared-points"
    return summary
