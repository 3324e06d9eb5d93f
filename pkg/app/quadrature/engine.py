"""
Adaptive tensor Gauss–Legendre quadrature.

Intervals are bisected and rectangles split into quadrants until each cell's
error estimate (order n against order n/2 on the same cell) falls under its
share of the tolerance. Cells of one refinement level are evaluated on a
thread pool capped by settings.THREADS; accepted cells are summed with
math.fsum in the order of their refinement paths, so the result does not
depend on the thread count.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from scipy import special

from app.config import settings
from app.errors import QuadratureError

logger = logging.getLogger(__name__)

Integrand1D = Callable[[np.ndarray], np.ndarray]
Integrand2D = Callable[[np.ndarray, np.ndarray], np.ndarray]
Bounds = Tuple[float, ...]


class Exclusion(BaseModel):
    """Disk removed from the (x1, x2) projection"""
    center: Tuple[float, float]
    radius: float

    @field_validator("radius")
    @classmethod
    def _positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"exclusion radius must be positive, got {v}")
        return v


class QuadratureSpec(BaseModel):
    """
    Quadrature configuration; defaults are read from settings at construction.

    Attributes:
        order: Gauss–Legendre order per cell direction
        singular_order: Order for cells flagged singular (touching a cut)
        tol: Absolute tolerance, relative to max(1, |value|)
        max_subdivisions: Refinement depth budget
        exclusions: Disks excised around characteristic points
        eps_sequence: Exclusion radii for extrapolation, strictly decreasing
        richardson_order: Assumed order p of the O(ε^p) excision correction
        strict: Raise when the budget is exhausted instead of warning
    """
    order: int = Field(default_factory=lambda: settings.QUAD_ORDER)
    singular_order: int = Field(default_factory=lambda: settings.QUAD_SINGULAR_ORDER)
    tol: float = Field(default_factory=lambda: settings.QUAD_TOL)
    max_subdivisions: int = Field(default_factory=lambda: settings.QUAD_MAX_SUBDIVISIONS)
    exclusions: List[Exclusion] = Field(default_factory=list)
    eps_sequence: List[float] = Field(default_factory=lambda: list(settings.EPS_SEQUENCE))
    richardson_order: int = 1
    strict: bool = True

    @field_validator("order", "singular_order")
    @classmethod
    def _order(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"quadrature order must be at least 2, got {v}")
        return v

    @field_validator("tol")
    @classmethod
    def _tol(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"tol must be positive, got {v}")
        return v

    @field_validator("eps_sequence")
    @classmethod
    def _eps(cls, v: List[float]) -> List[float]:
        if any(e <= 0 for e in v) or any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("eps sequence must be positive and strictly decreasing")
        return v

    @model_validator(mode="after")
    def _budget(self) -> "QuadratureSpec":
        if self.max_subdivisions < 0:
            raise ValueError("max_subdivisions must be non-negative")
        return self


@dataclass
class QuadratureResult:
    value: float
    error: float
    cells: int = 0
    evaluations: int = 0
    unresolved: int = 0

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            math.fsum([self.value, other.value]),
            self.error + other.error,
            self.cells + other.cells,
            self.evaluations + other.evaluations,
            self.unresolved + other.unresolved,
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(self.value * factor, self.error * abs(factor), self.cells,
                                self.evaluations, self.unresolved)

    def to_dict(self):
        return {
            "value": self.value,
            "error": self.error,
            "cells": self.cells,
            "evaluations": self.evaluations,
            "unresolved": self.unresolved,
        }


@dataclass(frozen=True)
class Cell:
    bounds: Bounds
    path: Tuple[int, ...] = field(default=())

    @property
    def depth(self) -> int:
        return len(self.path)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [−1, 1]"""
    nodes, weights = special.roots_legendre(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _map(func, items: Sequence):
    """Ordered map over a level of cells, threaded when settings.THREADS > 1"""
    workers = min(max(1, int(settings.THREADS)), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def _rule_1d(func: Integrand1D, a: float, b: float, n: int) -> float:
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    values = np.asarray(func(a + half * (x + 1.0)), dtype=float)
    return half * math.fsum(w * values)


def _rule_2d(func: Integrand2D, v0: float, v1: float, w0: float, w1: float, n: int) -> float:
    x, wt = gauss_legendre(n)
    hv, hw = 0.5 * (v1 - v0), 0.5 * (w1 - w0)
    V, W = np.meshgrid(v0 + hv * (x + 1.0), w0 + hw * (x + 1.0), indexing="ij")
    values = np.asarray(func(V, W), dtype=float)
    return hv * hw * math.fsum(np.ravel(np.outer(wt, wt) * values))


def _split(cell: Cell) -> List[Cell]:
    if len(cell.bounds) == 2:
        a, b = cell.bounds
        m = 0.5 * (a + b)
        return [Cell((a, m), cell.path + (0,)), Cell((m, b), cell.path + (1,))]
    v0, v1, w0, w1 = cell.bounds
    vm, wm = 0.5 * (v0 + v1), 0.5 * (w0 + w1)
    return [
        Cell((v0, vm, w0, wm), cell.path + (0,)),
        Cell((v0, vm, wm, w1), cell.path + (1,)),
        Cell((vm, v1, w0, wm), cell.path + (2,)),
        Cell((vm, v1, wm, w1), cell.path + (3,)),
    ]


def _measure(bounds: Bounds) -> float:
    if len(bounds) == 2:
        return bounds[1] - bounds[0]
    return (bounds[1] - bounds[0]) * (bounds[3] - bounds[2])


def _adaptive(rule, root: Cell, spec: QuadratureSpec, singular: Optional[Callable[[Bounds], bool]],
              label: str) -> QuadratureResult:
    total_measure = abs(_measure(root.bounds))
    points_per_cell = 1 if len(root.bounds) == 2 else 2
    accepted: List[Tuple[Tuple[int, ...], float, float]] = []
    evaluations = 0
    unresolved = 0
    scale = None
    level = [root]

    def evaluate(cell: Cell):
        n = spec.singular_order if singular is not None and singular(cell.bounds) else spec.order
        fine = rule(*cell.bounds, n)
        coarse = rule(*cell.bounds, max(2, n // 2))
        return fine, abs(fine - coarse), n

    while level:
        results = _map(evaluate, level)
        if scale is None:
            scale = max(1.0, abs(results[0][0]))
        refine = []
        for cell, (value, err, n) in zip(level, results):
            evaluations += (n ** points_per_cell) + (max(2, n // 2) ** points_per_cell)
            share = spec.tol * scale * abs(_measure(cell.bounds)) / total_measure
            if err <= share or not math.isfinite(value):
                accepted.append((cell.path, value, err))
            elif cell.depth >= spec.max_subdivisions:
                accepted.append((cell.path, value, err))
                unresolved += 1
            else:
                refine.extend(_split(cell))
        logger.debug(f"{label}: level of {len(level)} cell(s), {len(refine)} to refine")
        level = refine

    accepted.sort(key=lambda item: item[0])
    value = math.fsum(v for _, v, _ in accepted)
    error = math.fsum(e for _, _, e in accepted)
    if not math.isfinite(value):
        raise QuadratureError(f"{label}: integrand is not finite on the domain", bounds=list(root.bounds))
    result = QuadratureResult(value, error, len(accepted), evaluations, unresolved)
    if unresolved and error > spec.tol * max(1.0, abs(value)):
        message = (f"{label}: tolerance {spec.tol:g} not met after {spec.max_subdivisions} "
                   f"subdivisions (error estimate {error:.3e}, {unresolved} unresolved cell(s))")
        if spec.strict:
            raise QuadratureError(message, error=error, tol=spec.tol, unresolved=unresolved)
        logger.warning(message)
    return result


def integrate_interval(func: Integrand1D, a: float, b: float, spec: Optional[QuadratureSpec] = None,
                       singular: Optional[Callable[[Bounds], bool]] = None) -> QuadratureResult:
    """
    Adaptive Gauss–Legendre integral of a vectorized function over [a, b].

    Args:
        func: Maps an array of parameters to integrand values of the same shape
        a, b: Interval ends
        spec: Quadrature configuration, defaults from settings
        singular: Predicate on cell bounds selecting the singular order

    Raises:
        QuadratureError: Tolerance not met within the subdivision budget
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return QuadratureResult(0.0, 0.0)
    if b < a:
        return integrate_interval(func, b, a, spec, singular).scaled(-1.0)

    def rule(lo, hi, n):
        return _rule_1d(func, lo, hi, n)

    return _adaptive(rule, Cell((float(a), float(b))), spec, singular, "interval")


def integrate_rectangle(func: Integrand2D, v_range: Sequence[float], w_range: Sequence[float],
                        spec: Optional[QuadratureSpec] = None,
                        singular: Optional[Callable[[Bounds], bool]] = None) -> QuadratureResult:
    """
    Adaptive tensor Gauss–Legendre integral over a rectangle.

    Args:
        func: Maps parameter grids (V, W) to integrand values of the same shape
        v_range: (v0, v1)
        w_range: (w0, w1)
        spec: Quadrature configuration, defaults from settings
        singular: Predicate on cell bounds (v0, v1, w0, w1) selecting the singular order

    Raises:
        QuadratureError: Tolerance not met within the subdivision budget
    """
    spec = spec or QuadratureSpec()
    v0, v1 = (float(c) for c in v_range)
    w0, w1 = (float(c) for c in w_range)
    if v1 <= v0 or w1 <= w0:
        raise ValueError(f"empty rectangle [{v0}, {v1}]×[{w0}, {w1}]")

    def rule(a0, a1, b0, b1, n):
        return _rule_2d(func, a0, a1, b0, b1, n)

    return _adaptive(rule, Cell((v0, v1, w0, w1)), spec, singular, "rectangle")


def edge_predicate(v: Optional[float] = None, w: Optional[float] = None) -> Callable[[Bounds], bool]:
    """Select cells whose lower v edge (or lower w edge) lies on the given cut"""

    def touches(bounds: Bounds) -> bool:
        if v is not None and math.isclose(bounds[0], v, rel_tol=0.0, abs_tol=1e-14):
            return True
        if w is not None and len(bounds) == 4 and math.isclose(bounds[2], w, rel_tol=0.0, abs_tol=1e-14):
            return True
        return False

    return touches
