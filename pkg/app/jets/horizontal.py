"""
Left-invariant frame derivatives of scalar fields.

The frame X1 = ∂1 − (x2/2)∂3, X2 = ∂2 + (x1/2)∂3, X3 = ∂3 acts on Euclidean
jets, so every X_i lowers the jet order by one and X_i X_j u is exact.
"""
from dataclasses import dataclass
from typing import Callable, Tuple
import logging

import numpy as np

from app.jets.jet import Jet

logger = logging.getLogger(__name__)

# A scalar field maps three coordinate jets to a jet; expressions, native
# gallery fields and transformed fields all share this shape.
ScalarField = Callable[[Jet, Jet, Jet], Jet]


def as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError(f"points must have trailing dimension 3, got shape {pts.shape}")
    return pts


def coordinate_jets(points, order: int) -> Tuple[Jet, Jet, Jet]:
    """Seed jets of x1, x2, x3 at a batch of points"""
    pts = as_points(points)
    return tuple(Jet.variable(pts[..., k], k, 3, order) for k in range(3))


def field_jet(field: ScalarField, points, order: int) -> Jet:
    """Euclidean jet of a scalar field at a batch of points"""
    return field(*coordinate_jets(points, order))


def frame_derivative(f: Jet, i: int, points) -> Jet:
    """X_{i+1} f as a jet one order lower (i = 0, 1, 2)"""
    pts = as_points(points)
    order = f.order - 1
    if i == 2:
        return f.partial(2)
    d3 = f.partial(2)
    if i == 0:
        x2 = Jet.variable(pts[..., 1], 1, 3, order)
        return f.partial(0) - 0.5 * x2 * d3
    if i == 1:
        x1 = Jet.variable(pts[..., 0], 0, 3, order)
        return f.partial(1) + 0.5 * x1 * d3
    raise ValueError(f"frame index must be 0, 1 or 2, got {i}")


def horizontal_gradient(f: Jet, points) -> Tuple[Jet, Jet]:
    return frame_derivative(f, 0, points), frame_derivative(f, 1, points)


@dataclass
class HorizontalJet:
    """
    First and second frame derivatives of a field.

    Attributes:
        value: u at the points
        X: X_i u, shape (..., 3)
        XX: X_i X_j u (outer index i applied last), shape (..., 3, 3)
        grad: Euclidean gradient of u, shape (..., 3)
    """
    value: np.ndarray
    X: np.ndarray
    XX: np.ndarray
    grad: np.ndarray

    def commutator_defect(self) -> np.ndarray:
        """X1X2u − X2X1u − X3u, zero for exact jets"""
        return self.XX[..., 0, 1] - self.XX[..., 1, 0] - self.X[..., 2]


def horizontal_jet(field: ScalarField, points) -> HorizontalJet:
    """X_i u and X_i X_j u at a batch of points from an order-2 jet of u"""
    pts = as_points(points)
    u = field_jet(field, pts, 2)
    first = [frame_derivative(u, i, pts) for i in range(3)]
    X = np.stack([f.value for f in first], axis=-1)
    XX = np.empty(pts.shape[:-1] + (3, 3))
    for j in range(3):
        for i in range(3):
            XX[..., i, j] = frame_derivative(first[j], i, pts).value
    return HorizontalJet(value=u.value, X=X, XX=XX, grad=u.grad)
