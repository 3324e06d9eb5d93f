"""
Group law, dilations, rotations and the contact form.

The coordinate-level helpers take sequences whose entries may be floats,
numpy arrays or jets, so the same law transforms points and scalar fields.
"""
from typing import Sequence, Tuple, Union

import numpy as np

from app.errors import InputError
from app.heisenberg.types import HPoint

Coordinate = Union[float, np.ndarray, object]


def mul_coords(y: Sequence[Coordinate], x: Sequence[Coordinate]) -> Tuple[Coordinate, Coordinate, Coordinate]:
    """y ∗ x = (x1+y1, x2+y2, x3+y3 − ½(x1y2 − x2y1))"""
    return (
        x[0] + y[0],
        x[1] + y[1],
        x[2] + y[2] - 0.5 * (x[0] * y[1] - x[1] * y[0]),
    )


def group_mul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a ∗ b on arrays with trailing dimension 3 (a plays y, b plays x)"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.stack(mul_coords(np.moveaxis(a, -1, 0), np.moveaxis(b, -1, 0)), axis=-1)


def group_mul(a: HPoint, b: HPoint) -> HPoint:
    return HPoint.from_array(group_mul_array(a.as_array(), b.as_array()))


def group_inverse(a: HPoint) -> HPoint:
    return a.inverse()


def _check_r(r: float):
    if not r > 0:
        raise InputError(f"dilation factor must be positive, got {r}", r=r)


def dilate_array(r: float, p: np.ndarray) -> np.ndarray:
    _check_r(r)
    p = np.asarray(p, dtype=float)
    return p * np.array([r, r, r * r])


def dilate(r: float, p: HPoint) -> HPoint:
    """δ_r(p) = (r x1, r x2, r² x3)"""
    return HPoint.from_array(dilate_array(r, p.as_array()))


def rotation_matrix(theta: float) -> np.ndarray:
    """Rotation about the x3-axis; an isometry of ℍ fixing x3"""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def left_translation_matrix(g) -> np.ndarray:
    """Linear part of x ↦ g ∗ x"""
    g = np.asarray(g, dtype=float)
    return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-0.5 * g[1], 0.5 * g[0], 1.0]])


def dilation_matrix(r: float) -> np.ndarray:
    _check_r(r)
    return np.diag([r, r, r * r])


def contact_form(p, v):
    """ω_p(v) = v3 − ½(p1 v2 − p2 v1), for arrays with trailing dimension 3"""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    return v[..., 2] - 0.5 * (p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0])
