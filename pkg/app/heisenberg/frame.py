"""Basis changes between the Euclidean basis and the frame {X1, X2, X3}"""
import numpy as np

from app.heisenberg.types import FrameVector, HorizontalVector, HPoint


def frame_matrix(p) -> np.ndarray:
    """Columns are the Euclidean components of X1, X2, X3 at p"""
    p = np.asarray(p, dtype=float)
    m = np.zeros(p.shape[:-1] + (3, 3))
    m[..., 0, 0] = 1.0
    m[..., 1, 1] = 1.0
    m[..., 2, 2] = 1.0
    m[..., 2, 0] = -0.5 * p[..., 1]
    m[..., 2, 1] = 0.5 * p[..., 0]
    return m


def frame_from_euclidean_array(p, v) -> np.ndarray:
    """Frame coefficients of a Euclidean vector: (v1, v2, ω_p(v))"""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    c3 = v[..., 2] + 0.5 * p[..., 1] * v[..., 0] - 0.5 * p[..., 0] * v[..., 1]
    return np.stack([v[..., 0], v[..., 1], c3], axis=-1)


def euclidean_from_frame_array(p, c) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    c = np.asarray(c, dtype=float)
    v3 = c[..., 2] - 0.5 * p[..., 1] * c[..., 0] + 0.5 * p[..., 0] * c[..., 1]
    return np.stack([c[..., 0], c[..., 1], v3], axis=-1)


def frame_from_euclidean(p: HPoint, v) -> FrameVector:
    c = frame_from_euclidean_array(p.as_array(), v)
    return FrameVector(c1=float(c[0]), c2=float(c[1]), c3=float(c[2]), base=p)


def euclidean_from_frame(w: FrameVector) -> np.ndarray:
    return euclidean_from_frame_array(w.base.as_array(), w.as_array())


def J_rotate_array(h) -> np.ndarray:
    """J(a X1 + b X2) = b X1 − a X2 on arrays with trailing dimension 2"""
    h = np.asarray(h, dtype=float)
    return np.stack([h[..., 1], -h[..., 0]], axis=-1)


def J_rotate(h: HorizontalVector) -> HorizontalVector:
    return HorizontalVector(c1=h.c2, c2=-h.c1, base=h.base)


def horizontal_inner(a: HorizontalVector, b: HorizontalVector) -> float:
    return a.c1 * b.c1 + a.c2 * b.c2
