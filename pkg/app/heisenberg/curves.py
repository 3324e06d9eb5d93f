"""
Curve models.

A CurveModel returns exact positions, velocities and accelerations at a batch
of parameter values. Expression curves and natively built curves are jets in
the single variable t; transformed curves apply the affine isometries of ℍ to
another model.
"""
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence, Tuple
import logging

import numpy as np

from app.errors import ZeroVelocityError
from app.heisenberg.group import contact_form
from app.jets.jet import Jet

logger = logging.getLogger(__name__)

Derivatives = Tuple[np.ndarray, np.ndarray, np.ndarray]


class CurveModel(ABC):
    """Abstract twice-differentiable curve t ↦ γ(t)"""

    dim: int = 3

    def __init__(self, t0: Optional[float] = None, t1: Optional[float] = None):
        self.t0 = t0
        self.t1 = t1

    @abstractmethod
    def derivatives(self, t) -> Derivatives:
        """
        Evaluate the curve.

        Args:
            t: Parameter values, any shape S

        Returns:
            (γ, γ̇, γ̈), each of shape S + (dim,)
        """
        pass

    def position(self, t) -> np.ndarray:
        return self.derivatives(t)[0]

    def velocity(self, t) -> np.ndarray:
        return self.derivatives(t)[1]

    def span(self) -> Tuple[float, float]:
        if self.t0 is None or self.t1 is None:
            raise ValueError("curve has no parameter span")
        return self.t0, self.t1

    def omega(self, t) -> np.ndarray:
        """ω(γ̇(t))"""
        pos, vel, _ = self.derivatives(t)
        return contact_form(pos, vel)

    def reversed(self) -> "CurveModel":
        return ReversedCurve(self)

    def transformed(self, matrix: np.ndarray, offset: Sequence[float] = (0.0, 0.0, 0.0),
                    position_map: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> "CurveModel":
        return TransformedCurve(self, matrix, offset, position_map)


class JetCurve(CurveModel):
    """Curve given by a function of the t-jet returning its components"""

    def __init__(self, func: Callable[[Jet], Sequence], t0: Optional[float] = None,
                 t1: Optional[float] = None, dim: int = 3, name: str = ""):
        super().__init__(t0, t1)
        self.func = func
        self.dim = dim
        self.name = name

    def derivatives(self, t) -> Derivatives:
        t = np.asarray(t, dtype=float)
        tj = Jet.variable(t, 0, 1, 2)
        comps = self.func(tj)
        if len(comps) != self.dim:
            raise ValueError(f"curve returned {len(comps)} components, expected {self.dim}")
        pos, vel, acc = [], [], []
        for c in comps:
            if isinstance(c, Jet):
                pos.append(np.broadcast_to(c.value, t.shape))
                vel.append(np.broadcast_to(c.grad[..., 0], t.shape))
                acc.append(np.broadcast_to(c.hess[..., 0, 0], t.shape))
            else:
                pos.append(np.broadcast_to(np.asarray(c, dtype=float), t.shape))
                vel.append(np.zeros(t.shape))
                acc.append(np.zeros(t.shape))
        return np.stack(pos, axis=-1), np.stack(vel, axis=-1), np.stack(acc, axis=-1)


class ReversedCurve(CurveModel):
    """γ(t0 + t1 − t): same trace, opposite orientation"""

    def __init__(self, base: CurveModel):
        super().__init__(base.t0, base.t1)
        self.base = base
        self.dim = base.dim

    def derivatives(self, t) -> Derivatives:
        t0, t1 = self.span()
        pos, vel, acc = self.base.derivatives(t0 + t1 - np.asarray(t, dtype=float))
        return pos, -vel, acc


class TransformedCurve(CurveModel):
    """
    Image of a curve under an affine map x ↦ A x + b.

    Left translations, x3-rotations and dilations of ℍ are affine in
    exponential coordinates, so velocities and accelerations transform by A.
    """

    def __init__(self, base: CurveModel, matrix: np.ndarray, offset: Sequence[float] = (0.0, 0.0, 0.0),
                 position_map: Optional[Callable[[np.ndarray], np.ndarray]] = None):
        super().__init__(base.t0, base.t1)
        self.base = base
        self.matrix = np.asarray(matrix, dtype=float)
        self.offset = np.asarray(offset, dtype=float)
        self.position_map = position_map

    def derivatives(self, t) -> Derivatives:
        pos, vel, acc = self.base.derivatives(t)
        if self.position_map is not None:
            new_pos = self.position_map(pos)
        else:
            new_pos = pos @ self.matrix.T + self.offset
        return new_pos, vel @ self.matrix.T, acc @ self.matrix.T


def require_regular(vel: np.ndarray, scale: float = 1.0):
    """Raise when any velocity vanishes"""
    speed = np.linalg.norm(vel, axis=-1)
    bad = speed <= 1e-14 * max(scale, 1.0)
    if np.any(bad):
        raise ZeroVelocityError("curve velocity vanishes", count=int(np.count_nonzero(bad)))
