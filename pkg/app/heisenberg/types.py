"""
Value types of the Heisenberg group in exponential coordinates.

Batched computations work on numpy arrays with a trailing dimension of 3;
these models are the typed boundary used by reports and the HTTP API.
"""
import math
from typing import List

import numpy as np
from pydantic import BaseModel, field_validator


class HPoint(BaseModel):
    """A point (x1, x2, x3) of ℍ"""
    x1: float
    x2: float
    x3: float

    class Config:
        frozen = True

    @field_validator("x1", "x2", "x3")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("coordinates must be finite")
        return v

    @classmethod
    def from_array(cls, a) -> "HPoint":
        a = np.asarray(a, dtype=float)
        return cls(x1=float(a[0]), x2=float(a[1]), x3=float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def inverse(self) -> "HPoint":
        return HPoint(x1=-self.x1, x2=-self.x2, x3=-self.x3)

    def as_list(self) -> List[float]:
        return [self.x1, self.x2, self.x3]


class FrameVector(BaseModel):
    """
    Tangent vector c1 X1 + c2 X2 + c3 X3 at a base point.

    The third coefficient is on X3, not X3^L; use coefficients_L for the
    g_L-orthonormal frame {X1, X2, X3/√L}.
    """
    c1: float
    c2: float
    c3: float
    base: HPoint

    class Config:
        frozen = True

    @field_validator("c1", "c2", "c3")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("coefficients must be finite")
        return v

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])

    def coefficients_L(self, L: float) -> np.ndarray:
        """Coefficients on {X1, X2, X3^L}: v3^L = v3·√L"""
        return np.array([self.c1, self.c2, self.c3 * math.sqrt(L)])


class HorizontalVector(BaseModel):
    """Horizontal vector c1 X1 + c2 X2 at a base point"""
    c1: float
    c2: float
    base: HPoint

    class Config:
        frozen = True

    @field_validator("c1", "c2")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("coefficients must be finite")
        return v

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2])

    def norm(self) -> float:
        return math.hypot(self.c1, self.c2)
