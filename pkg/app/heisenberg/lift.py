"""Horizontal lift of planar curves"""
from typing import Tuple
import logging

import numpy as np
from scipy import special

from app.heisenberg.curves import CurveModel, Derivatives

logger = logging.getLogger(__name__)

HEIGHT_PIECES = 64
_NODES, _WEIGHTS = special.roots_legendre(16)


class LiftedCurve(CurveModel):
    """
    Horizontal lift of a planar C² curve.

    γ3(t) = z0 + ½∫_{t0}^{t} (γ1 γ̇2 − γ2 γ̇1) ds, so ω(γ̇) = 0 identically.
    """

    def __init__(self, planar: CurveModel, z0: float = 0.0):
        if planar.dim != 2:
            raise ValueError("horizontal_lift expects a planar curve")
        super().__init__(planar.t0, planar.t1)
        self.planar = planar
        self.z0 = float(z0)

    def _area_rate(self, s: np.ndarray) -> np.ndarray:
        p, v, _ = self.planar.derivatives(s)
        return 0.5 * (p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0])

    def height(self, t) -> np.ndarray:
        """
        γ3 at the given parameters.

        The gaps between consecutive sorted nodes are cut into pieces no longer
        than 1/HEIGHT_PIECES of the span, each summed with a fixed Gauss–Legendre
        rule in one vectorized evaluation, and accumulated.
        """
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        if flat.size == 0:
            return np.full(t.shape, self.z0)
        order = np.argsort(flat, kind="stable")
        t0 = self.t0 if self.t0 is not None else 0.0
        ends = np.concatenate([[t0], flat[order]])
        a, d = ends[:-1], np.diff(ends)
        span = (self.t1 - t0) if self.t1 is not None else 0.0
        longest = span / HEIGHT_PIECES if span > 0.0 else 0.1
        k = np.maximum(1, np.ceil(np.abs(d) / longest)).astype(int)
        gap = np.repeat(np.arange(len(a)), k)
        j = np.arange(int(k.sum())) - np.repeat(np.cumsum(k) - k, k)
        lo = a[gap] + d[gap] * j / k[gap]
        hi = a[gap] + d[gap] * (j + 1) / k[gap]
        x, w = _NODES, _WEIGHTS
        rate = self._area_rate(0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * x[None, :])
        pieces = 0.5 * (hi - lo) * (rate @ w)
        out = np.empty_like(flat)
        out[order] = np.cumsum(np.bincount(gap, weights=pieces, minlength=len(a)))
        return self.z0 + out.reshape(t.shape)

    def derivatives(self, t) -> Derivatives:
        t = np.asarray(t, dtype=float)
        p, v, a = self.planar.derivatives(t)
        h = self.height(t)
        v3 = 0.5 * (p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0])
        a3 = 0.5 * (p[..., 0] * a[..., 1] - p[..., 1] * a[..., 0])
        pos = np.concatenate([p, h[..., None]], axis=-1)
        vel = np.concatenate([v, v3[..., None]], axis=-1)
        acc = np.concatenate([a, a3[..., None]], axis=-1)
        return pos, vel, acc

    def closure_gap(self) -> Tuple[float, float]:
        """(planar gap, height gap) between the endpoints"""
        t0, t1 = self.span()
        p = self.planar.position(np.array([t0, t1]))
        planar_gap = float(np.linalg.norm(p[1] - p[0]))
        height_gap = float(self.height(np.array(t1)) - self.height(np.array(t0)))
        return planar_gap, abs(height_gap)


def horizontal_lift(planar: CurveModel, z0: float = 0.0) -> LiftedCurve:
    """
    Lift a planar curve to a horizontal curve of ℍ.

    Args:
        planar: Curve with dim == 2 and a parameter span
        z0: Height at the start of the span

    Returns:
        LiftedCurve with ω(γ̇) = 0 everywhere
    """
    lifted = LiftedCurve(planar, z0)
    logger.debug(f"Lifted planar curve over [{planar.t0}, {planar.t1}] from z0={z0}")
    return lifted
