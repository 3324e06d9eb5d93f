"""Parametric surface patches f(v, w) with exact partials"""
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from app.errors import GeometryError
from app.heisenberg.curves import CurveModel
from app.jets.horizontal import field_jet
from app.jets.jet import Jet

PatchDerivatives = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]


class PatchModel(ABC):
    """Abstract C² patch (v, w) ↦ f(v, w) ∈ ℝ³"""

    @abstractmethod
    def derivatives(self, v, w) -> PatchDerivatives:
        """(f, f_v, f_w, f_vv, f_vw, f_ww), each of shape S + (3,)"""
        pass

    def point(self, v, w) -> np.ndarray:
        return self.derivatives(v, w)[0]

    def normal(self, v, w) -> np.ndarray:
        """Euclidean normal n = f_v × f_w"""
        _, fv, fw, _, _, _ = self.derivatives(v, w)
        return np.cross(fv, fw)

    def iso_curve(self, fixed: str, value: float, t0: float, t1: float) -> "PatchEdgeCurve":
        """Coordinate curve of the patch: v fixed (t ↦ f(value, t)) or w fixed"""
        return PatchEdgeCurve(self, fixed, value, t0, t1)


class JetPatch(PatchModel):
    """Patch given by a function of the (v, w) jets returning three components"""

    def __init__(self, func: Callable[[Jet, Jet], Sequence], name: str = ""):
        self.func = func
        self.name = name

    def _components(self, v: Jet, w: Jet):
        comps = self.func(v, w)
        if len(comps) != 3:
            raise ValueError(f"patch returned {len(comps)} components, expected 3")
        return comps

    def derivatives(self, v, w) -> PatchDerivatives:
        v, w = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(w, dtype=float))
        vj = Jet.variable(v, 0, 2, 2)
        wj = Jet.variable(w, 1, 2, 2)
        parts = [[] for _ in range(6)]
        for c in self._components(vj, wj):
            if isinstance(c, Jet):
                vals = (c.value, c.grad[..., 0], c.grad[..., 1],
                        c.hess[..., 0, 0], c.hess[..., 0, 1], c.hess[..., 1, 1])
            else:
                z = np.zeros(v.shape)
                vals = (np.broadcast_to(np.asarray(c, dtype=float), v.shape), z, z, z, z, z)
            for k in range(6):
                parts[k].append(np.broadcast_to(vals[k], v.shape))
        return tuple(np.stack(p, axis=-1) for p in parts)


class PatchEdgeCurve(CurveModel):
    """Coordinate curve of a patch evaluated through the patch derivatives"""

    def __init__(self, patch: PatchModel, fixed: str, value: float, t0: float, t1: float):
        super().__init__(t0, t1)
        if fixed not in ("v", "w"):
            raise ValueError("fixed must be 'v' or 'w'")
        self.patch = patch
        self.fixed = fixed
        self.value = float(value)

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        c = np.full(t.shape, self.value)
        if self.fixed == "v":
            f, _, fw, _, _, fww = self.patch.derivatives(c, t)
            return f, fw, fww
        f, fv, _, fvv, _, _ = self.patch.derivatives(t, c)
        return f, fv, fvv


class PolarGraphChart(PatchModel):
    """
    Polar chart of {u = 0} as an x3-graph around a point: (ρ, θ) ↦ (c1 + ρcosθ, c2 + ρsinθ, h).

    h solves u = 0 by Newton's method started from c3; its partials follow
    from implicit differentiation, so the chart is valid wherever ∂3u ≠ 0.
    """

    def __init__(self, field, center, name: str = "polar-graph", max_iterations: int = 50):
        self.field = field
        self.center = np.asarray(center, dtype=float)
        self.name = name
        self.max_iterations = max_iterations

    def _solve_height(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        h = np.full(x1.shape, self.center[2])
        for _ in range(self.max_iterations):
            pts = np.stack([x1, x2, h], axis=-1)
            j = field_jet(self.field, pts, 1)
            u3 = j.grad[..., 2]
            if np.any(u3 == 0.0):
                raise GeometryError("∂3u vanishes: the surface is not an x3-graph here",
                                    count=int(np.count_nonzero(u3 == 0.0)))
            step = j.value / u3
            h = h - step
            if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(h))):
                return h
        raise GeometryError("Newton solve for the graph height did not converge",
                            center=self.center.tolist())

    def derivatives(self, v, w) -> PatchDerivatives:
        rho, theta = np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(w, dtype=float))
        c, s = np.cos(theta), np.sin(theta)
        x1 = self.center[0] + rho * c
        x2 = self.center[1] + rho * s
        h = self._solve_height(x1, x2)
        j = field_jet(self.field, np.stack([x1, x2, h], axis=-1), 2)
        g, H = j.grad, j.hess
        u3 = g[..., 2]
        h1, h2 = -g[..., 0] / u3, -g[..., 1] / u3
        hd = np.stack([h1, h2], axis=-1)

        # h_ij = −(u_ij + u_i3 h_j + u_j3 h_i + u_33 h_i h_j)/u_3
        hh = -(H[..., :2, :2]
               + H[..., :2, 2][..., :, None] * hd[..., None, :]
               + H[..., 2, :2][..., None, :] * hd[..., :, None]
               + H[..., 2, 2][..., None, None] * hd[..., :, None] * hd[..., None, :]) / u3[..., None, None]

        a = np.stack([c, s], axis=-1)                  # ∂ρ(x1, x2)
        b = np.stack([-rho * s, rho * c], axis=-1)     # ∂θ(x1, x2)
        ab = np.stack([-s, c], axis=-1)                # ∂ρ∂θ(x1, x2)
        bb = np.stack([-rho * c, -rho * s], axis=-1)   # ∂θ∂θ(x1, x2)

        def quad(p, q):
            return np.einsum("...i,...ij,...j->...", p, hh, q)

        zero = np.zeros_like(rho)
        f = np.stack([x1, x2, h], axis=-1)
        fv = np.stack([c, s, np.einsum("...i,...i->...", hd, a)], axis=-1)
        fw = np.stack([-rho * s, rho * c, np.einsum("...i,...i->...", hd, b)], axis=-1)
        fvv = np.stack([zero, zero, quad(a, a)], axis=-1)
        fvw = np.stack([-s, c, quad(a, b) + np.einsum("...i,...i->...", hd, ab)], axis=-1)
        fww = np.stack([-rho * c, -rho * s, quad(b, b) + np.einsum("...i,...i->...", hd, bb)], axis=-1)
        return f, fv, fw, fvv, fvw, fww
