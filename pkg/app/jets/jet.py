"""
Forward-mode jets to order 3.

A Jet carries a value together with its exact partial derivatives up to a
fixed order in ``nvars`` variables. Every array has a leading batch shape so a
single Jet represents the same expression evaluated at many points; the
derivative tensors are stored in full and stay symmetric because every update
is assembled from symmetrized outer products.

Usage:
    from app.jets import Jet, jexp, jsin

    x = Jet.variable(np.array([3.0]), index=0, nvars=1, order=2)
    y = x * x
    y.grad[..., 0]     # 6
    y.hess[..., 0, 0]  # 2
"""
from typing import Callable, Optional, Tuple, Union
import logging

import numpy as np

from app.errors import JetDomainError

logger = logging.getLogger(__name__)

Number = Union[float, int, np.ndarray]


def _tri(a2: np.ndarray, b1: np.ndarray) -> np.ndarray:
    """a_ij b_k + a_ik b_j + a_jk b_i for symmetric a"""
    t = np.einsum("...ij,...k->...ijk", a2, b1)
    return t + np.swapaxes(t, -1, -2) + np.moveaxis(t, -1, -3)


def _outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j->...ij", a, b)


def _outer3(a: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j,...k->...ijk", a, a, a)


def _expand(c: Number, k: int):
    if isinstance(c, np.ndarray) and c.ndim > 0:
        return c.reshape(c.shape + (1,) * k)
    return c


class Jet:
    """
    Truncated Taylor expansion of a scalar quantity.

    Attributes:
        value: Values, batch shape S
        grad: First partials, shape S + (n,)
        hess: Second partials, shape S + (n, n), present when order >= 2
        third: Third partials, shape S + (n, n, n), present when order == 3
        nvars: Number of differentiation variables n
        order: Highest derivative order carried (0..3)
    """
    __slots__ = ("value", "grad", "hess", "third", "nvars", "order")
    __array_ufunc__ = None

    def __init__(
        self,
        value: Number,
        grad: Optional[np.ndarray] = None,
        hess: Optional[np.ndarray] = None,
        third: Optional[np.ndarray] = None,
        nvars: Optional[int] = None,
    ):
        self.value = np.asarray(value, dtype=float)
        self.grad = grad
        self.hess = hess
        self.third = third
        if grad is None:
            self.order = 0
        elif hess is None:
            self.order = 1
        elif third is None:
            self.order = 2
        else:
            self.order = 3
        self.nvars = nvars if nvars is not None else (grad.shape[-1] if grad is not None else 0)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def variable(cls, values: Number, index: int, nvars: int, order: int) -> "Jet":
        """Seed jet of the coordinate with the given index"""
        values = np.asarray(values, dtype=float)
        shape = values.shape
        grad = hess = third = None
        if order >= 1:
            grad = np.zeros(shape + (nvars,))
            grad[..., index] = 1.0
        if order >= 2:
            hess = np.zeros(shape + (nvars, nvars))
        if order >= 3:
            third = np.zeros(shape + (nvars, nvars, nvars))
        return cls(values, grad, hess, third, nvars)

    @classmethod
    def constant(cls, values: Number, nvars: int, order: int) -> "Jet":
        values = np.asarray(values, dtype=float)
        shape = values.shape
        grad = np.zeros(shape + (nvars,)) if order >= 1 else None
        hess = np.zeros(shape + (nvars, nvars)) if order >= 2 else None
        third = np.zeros(shape + (nvars, nvars, nvars)) if order >= 3 else None
        return cls(values, grad, hess, third, nvars)

    def like(self, values: Number) -> "Jet":
        """Constant jet matching this jet's order, variables and batch shape"""
        values = np.broadcast_to(np.asarray(values, dtype=float), self.value.shape).copy()
        return Jet.constant(values, self.nvars, self.order)

    # ------------------------------------------------------------------
    # Structural operations
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.value.shape

    def partial(self, index: int) -> "Jet":
        """∂f/∂x_index as a jet one order lower"""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        value = self.grad[..., index]
        grad = self.hess[..., index, :] if self.order >= 2 else None
        hess = self.third[..., index, :, :] if self.order >= 3 else None
        return Jet(value, grad, hess, None, self.nvars)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return Jet(
            self.value,
            self.grad if order >= 1 else None,
            self.hess if order >= 2 else None,
            self.third if order >= 3 else None,
            self.nvars,
        )

    def where(self, mask: np.ndarray, other: "Jet") -> "Jet":
        """Select self where mask holds, other elsewhere (same order and variables)"""
        order = min(self.order, other.order)
        a, b = self.truncate(order), other.truncate(order)

        def pick(x, y, k):
            if x is None:
                return None
            return np.where(_expand(mask, k), x, y)

        return Jet(
            np.where(mask, a.value, b.value),
            pick(a.grad, b.grad, 1),
            pick(a.hess, b.hess, 2),
            pick(a.third, b.third, 3),
            self.nvars,
        )

    # ------------------------------------------------------------------
    # Chain rule
    # ------------------------------------------------------------------

    def compose(self, d0: np.ndarray, d1: np.ndarray, d2: np.ndarray, d3: np.ndarray) -> "Jet":
        """φ(self) given φ and its first three derivatives at self.value"""
        grad = hess = third = None
        if self.order >= 1:
            grad = _expand(d1, 1) * self.grad
        if self.order >= 2:
            hess = _expand(d2, 2) * _outer(self.grad, self.grad) + _expand(d1, 2) * self.hess
        if self.order >= 3:
            third = (
                _expand(d3, 3) * _outer3(self.grad)
                + _expand(d2, 3) * _tri(self.hess, self.grad)
                + _expand(d1, 3) * self.third
            )
        return Jet(d0, grad, hess, third, self.nvars)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other) -> Optional["Jet"]:
        if isinstance(other, Jet):
            return other
        return None

    def __neg__(self) -> "Jet":
        return Jet(
            -self.value,
            None if self.grad is None else -self.grad,
            None if self.hess is None else -self.hess,
            None if self.third is None else -self.third,
            self.nvars,
        )

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other) -> "Jet":
        o = self._coerce(other)
        if o is None:
            return Jet(self.value + other, self.grad, self.hess, self.third, self.nvars)
        order = min(self.order, o.order)
        a, b = self.truncate(order), o.truncate(order)
        return Jet(
            a.value + b.value,
            None if order < 1 else a.grad + b.grad,
            None if order < 2 else a.hess + b.hess,
            None if order < 3 else a.third + b.third,
            self.nvars,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def _scale(self, c: Number) -> "Jet":
        return Jet(
            self.value * c,
            None if self.grad is None else self.grad * _expand(c, 1),
            None if self.hess is None else self.hess * _expand(c, 2),
            None if self.third is None else self.third * _expand(c, 3),
            self.nvars,
        )

    def __mul__(self, other) -> "Jet":
        o = self._coerce(other)
        if o is None:
            return self._scale(np.asarray(other, dtype=float) if isinstance(other, np.ndarray) else other)
        order = min(self.order, o.order)
        f, g = self.truncate(order), o.truncate(order)
        grad = hess = third = None
        fv, gv = f.value, g.value
        if order >= 1:
            grad = _expand(gv, 1) * f.grad + _expand(fv, 1) * g.grad
        if order >= 2:
            cross = _outer(f.grad, g.grad)
            hess = (
                _expand(gv, 2) * f.hess
                + cross + np.swapaxes(cross, -1, -2)
                + _expand(fv, 2) * g.hess
            )
        if order >= 3:
            third = (
                _expand(gv, 3) * f.third
                + _tri(f.hess, g.grad)
                + _tri(g.hess, f.grad)
                + _expand(fv, 3) * g.third
            )
        return Jet(fv * gv, grad, hess, third, self.nvars)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        v = self.value
        bad = v == 0.0
        if np.any(bad):
            raise JetDomainError("div", "division by zero", int(np.count_nonzero(bad)))
        r = 1.0 / v
        return self.compose(r, -r * r, 2.0 * r ** 3, -6.0 * r ** 4)

    def __truediv__(self, other) -> "Jet":
        o = self._coerce(other)
        if o is None:
            other = np.asarray(other, dtype=float)
            if np.any(other == 0.0):
                raise JetDomainError("div", "division by zero", int(np.count_nonzero(other == 0.0)))
            return self._scale(1.0 / other)
        return self * o.reciprocal()

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, exponent) -> "Jet":
        if isinstance(exponent, Jet):
            return jexp(exponent * jlog(self))
        return jpow(self, float(exponent))

    def __rpow__(self, base) -> "Jet":
        base = np.asarray(base, dtype=float)
        if np.any(base <= 0.0):
            raise JetDomainError("pow", "base of a variable exponent must be positive")
        return jexp(self * np.log(base))

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, nvars={self.nvars}, shape={self.shape})"


# ----------------------------------------------------------------------
# Primitive functions: accept jets or plain numbers
# ----------------------------------------------------------------------

def _lift(fn: Callable[[Jet], Jet], plain: Callable[[np.ndarray], np.ndarray]):
    def wrapper(x):
        if isinstance(x, Jet):
            return fn(x)
        return plain(np.asarray(x, dtype=float))
    wrapper.__name__ = plain.__name__
    return wrapper


def _exp(x: Jet) -> Jet:
    e = np.exp(x.value)
    return x.compose(e, e, e, e)


def _log(x: Jet) -> Jet:
    v = x.value
    bad = v <= 0.0
    if np.any(bad):
        raise JetDomainError("ln", "argument must be positive", int(np.count_nonzero(bad)))
    r = 1.0 / v
    return x.compose(np.log(v), r, -r * r, 2.0 * r ** 3)


def _plain_log(v: np.ndarray) -> np.ndarray:
    if np.any(v <= 0.0):
        raise JetDomainError("ln", "argument must be positive", int(np.count_nonzero(v <= 0.0)))
    return np.log(v)


def _sqrt(x: Jet) -> Jet:
    v = x.value
    bad = v <= 0.0
    if np.any(bad):
        raise JetDomainError("sqrt", "argument must be positive", int(np.count_nonzero(bad)))
    s = np.sqrt(v)
    return x.compose(s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v))


def _plain_sqrt(v: np.ndarray) -> np.ndarray:
    if np.any(v < 0.0):
        raise JetDomainError("sqrt", "argument must be non-negative", int(np.count_nonzero(v < 0.0)))
    return np.sqrt(v)


def _sin(x: Jet) -> Jet:
    s, c = np.sin(x.value), np.cos(x.value)
    return x.compose(s, c, -s, -c)


def _cos(x: Jet) -> Jet:
    s, c = np.sin(x.value), np.cos(x.value)
    return x.compose(c, -s, -c, s)


def _abs(x: Jet) -> Jet:
    from app.config import settings

    v = x.value
    bad = np.abs(v) <= settings.TAU_ABS
    if np.any(bad):
        raise JetDomainError("abs", f"argument within dead-band {settings.TAU_ABS} of zero",
                             int(np.count_nonzero(bad)))
    s = np.sign(v)
    z = np.zeros_like(v)
    return x.compose(np.abs(v), s, z, z)


jexp = _lift(_exp, np.exp)
jlog = _lift(_log, _plain_log)
jsqrt = _lift(_sqrt, _plain_sqrt)
jsin = _lift(_sin, np.sin)
jcos = _lift(_cos, np.cos)
jabs = _lift(_abs, np.abs)


def jpow(x, exponent: float):
    """x ** exponent for a constant exponent"""
    c = float(exponent)
    if not isinstance(x, Jet):
        return np.power(np.asarray(x, dtype=float), c)
    v = x.value
    if c.is_integer():
        if c == 0.0:
            return x.like(1.0)
        if c < 0.0 and np.any(v == 0.0):
            raise JetDomainError("pow", "zero base with negative exponent", int(np.count_nonzero(v == 0.0)))
        n = int(c)
        with np.errstate(divide="ignore", invalid="ignore"):
            d0 = v ** n
            d1 = n * v ** (n - 1) if n != 0 else np.zeros_like(v)
            d2 = n * (n - 1) * v ** (n - 2) if n not in (0, 1) else np.zeros_like(v)
            d3 = n * (n - 1) * (n - 2) * v ** (n - 3) if n not in (0, 1, 2) else np.zeros_like(v)
        return x.compose(d0, d1, d2, d3)
    bad = v <= 0.0
    if np.any(bad):
        raise JetDomainError("pow", "non-integer exponent requires a positive base", int(np.count_nonzero(bad)))
    return x.compose(
        v ** c,
        c * v ** (c - 1.0),
        c * (c - 1.0) * v ** (c - 2.0),
        c * (c - 1.0) * (c - 2.0) * v ** (c - 3.0),
    )


def value_of(x) -> np.ndarray:
    """Plain value of a jet or number"""
    return x.value if isinstance(x, Jet) else np.asarray(x, dtype=float)
