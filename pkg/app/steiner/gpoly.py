"""
Polynomial algebra of the g-derivation.

For an eikonal δ, g(h) = ⟨∇_H h, ∇_H δ⟩ is linear, satisfies the Leibniz rule
and maps the polynomial ring in A, B, C, D, E to itself:

    g(A) = B + 2C − A²,  g(B) = 0,  g(C) = D − AC,  g(D) = −E,  g(E) = −2AE + 2CD.

div_H(h ∇_H δ) = hA + g(h), so the iterated divergences of δ are polynomials
in A..E too. Coefficients are exact rationals.
"""
from functools import lru_cache
from typing import Dict, List, Mapping, Tuple, Union

import numpy as np
import sympy as sp

A, B, C, D, E = SYMBOLS = sp.symbols("A B C D E")
SYMBOL_NAMES = tuple(str(s) for s in SYMBOLS)

G_TABLE = {
    A: B + 2 * C - A ** 2,
    B: sp.Integer(0),
    C: D - A * C,
    D: -E,
    E: -2 * A * E + 2 * C * D,
}

Monomial = Tuple[int, int, int, int, int]
Operand = Union["GPolynomial", int, sp.Rational, sp.Expr]


class GPolynomial:
    """
    Polynomial in A, B, C, D, E over ℚ.

    Terms are kept in a canonical order (total degree, then exponents, both
    descending), and equality compares the exponent-to-coefficient maps.
    """
    __slots__ = ("poly",)

    def __init__(self, expr: Operand = 0):
        if isinstance(expr, GPolynomial):
            expr = expr.poly.as_expr()
        self.poly = sp.Poly(sp.sympify(expr), *SYMBOLS, domain=sp.QQ)

    @classmethod
    def parse(cls, text: str) -> "GPolynomial":
        """Polynomial from text such as "A*B + 2*D"; only A..E may appear"""
        expr = sp.sympify(text, locals={name: s for name, s in zip(SYMBOL_NAMES, SYMBOLS)})
        unknown = expr.free_symbols - set(SYMBOLS)
        if unknown:
            raise ValueError(f"unknown symbols {sorted(str(s) for s in unknown)}")
        return cls(expr)

    def terms(self) -> List[Tuple[Monomial, sp.Rational]]:
        return sorted(self.poly.terms(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    @property
    def symbols(self) -> List[str]:
        """Generators that occur"""
        used = set()
        for monom, _ in self.poly.terms():
            used.update(name for name, e in zip(SYMBOL_NAMES, monom) if e)
        return [name for name in SYMBOL_NAMES if name in used]

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def __add__(self, other: Operand) -> "GPolynomial":
        return GPolynomial(self.poly.as_expr() + GPolynomial(other).poly.as_expr())

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "GPolynomial":
        return GPolynomial(self.poly.as_expr() - GPolynomial(other).poly.as_expr())

    def __neg__(self) -> "GPolynomial":
        return GPolynomial(-self.poly.as_expr())

    def __mul__(self, other: Operand) -> "GPolynomial":
        return GPolynomial(self.poly.as_expr() * GPolynomial(other).poly.as_expr())

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GPolynomial":
        return GPolynomial(self.poly.as_expr() ** int(k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GPolynomial):
            try:
                other = GPolynomial(other)
            except (sp.SympifyError, sp.PolynomialError, TypeError):
                return NotImplemented
        return self.poly.as_dict() == other.poly.as_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.terms()))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for monom, coeff in self.terms():
            factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(SYMBOL_NAMES, monom) if e]
            mag = abs(coeff)
            body = "*".join(([] if mag == 1 and factors else [str(mag)]) + factors)
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"GPolynomial({str(self)!r})"

    def evaluate(self, values: Mapping[str, np.ndarray]) -> np.ndarray:
        """Evaluate on arrays of A..E; generators that occur must be present"""
        arrays = {k: np.asarray(v, dtype=float) for k, v in values.items()}
        shape = np.broadcast(*arrays.values()).shape if arrays else ()
        total = np.zeros(shape)
        for monom, coeff in self.terms():
            term = np.full(shape, float(coeff))
            for name, e in zip(SYMBOL_NAMES, monom):
                if e:
                    term = term * arrays[name] ** e
            total = total + term
        return total

    def to_dict(self) -> Dict[str, str]:
        return {"polynomial": str(self), "symbols": ",".join(self.symbols)}


def g_apply(p: Operand) -> GPolynomial:
    """g(p) = Σ_s (∂p/∂s)·g(s), the linear Leibniz extension of the table"""
    p = GPolynomial(p)
    result = sp.Integer(0)
    for s in SYMBOLS:
        result += p.poly.diff(s).as_expr() * G_TABLE[s]
    return GPolynomial(sp.expand(result))


def divergence_step(h: Operand) -> GPolynomial:
    """div_H(h ∇_H δ) = hA + g(h)"""
    h = GPolynomial(h)
    return h * A + g_apply(h)


@lru_cache(maxsize=None)
def iterated_divergence(i: int) -> GPolynomial:
    """div⁰ = 1, divⁱ = div_H(divⁱ⁻¹ ∇_H δ)"""
    if i < 0:
        raise ValueError(f"divergence index must be nonnegative, got {i}")
    if i == 0:
        return GPolynomial(1)
    return divergence_step(iterated_divergence(i - 1))


@lru_cache(maxsize=None)
def simplified_coefficient(k: int) -> GPolynomial:
    """
    Integrand of the ε^k/k! term of the tube volume once ∫(B + C) = 0 is used.

    k = 1: 1, k = 2: A, k = 3: C, k = 2j+2: B^{j−1}D, k = 2j+3: B^{j−1}(AD − E).
    """
    if k < 1:
        raise ValueError(f"series power must be at least 1, got {k}")
    if k == 1:
        return GPolynomial(1)
    if k == 2:
        return GPolynomial(A)
    if k == 3:
        return GPolynomial(C)
    if k % 2 == 0:
        j = (k - 2) // 2
        return GPolynomial(B ** (j - 1) * D)
    j = (k - 3) // 2
    return GPolynomial(B ** (j - 1) * (A * D - E))


def raw_coefficient(k: int) -> GPolynomial:
    """Integrand of the ε^k/k! term before simplification: div^{k−1}"""
    if k < 1:
        raise ValueError(f"series power must be at least 1, got {k}")
    return iterated_divergence(k - 1)


# K₀ of a level set of an eikonal function
GAUSS_CURVATURE = GPolynomial(B + C)


def gauss_bonnet_residual(k: int) -> GPolynomial:
    """
    raw − simplified at power k: zero below 3, then (B + C) carried through k − 3 divergence steps.

    Each such term integrates to 0 over a closed non-characteristic level set.
    """
    if k < 3:
        return GPolynomial(0)
    h = GAUSS_CURVATURE
    for _ in range(k - 3):
        h = divergence_step(h)
    return h


def algebra_check(order: int) -> List[Dict[str, object]]:
    """
    Per power k ≤ order: raw and simplified integrands, their difference, and
    whether the difference is the carried Gauss–Bonnet term.
    """
    rows = []
    for k in range(1, order + 1):
        raw, simple = raw_coefficient(k), simplified_coefficient(k)
        residual = gauss_bonnet_residual(k)
        rows.append({
            "power": k,
            "raw": str(raw),
            "simplified": str(simple),
            "difference": str(raw - simple),
            "closed": set(raw.symbols) <= set(SYMBOL_NAMES),
            "consistent": raw - simple == residual,
        })
    return rows
