#!/usr/bin/env python3
"""
Tube-volume series: the g-derivation algebra, pointwise coefficients of
eikonal functions and the series on the cylinder scene.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import InputError, SceneError
from app.gauss_bonnet import load_scene
from app.jets import Jet, jsqrt
from app.steiner import (
    GAUSS_CURVATURE,
    GPolynomial,
    algebra_check,
    coefficients_at,
    g_apply,
    g_identity_check,
    gauss_bonnet_residual,
    iterated_divergence,
    raw_coefficient,
    simplified_coefficient,
    simplified_series,
)


def radial(x1, x2, x3):
    return jsqrt(x1 * x1 + x2 * x2) - 1.0


def test_g_table():
    assert g_apply(GPolynomial.parse("A")) == GPolynomial.parse("B + 2*C - A^2")
    assert g_apply(GPolynomial.parse("B")).is_zero()
    # Leibniz rule
    assert g_apply(GPolynomial.parse("A*D")) == GPolynomial.parse("D*(B + 2*C - A^2) - A*E")


def test_low_order_divergences():
    assert iterated_divergence(0) == GPolynomial(1)
    assert iterated_divergence(1) == GPolynomial.parse("A")
    assert iterated_divergence(2) == GPolynomial.parse("B + 2*C")
    assert iterated_divergence(3) == GPolynomial.parse("A*B + 2*D")


def test_simplified_coefficients():
    expected = ["1", "A", "C", "D", "A*D - E", "B*D", "A*B*D - B*E", "B^2*D"]
    assert [simplified_coefficient(k) for k in range(1, 9)] == [GPolynomial.parse(e) for e in expected]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7, 8])
def test_raw_minus_simplified_is_a_gauss_bonnet_term(k):
    assert raw_coefficient(k) - simplified_coefficient(k) == gauss_bonnet_residual(k)


def test_algebra_check_rows():
    rows = algebra_check(6)
    assert [row["power"] for row in rows] == [1, 2, 3, 4, 5, 6]
    assert all(row["consistent"] and row["closed"] for row in rows)
    assert rows[2]["difference"] == str(GAUSS_CURVATURE)


def test_canonical_printing_and_parsing():
    poly = GPolynomial.parse("2*D + A*B")
    assert str(poly) == "A*B + 2*D"
    assert GPolynomial.parse(str(poly)) == poly
    assert raw_coefficient(5).symbols == ["A", "B", "C", "D", "E"]
    with pytest.raises(ValueError):
        GPolynomial.parse("A + F")


def test_index_validation():
    with pytest.raises(ValueError):
        iterated_divergence(-1)
    with pytest.raises(ValueError):
        raw_coefficient(0)
    with pytest.raises(ValueError):
        simplified_coefficient(0)


def test_coefficients_of_a_horizontal_coordinate():
    def coordinate(x1, x2, x3):
        return x1 + 0.0 * x3

    coeffs = coefficients_at(coordinate, np.array([[0.3, -0.2, 1.0]]))
    assert coeffs.eikonal[0] == pytest.approx(1.0)
    for name, value in coeffs.values().items():
        assert value[0] == pytest.approx(0.0, abs=1e-15), name


def test_coefficients_of_the_cylinder_distance():
    pts = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 1.0], [-1.5, 1.5, -0.3]])
    coeffs = coefficients_at(radial, pts)
    rho = np.hypot(pts[:, 0], pts[:, 1])
    assert np.allclose(coeffs.A, 1.0 / rho, rtol=1e-13)
    assert np.allclose(coeffs.B, 0.0) and np.allclose(coeffs.D, 0.0) and np.allclose(coeffs.E, 0.0)
    assert np.allclose(coeffs.eikonal, 1.0, rtol=1e-14)


@pytest.mark.parametrize("point", [[1.2, 0.5, 0.3], [-0.7, 0.9, -1.0]])
def test_g_identity_along_the_radial_flow(point):
    report = g_identity_check(radial, point)
    assert report.passed, report.to_dict()
    assert report.expected["A"] == pytest.approx(-1.0 / np.hypot(point[0], point[1]) ** 2)


KAPPA = 0.8


def jasin(x):
    if not isinstance(x, Jet):
        return np.arcsin(x)
    v = x.value
    c = 1.0 - v * v
    return x.compose(np.arcsin(v), c ** -0.5, v * c ** -1.5, (1.0 + 2.0 * v * v) * c ** -2.5)


def sheared(x1, x2, x3):
    """
    κ(x3 − x1x2/2) + G(x2) with G' = √(1 − κ²x2²).

    X1δ = −κx2 and X2δ = G', so δ is eikonal with X3δ = κ; A = −κ²x2/G', B = −κ².
    """
    root = jsqrt(1.0 - KAPPA * KAPPA * x2 * x2)
    return KAPPA * (x3 - x1 * x2 / 2.0) + 0.5 * (x2 * root + jasin(KAPPA * x2) / KAPPA)


@pytest.mark.parametrize("point", [[0.4, 0.3, -0.2], [-1.1, -0.6, 0.7]])
def test_g_identity_with_a_vertical_derivative(point):
    x2 = point[1]
    c = math.sqrt(1.0 - (KAPPA * x2) ** 2)
    coeffs = coefficients_at(sheared, np.array([point]))
    assert coeffs.eikonal[0] == pytest.approx(1.0, abs=1e-14)
    assert coeffs.A[0] == pytest.approx(-KAPPA ** 2 * x2 / c, rel=1e-12)
    assert coeffs.B[0] == pytest.approx(-KAPPA ** 2, rel=1e-12)

    report = g_identity_check(sheared, point)
    assert report.tolerance <= 1e-6
    assert report.passed, report.to_dict()
    # g(A) = B − A² = −κ²/(1 − κ²x2²)
    assert report.measured["A"] == pytest.approx(-KAPPA ** 2 / c ** 2, abs=1e-8)
    assert report.expected["A"] == pytest.approx(-KAPPA ** 2 / c ** 2, rel=1e-12)


def test_cylinder_series_matches_tube_volume(scene_path):
    """Unit cylinder of height 1: the tube has volume π(1 + ε)²"""
    scene = load_scene(scene_path("cylinder"))
    eps = [0.1, 0.25, 0.5]
    reference = [math.pi * (1.0 + e) ** 2 for e in eps]
    report = simplified_series(scene, 5, eps, reference=reference)
    assert report.passed, report.reference_errors
    assert max(report.reference_errors) <= 1e-10
    assert np.allclose(report.difference, 0.0, atol=1e-10)
    assert report.gauss_bonnet_integral == pytest.approx(0.0, abs=1e-12)
    assert report.terms[0].simplified_integral == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert report.eikonal_deviation <= 1e-14
    assert not report.increment


def test_series_input_validation(scene_path):
    with pytest.raises(InputError):
        simplified_series(load_scene(scene_path("cylinder")), 0, [0.1])
    with pytest.raises(InputError):
        simplified_series(load_scene(scene_path("cylinder")), 2, [0.1, 0.2], reference=[1.0])
    with pytest.raises(SceneError):
        simplified_series(load_scene(scene_path("koranyi")), 2, [0.1])
