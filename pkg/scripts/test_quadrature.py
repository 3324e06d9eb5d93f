#!/usr/bin/env python3
"""
Adaptive Gauss–Legendre quadrature, curve and perimeter measures, and
ε → 0 extrapolation.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import ExtrapolationError, InputError, QuadratureError
from app.heisenberg import JetCurve
from app.jets import jcos, jsin
from app.quadrature import (
    MeasureKind,
    QuadratureSpec,
    excise_and_extrapolate,
    gauss_legendre,
    integrate_interval,
    integrate_rectangle,
    length_integral,
    perimeter_integral_implicit,
    perimeter_integral_parametric,
    richardson,
    richardson_pair,
)
from app.services.expr import patch_from_text


def test_gauss_legendre_is_exact_for_low_degree():
    x, w = gauss_legendre(5)
    assert math.fsum(w * x ** 8) == pytest.approx(2.0 / 9.0, abs=1e-15)
    assert math.fsum(w) == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(ValueError):
        x[0] = 1.0


def test_interval_and_reversed_interval():
    result = integrate_interval(np.cos, 0.0, math.pi / 2)
    assert result.value == pytest.approx(1.0, abs=1e-12)
    assert result.unresolved == 0
    assert integrate_interval(np.cos, math.pi / 2, 0.0).value == pytest.approx(-1.0, abs=1e-12)
    assert integrate_interval(np.cos, 1.0, 1.0).value == 0.0


def test_rectangle():
    result = integrate_rectangle(lambda V, W: V * W, (0.0, 1.0), (0.0, 2.0))
    assert result.value == pytest.approx(1.0, abs=1e-13)
    with pytest.raises(ValueError):
        integrate_rectangle(lambda V, W: V, (1.0, 1.0), (0.0, 1.0))


def test_budget_exhaustion_raises_or_warns():
    def kink(t):
        return np.sqrt(np.abs(t - 0.3))

    tight = QuadratureSpec(max_subdivisions=0)
    with pytest.raises(QuadratureError):
        integrate_interval(kink, 0.0, 1.0, tight)
    loose = QuadratureSpec(max_subdivisions=0, strict=False)
    result = integrate_interval(kink, 0.0, 1.0, loose)
    assert result.unresolved == 1
    assert result.value == pytest.approx((2.0 / 3.0) * (0.3 ** 1.5 + 0.7 ** 1.5), abs=1e-3)


def test_spec_validation():
    with pytest.raises(ValidationError):
        QuadratureSpec(order=1)
    with pytest.raises(ValidationError):
        QuadratureSpec(tol=0.0)
    with pytest.raises(ValidationError):
        QuadratureSpec(eps_sequence=[0.1, 0.2])


def test_curve_measures():
    helix = JetCurve(lambda t: (jcos(t), jsin(t), 2.0 * t), 0.0, 1.0)
    # ω(γ̇) = 3/2 along the whole curve
    boundary = length_integral(helix, kind=MeasureKind.SUB_RIEMANNIAN_BOUNDARY)
    assert boundary.value == pytest.approx(1.5, abs=1e-12)
    horizontal = length_integral(helix, kind=MeasureKind.HORIZONTAL_LENGTH)
    assert horizontal.value == pytest.approx(1.0, abs=1e-12)
    riemannian = length_integral(helix, kind=MeasureKind.RIEMANNIAN_LENGTH, L=4.0)
    assert riemannian.value == pytest.approx(math.sqrt(10.0), abs=1e-12)
    weighted = length_integral(helix, lambda points, t: t, kind=MeasureKind.SUB_RIEMANNIAN_BOUNDARY)
    assert weighted.value == pytest.approx(0.75, abs=1e-12)


def test_curve_measure_needs_L_and_a_curve_kind():
    helix = JetCurve(lambda t: (jcos(t), jsin(t), 2.0 * t), 0.0, 1.0)
    with pytest.raises(InputError):
        length_integral(helix, kind=MeasureKind.RIEMANNIAN_LENGTH)
    with pytest.raises(InputError):
        length_integral(helix, kind=MeasureKind.PERIMETER_IMPLICIT)


def test_horizontal_lift_has_no_boundary_measure():
    lifted = JetCurve(lambda t: (jcos(t), jsin(t), t / 2.0), 0.0, 2.0 * math.pi)
    assert length_integral(lifted).value == pytest.approx(0.0, abs=1e-13)


def test_perimeter_of_horizontal_disk():
    """Unit disk in x3 = 0: density ‖∇_H u‖ = ρ/2, so the perimeter measure is π/3"""
    disk = patch_from_text("v*cos(w), v*sin(w), 0")
    parametric = perimeter_integral_parametric(disk, None, (0.0, 1.0), (0.0, 2.0 * math.pi))
    assert parametric.value == pytest.approx(math.pi / 3.0, abs=1e-12)

    def plane(x1, x2, x3):
        return x3 + 0.0 * x1

    implicit = perimeter_integral_implicit(plane, disk, None, (0.0, 1.0), (0.0, 2.0 * math.pi))
    assert implicit.value == pytest.approx(parametric.value, abs=1e-12)


def test_finite_L_perimeter_tends_to_the_limit():
    disk = patch_from_text("v*cos(w), v*sin(w), 0")
    errors = [
        abs(perimeter_integral_parametric(disk, None, (0.0, 1.0), (0.0, 2.0 * math.pi), L=L).value - math.pi / 3.0)
        for L in (1e2, 1e3, 1e4)
    ]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 1e-3


def test_richardson_is_exact_on_linear_families():
    eps = [0.1, 0.05, 0.025]
    result = richardson(eps, [2.0 + 3.0 * e for e in eps])
    assert result.value == pytest.approx(2.0, abs=1e-13)
    assert result.error <= 1e-13
    assert richardson_pair(0.2, 5.0 + 7.0 * 0.04, 0.1, 5.0 + 7.0 * 0.01, order=2) == pytest.approx(5.0)


def test_richardson_reports_the_decay_slope():
    eps = [0.1, 0.05, 0.025, 0.0125]
    result = richardson(eps, [1.0 + e + e * e for e in eps])
    assert result.value == pytest.approx(1.0, abs=5e-4)
    assert result.slope == pytest.approx(1.0, abs=0.2)
    assert result.to_dict()["order"] == 1


@pytest.mark.parametrize("eps, values", [
    ([0.1], [1.0]),
    ([0.05, 0.1], [1.0, 1.1]),
    ([0.1, 0.05, 0.025], [0.0, 1e-3, 1e-1]),
    ([0.1, 0.05], [1.0, math.nan]),
])
def test_richardson_rejects_bad_families(eps, values):
    with pytest.raises(ExtrapolationError):
        richardson(eps, values)


def test_excise_and_extrapolate_records_corrections():
    result = excise_and_extrapolate(lambda e: 4.0 - 2.0 * e, [0.1, 0.05, 0.025], correction=lambda e: e)
    assert result.value == pytest.approx(4.0, abs=1e-13)
    assert result.corrections == [0.1, 0.05, 0.025]
