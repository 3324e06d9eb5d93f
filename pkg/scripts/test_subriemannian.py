#!/usr/bin/env python3
"""
Sub-Riemannian limits: k⁰, k^{0,s}, K₀ and H₀, point classification,
defining-function independence, Legendrian curves and invariance.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import CharacteristicPointError, OffSurfaceError
from app.geometry import (
    PointClass,
    classify_curve_points,
    classify_surface_points,
    curve_curvature_0,
    defining_function_independence_check,
    gaussian_curvature_0,
    isometry_invariance_suite,
    k0_decomposition,
    legendrian_curvature,
    mean_curvature_0,
    signed_geodesic_curvature_0,
)
from app.heisenberg import JetCurve
from app.jets import horizontal_jet, jcos, jexp, jsin
from app.geometry.summability import SummabilityTrend, summability_diagnostic


def horizontal_plane(x1, x2, x3):
    return x3 + 0.0 * x1


def saddle(x1, x2, x3):
    return x3 - x1 * x2 / 2


def radial(points):
    return np.hypot(points[:, 0], points[:, 1])


PLANE_POINTS = np.array([[1.0, 0.0, 0.0], [0.3, -0.4, 0.0], [-1.5, 2.0, 0.0]])


def test_horizontal_circle_has_planar_curvature():
    lifted = JetCurve(lambda t: (jcos(t), jsin(t), t / 2.0), 0.0, 2.0 * math.pi)
    t = np.linspace(0.0, 2.0 * math.pi, 9)
    report = curve_curvature_0(lifted, t)
    assert set(report.classes) == {PointClass.HORIZONTAL.value}
    assert np.allclose(report.value, 1.0, atol=1e-12)


def test_helix_limit_and_sweep():
    helix = JetCurve(lambda t: (jcos(t), jsin(t), 2.0 * t), 0.0, 1.0)
    t = np.array([0.2, 0.6])
    report = curve_curvature_0(helix, t, L_sweep=[1e2, 1e4, 1e6])
    assert report.classes == [PointClass.NON_HORIZONTAL.value] * 2
    assert np.allclose(report.value, 1.0 / 1.5, rtol=1e-14)
    assert report.monotone is True
    assert np.max(report.errors[1e6]) <= 1e-4
    data = report.to_dict()
    assert [row["L"] for row in data["sweep"]] == [1e2, 1e4, 1e6]
    rows = report.report_rows()
    assert rows[0]["t"] == 0.2 and "L=1e+06" in rows[0]


def test_ambiguity_band_is_flagged():
    pos = np.zeros((3, 3))
    vel = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 5e-10], [1.0, 0.0, 1e-3]])
    classes = classify_curve_points(pos, vel, tau_h=1e-10)
    assert classes.horizontal.tolist() == [True, False, False]
    assert classes.flagged.tolist() == [False, True, False]


def test_horizontal_plane_curvature():
    """x3 = 0: P₀ = 2/ρ, K₀ = −2/ρ², H₀ = 0"""
    rho = radial(PLANE_POINTS)
    K0 = gaussian_curvature_0(horizontal_plane, PLANE_POINTS)
    assert np.allclose(K0.value, -2.0 / rho ** 2, rtol=1e-12)
    H0 = mean_curvature_0(horizontal_plane, PLANE_POINTS)
    assert np.allclose(H0.value, 0.0, atol=1e-12)


def test_k0_decomposition_sums_to_k0():
    hj = horizontal_jet(horizontal_plane, np.array([[1.0, 0.0, 0.0]]))
    parts = k0_decomposition(hj)
    assert parts["P0"][0] == pytest.approx(2.0)
    assert parts["vertical"][0] == pytest.approx(-4.0)
    assert parts["horizontal"][0] == pytest.approx(2.0)


def test_finite_L_gauss_curvature_approaches_K0():
    report = gaussian_curvature_0(horizontal_plane, PLANE_POINTS, L_sweep=[1e2, 1e4, 1e6])
    assert report.monotone is True
    assert np.max(report.errors[1e6]) <= 1e-3


def test_saddle_is_flat_and_minimal():
    pts = np.array([[1.0, 1.0, 0.5], [-0.5, 2.0, -0.5]])
    assert np.allclose(gaussian_curvature_0(saddle, pts).value, 0.0, atol=1e-12)
    assert np.allclose(mean_curvature_0(saddle, pts).value, 0.0, atol=1e-12)


def test_characteristic_point_is_rejected():
    with pytest.raises(CharacteristicPointError) as info:
        gaussian_curvature_0(horizontal_plane, np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))
    assert info.value.to_dict()["count"] == 1
    labels = classify_surface_points(horizontal_plane, np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))
    assert labels == [PointClass.CHARACTERISTIC.value, PointClass.NON_CHARACTERISTIC.value]


def test_signed_geodesic_curvature_of_line_in_horizontal_plane():
    """γ = (1, t, 0): ω(γ̇) = −½ and k^{0,s} = 2/√(1 + t²)"""
    line = JetCurve(lambda t: (1.0 + 0.0 * t, t, 0.0 * t), -1.0, 1.0)
    t = np.linspace(-1.0, 1.0, 5)
    report = signed_geodesic_curvature_0(horizontal_plane, line, t, L_sweep=[1e2, 1e4])
    assert np.allclose(report.value, 2.0 / np.sqrt(1.0 + t ** 2), rtol=1e-12)
    assert report.quantity == "k0s"
    assert np.max(report.errors[1e4]) < np.max(report.errors[1e2])


def test_horizontal_curve_on_surface_has_zero_geodesic_curvature():
    ray = JetCurve(lambda t: (t, 0.0 * t, 0.0 * t), 0.5, 1.0)
    report = signed_geodesic_curvature_0(horizontal_plane, ray, np.array([0.5, 0.75, 1.0]))
    assert report.classes == [PointClass.HORIZONTAL.value] * 3
    assert report.value.tolist() == [0.0, 0.0, 0.0]


def test_curve_off_surface_is_rejected():
    lifted = JetCurve(lambda t: (1.0 + 0.0 * t, t, 0.1 + 0.0 * t), 0.0, 1.0)
    with pytest.raises(OffSurfaceError):
        signed_geodesic_curvature_0(horizontal_plane, lifted, np.array([0.5]))


def test_geometry_does_not_depend_on_defining_function():
    def sigma(x1, x2, x3):
        return x1 + x2 * x2 - jexp(x3) / 3

    pts = np.array([[1.0, 1.0, 0.5], [-0.5, 2.0, -0.5], [0.2, -0.7, -0.07]])
    report = defining_function_independence_check(saddle, sigma, pts)
    assert report.passed, report.to_dict()


def test_legendrian_curve_curvature_is_minus_H0():
    report = legendrian_curvature(horizontal_plane, [1.0, 0.5, 0.0])
    assert report.max_difference <= 1e-6
    # the E1-flow stays on the surface
    assert np.max(np.abs(report.points[:, 2])) <= 1e-9


def test_invariance_suite():
    line = JetCurve(lambda t: (1.0 + 0.0 * t, t, 0.0 * t), -1.0, 1.0)
    reports = isometry_invariance_suite(line, horizontal_plane, t=np.linspace(-1.0, 1.0, 7),
                                        points=PLANE_POINTS, trials=8, seed=7)
    assert [r.quantity for r in reports] == ["k0", "k0s", "K0"]
    assert all(r.passed for r in reports), [r.to_dict() for r in reports]
    # x3 = 0 is dilation invariant, so K₀ scales like 1/r²
    assert np.allclose(reports[2].dilation_ratios["2"], 0.25, rtol=1e-10)


def test_summability_around_the_plane_origin():
    """x3 = 0: |K₀| dσ_H = dρ dθ, so each annulus contributes 2π times its width"""
    radii = [0.1, 0.05, 0.025, 0.0125]
    report = summability_diagnostic(horizontal_plane, [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]], radii)
    assert report.skipped == [[1.0, 0.0, 0.0]]
    entry = report.entries[0]
    assert entry.integrals == pytest.approx([2 * math.pi * (a - b) for a, b in zip(radii, radii[1:])], rel=1e-10)
    assert entry.trend == SummabilityTrend.CONVERGING
    assert entry.cumulative[-1] + entry.tail_estimate == pytest.approx(2 * math.pi * 0.1, rel=1e-10)
    assert np.allclose(entry.bound_constants, 0.5)
    assert len(report.report_rows()) == 3
