#!/usr/bin/env python3
"""
The metrics g_L: Christoffel symbols, the frame connection, curvature,
surfaces and curves at finite L, and g_L-geodesics.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.geometry import (
    ambient_sectional_L,
    ambient_sectional_closed_form,
    christoffel,
    christoffel_from_metric,
    connection_from_christoffel,
    contact_drift,
    covariant_accel,
    curve_curvature_L,
    frame_connection,
    gauss_curvature_L,
    geodesic_integrate,
    geodesic_residual,
    koszul_frame,
    mean_curvature_L,
    metric_inverse,
    metric_matrix,
    second_fundamental_form,
    sectional_curvature,
    signed_geodesic_curvature_L,
    speed_L,
    surface_frame,
    validate_L,
)
from app.geometry.riemannian import covariant_accel_euclidean, euclidean_to_frame_L
from app.heisenberg import JetCurve
from app.jets import jcos, jsin

coord = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)
Ls = st.sampled_from([0.5, 1.0, 10.0, 1e3])

F1, F2, F3 = np.eye(3)


def saddle(x1, x2, x3):
    return x3 - x1 * x2 / 2


def paraboloid(x1, x2, x3):
    return x3 - 0.75 * (x1 * x1 + x2 * x2)


@given(coord, coord, coord, Ls)
def test_metric_determinant_is_L(a, b, c, L):
    g = metric_matrix(np.array([a, b, c]), L)
    assert np.linalg.det(g) == pytest.approx(L, rel=1e-8)
    assert np.allclose(g @ metric_inverse(np.array([a, b, c]), L), np.eye(3), atol=1e-9 * max(1.0, L))


@pytest.mark.parametrize("L", [0.0, -1.0, math.inf])
def test_L_must_be_positive_and_finite(L):
    with pytest.raises(ValidationError):
        validate_L(L)


@given(coord, coord, coord, Ls)
def test_christoffel_table_matches_metric_derivatives(a, b, c, L):
    p = np.array([[a, b, c]])
    assert np.allclose(christoffel(p, L), christoffel_from_metric(p, L), atol=1e-10 * max(1.0, L))


@pytest.mark.parametrize("L", [0.25, 1.0, 100.0])
def test_frame_connection_agrees_with_koszul_and_coordinates(L):
    assert np.allclose(frame_connection(L), koszul_frame(L), atol=1e-14)
    p = np.array([[0.3, -1.1, 2.0], [1.5, 0.5, -0.2]])
    from_coordinates = connection_from_christoffel(p, L)
    assert np.allclose(from_coordinates, np.broadcast_to(frame_connection(L), from_coordinates.shape),
                       atol=1e-10 * max(1.0, L))


@pytest.mark.parametrize("L", [1.0, 16.0, 1e4])
def test_sectional_curvatures_of_coordinate_planes(L):
    assert sectional_curvature(F1, F2, L) == pytest.approx(-0.75 * L)
    assert sectional_curvature(F1, F3, L) == pytest.approx(0.25 * L)
    assert sectional_curvature(F2, F3, L) == pytest.approx(0.25 * L)


@given(coord, coord, Ls)
def test_ambient_sectional_closed_form(a, b, L):
    """K̄_L(E1, E2) = L/4 − L r̄_L² on a saddle away from its characteristic line"""
    p = np.array([[a, 1.0 + abs(b), a * (1.0 + abs(b)) / 2]])
    frame = surface_frame(saddle, p, L)
    assert frame.orthonormality_defect() <= 1e-12
    from_tensor = ambient_sectional_L(frame)
    assert from_tensor[0] == pytest.approx(ambient_sectional_closed_form(frame.rbarL, L)[0],
                                           rel=1e-10, abs=1e-10 * L)


def test_second_fundamental_form_is_symmetric():
    p = np.array([[0.4, 0.7, 0.75 * (0.16 + 0.49)], [-1.0, 0.2, 0.75 * 1.04]])
    sff = second_fundamental_form(paraboloid, p, 9.0)
    assert np.max(np.abs(sff.asymmetry)) <= 1e-10
    assert np.allclose(sff.trace, mean_curvature_L(paraboloid, p, 9.0))


def test_vertical_plane_is_flat():
    """x1 = 1 is a left translate of the abelian subgroup {x1 = 0}"""

    def plane(x1, x2, x3):
        return x1 - 1.0

    p = np.array([[1.0, 0.5, 0.0], [1.0, -2.0, 3.0]])
    for L in (1.0, 100.0):
        assert np.allclose(gauss_curvature_L(plane, p, L), 0.0, atol=1e-12 * L)
        frame = surface_frame(plane, p, L)
        assert np.allclose(ambient_sectional_L(frame), L / 4.0 - L * frame.rbarL ** 2)


def test_helix_curvature_converges_to_horizontal_limit():
    """Unit circle with linear height: k^L tends to √(γ̇1²+γ̇2²)/|ω(γ̇)|"""
    helix = JetCurve(lambda t: (jcos(t), jsin(t), 2.0 * t), 0.0, 1.0)
    t = np.array([0.1, 0.5, 0.9])
    # ω(γ̇) = 2 − ½ = 3/2, |γ̇_H| = 1
    limit = 1.0 / 1.5
    errors = [np.max(np.abs(curve_curvature_L(helix, t, L) - limit)) for L in (1e2, 1e4, 1e6)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 1e-4
    assert np.allclose(speed_L(helix, t, 4.0), math.sqrt(1.0 + 4.0 * 2.25))


def test_horizontal_line_is_a_geodesic():
    curve = geodesic_integrate([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], L=10.0)
    pos = curve.position(np.array([1.0]))
    assert np.allclose(pos[0], [1.0, 0.0, 0.0], atol=1e-9)


@pytest.mark.parametrize("L", [1.0, 25.0])
def test_geodesic_conserves_contact_form(L):
    curve = geodesic_integrate([0.2, -0.1, 0.0], [1.0, 0.5, 0.3], L=L, t_span=(0.0, 2.0))
    t = np.linspace(0.0, 2.0, 41)
    assert contact_drift(curve, t) <= 1e-7
    assert np.max(geodesic_residual(curve, t, L)) <= 1e-10 * max(1.0, L)
    # the projection is a circle of curvature L·ω
    pos, vel, acc = curve.derivatives(t)
    h2 = vel[:, 0] ** 2 + vel[:, 1] ** 2
    planar = (vel[:, 0] * acc[:, 1] - vel[:, 1] * acc[:, 0]) / h2 ** 1.5
    w = curve.omega(t)
    assert np.allclose(planar, L * w / np.sqrt(h2), rtol=1e-6)


@pytest.mark.parametrize("L", [1.0, 9.0])
def test_covariant_acceleration_of_a_horizontal_circle(L):
    """γ = (cos t, sin t, t/2): ω(γ̇) = ω(γ̈) = 0, so D_tγ̇ is the planar acceleration"""
    lifted = JetCurve(lambda t: (jcos(t), jsin(t), t / 2.0), 0.0, 2.0 * math.pi)
    t = np.array([0.0, 1.0, 2.5])
    frame = covariant_accel(lifted, t, L)
    expected = np.stack([-np.cos(t), -np.sin(t), np.zeros(3)], axis=-1)
    assert np.allclose(frame, expected, atol=1e-12)
    pos = lifted.position(t)
    assert np.allclose(euclidean_to_frame_L(pos, covariant_accel_euclidean(lifted, t, L), L), frame,
                       atol=1e-10 * max(1.0, L))


def test_signed_geodesic_curvature_L_tends_to_the_limit():
    """γ = (1, t, 0) on x3 = 0 has k^{0,s} = 2/√(1 + t²)"""

    def plane(x1, x2, x3):
        return x3 + 0.0 * x1

    line = JetCurve(lambda t: (1.0 + 0.0 * t, t, 0.0 * t), -1.0, 1.0)
    t = np.array([-0.5, 0.0, 0.8])
    limit = 2.0 / np.sqrt(1.0 + t ** 2)
    errors = [np.max(np.abs(signed_geodesic_curvature_L(plane, line, t, L) - limit)) for L in (1e2, 1e4, 1e6)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 1e-3
