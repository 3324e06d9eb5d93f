#!/usr/bin/env python3
"""
Group law, dilations, the left-invariant frame, the contact form and
horizontal lifts.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import InputError, ZeroVelocityError
from app.heisenberg import (
    HPoint,
    HorizontalVector,
    J_rotate,
    JetCurve,
    contact_form,
    dilate,
    dilate_array,
    euclidean_from_frame,
    euclidean_from_frame_array,
    frame_from_euclidean,
    frame_from_euclidean_array,
    frame_matrix,
    group_inverse,
    group_mul,
    group_mul_array,
    horizontal_lift,
    left_translation_matrix,
    require_regular,
    rotation_matrix,
)
from app.jets import jcos, jsin

coord = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
points = st.tuples(coord, coord, coord)


@given(points, points, points)
def test_group_law_is_associative(a, b, c):
    a, b, c = (np.array(p) for p in (a, b, c))
    left = group_mul_array(group_mul_array(a, b), c)
    right = group_mul_array(a, group_mul_array(b, c))
    assert np.allclose(left, right, atol=1e-12)


@given(points)
def test_inverse_and_identity(a):
    p = HPoint.from_array(a)
    e = group_mul(p, group_inverse(p))
    assert e.as_list() == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)
    assert group_mul(HPoint(x1=0.0, x2=0.0, x3=0.0), p).as_list() == pytest.approx(list(a))


def test_group_law_is_not_commutative():
    a, b = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    ab, ba = group_mul_array(a, b), group_mul_array(b, a)
    assert ab[2] - ba[2] == pytest.approx(1.0)


@given(points, points, st.floats(min_value=0.1, max_value=4.0))
def test_dilation_is_an_automorphism(a, b, r):
    a, b = np.array(a), np.array(b)
    lhs = dilate_array(r, group_mul_array(a, b))
    rhs = group_mul_array(dilate_array(r, a), dilate_array(r, b))
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_dilation_rejects_nonpositive_factor():
    with pytest.raises(InputError):
        dilate(0.0, HPoint(x1=1.0, x2=1.0, x3=1.0))


@given(points, points)
def test_frame_round_trip_and_inverse(p, v):
    p, v = np.array(p), np.array(v)
    c = frame_from_euclidean_array(p, v)
    assert np.allclose(euclidean_from_frame_array(p, c), v, atol=1e-12)
    assert np.allclose(frame_matrix(p) @ c, v, atol=1e-12)


@given(points, points)
def test_contact_form_reads_the_x3_frame_coefficient(p, v):
    p, v = np.array(p), np.array(v)
    assert contact_form(p, v) == pytest.approx(frame_from_euclidean_array(p, v)[2], abs=1e-12)


@given(points, points, points)
def test_contact_form_is_left_invariant(g, p, v):
    g, p, v = np.array(g), np.array(p), np.array(v)
    moved_p = group_mul_array(g, p)
    moved_v = left_translation_matrix(g) @ v
    assert contact_form(moved_p, moved_v) == pytest.approx(contact_form(p, v), abs=1e-10)


def test_rotation_preserves_contact_form():
    p, v = np.array([0.3, -1.2, 0.5]), np.array([0.4, 0.1, -2.0])
    R = rotation_matrix(0.7)
    assert contact_form(R @ p, R @ v) == pytest.approx(contact_form(p, v), abs=1e-14)


def test_lift_of_circle_is_horizontal_and_climbs_by_the_area():
    planar = JetCurve(lambda t: (jcos(t), jsin(t)), 0.0, 2.0 * math.pi, dim=2)
    lifted = horizontal_lift(planar)
    t = np.linspace(0.0, 2.0 * math.pi, 17)
    pos, vel, _ = lifted.derivatives(t)
    assert np.max(np.abs(contact_form(pos, vel))) <= 1e-14
    # γ3 = t/2 for the unit circle
    assert np.allclose(pos[:, 2], t / 2.0, atol=1e-11)
    planar_gap, height_gap = lifted.closure_gap()
    assert planar_gap <= 1e-14
    assert height_gap == pytest.approx(math.pi, abs=1e-11)


def test_lift_height_at_unsorted_and_repeated_parameters():
    planar = JetCurve(lambda t: (jcos(t), jsin(t)), 0.0, 2.0 * math.pi, dim=2)
    lifted = horizontal_lift(planar, z0=-1.0)
    t = np.array([[5.0, 0.25], [0.25, 0.0], [6.0, 3.0]])
    assert lifted.height(t).shape == (3, 2)
    assert np.allclose(lifted.height(t), t / 2.0 - 1.0, atol=1e-13)
    assert lifted.height(np.array([])).shape == (0,)


def test_lift_of_figure_eight_closes():
    planar = JetCurve(lambda t: (jsin(t), jsin(2.0 * t) / 2.0), 0.0, 2.0 * math.pi, dim=2)
    planar_gap, height_gap = horizontal_lift(planar, z0=1.5).closure_gap()
    assert planar_gap <= 1e-14
    assert height_gap <= 1e-11


def test_lift_needs_a_planar_curve():
    curve = JetCurve(lambda t: (t, t, t), 0.0, 1.0)
    with pytest.raises(ValueError):
        horizontal_lift(curve)


def test_reversed_curve_flips_velocity():
    curve = JetCurve(lambda t: (t, t * t, 0.0 * t), 0.0, 1.0)
    pos, vel, _ = curve.reversed().derivatives(np.array([0.25]))
    assert np.allclose(pos[0], [0.75, 0.5625, 0.0])
    assert np.allclose(vel[0], [-1.0, -1.5, 0.0])


def test_zero_velocity_is_rejected():
    with pytest.raises(ZeroVelocityError):
        require_regular(np.array([[0.0, 0.0, 0.0]]))


def test_frame_vectors_at_a_base_point():
    p = HPoint(x1=1.0, x2=2.0, x3=0.5)
    w = frame_from_euclidean(p, [1.0, 0.0, 0.0])
    # ∂1 = X1 + (x2/2) X3
    assert (w.c1, w.c2, w.c3) == (1.0, 0.0, 1.0)
    assert np.allclose(euclidean_from_frame(w), [1.0, 0.0, 0.0])


def test_J_rotates_by_a_right_angle():
    p = HPoint(x1=0.0, x2=0.0, x3=0.0)
    h = HorizontalVector(c1=1.0, c2=0.0, base=p)
    assert (J_rotate(h).c1, J_rotate(h).c2) == (0.0, -1.0)
    twice = J_rotate(J_rotate(HorizontalVector(c1=0.3, c2=-2.0, base=p)))
    assert (twice.c1, twice.c2) == (-0.3, 2.0)
