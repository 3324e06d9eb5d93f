#!/usr/bin/env python3
"""
Jet arithmetic, primitive domains and the left-invariant frame operators.
"""
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import JetDomainError
from app.jets import (
    Jet,
    coordinate_jets,
    field_jet,
    frame_derivative,
    horizontal_jet,
    jabs,
    jcos,
    jexp,
    jlog,
    jpow,
    jsin,
    jsqrt,
)

coords = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)


def test_square_derivatives():
    x = Jet.variable(np.array([3.0]), index=0, nvars=1, order=3)
    y = x * x
    assert y.value[0] == 9.0
    assert y.grad[0, 0] == 6.0
    assert y.hess[0, 0, 0] == 2.0
    assert y.third[0, 0, 0, 0] == 0.0


def test_mixed_third_partial():
    """∂1∂2∂3 of x1·x2·sin(x3) is cos(x3)"""
    x1, x2, x3 = coordinate_jets([[0.7, -1.3, 0.4]], order=3)
    f = x1 * x2 * jsin(x3)
    assert f.third[0, 0, 1, 2] == pytest.approx(np.cos(0.4), abs=1e-15)
    # symmetric in every index pair
    assert f.third[0, 2, 0, 1] == pytest.approx(f.third[0, 0, 1, 2], abs=1e-15)
    assert f.hess[0, 0, 1] == pytest.approx(np.sin(0.4), abs=1e-15)


@given(coords, coords)
def test_exp_sin_chain_rule(a, b):
    x1, x2, _ = coordinate_jets([[a, b, 0.0]], order=2)
    f = jexp(jsin(x1) * x2)
    inner = np.sin(a) * b
    assert f.value[0] == pytest.approx(np.exp(inner), rel=1e-12)
    assert f.grad[0, 0] == pytest.approx(np.exp(inner) * np.cos(a) * b, rel=1e-12, abs=1e-12)
    assert f.grad[0, 1] == pytest.approx(np.exp(inner) * np.sin(a), rel=1e-12, abs=1e-12)
    expected = np.exp(inner) * (np.sin(a) ** 2)
    assert f.hess[0, 1, 1] == pytest.approx(expected, rel=1e-12, abs=1e-12)


@given(st.floats(min_value=0.1, max_value=5.0))
def test_quotient_and_power(a):
    x = Jet.variable(np.array([a]), 0, 1, 3)
    q = 1.0 / x
    assert q.grad[0, 0] == pytest.approx(-1.0 / a ** 2, rel=1e-12)
    assert q.third[0, 0, 0, 0] == pytest.approx(-6.0 / a ** 4, rel=1e-12)
    p = jpow(x, 1.5)
    assert p.hess[0, 0, 0] == pytest.approx(0.75 * a ** -0.5, rel=1e-12)
    s = jsqrt(x)
    assert s.grad[0, 0] == pytest.approx(0.5 / np.sqrt(a), rel=1e-12)
    l = jlog(x)
    assert l.third[0, 0, 0, 0] == pytest.approx(2.0 / a ** 3, rel=1e-12)


def test_cos_derivatives():
    x = Jet.variable(np.array([0.3]), 0, 1, 3)
    c = jcos(x)
    assert c.grad[0, 0] == pytest.approx(-np.sin(0.3))
    assert c.third[0, 0, 0, 0] == pytest.approx(np.sin(0.3))


def test_log_rejects_nonpositive():
    x = Jet.variable(np.array([1.0, 0.0, -1.0]), 0, 1, 2)
    with pytest.raises(JetDomainError) as info:
        jlog(x)
    assert info.value.primitive == "ln"
    assert info.value.to_dict()["count"] == 2


def test_sqrt_value_accepts_zero_but_jet_does_not():
    assert jsqrt(np.array([0.0]))[0] == 0.0
    with pytest.raises(JetDomainError):
        jsqrt(Jet.variable(np.array([0.0]), 0, 1, 1))


def test_abs_dead_band():
    assert jabs(Jet.variable(np.array([-2.0]), 0, 1, 2)).grad[0, 0] == -1.0
    with pytest.raises(JetDomainError) as info:
        jabs(Jet.variable(np.array([1e-13]), 0, 1, 2))
    assert info.value.kind == "domain_error"


def test_division_by_zero():
    x = Jet.variable(np.array([0.0]), 0, 1, 1)
    with pytest.raises(JetDomainError):
        1.0 / x


def test_where_selects_per_point():
    x = Jet.variable(np.array([-1.0, 2.0]), 0, 1, 2)
    picked = (x * x).where(x.value > 0, -x)
    assert picked.value.tolist() == [1.0, 4.0]
    assert picked.grad[:, 0].tolist() == [-1.0, 4.0]


def test_frame_derivatives_of_saddle():
    """u = x3 − x1x2/2: X1u = −x2, X2u = 0, X3u = 1"""
    pts = np.array([[0.5, -0.25, 2.0], [1.0, 3.0, -1.0]])

    def u(x1, x2, x3):
        return x3 - x1 * x2 / 2

    f = field_jet(u, pts, 2)
    assert np.allclose(frame_derivative(f, 0, pts).value, -pts[:, 1])
    assert np.allclose(frame_derivative(f, 1, pts).value, 0.0)
    assert np.allclose(frame_derivative(f, 2, pts).value, 1.0)
    with pytest.raises(ValueError):
        frame_derivative(f, 3, pts)


@given(coords, coords, coords)
def test_commutator_identity(a, b, c):
    """X1X2u − X2X1u = X3u for an exact jet"""

    def u(x1, x2, x3):
        return jsin(x1 * x3) + x2 * x2 * x3 + jexp(x1 - x2)

    hj = horizontal_jet(u, np.array([[a, b, c]]))
    assert abs(hj.commutator_defect()[0]) <= 1e-10 * max(1.0, float(np.max(np.abs(hj.XX))))


def test_points_must_have_three_coordinates():
    with pytest.raises(ValueError):
        coordinate_jets([[1.0, 2.0]], order=1)
