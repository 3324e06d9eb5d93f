#!/usr/bin/env python3
"""
Expression language: parsing, error reporting, printing and compilation.
"""
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import ArityError, ExpressionDomainError, ParseError, UnknownIdentifierError
from app.services.expr import (
    Arity,
    Binary,
    Name,
    Number,
    Unary,
    compile_expression,
    curve_from_text,
    field_from_text,
    parse,
    patch_from_text,
    program_to_text,
)


def test_precedence_and_associativity():
    tree = parse("1 + 2*x1^2^x2").components[0]
    power = Binary("^", Name("x1"), Binary("^", Number(2.0), Name("x2")))
    assert tree == Binary("+", Number(1.0), Binary("*", Number(2.0), power))
    assert parse("x1 - x2 - x3").components[0] == Binary("-", Binary("-", Name("x1"), Name("x2")), Name("x3"))
    assert parse("x1/x2/x3").components[0] == Binary("/", Binary("/", Name("x1"), Name("x2")), Name("x3"))


def test_unary_minus_binds_tighter_than_power():
    u = field_from_text("-2^2 + 0*x1")
    assert u.value(np.zeros((1, 3)))[0] == 4.0
    v = field_from_text("-(2^2) + 0*x1")
    assert v.value(np.zeros((1, 3)))[0] == -4.0
    assert isinstance(parse("-x1").components[0], Unary)


def test_whitespace_insensitive():
    assert parse("x1*x2 - x3") == parse(" x1 * x2-\n x3 ")


def test_syntax_error_offset_and_expected():
    with pytest.raises(ParseError) as info:
        parse("x1 + * x2")
    err = info.value
    assert err.offset == 5
    assert "number" in err.expected and "identifier" in err.expected
    assert err.to_dict()["kind"] == "parse_error"


def test_syntax_error_at_end_of_input():
    with pytest.raises(ParseError) as info:
        parse("sin(x1")
    assert info.value.offset == 6


def test_unknown_identifier_reports_span():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("x1 + y")
    assert info.value.name == "y"
    assert info.value.span[0] == 5


def test_unknown_function():
    with pytest.raises(UnknownIdentifierError):
        parse("tan(x1)")


def test_component_count_and_function_arity():
    with pytest.raises(ArityError):
        parse("cos(t), sin(t)", Arity.CURVE)
    with pytest.raises(ArityError):
        parse("pow(x1)")
    assert len(parse("cos(t), sin(t)", Arity.PLANAR).components) == 2


def test_variables_follow_arity():
    with pytest.raises(UnknownIdentifierError):
        parse("x1 + t", Arity.FIELD)
    parse("v*cos(w), v*sin(w), 0", Arity.PATCH)


def test_constants_are_bound_at_compile_time():
    u = compile_expression("a*x1 + pi", Arity.FIELD, {"a": 2.0})
    assert u.value(np.array([[3.0, 0.0, 0.0]]))[0] == pytest.approx(6.0 + np.pi)
    with pytest.raises(UnknownIdentifierError):
        parse("a*x1")


@pytest.mark.parametrize("text", [
    "x3 - x1*x2/2",
    "(x1^2 + x2^2)^2 + 16*x3^2 - 1",
    "-(x1 - x2) - (x3 - 1)",
    "x1/(x2/x3)",
    "(-x1)^2",
    "pow(x1, 2) * sqrt(abs(x2) + 1)",
    "2^-x1",
    "1.5e-3*exp(-x1^2)",
])
def test_printer_reparses_to_same_tree(text):
    program = parse(text)
    assert parse(program_to_text(program)) == program


names = st.sampled_from(["x1", "x2", "x3", "1", "2.5"])


@st.composite
def expressions(draw, depth=3):
    if depth == 0:
        return draw(names)
    kind = draw(st.sampled_from(["leaf", "bin", "neg", "call"]))
    if kind == "leaf":
        return draw(names)
    if kind == "neg":
        return f"-({draw(expressions(depth=depth - 1))})"
    if kind == "call":
        return f"cos({draw(expressions(depth=depth - 1))})"
    op = draw(st.sampled_from(["+", "-", "*", "^"]))
    return f"({draw(expressions(depth=depth - 1))}) {op} ({draw(expressions(depth=depth - 1))})"


@given(expressions())
def test_printed_text_is_stable(text):
    program = parse(text)
    printed = program_to_text(program)
    assert program_to_text(parse(printed)) == printed


def test_field_gradient_and_hessian():
    u = field_from_text("x3 - x1*x2/2")
    jet = u.evaluate_jet([[1.0, 2.0, 0.5]], order=2)
    assert jet.value[0] == pytest.approx(-0.5)
    assert jet.grad[0].tolist() == [-1.0, -0.5, 1.0]
    assert jet.hess[0, 0, 1] == -0.5


def test_constant_field_still_returns_a_jet():
    u = field_from_text("3")
    jet = u.evaluate_jet([[1.0, 2.0, 0.5], [0.0, 0.0, 0.0]], order=1)
    assert jet.value.tolist() == [3.0, 3.0]
    assert np.all(jet.grad == 0.0)


def test_curve_and_patch():
    curve = curve_from_text("cos(t), sin(t), t", 0.0, 1.0)
    pos, vel, acc = curve.derivatives(np.array([0.0]))
    assert np.allclose(pos[0], [1.0, 0.0, 0.0])
    assert np.allclose(vel[0], [0.0, 1.0, 1.0])
    assert np.allclose(acc[0], [-1.0, 0.0, 0.0])
    assert curve.span() == (0.0, 1.0)

    planar = curve_from_text("t, t^2", -1.0, 1.0, planar=True)
    assert planar.dim == 2

    patch = patch_from_text("v*cos(w), v*sin(w), 0")
    point = patch.point(np.array(2.0), np.array(np.pi / 2))
    assert np.allclose(point, [0.0, 2.0, 0.0], atol=1e-15)


def test_domain_error_carries_source_span():
    u = field_from_text("x2 + ln(x1)")
    with pytest.raises(ExpressionDomainError) as info:
        u.value(np.array([[-1.0, 0.0, 0.0]]))
    assert info.value.primitive == "ln"
    assert info.value.span == (5, 11)
