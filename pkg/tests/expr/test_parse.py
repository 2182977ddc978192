"""Expression parser tests."""

import math

import pytest

from torchaa.base.errors import ArityError, ExpressionSyntaxError, UnknownIdentifierError
from torchaa.catalog import catalog_list
from torchaa.expr import Binary, Number, Unary, Variable, evaluate, parse, remap_variables


def test_single_variable():
    expr = parse("p1", 1)
    assert expr.root == Variable("p1", 1)
    assert expr.variables == {"p1"}


def test_oscillator_value():
    expr = parse("(p1^2 + q1^2)/2", 1)
    assert evaluate(expr, [0.0, 2.0]) == 2.0


def test_pendulum_two_dof_value():
    expr = parse("p2^2/2 - cos(q2)", 2)
    assert evaluate(expr, [0.0, 0.0, 0.0, 0.0]) == -1.0


def test_bytes_source():
    assert evaluate(parse(b"q1*p1", 1), [2.0, 3.0]) == 6.0


def test_power_is_right_associative():
    assert evaluate(parse("2^3^2", 1), [0.0, 0.0]) == 512.0


def test_power_binds_tighter_than_unary_minus():
    expr = parse("-q1^2", 1)
    assert isinstance(expr.root, Unary)
    assert evaluate(expr, [3.0, 0.0]) == -9.0


def test_exponent_may_be_negated():
    expr = parse("q1^-1", 1)
    assert isinstance(expr.root, Binary)
    assert evaluate(expr, [4.0, 0.0]) == 0.25


def test_precedence():
    assert evaluate(parse("1 + 2*3 - 4/2", 1), [0.0, 0.0]) == 5.0


def test_constant_pi():
    assert evaluate(parse("pi", 1), [0.0, 0.0]) == math.pi


def test_time_variable():
    expr = parse("t*p1", 1, time=True)
    assert expr.ndim == 3
    assert evaluate(expr, [0.0, 2.0, 3.0]) == 6.0


def test_time_is_undeclared_by_default():
    with pytest.raises(UnknownIdentifierError):
        parse("t", 1)


def test_implicit_multiplication_is_rejected():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("2q1", 1)
    assert info.value.offset == 1


@pytest.mark.parametrize(
    "source,offset",
    [
        ("(q1 + p1", 8),
        ("q1 +", 4),
        ("q1 $ p1", 3),
        ("* q1", 0),
    ],
)
def test_syntax_error_offset(source, offset):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse(source, 1)
    assert info.value.offset == offset


def test_offset_counts_bytes():
    # the no-break space takes two bytes in UTF-8
    with pytest.raises(ExpressionSyntaxError) as info:
        parse("q1\u00a0+ $", 1)
    assert info.value.offset == 6


def test_undeclared_coordinate():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("q1 + q2", 1)
    assert info.value.offset == 5


def test_unknown_function():
    with pytest.raises(UnknownIdentifierError):
        parse("sinh(q1)", 1)


@pytest.mark.parametrize("source", ["atan2(q1)", "sin(q1, p1)", "cos()"])
def test_arity(source):
    with pytest.raises(ArityError):
        parse(source, 1)


def test_invalid_dimension():
    with pytest.raises(ValueError):
        parse("q1", 0)


@pytest.mark.parametrize(
    "source",
    [
        "(p1^2 + q1^2)/2",
        "p1^2/2 - cos(q1)",
        "-q1^2",
        "(-q1)^2",
        "q1 - (p1 - 1)",
        "q1/(p1*2)",
        "2^3^2",
        "(2^3)^2",
        "atan2(q1, p1 + 1) * exp(-q1^2/2)",
        "sqrt(1 + q1^2) - log(2 + p1)",
        "1.5e-3*q1 + 2",
    ],
)
def test_print_parse_idempotent(source):
    expr = parse(source, 1)
    again = parse(expr.to_source(), 1)
    assert again == expr
    assert parse(again.to_source(), 1) == again


def test_catalog_sources_round_trip():
    for entry in catalog_list():
        for F in entry.system.integrals:
            assert parse(F.to_source(), F.dimension) == F


def test_integral_floats_print_without_fraction():
    assert parse("2.0*q1", 1).to_source() == "2*q1"
    assert isinstance(parse("2.0", 1).root, Number)


def test_remap_variables():
    expr = parse("t + q1*p1", 1, time=True)
    mapped = remap_variables(expr, {"t": "q1", "q1": "q2", "p1": "p2"}, 2)
    assert mapped.to_source() == "q1 + q2*p2"
    assert evaluate(mapped, [1.0, 2.0, 0.0, 3.0]) == 7.0
