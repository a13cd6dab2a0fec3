"""Tests for the expression DSL parser and printer."""

import pytest
from hypothesis import given, settings

from levi_civita_cli.algebra.exp_poly import ExpPoly
from levi_civita_cli.algebra.exp_scalar import ExpScalar
from levi_civita_cli.algebra.numbers import GaussRational
from levi_civita_cli.errors import DimensionExceeded, ParseError
from levi_civita_cli.utils.dsl import format_exppoly, format_scalar, parse_expression, parse_exppoly

from .test_utils import exppolys, p, vec


class TestParse:
    """Parsing into canonical exponential polynomials."""

    def test_polynomial_matches_translate(self):
        assert parse_exppoly("x1^2 + 2*x1 + 1") == p("x1^2").translate(vec(1))

    def test_exponential_frequency(self):
        f = parse_exppoly("exp(2*x1 - i*x2)")
        assert f.d == 2
        assert f.frequencies == [(GaussRational(2), GaussRational(0, -1))]

    def test_exponential_constant(self):
        f = parse_exppoly("E(1/2)*exp(x1)")
        ((freq, alpha), coeff), = f.atoms.items()
        assert freq == (GaussRational(1),)
        assert alpha == (0,)
        assert coeff == ExpScalar.exp(GaussRational(1, 2))

    def test_exp_offset_becomes_scalar(self):
        assert parse_exppoly("exp(x1 + 1)") == parse_exppoly("E(1)*exp(x1)")

    def test_dimension_inferred_from_highest_variable(self):
        assert parse_expression("x3 + x1").d == 3
        assert parse_expression("5").d == 1

    def test_dimension_can_be_pinned(self):
        assert parse_exppoly("x1", dim=3).d == 3

    def test_dimension_exceeded(self):
        with pytest.raises(DimensionExceeded) as exc_info:
            parse_exppoly("x1 + x4", dim=2)
        assert exc_info.value.index == 4

    def test_unary_minus_and_powers(self):
        assert parse_exppoly("-(x1 - 1)^2") == parse_exppoly("-x1^2 + 2*x1 - 1")

    def test_imaginary_unit(self):
        assert parse_exppoly("i*i") == ExpPoly.constant(1, -1)


class TestParseErrors:
    """Malformed text reports where it went wrong."""

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as exc_info:
            parse_exppoly("x1 + $")
        assert exc_info.value.line == 1
        assert exc_info.value.column == 6

    def test_unexpected_end(self):
        with pytest.raises(ParseError) as exc_info:
            parse_exppoly("x1 +")
        assert exc_info.value.line == 1

    def test_error_on_second_line(self):
        with pytest.raises(ParseError) as exc_info:
            parse_exppoly("x1 +\n* x2")
        assert exc_info.value.line == 2

    def test_nonlinear_exponent_rejected(self):
        with pytest.raises(ParseError):
            parse_exppoly("exp(x1^2)")

    def test_e_requires_constant(self):
        with pytest.raises(ParseError):
            parse_exppoly("E(x1)")

    def test_zero_index_variable_rejected(self):
        with pytest.raises(ParseError):
            parse_exppoly("x0")


class TestPrint:
    """Canonical printing."""

    def test_polynomial(self):
        assert format_exppoly(p("1 + x1^2 + 2*x1")) == "x1^2 + 2*x1 + 1"

    def test_exponential(self):
        assert str(p("exp(2*x1 - i*x2)")) == "exp(2*x1 - i*x2)"

    def test_scalar_factor(self):
        assert str(p("E(1/2)*exp(x1)")) == "E(1/2)*exp(x1)"

    def test_zero(self):
        assert str(ExpPoly.zero(2)) == "0"

    def test_scalar_sum(self):
        s = ExpScalar.constant(GaussRational(3, 0)) + ExpScalar.exp(1, 2)
        assert format_scalar(s) == "3 + 2*E(1)"

    def test_custom_names(self):
        assert format_exppoly(p("x1*x2"), ["x", "y"]) == "x*y"

    def test_print_parse_fixed_point(self):
        for text in ["x1^2 + 2*x1 + 1", "exp(2*x1 - i*x2)", "E(1/2)*exp(x1)", "(1 + i)*x1*exp(-x1)"]:
            printed = str(p(text))
            assert str(p(printed)) == printed


class TestRoundTrip:
    """Printing then parsing gives back the same value."""

    @given(exppolys(d=1))
    @settings(max_examples=250, deadline=None)
    def test_round_trip_one_dimension(self, f):
        assert parse_exppoly(format_exppoly(f), dim=1) == f

    @given(exppolys(d=2))
    @settings(max_examples=250, deadline=None)
    def test_round_trip_two_dimensions(self, f):
        assert parse_exppoly(format_exppoly(f), dim=2) == f
