"""Tests for sampling, fitting and numeric equation residuals."""

from fractions import Fraction
from math import e

import numpy as np
import pytest

from levi_civita_cli.algebra.exp_poly import ExpPoly
from levi_civita_cli.algebra.numbers import GaussRational
from levi_civita_cli.errors import DimensionMismatch, IllConditioned, NonFiniteValue, PreconditionViolation
from levi_civita_cli.numeric_lab import (
    FitModel,
    SampleGrid,
    equation_residual,
    fit,
    kernel_matrix,
    load_csv,
    round_rational,
    sample,
    tensor_grid,
)

from .test_utils import FileManager, p, spec_1d


def exp_and_line_model() -> FitModel:
    return FitModel(((GaussRational(1),), (GaussRational(0),)), (0, 1))


class TestSampling:
    """Double-precision evaluation on point sets."""

    def test_zero_function(self):
        grid = sample(ExpPoly.zero(1), tensor_grid(1, 7))
        assert np.all(grid.values == 0)

    def test_linear_function(self):
        grid = sample(p("x1"), [[0.0], [1.0], [2.0]])
        assert grid.values.tolist() == [0j, 1 + 0j, 2 + 0j]

    def test_exponential(self):
        grid = sample(p("exp(x1)"), [[1.0]])
        assert grid.values[0].real == pytest.approx(e, abs=1e-12)

    def test_callable_source(self):
        grid = sample(lambda x: x[0] * x[1], [[1.0, 2.0], [3.0, 4.0]], d=2)
        assert grid.values.tolist() == [2 + 0j, 12 + 0j]

    def test_overflow_is_reported(self):
        with pytest.raises(NonFiniteValue):
            sample(p("exp(1000*x1)"), [[1.0]])

    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatch):
            sample(p("x1*x2"), [[1.0]])

    def test_duplicate_points_rejected(self):
        with pytest.raises(ValueError):
            SampleGrid(1, np.array([[0.0], [0.0]]), np.array([1, 2]))

    def test_tensor_grid_shape(self):
        assert tensor_grid(2, 5).shape == (25, 2)
        assert tensor_grid(1, 3).ravel().tolist() == [-1.0, 0.0, 1.0]


class TestFit:
    """Least-squares recovery of exponential polynomials."""

    def test_recovers_exact_coefficients(self):
        points = np.linspace(0.0, 1.0, 50).reshape(-1, 1)
        grid = sample(p("2*exp(x1) + x1"), points)
        result = fit(grid, exp_and_line_model())
        assert result.poly == p("2*exp(x1) + x1")
        assert result.residual < 1e-10
        assert not result.unrounded
        assert result.coefficients["exp(x1)"] == pytest.approx(2, abs=1e-8)

    def test_zero_data(self):
        points = np.linspace(0.0, 1.0, 10).reshape(-1, 1)
        grid = SampleGrid(1, points, np.zeros(10))
        result = fit(grid, exp_and_line_model())
        assert result.poly == ExpPoly.zero(1)
        assert result.residual == pytest.approx(0.0)

    def test_too_few_points(self):
        grid = SampleGrid(1, np.array([[0.0], [1.0]]), np.array([1.0, 2.0]))
        with pytest.raises(PreconditionViolation):
            fit(grid, exp_and_line_model())

    def test_ill_conditioned(self):
        points = np.linspace(0.0, 0.01, 30).reshape(-1, 1)
        grid = sample(p("x1"), points)
        model = FitModel(((GaussRational(0),),), (10,))
        with pytest.raises(IllConditioned):
            fit(grid, model)

    def test_irrational_coefficient_left_unrounded(self):
        points = np.linspace(0.0, 1.0, 20).reshape(-1, 1)
        grid = SampleGrid(1, points, np.full(20, np.pi))
        result = fit(grid, FitModel(((GaussRational(0),),), (0,)))
        assert "1" in result.unrounded
        assert not result.poly

    def test_model_validation(self):
        with pytest.raises(ValueError):
            FitModel(((GaussRational(1),), (GaussRational(1),)), (0, 0))
        with pytest.raises(ValueError):
            FitModel(((GaussRational(1),),), (-1,))

    def test_round_rational(self):
        assert round_rational(0.5, 1000, 1e-9) == Fraction(1, 2)
        assert round_rational(np.pi, 1000, 1e-9) is None


class TestCsv:
    """Loading samples from CSV files."""

    def test_with_header(self):
        points = np.array([[0.0], [0.5], [1.0]])
        values = np.array([1 + 0j, 2 - 1j, 3 + 0j])
        with FileManager() as fm:
            grid = load_csv(fm.create_csv(points, values), 1)
        assert len(grid) == 3
        assert grid.values[1] == 2 - 1j

    def test_without_header(self):
        points = np.array([[0.0, 1.0], [1.0, 0.0]])
        values = np.array([1 + 0j, 2 + 0j])
        with FileManager() as fm:
            grid = load_csv(fm.create_csv(points, values, header=False), 2)
        assert grid.d == 2
        assert grid.points.tolist() == points.tolist()

    def test_wrong_column_count(self):
        points = np.array([[0.0], [1.0]])
        with FileManager() as fm:
            path = fm.create_csv(points, np.array([1 + 0j, 2 + 0j]))
            with pytest.raises(DimensionMismatch):
                load_csv(path, 2)


class TestEquationResidual:
    """Low-rank structure of the sampled left side."""

    def test_binomial_has_rank_three(self):
        spec = spec_1d([1], [1])
        at_three = equation_residual(spec, [p("x1^2")], 3)
        at_two = equation_residual(spec, [p("x1^2")], 2)
        assert at_three.passed
        assert not at_two.passed
        assert at_two.residual > 1e-3

    def test_exponential_has_rank_one(self):
        report = equation_residual(spec_1d([1], [2]), [p("exp(x1)")], 1)
        assert report.passed
        assert report.rank == 1

    def test_kernel_matrix_entries(self):
        spec = spec_1d([1, 1], [1, -1])
        x = np.array([[0.0], [1.0]])
        y = np.array([[2.0]])
        F = kernel_matrix(spec, [p("x1"), p("x1")], x, y)
        # (x + y) + (x - y) = 2x
        assert F[:, 0].tolist() == [0j, 2 + 0j]

    def test_function_count_checked(self):
        with pytest.raises(DimensionMismatch):
            kernel_matrix(spec_1d([1, 1], [1, 2]), [p("x1")], np.zeros((1, 1)), np.zeros((1, 1)))

    def test_negative_rank(self):
        with pytest.raises(ValueError):
            equation_residual(spec_1d([1], [1]), [p("x1")], -1)
