"""Tests for the elimination step and its function-level identities."""

import pytest

from levi_civita_cli.algebra.linalg import RatMatrix, RatVector
from levi_civita_cli.equation import EquationSpec, SolutionTuple, SubspaceW
from levi_civita_cli.errors import HypothesisViolation, PreconditionViolation
from levi_civita_cli.reduction import (
    default_schedule,
    difference_elimination,
    folfact_check,
    full_reduction,
    levi_civita_closure,
    reduce_once,
)
from levi_civita_cli.separation import bivariate_expand, separate_minimal, verify_membership

from .test_utils import mat, p, random_poly, solution, spec_1d, vec

QUADRATICS = SubspaceW(1, (p("x1^2"), p("x1"), p("1")))


class TestReduceOnce:
    """A single elimination step."""

    def test_quadratic_example(self):
        spec = spec_1d([1, 1], [1, 2])
        reduced, step = reduce_once(spec, solution("x1^2", "x1^2"), QUADRATICS, vec(1))
        assert reduced.spec.m == 1
        assert reduced.spec.cs == [RatMatrix.scalar(1, 2)]
        assert reduced.sol.f == (p("-2*x1 + 1"),)
        assert step.d_matrices == ((1, RatMatrix.scalar(1, -1)),)
        assert step.w_out.dim == 3
        assert verify_membership(reduced.spec, reduced.sol, reduced.W).passed

    def test_degree_drops(self):
        spec = spec_1d([1, 1], [1, 2])
        _, step = reduce_once(spec, solution("x1^2", "x1^2"), QUADRATICS, vec(1))
        assert step.max_degree_in == 2
        assert step.max_degree_out == 1

    def test_zero_shift(self):
        spec = spec_1d([1, 1], [1, 2])
        reduced, _ = reduce_once(spec, solution("x1^2", "x1^2"), QUADRATICS, vec(0))
        assert all(not g for g in reduced.sol.f)

    def test_equal_scalars_violate_hypothesis(self):
        spec = spec_1d([1, 1], [1, 1])
        with pytest.raises(HypothesisViolation) as exc_info:
            reduce_once(spec, solution("x1^2", "x1^2"), QUADRATICS, vec(1))
        assert exc_info.value.pair == (1, 2)

    def test_single_summand_rejected(self):
        with pytest.raises(PreconditionViolation):
            reduce_once(spec_1d([1], [1]), solution("x1"), QUADRATICS, vec(1))

    def test_pivot_out_of_range(self):
        with pytest.raises(PreconditionViolation):
            reduce_once(spec_1d([1, 1], [1, 2]), solution("x1", "x1"), QUADRATICS, vec(1), pivot=2)

    def test_failing_input_membership_rejected(self):
        W = SubspaceW(1, (p("x1^2"), p("1")))
        with pytest.raises(PreconditionViolation):
            reduce_once(spec_1d([1, 1], [1, 2]), solution("x1^2", "x1^2"), W, vec(1))

    def test_second_pivot(self):
        spec = spec_1d([1, 1], [1, 2])
        reduced, step = reduce_once(spec, solution("x1^2", "x1^2"), QUADRATICS, vec(1), pivot=1)
        assert step.eliminated_index == 1
        assert reduced.spec.cs == [RatMatrix.scalar(1, 1)]
        # d_1 = 1 - 1/2 so g_1 = Delta_{1/2} x^2
        assert reduced.sol.f == (p("x1 + 1/4"),)


class TestFullReduction:
    """Chains of elimination steps."""

    def test_single_summand_returns_empty_chain(self):
        assert full_reduction(spec_1d([1], [1]), solution("x1^2"), QUADRATICS) == []

    def test_two_summands(self):
        chain = full_reduction(spec_1d([1, 1], [1, 2]), solution("x1^2", "x1^2"), QUADRATICS, [vec(1)])
        assert len(chain) == 1
        assert chain[0].sol.f == (p("-2*x1 + 1"),)

    @pytest.mark.parametrize("seed", range(5))
    def test_three_summands_with_random_polynomials(self, seed):
        spec = spec_1d([1, 1, 1], [1, 2, 3])
        sol = SolutionTuple(tuple(random_poly(seed * 3 + i, 1, 3) for i in range(3)))
        W = separate_minimal(bivariate_expand(spec, sol)).subspace()
        chain = full_reduction(spec, sol, W)
        assert len(chain) == 2
        assert chain[-1].spec.m == 1
        for instance in chain:
            assert verify_membership(instance.spec, instance.sol, instance.W).passed
            assert instance.step.w_out.dim <= 2 * instance.step.w_in_dim

    def test_hypothesis_checked_up_front(self):
        with pytest.raises(HypothesisViolation) as exc_info:
            full_reduction(spec_1d([1, 1, 1], [1, 1, 2]), solution("x1", "x1", "x1"), QUADRATICS)
        assert exc_info.value.pair == (1, 2)

    def test_conditions_checked_after_normalizing_b(self):
        # c~ = b^-1 c = (1, 1/2); f~_2(x) = f_2(2x) = 4x^2
        chain = full_reduction(spec_1d([1, 2], [1, 1]), solution("x1^2", "x1^2"), QUADRATICS)
        assert len(chain) == 1
        assert chain[0].sol.f == (p("4*x1 + 1"),)

    def test_equal_quotients_rejected_up_front(self):
        with pytest.raises(HypothesisViolation) as exc_info:
            full_reduction(spec_1d([2, 1], [2, 1]), solution("x1^2", "x1^2"), QUADRATICS)
        assert exc_info.value.pair == (1, 2)
        assert "c_1 - c_2" in str(exc_info.value)

    def test_schedule_length_checked(self):
        with pytest.raises(PreconditionViolation):
            full_reduction(spec_1d([1, 1], [1, 2]), solution("x1^2", "x1^2"), QUADRATICS, [vec(1), vec(1)])

    def test_default_schedule_cycles_basis(self):
        assert default_schedule(2, 3) == [vec(1, 0), vec(0, 1), vec(1, 0)]


class TestFolfact:
    """Difference of a sheared composition."""

    def test_quadratic(self):
        verdict = folfact_check(p("x1^2"), mat([[2]]), vec(1), vec(1))
        assert verdict.passed
        assert verdict.left == verdict.right

    def test_zero_shifts(self):
        verdict = folfact_check(p("x1^2 + exp(x1)"), mat([[2]]), vec(0), vec(0))
        assert verdict.passed
        assert not verdict.left

    def test_two_dimensional(self):
        verdict = folfact_check(p("x1*exp(x2) + x2^2"), mat([[1, 2], [0, -1]]), vec(1, "1/2"), vec(-1, 3))
        assert verdict.passed


class TestLeviCivitaClosure:
    """Dimension of the smallest translation-invariant space."""

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("exp(x1)", 1),
            ("x1^2", 3),
            ("x1*exp(2*x1) + 1", 3),
        ],
    )
    def test_dimension(self, text, expected):
        dim, basis = levi_civita_closure(p(text))
        assert dim == expected
        assert len(basis) == dim


class TestDifferenceElimination:
    """Bivariate differencing along (h, -c_p^-1 h)."""

    def test_quadratic_example(self):
        verdict = difference_elimination(spec_1d([1, 1], [1, 2]), solution("x1^2", "x1^2"), vec(1))
        assert verdict.identity_holds
        assert verdict.bound_holds
        assert verdict.passed
        assert verdict.rank_before == 3

    def test_single_summand_vanishes(self):
        verdict = difference_elimination(spec_1d([1], [1]), solution("x1^3"), vec(1))
        assert verdict.identity_holds
        assert verdict.rank_after == 0

    def test_two_dimensional(self):
        spec_cs = [RatMatrix.identity(2), mat([[2, 1], [0, 3]])]
        spec = EquationSpec.normalized(spec_cs)
        verdict = difference_elimination(spec, solution("x1*x2", "exp(x1) + x2", dim=2), RatVector.of(1, 2))
        assert verdict.passed
