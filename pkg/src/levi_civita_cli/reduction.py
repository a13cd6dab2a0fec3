"""The elimination step: trade one summand for a differenced instance.

Substituting ``y -> y - c_p^{-1} h``, shifting by ``h`` and subtracting the
original relation removes summand ``p``; the survivors become
``g_i = Delta_{d_i h} f_i`` with ``d_i = I - c_i c_p^{-1}`` and the target
space grows to ``W* = tau_h(W) + W``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from loguru import logger

from .algebra.exp_poly import ExpPoly, translates_closure
from .algebra.linalg import RatMatrix, RatVector
from .equation import (
    EquationSpec,
    SolutionTuple,
    SubspaceW,
    normalize_b_to_identity,
    validate_conditions,
)
from .errors import HypothesisViolation, PreconditionViolation, ReductionUnsound, SingularMatrix
from .separation import BivariatePoly, bivariate_expand, separated_rank, verify_membership


@dataclass(frozen=True)
class ReductionStep:
    h: RatVector
    eliminated_index: int
    d_matrices: tuple[tuple[int, RatMatrix], ...]
    w_in_dim: int
    w_out: SubspaceW
    max_degree_in: int
    max_degree_out: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "h": self.h.to_json(),
            "pivot": self.eliminated_index + 1,
            "d": [{"index": i + 1, "matrix": m.to_json()} for i, m in self.d_matrices],
            "dim_w_in": self.w_in_dim,
            "dim_w_out": self.w_out.dim,
            "max_degree_in": self.max_degree_in,
            "max_degree_out": self.max_degree_out,
        }


@dataclass(frozen=True)
class ReducedInstance:
    spec: EquationSpec
    sol: SolutionTuple
    W: SubspaceW
    step: ReductionStep | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "spec": self.spec.to_dict(),
            "solution": self.sol.to_dict(),
            "W": self.W.to_dict(),
        }
        if self.step is not None:
            data["step"] = self.step.to_dict()
        return data


def _max_degree(functions: Sequence[ExpPoly]) -> int:
    return max((f.degree() for f in functions), default=-1)


def reduce_once(
    spec: EquationSpec,
    sol: SolutionTuple,
    W: SubspaceW,
    h: RatVector,
    pivot: int = 0,
) -> tuple[ReducedInstance, ReductionStep]:
    """Eliminate summand ``pivot`` with shift ``h``."""
    spec, sol = normalize_b_to_identity(spec, sol)
    if spec.m < 2:
        raise PreconditionViolation("Elimination needs at least two summands")
    if not 0 <= pivot < spec.m:
        raise PreconditionViolation(f"Pivot index {pivot + 1} is out of range 1..{spec.m}")
    if h.d != spec.d:
        raise PreconditionViolation(f"Shift h has dimension {h.d}, expected {spec.d}")

    c_pivot = spec.cs[pivot]
    if not c_pivot.is_invertible():
        raise SingularMatrix(f"c_{pivot + 1} = {c_pivot} is singular")
    c_pivot_inv = c_pivot.inverse()
    identity = RatMatrix.identity(spec.d)

    survivors = [i for i in range(spec.m) if i != pivot]
    d_matrices = []
    for i in survivors:
        d_i = identity - spec.cs[i] @ c_pivot_inv
        if not d_i.is_invertible():
            raise HypothesisViolation(
                f"d_{i + 1} = I - c_{i + 1} c_{pivot + 1}^-1 is singular",
                pair=(pivot + 1, i + 1),
            )
        d_matrices.append((i, d_i))

    membership = verify_membership(spec, sol, W)
    if not membership.passed:
        raise PreconditionViolation(
            f"Input instance fails membership at y-atom {membership.y_atom} (residual {membership.residual})"
        )

    gs = tuple(sol.f[i].difference(d_i @ h) for i, d_i in d_matrices)
    w_out = SubspaceW.spanned_by(spec.d, [w.translate(h) for w in W.basis] + list(W.basis))
    reduced_spec = EquationSpec.normalized([spec.cs[i] for i in survivors])
    reduced_sol = SolutionTuple(gs)

    if not verify_membership(reduced_spec, reduced_sol, w_out).passed:
        raise ReductionUnsound("Reduced instance fails membership in tau_h(W) + W")
    if w_out.dim > 2 * W.dim:
        raise ReductionUnsound(f"dim W* = {w_out.dim} exceeds 2 dim W = {2 * W.dim}")

    step = ReductionStep(
        h=h,
        eliminated_index=pivot,
        d_matrices=tuple(d_matrices),
        w_in_dim=W.dim,
        w_out=w_out,
        max_degree_in=_max_degree(sol.f),
        max_degree_out=_max_degree(gs),
    )
    logger.debug(f"Eliminated summand {pivot + 1}: m {spec.m} -> {spec.m - 1}, dim W {W.dim} -> {w_out.dim}")
    return ReducedInstance(reduced_spec, reduced_sol, w_out, step), step


def default_schedule(d: int, steps: int) -> list[RatVector]:
    """``h_j = e_{(j-1) mod d}``."""
    return [RatVector.basis(d, j % d) for j in range(steps)]


def full_reduction(
    spec: EquationSpec,
    sol: SolutionTuple,
    W: SubspaceW,
    h_schedule: Sequence[RatVector] | None = None,
    pivot: int = 0,
) -> list[ReducedInstance]:
    """Chain elimination steps down to a single summand.

    The pivot is applied at every step, clamped to the last surviving index.
    Conditions are checked on the instance with every ``b_i`` brought to the
    identity.
    """
    if spec.m == 1:
        return []
    spec, sol = normalize_b_to_identity(spec, sol)
    report = validate_conditions(spec, "thm2.2")
    if not report.passed:
        failing = next((v for v in report.c_differences if not v.invertible), None)
        raise HypothesisViolation(
            "; ".join(report.failures()),
            pair=None if failing is None else (failing.i + 1, failing.j + 1),
        )

    schedule = list(h_schedule) if h_schedule is not None else default_schedule(spec.d, spec.m - 1)
    if len(schedule) != spec.m - 1:
        raise PreconditionViolation(f"h schedule needs {spec.m - 1} shifts, got {len(schedule)}")

    chain: list[ReducedInstance] = []
    current_spec, current_sol, current_w = spec, sol, W
    for h in schedule:
        instance, _ = reduce_once(current_spec, current_sol, current_w, h, min(pivot, current_spec.m - 1))
        chain.append(instance)
        current_spec, current_sol, current_w = instance.spec, instance.sol, instance.W
    logger.info(f"Reduced {spec.m} summands to 1 in {len(chain)} steps")
    return chain


@dataclass(frozen=True)
class FolfactVerdict:
    passed: bool
    left: BivariatePoly
    right: BivariatePoly

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "left": str(self.left), "right": str(self.right)}


def _compose_shear(f: ExpPoly, c: RatMatrix) -> BivariatePoly:
    """``f(x + c y)``."""
    identity = RatMatrix.identity(f.d)
    rows = [list(i_row) + list(c_row) for i_row, c_row in zip(identity.rows, c.rows, strict=True)]
    return BivariatePoly(f.d, f.compose_linear(rows))


def folfact_check(f: ExpPoly, c: RatMatrix, h: RatVector, k: RatVector) -> FolfactVerdict:
    """``Delta_{(h,k)} f(x + c y) == (Delta_{h + c k} f)(x + c y)``, structurally."""
    F = _compose_shear(f, c)
    left = F.translate(h, k) - F
    right = _compose_shear(f.difference(h + c @ k), c)
    return FolfactVerdict(left == right, left, right)


def levi_civita_closure(f: ExpPoly) -> tuple[int, list[ExpPoly]]:
    """Smallest translation-invariant space containing ``f`` and its dimension."""
    basis = translates_closure(f)
    return len(basis), basis


@dataclass(frozen=True)
class EliminationVerdict:
    """Function-level shadow of applying ``Delta_{(h, -c_p^{-1} h)}`` to both sides."""

    passed: bool
    identity_holds: bool
    rank_before: int
    rank_after: int

    @property
    def bound_holds(self) -> bool:
        return self.rank_after <= 2 * self.rank_before

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "identity_holds": self.identity_holds,
            "rank_before": self.rank_before,
            "rank_after": self.rank_after,
            "bound_holds": self.bound_holds,
        }


def difference_elimination(
    spec: EquationSpec, sol: SolutionTuple, h: RatVector, pivot: int = 0
) -> EliminationVerdict:
    """Difference the bivariate left side along ``(h, -c_p^{-1} h)``.

    The result must be the expansion of ``sum_{i != p} g_i(x + c_i y)`` and
    its separated rank at most twice the rank before.
    """
    spec, sol = normalize_b_to_identity(spec, sol)
    if not 0 <= pivot < spec.m:
        raise PreconditionViolation(f"Pivot index {pivot + 1} is out of range 1..{spec.m}")
    c_pivot = spec.cs[pivot]
    if not c_pivot.is_invertible():
        raise SingularMatrix(f"c_{pivot + 1} = {c_pivot} is singular")

    F = bivariate_expand(spec, sol)
    differenced = F.translate(h, -(c_pivot.inverse() @ h)) - F

    identity = RatMatrix.identity(spec.d)
    survivors = [i for i in range(spec.m) if i != pivot]
    expected = BivariatePoly.zero(spec.d)
    if survivors:
        d_h = [(identity - spec.cs[i] @ c_pivot.inverse()) @ h for i in survivors]
        gs = SolutionTuple(tuple(sol.f[i].difference(shift) for i, shift in zip(survivors, d_h, strict=True)))
        expected = bivariate_expand(EquationSpec.normalized([spec.cs[i] for i in survivors]), gs)

    identity_holds = differenced == expected
    before, after = separated_rank(F), separated_rank(differenced)
    verdict = EliminationVerdict(identity_holds and after <= 2 * before, identity_holds, before, after)
    logger.debug(f"Difference elimination: rank {before} -> {after}, identity {identity_holds}")
    return verdict
