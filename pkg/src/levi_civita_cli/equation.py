"""Equation instances ``sum_i f_i(b_i x + c_i y) = sum_k u_k(y) v_k(x)``.

Holds the data model (spec, solution tuple, subspace W), the hypothesis
validator for each theorem profile, and the substitution that brings every
``b_i`` to the identity.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any

from loguru import logger

from .algebra.exp_poly import ExpPoly, coefficient_matrix, linear_basis
from .algebra.exp_scalar import ExpScalar
from .algebra.linalg import EchelonBasis, RatMatrix, independent_subset
from .algebra.numbers import format_fraction
from .config import PROFILES
from .errors import DimensionMismatch, SingularMatrix

# Which invertibility facts each theorem profile requires.
PROFILE_REQUIREMENTS: dict[str, tuple[str, ...]] = {
    "thm2.1": ("b", "c", "bc_diff"),
    "thm2.2": ("c", "c_diff"),
    "thm3.2": ("c", "c_diff"),
    "cor4.3": ("b", "c", "bc_diff"),
}


@dataclass(frozen=True)
class MatrixPair:
    b: RatMatrix
    c: RatMatrix


@dataclass(frozen=True)
class EquationSpec:
    """The coefficient data ``(b_i, c_i)`` of one equation instance."""

    d: int
    pairs: tuple[MatrixPair, ...]
    rhs_rank_hint: int | None = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("Dimension must be positive")
        if not self.pairs:
            raise ValueError("An equation needs at least one summand")
        for idx, pair in enumerate(self.pairs):
            if pair.b.d != self.d:
                raise DimensionMismatch(self.d, pair.b.d, f"b_{idx + 1}")
            if pair.c.d != self.d:
                raise DimensionMismatch(self.d, pair.c.d, f"c_{idx + 1}")
        if self.rhs_rank_hint is not None and self.rhs_rank_hint < 0:
            raise ValueError("rhs_rank_hint must be nonnegative")

    @classmethod
    def from_matrices(
        cls,
        bs: Sequence[RatMatrix],
        cs: Sequence[RatMatrix],
        rhs_rank_hint: int | None = None,
    ) -> EquationSpec:
        if len(bs) != len(cs):
            raise ValueError("b and c lists must have equal length")
        if not cs:
            raise ValueError("An equation needs at least one summand")
        return cls(cs[0].d, tuple(MatrixPair(b, c) for b, c in zip(bs, cs, strict=True)), rhs_rank_hint)

    @classmethod
    def normalized(cls, cs: Sequence[RatMatrix], rhs_rank_hint: int | None = None) -> EquationSpec:
        """Spec with every ``b_i = I``."""
        if not cs:
            raise ValueError("An equation needs at least one summand")
        identity = RatMatrix.identity(cs[0].d)
        return cls.from_matrices([identity] * len(cs), cs, rhs_rank_hint)

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def bs(self) -> list[RatMatrix]:
        return [p.b for p in self.pairs]

    @property
    def cs(self) -> list[RatMatrix]:
        return [p.c for p in self.pairs]

    @property
    def is_normalized(self) -> bool:
        return all(p.b.is_identity() for p in self.pairs)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "d": self.d,
            "pairs": [{"b": p.b.to_json(), "c": p.c.to_json()} for p in self.pairs],
        }
        if self.rhs_rank_hint is not None:
            data["rhs_rank_hint"] = self.rhs_rank_hint
        return data


@dataclass(frozen=True)
class SolutionTuple:
    """Candidate unknowns ``(f_1, ..., f_m)``."""

    f: tuple[ExpPoly, ...]

    @classmethod
    def of(cls, *functions: ExpPoly) -> SolutionTuple:
        return cls(tuple(functions))

    @property
    def m(self) -> int:
        return len(self.f)

    def check_against(self, spec: EquationSpec) -> None:
        if len(self.f) != spec.m:
            raise DimensionMismatch(spec.m, len(self.f), "solution tuple length")
        for idx, fi in enumerate(self.f):
            if fi.d != spec.d:
                raise DimensionMismatch(spec.d, fi.d, f"f_{idx + 1}")

    def to_dict(self) -> dict[str, Any]:
        return {"f": [str(fi) for fi in self.f]}


@dataclass(frozen=True)
class SubspaceW:
    """A finite-dimensional function space given by a linearly independent basis."""

    d: int
    basis: tuple[ExpPoly, ...] = ()

    def __post_init__(self) -> None:
        for v in self.basis:
            if v.d != self.d:
                raise DimensionMismatch(self.d, v.d, "subspace basis element")
        if self.basis:
            atoms, rows = coefficient_matrix(list(self.basis))
            if len(independent_subset(rows, len(atoms))) != len(self.basis):
                raise ValueError("SubspaceW basis elements must be linearly independent")

    @classmethod
    def spanned_by(cls, d: int, functions: Sequence[ExpPoly]) -> SubspaceW:
        """Subspace spanned by arbitrary functions; dependent ones are dropped."""
        return cls(d, tuple(linear_basis(list(functions))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _echelon(self, extra: Sequence[ExpPoly]) -> tuple[list, EchelonBasis]:
        atoms, _ = coefficient_matrix(list(self.basis) + list(extra) or [ExpPoly.zero(self.d)])
        echelon = EchelonBasis(len(atoms))
        for v in self.basis:
            echelon.add([v.atoms.get(a, ExpScalar()) for a in atoms])
        return atoms, echelon

    def contains(self, f: ExpPoly) -> bool:
        return not self.residual(f)

    def residual(self, f: ExpPoly) -> ExpPoly:
        """Remainder of ``f`` modulo the span (a nonzero multiple of it when pivots are not units)."""
        if f.d != self.d:
            raise DimensionMismatch(self.d, f.d, "function")
        if not f:
            return f
        atoms, echelon = self._echelon([f])
        reduced = echelon.reduce([f.atoms.get(a, ExpScalar()) for a in atoms])
        return ExpPoly.from_atoms(self.d, dict(zip(atoms, reduced, strict=True)))

    def to_dict(self) -> dict[str, Any]:
        return {"d": self.d, "dim": self.dim, "basis": [str(v) for v in self.basis]}


@dataclass(frozen=True)
class PairVerdict:
    """Invertibility of one pairwise matrix (``b_i^{-1}c_i - b_j^{-1}c_j`` or ``c_i - c_j``)."""

    i: int
    j: int
    kind: str
    determinant: Fraction | None
    invertible: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "i": self.i + 1,
            "j": self.j + 1,
            "kind": self.kind,
            "determinant": None if self.determinant is None else format_fraction(self.determinant),
            "invertible": self.invertible,
        }


@dataclass(frozen=True)
class HypothesisReport:
    profile: str
    b_invertible: tuple[bool, ...]
    c_invertible: tuple[bool, ...]
    bc_differences: tuple[PairVerdict, ...]
    c_differences: tuple[PairVerdict, ...]
    profile_results: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.profile_results[self.profile]

    def verdict(self, kind: str, i: int, j: int) -> PairVerdict:
        """The verdict for an unordered pair; ``(i, j)`` and ``(j, i)`` agree."""
        if i == j:
            raise ValueError("Pairwise verdicts need distinct indices")
        lo, hi = min(i, j), max(i, j)
        table = self.bc_differences if kind == "bc_diff" else self.c_differences
        for v in table:
            if (v.i, v.j) == (lo, hi):
                return v
        raise KeyError((kind, i, j))

    def failures(self, profile: str | None = None) -> list[str]:
        requirements = PROFILE_REQUIREMENTS[profile or self.profile]
        out = []
        if "b" in requirements:
            out += [f"b_{i + 1} is singular" for i, ok in enumerate(self.b_invertible) if not ok]
        if "c" in requirements:
            out += [f"c_{i + 1} is singular" for i, ok in enumerate(self.c_invertible) if not ok]
        if "bc_diff" in requirements:
            out += [
                f"b_{v.i + 1}^-1 c_{v.i + 1} - b_{v.j + 1}^-1 c_{v.j + 1} is singular"
                for v in self.bc_differences
                if not v.invertible
            ]
        if "c_diff" in requirements:
            out += [f"c_{v.i + 1} - c_{v.j + 1} is singular" for v in self.c_differences if not v.invertible]
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "profile": self.profile,
            "passed": self.passed,
            "b_invertible": list(self.b_invertible),
            "c_invertible": list(self.c_invertible),
            "bc_differences": [v.to_dict() for v in self.bc_differences],
            "c_differences": [v.to_dict() for v in self.c_differences],
            "profiles": dict(self.profile_results),
            "failures": self.failures(),
        }


def validate_conditions(spec: EquationSpec, profile: str = "thm2.1") -> HypothesisReport:
    """Decide every invertibility hypothesis exactly and evaluate all profiles."""
    if profile not in PROFILES:
        raise ValueError(f"Unknown theorem profile {profile!r}; expected one of {', '.join(PROFILES)}")

    b_ok = tuple(b.is_invertible() for b in spec.bs)
    c_ok = tuple(c.is_invertible() for c in spec.cs)
    quotients = [b.inverse() @ c if ok else None for b, c, ok in zip(spec.bs, spec.cs, b_ok, strict=True)]

    bc_diffs = []
    c_diffs = []
    for i, j in combinations(range(spec.m), 2):
        if quotients[i] is not None and quotients[j] is not None:
            det = (quotients[i] - quotients[j]).det()
            bc_diffs.append(PairVerdict(i, j, "bc_diff", det, det != 0))
        else:
            bc_diffs.append(PairVerdict(i, j, "bc_diff", None, False))
        det = (spec.cs[i] - spec.cs[j]).det()
        c_diffs.append(PairVerdict(i, j, "c_diff", det, det != 0))

    facts = {
        "b": all(b_ok),
        "c": all(c_ok),
        "bc_diff": all(v.invertible for v in bc_diffs),
        "c_diff": all(v.invertible for v in c_diffs),
    }
    results = {name: all(facts[req] for req in reqs) for name, reqs in PROFILE_REQUIREMENTS.items()}
    report = HypothesisReport(profile, b_ok, c_ok, tuple(bc_diffs), tuple(c_diffs), results)
    logger.debug(f"Hypothesis check for m={spec.m}, d={spec.d}: {results}")
    return report


def normalize_b_to_identity(spec: EquationSpec, sol: SolutionTuple) -> tuple[EquationSpec, SolutionTuple]:
    """Substitute ``f~_i(x) = f_i(b_i x)`` so that every ``b_i`` becomes the identity.

    Since ``f_i(b_i x + c_i y) = f~_i(x + b_i^{-1} c_i y)``, the bivariate left
    side is unchanged.
    """
    sol.check_against(spec)
    if spec.is_normalized:
        return spec, sol
    new_cs = []
    new_fs = []
    for idx, (pair, fi) in enumerate(zip(spec.pairs, sol.f, strict=True)):
        if not pair.b.is_invertible():
            raise SingularMatrix(f"b_{idx + 1} = {pair.b} is singular")
        new_cs.append(pair.b.inverse() @ pair.c)
        new_fs.append(fi.dilate(pair.b))
    logger.debug(f"Normalized b_i to identity for {spec.m} summands")
    return EquationSpec.normalized(new_cs, spec.rhs_rank_hint), SolutionTuple(tuple(new_fs))


def kernel_identity_holds(spec: EquationSpec) -> bool:
    """``det(c_i - c_1) != 0`` implies ``det(I - c_i c_1^{-1}) != 0`` for every ``i != 1``."""
    c1 = spec.cs[0]
    if not c1.is_invertible():
        raise SingularMatrix("c_1 must be invertible")
    c1_inv = c1.inverse()
    identity = RatMatrix.identity(spec.d)
    for ci in spec.cs[1:]:
        if (ci - c1).det() != 0 and (identity - ci @ c1_inv).det() == 0:
            return False
    return True


def difference_weights(lambdas: Sequence[Fraction | int]) -> list[Fraction]:
    """``a_p = sum_j lambda_j C(j, p) (-1)^(j-p)`` for ``p = 0..m`` (``lambdas[j-1]`` is ``lambda_j``)."""
    m = len(lambdas)
    return [
        sum(
            (Fraction(lambdas[j - 1]) * comb(j, p) * (-1) ** (j - p) for j in range(max(p, 1), m + 1)),
            Fraction(0),
        )
        for p in range(m + 1)
    ]


def iterated_difference_instance(
    f: ExpPoly, lambdas: Sequence[Fraction | int]
) -> tuple[EquationSpec, SolutionTuple, ExpPoly]:
    """Recast ``sum_j lambda_j Delta_y^j f(x)`` as an instance with pairs ``(I, p I)``.

    Expanding ``Delta_y^j = sum_p C(j, p)(-1)^(j-p) tau_{p y}`` gives unknowns
    ``a_p f`` at ``c_p = p I``; the ``p = 0`` term is a pure-x remainder that
    is returned separately.
    """
    if not lambdas:
        raise ValueError("At least one difference order is required")
    weights = difference_weights(lambdas)
    cs = [RatMatrix.scalar(f.d, p) for p in range(1, len(lambdas) + 1)]
    fs = tuple(f.scale(weights[p]) for p in range(1, len(lambdas) + 1))
    return EquationSpec.normalized(cs), SolutionTuple(fs), f.scale(weights[0])
