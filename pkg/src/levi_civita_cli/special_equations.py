"""Checkers for the named special cases of the generalized equation.

Frechet (iterated differences), Kakutani-Nagumo (rotational means on the
plane), Wilson and Skitovich-Darmois (additively split right sides) and
Ghurye-Olkin (right sides polynomial in one variable).
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
from loguru import logger

from .algebra.exp_poly import Atom, ExpPoly, atom_key
from .algebra.exp_scalar import ONE_SCALAR, ExpScalar
from .algebra.linalg import RatMatrix, RatVector
from .algebra.numbers import ZERO
from .equation import EquationSpec, SolutionTuple, SubspaceW
from .errors import DimensionMismatch, PreconditionViolation
from .separation import BivariatePoly, bivariate_expand
from .utils.dsl import format_exppoly

# Frechet


@dataclass(frozen=True)
class FrechetVerdict:
    passed: bool
    order: int
    symbolic: bool
    residuals: tuple[tuple[RatVector, ExpPoly], ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "order": self.order,
            "polynomial_of_lower_degree": self.symbolic,
            "trials": [{"y": y.to_json(), "residual": str(r)} for y, r in self.residuals],
        }


def frechet_check(f: ExpPoly, order: int, trials: Sequence[RatVector] | None = None) -> FrechetVerdict:
    """``Delta_y^order f = 0`` at every trial ``y`` and ``f`` a polynomial of degree < order."""
    if order < 1:
        raise PreconditionViolation("Frechet order must be positive")
    if not trials:
        trials = [RatVector(tuple(Fraction(1) for _ in range(f.d)))]
    residuals = []
    for y in trials:
        if y.d != f.d:
            raise DimensionMismatch(f.d, y.d, "trial shift")
        residuals.append((y, f.difference(y, order)))
    symbolic = f.is_polynomial() and f.degree() < order
    passed = symbolic and not any(r for _, r in residuals)
    return FrechetVerdict(passed, order, symbolic, tuple(residuals))


# Kakutani-Nagumo

EXACT_ROTATIONS: dict[int, RatMatrix] = {
    2: RatMatrix.from_rows([[-1, 0], [0, -1]]),
    4: RatMatrix.from_rows([[0, -1], [1, 0]]),
}

DEFAULT_SAMPLES: tuple[tuple[RatVector, RatVector], ...] = (
    (RatVector.of(0, 0), RatVector.of(1, 0)),
    (RatVector.of(1, 2), RatVector.of(1, 1)),
    (RatVector.of(-1, "1/2"), RatVector.of(2, -3)),
)


@dataclass(frozen=True)
class HarmonicMeanSpec:
    """Rotational mean of order ``N`` on the plane, identified with C."""

    N: int

    def __post_init__(self) -> None:
        if self.N < 2:
            raise PreconditionViolation("The root-of-unity order N must be at least 2")

    @property
    def exact(self) -> bool:
        return self.N in EXACT_ROTATIONS

    def rotation_powers(self) -> list[RatMatrix]:
        rotation = EXACT_ROTATIONS[self.N]
        powers = [RatMatrix.identity(2)]
        for _ in range(self.N - 1):
            powers.append(rotation @ powers[-1])
        return powers

    def float_rotations(self) -> list[np.ndarray]:
        angles = 2 * np.pi * np.arange(self.N) / self.N
        return [np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]]) for a in angles]


@dataclass(frozen=True)
class KakutaniVerdict:
    passed: bool
    mode: str
    max_residual: float
    residuals: tuple[tuple[RatVector, RatVector, str, float], ...]
    symbolic_defect: BivariatePoly | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "passed": self.passed,
            "mode": self.mode,
            "max_residual": self.max_residual,
            "samples": [
                {"z": z.to_json(), "h": h.to_json(), "residual": text, "residual_value": value}
                for z, h, text, value in self.residuals
            ],
        }
        if self.symbolic_defect is not None:
            data["symbolic_defect"] = str(self.symbolic_defect)
        return data


def mean_value_defect(f: ExpPoly, spec: HarmonicMeanSpec) -> BivariatePoly:
    """``(1/N) sum_k f(z + w^k h) - f(z)`` as a function of ``(z, h)`` (exact modes only)."""
    total = ExpPoly.zero(4)
    for power in spec.rotation_powers():
        rows = [[1 if j == i else 0 for j in range(2)] + list(row) for i, row in enumerate(power.rows)]
        total = total + f.compose_linear(rows)
    identity_rows = [[1, 0, 0, 0], [0, 1, 0, 0]]
    return BivariatePoly(2, total.scale(Fraction(1, spec.N)) - f.compose_linear(identity_rows))


def kakutani_nagumo_check(
    f: ExpPoly,
    N: int,
    samples: Sequence[tuple[RatVector, RatVector]] | None = None,
    tolerance: float = 1e-9,
) -> KakutaniVerdict:
    """Mean-value defect of ``f`` over the ``N`` rotations of ``h`` about ``z``.

    For ``N`` in {2, 4} the rotations are rational and the defect is decided
    symbolically; other orders are evaluated in double precision.
    """
    if f.d != 2:
        raise DimensionMismatch(2, f.d, "Kakutani-Nagumo function")
    spec = HarmonicMeanSpec(N)
    samples = list(samples) if samples else list(DEFAULT_SAMPLES)
    for z, h in samples:
        if z.d != 2 or h.d != 2:
            raise DimensionMismatch(2, max(z.d, h.d), "Kakutani-Nagumo sample")

    if spec.exact:
        defect = mean_value_defect(f, spec)
        rows = []
        for z, h in samples:
            value = defect.joint.evaluate_exact(RatVector(z.entries + h.entries))
            rows.append((z, h, str(value), abs(value.evaluate())))
        max_residual = max((r[3] for r in rows), default=0.0)
        return KakutaniVerdict(not defect, "exact", max_residual, tuple(rows), defect)

    rows = []
    for z, h in samples:
        zf = np.array([float(v) for v in z.entries])
        hf = np.array([float(v) for v in h.entries])
        mean = np.mean([f.evaluate(list(zf + rot @ hf)) for rot in spec.float_rotations()])
        value = complex(mean - f.evaluate(list(zf)))
        rows.append((z, h, f"{value:.3e}", abs(value)))
    max_residual = max(r[3] for r in rows)
    logger.debug(f"Kakutani-Nagumo N={N} float residual {max_residual:.3e}")
    return KakutaniVerdict(max_residual < tolerance, "float", max_residual, tuple(rows))


# Wilson and Skitovich-Darmois


def _is_trivial(atom: Atom) -> bool:
    freq, alpha = atom
    return not any(freq) and not any(alpha)


@dataclass(frozen=True)
class WilsonVerdict:
    passed: bool
    f: ExpPoly
    g: ExpPoly
    mixed: tuple[str, ...]
    degree_bound: int
    within_degree_bound: tuple[bool, ...]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "passed": self.passed,
            "degree_bound": self.degree_bound,
            "within_degree_bound": list(self.within_degree_bound),
            "mixed_terms": list(self.mixed),
        }
        if self.passed:
            data["f"] = str(self.f)
            data["g"] = format_in_y(self.g)
        return data


def format_in_y(u: ExpPoly) -> str:
    return format_exppoly(u, [f"y{j + 1}" for j in range(u.d)])


def wilson_check(
    alphas: Sequence[Fraction | int], betas: Sequence[Fraction | int], fs: Sequence[ExpPoly]
) -> WilsonVerdict:
    """Whether ``sum_i f_i(alpha_i x + beta_i y)`` splits as ``f(x) + g(y)``."""
    if not (len(alphas) == len(betas) == len(fs)):
        raise ValueError("alphas, betas and functions must have equal length")
    for fi in fs:
        if fi.d != 1:
            raise DimensionMismatch(1, fi.d, "Wilson unknown")
    spec = EquationSpec.from_matrices(
        [RatMatrix.scalar(1, a) for a in alphas], [RatMatrix.scalar(1, b) for b in betas]
    )
    F = bivariate_expand(spec, SolutionTuple(tuple(fs)))

    f_part: dict[Atom, ExpScalar] = {}
    g_part: dict[Atom, ExpScalar] = {}
    mixed: list[str] = []
    for (xa, ya), coeff in F.terms.items():
        if _is_trivial(ya):
            f_part[xa] = coeff
        elif _is_trivial(xa):
            g_part[ya] = coeff
        else:
            mixed.append(str(BivariatePoly(1, ExpPoly.from_atoms(2, {_join(xa, ya): coeff}))))

    bound = len(fs)
    within = tuple(fi.is_polynomial() and fi.degree() <= bound for fi in fs)
    return WilsonVerdict(
        not mixed,
        ExpPoly.from_atoms(1, f_part),
        ExpPoly.from_atoms(1, g_part),
        tuple(mixed),
        bound,
        within,
    )


def _join(xa: Atom, ya: Atom) -> Atom:
    return (xa[0] + ya[0], xa[1] + ya[1])


@dataclass(frozen=True)
class SkitovichVerdict:
    passed: bool
    difference: BivariatePoly

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "difference": str(self.difference)}


def skitovich_check(spec: EquationSpec, sol: SolutionTuple) -> SkitovichVerdict:
    """``sum f_i(b_i x + c_i y) - sum f_i(b_i x) - sum f_i(c_i y)`` is identically zero."""
    left = bivariate_expand(spec, sol)
    right = BivariatePoly.zero(spec.d)
    for pair, fi in zip(spec.pairs, sol.f, strict=True):
        right = right + BivariatePoly.from_x(fi.dilate(pair.b)) + BivariatePoly.from_y(fi.dilate(pair.c))
    difference = left - right
    return SkitovichVerdict(not difference, difference)


# Ghurye-Olkin


@dataclass(frozen=True)
class GhuryeOlkinSpec:
    """``sum_i f_i(x + c_i y) = A(x, y) + B(y, x)`` with degree bounds ``r`` and ``s``."""

    d: int
    cs: tuple[RatMatrix, ...]
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.r < 0 or self.s < 0:
            raise ValueError("Degree bounds r and s must be nonnegative")
        if not self.cs:
            raise ValueError("At least one c_i is required")
        for idx, c in enumerate(self.cs):
            if c.d != self.d:
                raise DimensionMismatch(self.d, c.d, f"c_{idx + 1}")

    @property
    def m(self) -> int:
        return len(self.cs)

    def equation(self) -> EquationSpec:
        return EquationSpec.normalized(list(self.cs))


@dataclass(frozen=True)
class GhuryeOlkinVerdict:
    passed: bool
    A: BivariatePoly
    B: BivariatePoly
    violations: tuple[str, ...]
    all_polynomial: bool
    r: int = 0
    s: int = 0
    b_x_atoms: tuple[Atom, ...] = field(default=())

    def membership_subspace(self) -> SubspaceW:
        """x-monomials of degree <= r together with the x-atoms carried by B."""
        d = self.A.d
        monomials = [
            ExpPoly.monomial(d, alpha)
            for alpha in itertools.product(range(self.r + 1), repeat=d)
            if sum(alpha) <= self.r
        ]
        b_atoms = [ExpPoly.from_atoms(d, {xa: ONE_SCALAR}) for xa in self.b_x_atoms]
        return SubspaceW.spanned_by(d, monomials + b_atoms)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "passed": self.passed,
            "all_polynomial": self.all_polynomial,
            "violations": list(self.violations),
        }
        if self.passed:
            data["A"] = str(self.A)
            data["B"] = str(self.B)
        return data


def ghurye_olkin_check(spec: GhuryeOlkinSpec, sol: SolutionTuple) -> GhuryeOlkinVerdict:
    """Split the left side into ``A`` (polynomial in x of degree <= r) and ``B`` (in y, <= s).

    Atoms that qualify for both go to ``A``.
    """
    F = bivariate_expand(spec.equation(), sol)
    zero_freq = (ZERO,) * spec.d
    a_atoms: dict[Atom, ExpScalar] = {}
    b_atoms: dict[Atom, ExpScalar] = {}
    b_x_atoms: set[Atom] = set()
    violations: list[str] = []
    for (xa, ya), coeff in F.terms.items():
        joint_atom = _join(xa, ya)
        if xa[0] == zero_freq and sum(xa[1]) <= spec.r:
            a_atoms[joint_atom] = coeff
        elif ya[0] == zero_freq and sum(ya[1]) <= spec.s:
            b_atoms[joint_atom] = coeff
            b_x_atoms.add(xa)
        else:
            violations.append(str(BivariatePoly(spec.d, ExpPoly.from_atoms(2 * spec.d, {joint_atom: coeff}))))

    A = BivariatePoly(spec.d, ExpPoly.from_atoms(2 * spec.d, a_atoms))
    B = BivariatePoly(spec.d, ExpPoly.from_atoms(2 * spec.d, b_atoms))
    all_polynomial = all(fi.is_polynomial() for fi in sol.f)
    logger.debug(f"Ghurye-Olkin split: {len(a_atoms)} A-atoms, {len(b_atoms)} B-atoms, {len(violations)} violations")
    return GhuryeOlkinVerdict(
        not violations,
        A,
        B,
        tuple(violations),
        all_polynomial,
        spec.r,
        spec.s,
        tuple(sorted(b_x_atoms, key=atom_key)),
    )
