"""Bivariate expansion, minimal separated forms and membership checks.

A bivariate function of ``(x, y)`` is stored as an ExpPoly on R^(2d) whose
first ``d`` coordinates are ``x`` and last ``d`` are ``y``. Every atom then
splits into an x-atom and a y-atom, and the coefficient matrix indexed by
those halves carries the whole separation structure.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

from loguru import logger

from .algebra.exp_poly import Atom, ExpPoly, atom_key, linear_basis, translates_closure
from .algebra.exp_scalar import ONE_SCALAR, ZERO_SCALAR, ExpScalar
from .algebra.linalg import EchelonBasis, RatVector, bareiss_determinant, bareiss_echelon, mat_rank
from .algebra.numbers import ZERO
from .equation import EquationSpec, SolutionTuple, SubspaceW, normalize_b_to_identity
from .errors import DimensionMismatch, NotTranslationInvariant, ReductionUnsound
from .utils.dsl import bivariate_names, format_exppoly


def _embedding(d: int, offset: int) -> list[list[Fraction]]:
    """Rows of the ``d x 2d`` matrix picking coordinates ``offset..offset+d`` of R^(2d)."""
    return [[Fraction(int(j == offset + i)) for j in range(2 * d)] for i in range(d)]


def lift_x(v: ExpPoly) -> ExpPoly:
    """``v`` as a function of ``(x, y)`` depending on ``x`` only."""
    return v.compose_linear(_embedding(v.d, 0))


def lift_y(u: ExpPoly) -> ExpPoly:
    """``u`` as a function of ``(x, y)`` depending on ``y`` only."""
    return u.compose_linear(_embedding(u.d, u.d))


@dataclass(frozen=True)
class BivariatePoly:
    """Canonical exponential polynomial in ``(x, y)``, each of dimension ``d``."""

    d: int
    joint: ExpPoly

    def __post_init__(self) -> None:
        if self.joint.d != 2 * self.d:
            raise DimensionMismatch(2 * self.d, self.joint.d, "bivariate joint dimension")

    @classmethod
    def zero(cls, d: int) -> BivariatePoly:
        return cls(d, ExpPoly.zero(2 * d))

    @classmethod
    def product(cls, u: ExpPoly, v: ExpPoly) -> BivariatePoly:
        """``u(y) * v(x)``."""
        if u.d != v.d:
            raise DimensionMismatch(v.d, u.d, "separated factor")
        return cls(v.d, lift_y(u) * lift_x(v))

    @classmethod
    def from_x(cls, v: ExpPoly) -> BivariatePoly:
        return cls(v.d, lift_x(v))

    @classmethod
    def from_y(cls, u: ExpPoly) -> BivariatePoly:
        return cls(u.d, lift_y(u))

    def split_atom(self, atom: Atom) -> tuple[Atom, Atom]:
        freq, alpha = atom
        d = self.d
        return (freq[:d], alpha[:d]), (freq[d:], alpha[d:])

    @cached_property
    def terms(self) -> dict[tuple[Atom, Atom], ExpScalar]:
        """Map ``(x-atom, y-atom) -> coefficient``."""
        return {self.split_atom(atom): coeff for atom, coeff in self.joint.atoms.items()}

    @property
    def x_atoms(self) -> list[Atom]:
        return sorted({xa for xa, _ in self.terms}, key=atom_key)

    @property
    def y_atoms(self) -> list[Atom]:
        return sorted({ya for _, ya in self.terms}, key=atom_key)

    def coefficient_matrix(self) -> tuple[list[Atom], list[Atom], list[list[ExpScalar]]]:
        """Rows indexed by x-atoms, columns by y-atoms."""
        xs, ys = self.x_atoms, self.y_atoms
        terms = self.terms
        matrix = [[terms.get((xa, ya), ZERO_SCALAR) for ya in ys] for xa in xs]
        return xs, ys, matrix

    def x_part(self, y_atom: Atom) -> ExpPoly:
        """Coefficient function (in ``x``) of one y-atom."""
        return ExpPoly.from_atoms(self.d, {xa: c for (xa, ya), c in self.terms.items() if ya == y_atom})

    def y_part(self, x_atom: Atom) -> ExpPoly:
        return ExpPoly.from_atoms(self.d, {ya: c for (xa, ya), c in self.terms.items() if xa == x_atom})

    def x_only(self) -> ExpPoly:
        """Terms whose y-atom is the constant atom 1."""
        return self.x_part(_unit_atom(self.d))

    def y_only(self) -> ExpPoly:
        return self.y_part(_unit_atom(self.d))

    def __add__(self, other: BivariatePoly) -> BivariatePoly:
        self._check(other)
        return BivariatePoly(self.d, self.joint + other.joint)

    def __sub__(self, other: BivariatePoly) -> BivariatePoly:
        self._check(other)
        return BivariatePoly(self.d, self.joint - other.joint)

    def __neg__(self) -> BivariatePoly:
        return BivariatePoly(self.d, -self.joint)

    def scale(self, factor: ExpScalar) -> BivariatePoly:
        return BivariatePoly(self.d, self.joint.scale(factor))

    def __bool__(self) -> bool:
        return bool(self.joint)

    def _check(self, other: BivariatePoly) -> None:
        if other.d != self.d:
            raise DimensionMismatch(self.d, other.d, "bivariate operand")

    def translate(self, h: RatVector, k: RatVector) -> BivariatePoly:
        """``F(x + h, y + k)``."""
        return BivariatePoly(self.d, self.joint.translate(RatVector(h.entries + k.entries)))

    def swap(self) -> BivariatePoly:
        """``F(y, x)``: exchange the roles of the two variables."""
        d = self.d
        rows = [[Fraction(int(j == (i + d) % (2 * d))) for j in range(2 * d)] for i in range(2 * d)]
        return BivariatePoly(d, self.joint.compose_linear(rows))

    def at_y(self, y: RatVector) -> ExpPoly:
        """Exact specialisation ``x -> F(x, y)`` at a rational point ``y``."""
        if y.d != self.d:
            raise DimensionMismatch(self.d, y.d, "y sample")
        out: dict[Atom, ExpScalar] = {}
        for (xa, ya), coeff in self.terms.items():
            value = ExpPoly.from_atoms(self.d, {ya: ONE_SCALAR}).evaluate_exact(y)
            if value:
                out[xa] = out.get(xa, ZERO_SCALAR) + coeff * value
        return ExpPoly.from_atoms(self.d, out)

    def evaluate(self, x: Sequence[float], y: Sequence[float]) -> complex:
        return self.joint.evaluate(list(x) + list(y))

    def __str__(self) -> str:
        return format_exppoly(self.joint, bivariate_names(self.d))

    def __repr__(self) -> str:
        return f"BivariatePoly(d={self.d}, {self})"


def _unit_atom(d: int) -> Atom:
    return ((ZERO,) * d, (0,) * d)


def bivariate_expand(spec: EquationSpec, sol: SolutionTuple) -> BivariatePoly:
    """Left side ``sum_i f_i(b_i x + c_i y)`` as a canonical bivariate form."""
    sol.check_against(spec)
    total = ExpPoly.zero(2 * spec.d)
    for pair, fi in zip(spec.pairs, sol.f, strict=True):
        rows = [list(b_row) + list(c_row) for b_row, c_row in zip(pair.b.rows, pair.c.rows, strict=True)]
        total = total + fi.compose_linear(rows)
    return BivariatePoly(spec.d, total)


@dataclass(frozen=True)
class SeparatedForm:
    """``scale * F = sum_k u_k(y) v_k(x)`` with exactly ``n`` products.

    ``scale`` is 1 unless the pivot block determinant is not invertible among
    formal scalars; it is always a nonzero complex number.
    """

    d: int
    pairs: tuple[tuple[ExpPoly, ExpPoly], ...]
    scale: ExpScalar = ONE_SCALAR

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def us(self) -> list[ExpPoly]:
        return [u for u, _ in self.pairs]

    @property
    def vs(self) -> list[ExpPoly]:
        return [v for _, v in self.pairs]

    def reconstruct(self) -> BivariatePoly:
        """``sum_k u_k(y) v_k(x)`` (equal to ``scale * F``)."""
        total = BivariatePoly.zero(self.d)
        for u, v in self.pairs:
            total = total + BivariatePoly.product(u, v)
        return total

    def subspace(self) -> SubspaceW:
        return SubspaceW(self.d, tuple(self.vs))

    def to_dict(self) -> dict[str, Any]:
        y_names = [f"y{j + 1}" for j in range(self.d)]
        return {
            "n": self.n,
            "scale": str(self.scale),
            "pairs": [{"u": format_exppoly(u, y_names), "v": str(v)} for u, v in self.pairs],
        }


def _adjugate(block: list[list[ExpScalar]]) -> list[list[ExpScalar]]:
    n = len(block)
    if n == 1:
        return [[ONE_SCALAR]]
    adj = [[ZERO_SCALAR] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for r, row in enumerate(block) if r != i]
            cofactor = bareiss_determinant(minor)
            adj[j][i] = cofactor if (i + j) % 2 == 0 else -cofactor
    return adj


def separated_rank(F: BivariatePoly) -> int:
    """Minimal number of products ``u_k(y) v_k(x)`` needed to write ``F``."""
    _, _, matrix = F.coefficient_matrix()
    return mat_rank(matrix)


def separate_minimal(F: BivariatePoly) -> SeparatedForm:
    """Minimal separated form from a skeleton factorisation of the coefficient matrix.

    With pivot rows ``I`` and columns ``J`` from fraction-free elimination and
    ``N = M[I, J]``, ``M = M[:, J] N^{-1} M[I, :]`` whenever ``rank M = |I|``.
    The ``u_k`` are the pivot rows; the ``v_k`` absorb ``N^{-1}``.
    """
    xs, ys, matrix = F.coefficient_matrix()
    if not xs:
        return SeparatedForm(F.d, ())

    n, pivot_rows, pivot_cols = bareiss_echelon(matrix)
    block = [[matrix[i][j] for j in pivot_cols] for i in pivot_rows]
    det = bareiss_determinant(block)
    adj = _adjugate(block)
    if det.is_unit:
        inv_det = det.inverse()
        inverse = [[a * inv_det for a in row] for row in adj]
        scale = ONE_SCALAR
    else:
        inverse = adj
        scale = det

    pairs = []
    for k in range(n):
        u = ExpPoly.from_atoms(F.d, {ya: matrix[pivot_rows[k]][b] for b, ya in enumerate(ys)})
        v_coeffs = {
            xa: sum((matrix[a][pivot_cols[t]] * inverse[t][k] for t in range(n)), ZERO_SCALAR)
            for a, xa in enumerate(xs)
        }
        v = ExpPoly.from_atoms(F.d, v_coeffs)
        pairs.append((u, v))

    form = SeparatedForm(F.d, tuple(pairs), scale)
    if form.reconstruct() != F.scale(scale):
        raise ReductionUnsound("Separated form does not reconstruct the bivariate input")
    logger.debug(f"Separated {len(xs)}x{len(ys)} coefficient matrix with rank {n}")
    return form


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of ``sum_i tau_{c_i y} f_i in W`` for all y; witness on failure."""

    passed: bool
    checked_atoms: int
    y_atom: str | None = None
    x_part: ExpPoly | None = None
    residual: ExpPoly | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"passed": self.passed, "checked_y_atoms": self.checked_atoms}
        if not self.passed:
            data["witness"] = {
                "y_atom": self.y_atom,
                "x_part": str(self.x_part),
                "residual": str(self.residual),
            }
        return data


def _format_y_atom(atom: Atom, d: int) -> str:
    return format_exppoly(ExpPoly.from_atoms(d, {atom: ONE_SCALAR}), [f"y{j + 1}" for j in range(d)])


def _membership(F: BivariatePoly, W: SubspaceW) -> MembershipVerdict:
    if W.d != F.d:
        raise DimensionMismatch(F.d, W.d, "subspace W")
    y_atoms = F.y_atoms
    parts = [F.x_part(ya) for ya in y_atoms]
    candidates = list(W.basis) + parts
    atoms = sorted({a for g in candidates for a in g.atoms}, key=atom_key)
    echelon = EchelonBasis(len(atoms))
    for v in W.basis:
        echelon.add([v.atoms.get(a, ZERO_SCALAR) for a in atoms])

    for ya, part in zip(y_atoms, parts, strict=True):
        reduced = echelon.reduce([part.atoms.get(a, ZERO_SCALAR) for a in atoms])
        if any(reduced):
            residual = ExpPoly.from_atoms(F.d, dict(zip(atoms, reduced, strict=True)))
            label = _format_y_atom(ya, F.d)
            logger.debug(f"Membership fails at y-atom {label}")
            return MembershipVerdict(False, len(y_atoms), label, part, residual)
    return MembershipVerdict(True, len(y_atoms))


def verify_membership(spec: EquationSpec, sol: SolutionTuple, W: SubspaceW) -> MembershipVerdict:
    """Decide symbolically whether every y-atom's x-coefficient lies in ``span(W)``."""
    spec, sol = normalize_b_to_identity(spec, sol)
    return _membership(bivariate_expand(spec, sol), W)


@dataclass(frozen=True)
class SampleVerdict:
    y: RatVector
    passed: bool
    closure_dim: int
    residual: ExpPoly | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "y": self.y.to_json(),
            "passed": self.passed,
            "closure_dim": self.closure_dim,
        }
        if self.residual is not None:
            data["residual"] = str(self.residual)
        return data


@dataclass(frozen=True)
class RemainderVerdict:
    passed: bool
    samples: tuple[SampleVerdict, ...]
    symbolic: MembershipVerdict | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"passed": self.passed, "samples": [s.to_dict() for s in self.samples]}
        if self.symbolic is not None:
            data["symbolic"] = self.symbolic.to_dict()
        return data


def invariant_closure(generators: Sequence[ExpPoly]) -> list[ExpPoly]:
    """Basis of the smallest translation-invariant space containing ``generators``.

    Raises NotTranslationInvariant when the generators' own span is smaller.
    """
    own = linear_basis(list(generators))
    closure = linear_basis([g for gen in generators for g in translates_closure(gen)])
    if len(closure) != len(own):
        names = ", ".join(str(g) for g in generators)
        raise NotTranslationInvariant(
            f"span{{{names}}} has dimension {len(own)} but its translates span dimension {len(closure)}"
        )
    return closure


def verify_with_remainder(
    spec: EquationSpec,
    sol: SolutionTuple,
    W: SubspaceW,
    R: Mapping[RatVector, Sequence[ExpPoly]],
) -> RemainderVerdict:
    """Check ``sum_i tau_{c_i y} f_i in W + R(y)`` at the sampled points ``y``.

    An empty ``R`` falls back to the symbolic all-y membership check.
    """
    spec, sol = normalize_b_to_identity(spec, sol)
    F = bivariate_expand(spec, sol)
    if not R:
        symbolic = _membership(F, W)
        return RemainderVerdict(symbolic.passed, (), symbolic)

    samples = []
    for y, generators in R.items():
        closure = invariant_closure(generators)
        target = F.at_y(y)
        space = SubspaceW.spanned_by(spec.d, list(W.basis) + closure)
        residual = space.residual(target)
        samples.append(SampleVerdict(y, not residual, len(closure), residual if residual else None))
        logger.debug(f"Remainder check at y={y}: {'pass' if not residual else 'fail'}")
    return RemainderVerdict(all(s.passed for s in samples), tuple(samples))
