"""Canonical exponential polynomials ``sum_s P_s(x) e^{<lambda_s, x>}`` on R^d.

Terms are stored as a sorted tuple of ``(frequency, monomials)`` blocks, each
block a sorted tuple of ``(multi-index, ExpScalar)`` pairs. Frequencies are
ordered lexicographically by ``(re, im)`` per component and monomials in
graded-lex order (highest total degree first), so two independent
constructions of the same function compare equal as plain dataclasses.
"""

from __future__ import annotations

import cmath
import itertools
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, prod

from ..errors import DimensionMismatch
from .exp_scalar import ONE_SCALAR, ZERO_SCALAR, ExpScalar, ScalarLike
from .linalg import RatMatrix, RatVector, independent_subset
from .numbers import ZERO, GaussRational

Frequency = tuple[GaussRational, ...]
MultiIndex = tuple[int, ...]
Atom = tuple[Frequency, MultiIndex]


def frequency_key(freq: Frequency) -> tuple:
    return tuple(l.sort_key() for l in freq)  # noqa: E741


def monomial_key(alpha: MultiIndex) -> tuple:
    return (-sum(alpha), tuple(-a for a in alpha))


def atom_key(atom: Atom) -> tuple:
    return (frequency_key(atom[0]), monomial_key(atom[1]))


@dataclass(frozen=True)
class ExpPoly:
    """Exponential polynomial on R^d with ExpScalar coefficients."""

    d: int
    terms: tuple[tuple[Frequency, tuple[tuple[MultiIndex, ExpScalar], ...]], ...] = ()

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("ExpPoly dimension must be positive")

    # Construction

    @classmethod
    def from_atoms(cls, d: int, atoms: Mapping[Atom, ExpScalar]) -> ExpPoly:
        """Canonical ExpPoly from an atom -> coefficient mapping (zeros dropped)."""
        blocks: dict[Frequency, list[tuple[MultiIndex, ExpScalar]]] = {}
        for (freq, alpha), coeff in atoms.items():
            if len(freq) != d or len(alpha) != d:
                raise DimensionMismatch(d, len(freq), "atom")
            if coeff:
                blocks.setdefault(freq, []).append((alpha, coeff))
        terms = []
        for freq in sorted(blocks, key=frequency_key):
            monomials = sorted(blocks[freq], key=lambda item: monomial_key(item[0]))
            terms.append((freq, tuple(monomials)))
        return cls(d, tuple(terms))

    @classmethod
    def from_terms(cls, d: int, items: Iterable[tuple[Atom, ExpScalar]]) -> ExpPoly:
        """Like :meth:`from_atoms` but accumulates repeated atoms."""
        acc: dict[Atom, ExpScalar] = {}
        for atom, coeff in items:
            acc[atom] = acc.get(atom, ZERO_SCALAR) + coeff
        return cls.from_atoms(d, acc)

    @classmethod
    def zero(cls, d: int) -> ExpPoly:
        return cls(d, ())

    @classmethod
    def constant(cls, d: int, value: ScalarLike) -> ExpPoly:
        return cls.from_atoms(d, {(_zero_freq(d), (0,) * d): ExpScalar.coerce(value)})

    @classmethod
    def monomial(cls, d: int, alpha: Sequence[int], coefficient: ScalarLike = 1) -> ExpPoly:
        alpha = tuple(alpha)
        if len(alpha) != d or any(a < 0 for a in alpha):
            raise ValueError(f"Invalid multi-index {alpha} for dimension {d}")
        return cls.from_atoms(d, {(_zero_freq(d), alpha): ExpScalar.coerce(coefficient)})

    @classmethod
    def variable(cls, d: int, index: int) -> ExpPoly:
        """The coordinate function ``x_{index+1}`` (index is 0-based)."""
        if not 0 <= index < d:
            raise ValueError(f"Variable index {index} out of range for dimension {d}")
        return cls.monomial(d, tuple(int(i == index) for i in range(d)))

    @classmethod
    def exponential(cls, d: int, frequency: Sequence[GaussRational | int | Fraction], coefficient: ScalarLike = 1) -> ExpPoly:
        freq = tuple(GaussRational.coerce(l) for l in frequency)  # noqa: E741
        if len(freq) != d:
            raise DimensionMismatch(d, len(freq), "frequency")
        return cls.from_atoms(d, {(freq, (0,) * d): ExpScalar.coerce(coefficient)})

    # Views

    @cached_property
    def atoms(self) -> dict[Atom, ExpScalar]:
        return {(freq, alpha): c for freq, monomials in self.terms for alpha, c in monomials}

    @property
    def frequencies(self) -> list[Frequency]:
        return [freq for freq, _ in self.terms]

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def leading_coefficient(self) -> ExpScalar:
        if not self.terms:
            return ZERO_SCALAR
        return self.terms[0][1][0][1]

    # Ring structure

    def _check(self, other: ExpPoly) -> None:
        if self.d != other.d:
            raise DimensionMismatch(self.d, other.d, "ExpPoly")

    def __add__(self, other: ExpPoly) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        return ExpPoly.from_terms(self.d, itertools.chain(self.atoms.items(), other.atoms.items()))

    def __neg__(self) -> ExpPoly:
        return self.scale(-1)

    def __sub__(self, other: ExpPoly) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        self._check(other)
        return self + (-other)

    def scale(self, factor: ScalarLike) -> ExpPoly:
        c = ExpScalar.coerce(factor)
        if not c:
            return ExpPoly.zero(self.d)
        return ExpPoly.from_atoms(self.d, {atom: coeff * c for atom, coeff in self.atoms.items()})

    def __mul__(self, other: ExpPoly | ScalarLike) -> ExpPoly:
        if not isinstance(other, ExpPoly):
            if isinstance(other, (ExpScalar, GaussRational, int, Fraction)):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        return ExpPoly.from_terms(
            self.d,
            (
                (
                    (
                        tuple(a + b for a, b in zip(f1, f2, strict=True)),
                        tuple(a + b for a, b in zip(a1, a2, strict=True)),
                    ),
                    c1 * c2,
                )
                for (f1, a1), c1 in self.atoms.items()
                for (f2, a2), c2 in other.atoms.items()
            ),
        )

    def __rmul__(self, other: ScalarLike) -> ExpPoly:
        if isinstance(other, (ExpScalar, GaussRational, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> ExpPoly:
        if exponent < 0:
            raise ValueError("Negative powers of exponential polynomials are not supported")
        result = ExpPoly.constant(self.d, 1)
        for _ in range(exponent):
            result = result * self
        return result

    # Operators

    def translate(self, y: RatVector) -> ExpPoly:
        """The shift operator: ``(tau_y f)(x) = f(x + y)``."""
        if y.d != self.d:
            raise DimensionMismatch(self.d, y.d, "shift vector")
        if y.is_zero():
            return self
        out: list[tuple[Atom, ExpScalar]] = []
        for (freq, alpha), coeff in self.atoms.items():
            factor = coeff.shift(_pairing(freq, y.entries)) if any(freq) else coeff
            for beta in itertools.product(*(range(a + 1) for a in alpha)):
                weight = prod(
                    comb(a, b) * y[j] ** (a - b) for j, (a, b) in enumerate(zip(alpha, beta, strict=True))
                )
                if weight:
                    out.append(((freq, beta), factor.scale(Fraction(weight))))
        return ExpPoly.from_terms(self.d, out)

    def compose_linear(self, rows: Sequence[Sequence[Fraction]]) -> ExpPoly:
        """``f(A z)`` for a ``d x k`` rational matrix ``A`` given by rows; result lives on R^k."""
        if len(rows) != self.d:
            raise DimensionMismatch(self.d, len(rows), "linear map")
        k = len(rows[0])
        if any(len(row) != k for row in rows):
            raise ValueError("Linear map rows must have equal length")
        rows = [tuple(Fraction(a) for a in row) for row in rows]
        powers: dict[tuple[int, int], dict[MultiIndex, Fraction]] = {}

        def linear_power(i: int, n: int) -> dict[MultiIndex, Fraction]:
            if (i, n) not in powers:
                if n == 0:
                    powers[(i, n)] = {(0,) * k: Fraction(1)}
                else:
                    base = {
                        tuple(int(t == j) for t in range(k)): rows[i][j] for j in range(k) if rows[i][j]
                    }
                    powers[(i, n)] = _poly_mul(linear_power(i, n - 1), base)
            return powers[(i, n)]

        out: list[tuple[Atom, ExpScalar]] = []
        for (freq, alpha), coeff in self.atoms.items():
            new_freq = tuple(
                sum((rows[i][j] * freq[i] for i in range(self.d)), ZERO) for j in range(k)
            )
            poly = {(0,) * k: Fraction(1)}
            for i, a in enumerate(alpha):
                if a:
                    poly = _poly_mul(poly, linear_power(i, a))
            for beta, weight in poly.items():
                if weight:
                    out.append(((new_freq, beta), coeff.scale(weight)))
        return ExpPoly.from_terms(k, out)

    def dilate(self, b: RatMatrix) -> ExpPoly:
        """The dilation operator: ``(sigma_b f)(x) = f(b x)``."""
        if b.d != self.d:
            raise DimensionMismatch(self.d, b.d, "dilation matrix")
        return self.compose_linear(b.rows)

    def difference(self, y: RatVector, order: int = 1) -> ExpPoly:
        """Iterated difference ``Delta_y^order f`` with ``Delta_y f = tau_y f - f``."""
        if order < 1:
            raise ValueError("Difference order must be positive")
        if y.d != self.d:
            raise DimensionMismatch(self.d, y.d, "shift vector")
        result = self
        for _ in range(order):
            if not result:
                break
            result = result.translate(y) - result
        return result

    def partial_polynomial(self, beta: MultiIndex) -> ExpPoly:
        """Apply ``d^beta`` to every polynomial part, keeping the exponentials."""
        out: list[tuple[Atom, ExpScalar]] = []
        for (freq, alpha), coeff in self.atoms.items():
            if all(a >= b for a, b in zip(alpha, beta, strict=True)):
                weight = prod(prod(range(a - b + 1, a + 1)) for a, b in zip(alpha, beta, strict=True))
                out.append(((freq, tuple(a - b for a, b in zip(alpha, beta, strict=True))), coeff.scale(weight)))
        return ExpPoly.from_terms(self.d, out)

    def frequency_part(self, freq: Frequency) -> ExpPoly:
        return ExpPoly(self.d, tuple(block for block in self.terms if block[0] == freq))

    def monic(self) -> ExpPoly:
        """Divide by the leading coefficient when it is invertible."""
        lead = self.leading_coefficient()
        if lead and lead.is_unit and lead != ONE_SCALAR:
            return self.scale(lead.inverse())
        return self

    # Queries

    def degree(self) -> int:
        """Total polynomial degree over all frequencies; -1 for the zero function."""
        return max((sum(alpha) for (_, alpha) in self.atoms), default=-1)

    def is_polynomial(self) -> bool:
        return all(
            not any(freq) and coeff.is_constant for (freq, _), coeff in self.atoms.items()
        )

    def evaluate(self, x: Sequence[float]) -> complex:
        """Floating-point value at a real point."""
        if len(x) != self.d:
            raise DimensionMismatch(self.d, len(x), "evaluation point")
        total = 0j
        for (freq, alpha), coeff in self.atoms.items():
            mono = prod((float(x[j]) ** a for j, a in enumerate(alpha)), start=1.0)
            phase = sum((complex(l) * float(x[j]) for j, l in enumerate(freq)), start=0j)  # noqa: E741
            total += coeff.evaluate() * mono * cmath.exp(phase)
        return total

    def evaluate_exact(self, point: RatVector | Sequence[Fraction]) -> ExpScalar:
        """Exact value at a rational point, as a formal exponential scalar."""
        entries = point.entries if isinstance(point, RatVector) else tuple(Fraction(p) for p in point)
        if len(entries) != self.d:
            raise DimensionMismatch(self.d, len(entries), "evaluation point")
        total = ZERO_SCALAR
        for (freq, alpha), coeff in self.atoms.items():
            mono = prod((entries[j] ** a for j, a in enumerate(alpha)), start=Fraction(1))
            if mono:
                total = total + coeff.shift(_pairing(freq, entries)).scale(mono)
        return total

    def __call__(self, x: Sequence[float]) -> complex:
        return self.evaluate(x)

    def __str__(self) -> str:
        from ..utils.dsl import format_exppoly

        return format_exppoly(self)

    def __repr__(self) -> str:
        return f"ExpPoly(d={self.d}, {self})"


def _zero_freq(d: int) -> Frequency:
    return (ZERO,) * d


def _pairing(freq: Frequency, y: Sequence[Fraction]) -> GaussRational:
    return sum((l * v for l, v in zip(freq, y, strict=True)), ZERO)  # noqa: E741


def _poly_mul(p: Mapping[MultiIndex, Fraction], q: Mapping[MultiIndex, Fraction]) -> dict[MultiIndex, Fraction]:
    out: dict[MultiIndex, Fraction] = {}
    for a, x in p.items():
        for b, y in q.items():
            key = tuple(i + j for i, j in zip(a, b, strict=True))
            out[key] = out.get(key, Fraction(0)) + x * y
    return {k: v for k, v in out.items() if v}


# Free-function forms of the operators


def add(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f + g


def scale(f: ExpPoly, c: ScalarLike) -> ExpPoly:
    return f.scale(c)


def mul(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f * g


def translate(f: ExpPoly, y: RatVector) -> ExpPoly:
    return f.translate(y)


def dilate(f: ExpPoly, b: RatMatrix) -> ExpPoly:
    return f.dilate(b)


def difference(f: ExpPoly, y: RatVector, order: int = 1) -> ExpPoly:
    return f.difference(y, order)


def evaluate(f: ExpPoly, x: Sequence[float]) -> complex:
    return f.evaluate(x)


def is_polynomial(f: ExpPoly) -> bool:
    return f.is_polynomial()


# Coefficient vectors and spans


def coefficient_matrix(functions: Sequence[ExpPoly]) -> tuple[list[Atom], list[list[ExpScalar]]]:
    """Atoms (sorted) and the coefficient vector of each function over them."""
    if not functions:
        return [], []
    d = functions[0].d
    for f in functions:
        if f.d != d:
            raise DimensionMismatch(d, f.d, "ExpPoly")
    atoms = sorted({atom for f in functions for atom in f.atoms}, key=atom_key)
    rows = [[f.atoms.get(atom, ZERO_SCALAR) for atom in atoms] for f in functions]
    return atoms, rows


def linear_basis(functions: Sequence[ExpPoly]) -> list[ExpPoly]:
    """A maximal linearly independent subfamily, in input order, made monic."""
    nonzero = [f for f in functions if f]
    if not nonzero:
        return []
    atoms, rows = coefficient_matrix(nonzero)
    keep = independent_subset(rows, len(atoms))
    return [nonzero[i].monic() for i in keep]


def translates_closure(f: ExpPoly) -> list[ExpPoly]:
    """Basis of ``span{tau_y f}``: all polynomial-part derivatives per frequency.

    Taylor expansion of ``P_s(x + y)`` in ``y`` shows the span of translates is
    spanned by ``(d^beta P_s)(x) e^{<lambda_s, x>}`` over all multi-indices.
    """
    generators: list[ExpPoly] = []
    for freq in f.frequencies:
        part = f.frequency_part(freq)
        top = [max(alpha[j] for (_, alpha) in part.atoms) for j in range(f.d)]
        betas = sorted(itertools.product(*(range(t + 1) for t in top)), key=lambda b: (sum(b), b))
        for beta in betas:
            derivative = part.partial_polynomial(beta)
            if derivative:
                generators.append(derivative)
    return linear_basis(generators)
