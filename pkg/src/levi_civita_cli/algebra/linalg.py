"""Exact linear algebra over rationals, Gaussian rationals and formal exponential scalars.

Matrix entries of the equations are rational, so every invertibility
hypothesis is decided exactly. Rank and span computations accept any entry
type that forms an integral domain with an ``exquo`` exact division
(Fraction, GaussRational, ExpScalar) and use fraction-free elimination.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..errors import DimensionMismatch, SingularMatrix
from .numbers import GaussRational, RationalLike, format_fraction, to_fraction


@dataclass(frozen=True, slots=True)
class RatVector:
    """Rational vector of length ``d`` (shift vectors ``y``, ``h``, ``k``)."""

    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(to_fraction(e) for e in self.entries))
        if not self.entries:
            raise ValueError("RatVector must have at least one entry")

    @classmethod
    def of(cls, *values: RationalLike) -> RatVector:
        return cls(tuple(values))

    @classmethod
    def zeros(cls, d: int) -> RatVector:
        return cls(tuple(Fraction(0) for _ in range(d)))

    @classmethod
    def basis(cls, d: int, index: int) -> RatVector:
        """Standard basis vector ``e_index`` (0-based)."""
        return cls(tuple(Fraction(int(i == index)) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def __add__(self, other: RatVector) -> RatVector:
        _check_dim(self.d, other.d, "vector")
        return RatVector(tuple(a + b for a, b in zip(self.entries, other.entries, strict=True)))

    def __sub__(self, other: RatVector) -> RatVector:
        _check_dim(self.d, other.d, "vector")
        return RatVector(tuple(a - b for a, b in zip(self.entries, other.entries, strict=True)))

    def __neg__(self) -> RatVector:
        return RatVector(tuple(-a for a in self.entries))

    def scale(self, factor: RationalLike) -> RatVector:
        f = to_fraction(factor)
        return RatVector(tuple(f * a for a in self.entries))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(format_fraction(a) for a in self.entries) + ")"

    def to_json(self) -> list[str]:
        return [format_fraction(a) for a in self.entries]


@dataclass(frozen=True, slots=True)
class RatMatrix:
    """Square ``d x d`` matrix with rational entries."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(to_fraction(e) for e in row) for row in self.rows)
        if not rows:
            raise ValueError("RatMatrix must have at least one row")
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("RatMatrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[RationalLike]]) -> RatMatrix:
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, d: int) -> RatMatrix:
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)))

    @classmethod
    def scalar(cls, d: int, value: RationalLike) -> RatMatrix:
        v = to_fraction(value)
        return cls(tuple(tuple(v if i == j else Fraction(0) for j in range(d)) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.rows[i][j]

    def __add__(self, other: RatMatrix) -> RatMatrix:
        _check_dim(self.d, other.d, "matrix")
        return RatMatrix(
            tuple(tuple(a + b for a, b in zip(r, s, strict=True)) for r, s in zip(self.rows, other.rows, strict=True))
        )

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        _check_dim(self.d, other.d, "matrix")
        return RatMatrix(
            tuple(tuple(a - b for a, b in zip(r, s, strict=True)) for r, s in zip(self.rows, other.rows, strict=True))
        )

    def __neg__(self) -> RatMatrix:
        return RatMatrix(tuple(tuple(-a for a in row) for row in self.rows))

    def __matmul__(self, other: RatMatrix | RatVector) -> Any:
        if isinstance(other, RatVector):
            _check_dim(self.d, other.d, "vector")
            return RatVector(tuple(sum((a * b for a, b in zip(row, other.entries, strict=True)), Fraction(0)) for row in self.rows))
        _check_dim(self.d, other.d, "matrix")
        cols = list(zip(*other.rows, strict=True))
        return RatMatrix(
            tuple(
                tuple(sum((a * b for a, b in zip(row, col, strict=True)), Fraction(0)) for col in cols)
                for row in self.rows
            )
        )

    def scale(self, factor: RationalLike) -> RatMatrix:
        f = to_fraction(factor)
        return RatMatrix(tuple(tuple(f * a for a in row) for row in self.rows))

    def transpose(self) -> RatMatrix:
        return RatMatrix(tuple(zip(*self.rows, strict=True)))

    def det(self) -> Fraction:
        return bareiss_determinant([list(row) for row in self.rows])

    def is_invertible(self) -> bool:
        return self.det() != 0

    def is_identity(self) -> bool:
        return self == RatMatrix.identity(self.d)

    def inverse(self) -> RatMatrix:
        return mat_inverse(self)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(format_fraction(a) for a in row) + "]" for row in self.rows) + "]"

    def to_json(self) -> list[list[str]]:
        return [[format_fraction(a) for a in row] for row in self.rows]


def _check_dim(expected: int, actual: int, what: str) -> None:
    if expected != actual:
        raise DimensionMismatch(expected, actual, what)


def _exquo(a: Any, b: Any) -> Any:
    if isinstance(a, (int, Fraction)):
        return Fraction(a) / b
    return a.exquo(b)


def _is_unit(a: Any) -> bool:
    return bool(getattr(a, "is_unit", bool(a)))


def mat_inverse(a: RatMatrix) -> RatMatrix:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = a.d
    x = [list(row) for row in a.rows]
    y = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    for i in range(n):
        pivot = next((j for j in range(i, n) if x[j][i] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"Matrix {a} is singular")
        if pivot != i:
            x[i], x[pivot] = x[pivot], x[i]
            y[i], y[pivot] = y[pivot], y[i]

        inv = 1 / x[i][i]
        x[i] = [v * inv for v in x[i]]
        y[i] = [v * inv for v in y[i]]

        for j in range(n):
            if j != i and x[j][i] != 0:
                factor = x[j][i]
                x[j] = [v - factor * w for v, w in zip(x[j], x[i], strict=True)]
                y[j] = [v - factor * w for v, w in zip(y[j], y[i], strict=True)]

    return RatMatrix(tuple(tuple(row) for row in y))


def bareiss_determinant(matrix: list[list[Any]]) -> Any:
    """Determinant by Bareiss' fraction-free elimination (entries are copied)."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        raise ValueError("Determinant of an empty matrix")
    if n == 1:
        return m[0][0]

    sign = 1
    previous = None
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return m[k][k] * 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                elt = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                if previous is not None:
                    elt = _exquo(elt, previous)
                m[i][j] = elt
        previous = m[k][k]

    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def bareiss_echelon(matrix: Sequence[Sequence[Any]]) -> tuple[int, list[int], list[int]]:
    """Fraction-free elimination with full pivoting.

    Returns ``(rank, pivot_rows, pivot_cols)`` in terms of the original row and
    column indices; ``matrix[pivot_rows][:, pivot_cols]`` is nonsingular.
    """
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    row_ids = list(range(rows))
    col_ids = list(range(cols))

    previous = None
    rank = 0
    for k in range(min(rows, cols)):
        pivot = None
        # prefer unit pivots so exact divisions stay cheap
        for i in range(k, rows):
            for j in range(k, cols):
                if m[i][j] and (pivot is None or (_is_unit(m[i][j]) and not _is_unit(m[pivot[0]][pivot[1]]))):
                    pivot = (i, j)
            if pivot is not None and _is_unit(m[pivot[0]][pivot[1]]):
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
            row_ids[k], row_ids[pi] = row_ids[pi], row_ids[k]
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
            col_ids[k], col_ids[pj] = col_ids[pj], col_ids[k]

        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                elt = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                if previous is not None:
                    elt = _exquo(elt, previous)
                m[i][j] = elt
            m[i][k] = m[i][k] * 0
        previous = m[k][k]
        rank += 1

    return rank, row_ids[:rank], col_ids[:rank]


def mat_rank(matrix: Sequence[Sequence[Any]]) -> int:
    """Exact rank via fraction-free (Bareiss) elimination."""
    if not matrix or not matrix[0]:
        return 0
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError("Rank requires a rectangular matrix")
    rank, _, _ = bareiss_echelon(matrix)
    return rank


def solve_in_span(
    target: Sequence[GaussRational], basis: Sequence[Sequence[GaussRational]]
) -> list[GaussRational] | None:
    """Coefficients ``c`` with ``sum_j c_j * basis_j == target`` exactly.

    Returns None when the target is not in the span. Free coefficients are 0.
    """
    n = len(target)
    for vector in basis:
        _check_dim(n, len(vector), "span vector")
    target = [GaussRational.coerce(t) for t in target]
    if not basis:
        return [] if not any(target) else None

    k = len(basis)
    # augmented system: rows are coordinates, columns are basis vectors + target
    aug = [[GaussRational.coerce(basis[j][i]) for j in range(k)] + [target[i]] for i in range(n)]

    pivot_cols: list[int] = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = aug[row][col]
        aug[row] = [v / inv for v in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[row], strict=True)]
        pivot_cols.append(col)
        row += 1
        if row == n:
            break

    if any(aug[r][k] for r in range(row, n)):
        return None

    coefficients = [GaussRational(0, 0) for _ in range(k)]
    for r, col in enumerate(pivot_cols):
        coefficients[col] = aug[r][k]
    return coefficients


class EchelonBasis:
    """Incrementally built row-echelon basis over an integral domain.

    Pivot rows are normalised whenever their pivot is a unit, so residuals
    are exact remainders modulo the span whenever all pivots are units and
    nonzero multiples of them otherwise.
    """

    def __init__(self, width: int):
        self.width = width
        self._pivots: list[tuple[int, list[Any]]] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, vector: Sequence[Any]) -> list[Any]:
        _check_dim(self.width, len(vector), "echelon vector")
        r = list(vector)
        for col, prow in self._pivots:
            if not r[col]:
                continue
            lead = prow[col]
            factor = r[col]
            if _is_one(lead):
                r = [a - factor * b for a, b in zip(r, prow, strict=True)]
            else:
                r = [lead * a - factor * b for a, b in zip(r, prow, strict=True)]
        return r

    def contains(self, vector: Sequence[Any]) -> bool:
        return not any(self.reduce(vector))

    def add(self, vector: Sequence[Any]) -> bool:
        """Insert ``vector``; returns False when it was already in the span."""
        r = self.reduce(vector)
        col = next((j for j, a in enumerate(r) if a), None)
        if col is None:
            return False
        lead = r[col]
        if _is_unit(lead):
            r = [_exquo(a, lead) for a in r]
        self._pivots.append((col, r))
        return True


def _is_one(a: Any) -> bool:
    if isinstance(a, Fraction):
        return a == 1
    if isinstance(a, GaussRational):
        return a == GaussRational(1, 0)
    terms = getattr(a, "terms", None)
    return terms is not None and len(terms) == 1 and not terms[0][0] and terms[0][1] == GaussRational(1, 0)


def independent_subset(vectors: Sequence[Sequence[Any]], width: int) -> list[int]:
    """Indices of a maximal linearly independent subset, scanning in order."""
    echelon = EchelonBasis(width)
    return [i for i, v in enumerate(vectors) if echelon.add(v)]


def in_span(target: Sequence[Any], basis: Sequence[Sequence[Any]]) -> bool:
    echelon = EchelonBasis(len(target))
    for vector in basis:
        echelon.add(vector)
    return echelon.contains(target)
