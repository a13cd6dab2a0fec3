"""Formal exponential scalars ``sum_j c_j * e^{w_j}``.

Translating ``e^{<lambda, x>}`` by a rational vector produces the constant
``e^{<lambda, y>}``, which is transcendental. Keeping such constants formal
makes every operator exact. Distinct exponents are linearly independent over
the Gaussian rationals, so the canonical form is zero exactly when the value is.

The exponents form an ordered group under the lexicographic order on
``(re, im)``, so the scalars form an integral domain with exact division.
"""

from __future__ import annotations

import cmath
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .numbers import ONE, ZERO, GaussRational


def _key(w: GaussRational) -> tuple[Fraction, Fraction]:
    return w.sort_key()


@dataclass(frozen=True, slots=True)
class ExpScalar:
    """Canonical sum of ``coefficient * e^{exponent}`` terms, sorted by exponent."""

    terms: tuple[tuple[GaussRational, GaussRational], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[GaussRational, GaussRational]) -> ExpScalar:
        items = [(w, c) for w, c in mapping.items() if c]
        items.sort(key=lambda item: _key(item[0]))
        return cls(tuple(items))

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[GaussRational, GaussRational]]) -> ExpScalar:
        acc: dict[GaussRational, GaussRational] = {}
        for w, c in terms:
            acc[w] = acc.get(w, ZERO) + c
        return cls.from_mapping(acc)

    @classmethod
    def constant(cls, value: GaussRational | int | Fraction) -> ExpScalar:
        c = GaussRational.coerce(value)
        if not c:
            return ZERO_SCALAR
        return cls(((ZERO, c),))

    @classmethod
    def exp(cls, exponent: GaussRational | int | Fraction, coefficient: GaussRational | int | Fraction = 1) -> ExpScalar:
        """The scalar ``coefficient * e^{exponent}``."""
        c = GaussRational.coerce(coefficient)
        if not c:
            return ZERO_SCALAR
        return cls(((GaussRational.coerce(exponent), c),))

    @classmethod
    def coerce(cls, value: ScalarLike) -> ExpScalar:
        if isinstance(value, ExpScalar):
            return value
        return cls.constant(value)

    # Ring operations

    def __add__(self, other: ScalarLike) -> ExpScalar:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms:
            return o
        return ExpScalar.from_terms(self.terms + o.terms)

    __radd__ = __add__

    def __neg__(self) -> ExpScalar:
        return ExpScalar(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: ScalarLike) -> ExpScalar:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: ScalarLike) -> ExpScalar:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: ScalarLike) -> ExpScalar:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return ZERO_SCALAR
        if len(o.terms) == 1 and o.terms[0][0] == ZERO:
            c = o.terms[0][1]
            return ExpScalar(tuple((w, a * c) for w, a in self.terms))
        return ExpScalar.from_terms(
            (w1 + w2, c1 * c2) for w1, c1 in self.terms for w2, c2 in o.terms
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> ExpScalar:
        if exponent < 0:
            raise ValueError("Negative powers are only defined for units; use exquo")
        result = ONE_SCALAR
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    # Structure

    @property
    def is_constant(self) -> bool:
        """True when only the exponent 0 occurs (a Gaussian rational)."""
        return all(w == ZERO for w, _ in self.terms)

    def constant_value(self) -> GaussRational:
        if not self.is_constant:
            raise ValueError(f"{self} is not a Gaussian rational")
        return self.terms[0][1] if self.terms else ZERO

    @property
    def is_unit(self) -> bool:
        """Single-term scalars are exactly the invertible elements."""
        return len(self.terms) == 1

    def inverse(self) -> ExpScalar:
        if not self.is_unit:
            raise ZeroDivisionError(f"{self} is not invertible in the scalar ring")
        w, c = self.terms[0]
        return ExpScalar(((-w, ONE / c),))

    def leading(self) -> tuple[GaussRational, GaussRational]:
        return self.terms[-1]

    def exquo(self, other: ExpScalar) -> ExpScalar:
        """Exact quotient ``self / other``; raises ArithmeticError if it does not exist.

        Exponents of an exact quotient lie in the box spanned by the difference
        of the exponent ranges of dividend and divisor, which bounds the loop.
        """
        other = ExpScalar.coerce(other)
        if not other.terms:
            raise ZeroDivisionError("Exact division by the zero scalar")
        if not self.terms:
            return ZERO_SCALAR
        if other.is_unit:
            return self * other.inverse()

        re_lo = min(w.re for w, _ in self.terms) - min(w.re for w, _ in other.terms)
        re_hi = max(w.re for w, _ in self.terms) - max(w.re for w, _ in other.terms)
        im_lo = min(w.im for w, _ in self.terms) - min(w.im for w, _ in other.terms)
        im_hi = max(w.im for w, _ in self.terms) - max(w.im for w, _ in other.terms)

        lead_w, lead_c = other.leading()
        quotient: list[tuple[GaussRational, GaussRational]] = []
        remainder = self
        while remainder.terms:
            w, c = remainder.leading()
            qw = w - lead_w
            if not (re_lo <= qw.re <= re_hi and im_lo <= qw.im <= im_hi):
                raise ArithmeticError(f"{self} is not divisible by {other}")
            q = ExpScalar(((qw, c / lead_c),))
            quotient.append((qw, c / lead_c))
            remainder = remainder - q * other
        return ExpScalar.from_terms(quotient)

    def shift(self, exponent: GaussRational) -> ExpScalar:
        """Multiply by ``e^{exponent}``."""
        return ExpScalar(tuple((w + exponent, c) for w, c in self.terms))

    def scale(self, factor: GaussRational | int | Fraction) -> ExpScalar:
        f = GaussRational.coerce(factor)
        if not f:
            return ZERO_SCALAR
        return ExpScalar(tuple((w, c * f) for w, c in self.terms))

    def sort_key(self) -> tuple:
        return tuple((_key(w), _key(c)) for w, c in self.terms)

    def evaluate(self) -> complex:
        return sum(
            (complex(c) * cmath.exp(complex(w)) for w, c in self.terms),
            start=0j,
        )

    def __str__(self) -> str:
        from ..utils.dsl import format_scalar

        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ExpScalar({self})"

    def to_json(self) -> list[dict[str, dict[str, str]]]:
        return [{"exponent": w.to_json(), "coefficient": c.to_json()} for w, c in self.terms]

    @classmethod
    def from_json(cls, data: list[dict]) -> ExpScalar:
        return cls.from_terms(
            (GaussRational.from_json(item["exponent"]), GaussRational.from_json(item["coefficient"]))
            for item in data
        )


ScalarLike = ExpScalar | GaussRational | int | Fraction


def _coerce_or_none(value: object) -> ExpScalar | None:
    if isinstance(value, ExpScalar):
        return value
    if isinstance(value, GaussRational):
        return ExpScalar.constant(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return ExpScalar.constant(value)
    return None


ZERO_SCALAR = ExpScalar(())
ONE_SCALAR = ExpScalar(((ZERO, ONE),))
