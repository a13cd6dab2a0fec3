"""Seeded random instances for the property suites."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra.exp_poly import ExpPoly
from .algebra.exp_scalar import ExpScalar
from .algebra.linalg import RatMatrix, RatVector
from .algebra.numbers import GaussRational
from .equation import EquationSpec, validate_conditions


def random_rational(rng: random.Random, height: int = 10, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if value or not nonzero:
            return value


def random_gauss(rng: random.Random, height: int = 10, imaginary_rate: float = 0.2) -> GaussRational:
    im = random_rational(rng, height) if rng.random() < imaginary_rate else Fraction(0)
    return GaussRational(random_rational(rng, height), im)


def random_frequency(rng: random.Random, d: int, imaginary_rate: float = 0.2) -> tuple[GaussRational, ...]:
    return tuple(
        GaussRational(rng.randint(-2, 2), rng.randint(-2, 2) if rng.random() < imaginary_rate else 0)
        for _ in range(d)
    )


def random_vector(rng: random.Random, d: int, height: int = 5, nonzero: bool = False) -> RatVector:
    return RatVector(tuple(random_rational(rng, height, nonzero) for _ in range(d)))


def random_polynomial(rng: random.Random, d: int, degree: int, height: int = 10, terms: int = 4) -> ExpPoly:
    """Polynomial of exact total degree ``degree``."""
    monomials = [alpha for alpha in itertools.product(range(degree + 1), repeat=d) if sum(alpha) <= degree]
    top = [alpha for alpha in monomials if sum(alpha) == degree]
    f = ExpPoly.monomial(d, rng.choice(top), random_rational(rng, height, nonzero=True))
    for alpha in rng.sample(monomials, min(terms, len(monomials))):
        f = f + ExpPoly.monomial(d, alpha, random_rational(rng, height))
    if f.degree() != degree:
        return random_polynomial(rng, d, degree, height, terms)
    return f


def random_exppoly(
    rng: random.Random,
    d: int,
    max_degree: int = 3,
    max_frequencies: int = 3,
    height: int = 10,
    terms: int = 3,
) -> ExpPoly:
    """Random exponential polynomial with up to ``max_frequencies`` distinct frequencies."""
    f = ExpPoly.zero(d)
    for _ in range(rng.randint(1, max_frequencies)):
        freq = random_frequency(rng, d)
        for _ in range(rng.randint(1, terms)):
            alpha = tuple(rng.randint(0, max_degree) for _ in range(d))
            if sum(alpha) > max_degree:
                continue
            f = f + ExpPoly.from_atoms(d, {(freq, alpha): ExpScalar.constant(random_gauss(rng, height))})
    return f


def random_invertible(rng: random.Random, d: int, height: int = 3) -> RatMatrix:
    while True:
        m = RatMatrix(tuple(tuple(random_rational(rng, height) for _ in range(d)) for _ in range(d)))
        if m.is_invertible():
            return m


def random_spec(rng: random.Random, d: int, m: int, profile: str = "thm2.1", normalized: bool = False) -> EquationSpec:
    """Random spec passing the hypothesis profile (resampled until it does)."""
    while True:
        cs = [random_invertible(rng, d) for _ in range(m)]
        if normalized:
            spec = EquationSpec.normalized(cs)
        else:
            spec = EquationSpec.from_matrices([random_invertible(rng, d) for _ in range(m)], cs)
        if validate_conditions(spec, profile).passed:
            return spec


def top_form(f: ExpPoly) -> ExpPoly:
    """Homogeneous part of highest total degree of a polynomial."""
    k = f.degree()
    return ExpPoly.from_atoms(f.d, {(freq, alpha): c for (freq, alpha), c in f.atoms.items() if sum(alpha) == k})
