"""Test utilities for the Levi-Civita workbench tests."""

import json
import random
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from hypothesis import strategies as st

from levi_civita_cli.algebra.exp_poly import ExpPoly
from levi_civita_cli.algebra.exp_scalar import ExpScalar
from levi_civita_cli.algebra.linalg import RatMatrix, RatVector
from levi_civita_cli.algebra.numbers import GaussRational
from levi_civita_cli.equation import EquationSpec, SolutionTuple
from levi_civita_cli.generators import random_exppoly, random_polynomial, random_spec
from levi_civita_cli.utils.dsl import parse_exppoly


def p(text: str, dim: int | None = None) -> ExpPoly:
    """Shorthand for parsing a DSL expression."""
    return parse_exppoly(text, dim)


def vec(*values: Any) -> RatVector:
    return RatVector.of(*values)


def mat(rows: list[list[Any]]) -> RatMatrix:
    return RatMatrix.from_rows(rows)


def spec_1d(bs: list[int], cs: list[int]) -> EquationSpec:
    """Scalar (d = 1) spec from lists of b_i and c_i."""
    return EquationSpec.from_matrices([RatMatrix.scalar(1, b) for b in bs], [RatMatrix.scalar(1, c) for c in cs])


def solution(*texts: str, dim: int | None = None) -> SolutionTuple:
    return SolutionTuple(tuple(p(t, dim) for t in texts))


def seeded(seed: int = 0) -> random.Random:
    return random.Random(seed)


def random_instance(seed: int, d: int = 1, m: int = 2, profile: str = "thm2.1") -> tuple[EquationSpec, SolutionTuple]:
    rng = seeded(seed)
    spec = random_spec(rng, d, m, profile)
    return spec, SolutionTuple(tuple(random_exppoly(rng, d, max_degree=2, max_frequencies=2) for _ in range(m)))


def random_poly(seed: int, d: int, degree: int) -> ExpPoly:
    return random_polynomial(seeded(seed), d, degree)


# Hypothesis strategies

small_ints = st.integers(min_value=-10, max_value=10)

rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=10))

gauss_rationals = st.builds(GaussRational, rationals, st.one_of(st.just(Fraction(0)), rationals))


@st.composite
def frequencies(draw, d: int) -> tuple[GaussRational, ...]:
    re = draw(st.lists(st.integers(-2, 2), min_size=d, max_size=d))
    im = draw(st.lists(st.sampled_from([0, 0, 0, 1, -1]), min_size=d, max_size=d))
    return tuple(GaussRational(a, b) for a, b in zip(re, im, strict=True))


@st.composite
def exppolys(draw, d: int = 1, max_degree: int = 3, max_terms: int = 5) -> ExpPoly:
    """Random exponential polynomials with Gaussian-rational coefficients."""
    atoms: dict = {}
    for _ in range(draw(st.integers(0, max_terms))):
        freq = draw(frequencies(d))
        alpha = tuple(draw(st.lists(st.integers(0, max_degree), min_size=d, max_size=d)))
        if sum(alpha) > max_degree:
            continue
        atoms[(freq, alpha)] = ExpScalar.constant(draw(gauss_rationals))
    return ExpPoly.from_atoms(d, atoms)


@st.composite
def rat_vectors(draw, d: int) -> RatVector:
    return RatVector(tuple(draw(st.lists(rationals, min_size=d, max_size=d))))


@st.composite
def rat_matrices(draw, d: int) -> RatMatrix:
    return RatMatrix(tuple(tuple(draw(st.lists(rationals, min_size=d, max_size=d))) for _ in range(d)))


def create_json_file(data: Any) -> Path:
    """Write a JSON document to a temporary file."""
    temp_file = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False, encoding="utf-8")
    with temp_file:
        json.dump(data, temp_file)
    return Path(temp_file.name)


def create_csv_file(points: np.ndarray, values: np.ndarray, header: bool = True) -> Path:
    """Write ``x_1..x_d, re, im`` rows to a temporary CSV file."""
    temp_file = tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False, encoding="utf-8")
    with temp_file:
        d = points.shape[1]
        if header:
            temp_file.write(",".join([f"x{j + 1}" for j in range(d)] + ["re", "im"]) + "\n")
        for point, value in zip(points, values, strict=True):
            temp_file.write(",".join([repr(float(c)) for c in point] + [repr(float(value.real)), repr(float(value.imag))]) + "\n")
    return Path(temp_file.name)


def cleanup_temp_file(file_path: Path):
    """Clean up temporary test file."""
    try:
        if file_path.exists():
            file_path.unlink()
    except Exception:
        pass  # Ignore cleanup errors


class FileManager:
    """Context manager for test documents that ensures cleanup."""

    def __init__(self):
        self.temp_files = []

    def create_json(self, data: Any) -> Path:
        path = create_json_file(data)
        self.temp_files.append(path)
        return path

    def create_csv(self, points: np.ndarray, values: np.ndarray, header: bool = True) -> Path:
        path = create_csv_file(points, values, header)
        self.temp_files.append(path)
        return path

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        for file_path in self.temp_files:
            cleanup_temp_file(file_path)
