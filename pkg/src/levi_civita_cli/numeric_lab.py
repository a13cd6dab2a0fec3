"""Floating-point bridge: sampling, least-squares fitting and equation residuals.

Everything here is a numeric aid. Results are reported with their residuals
and never feed back into the exact modules except through coefficients that
round cleanly to low-denominator Gaussian rationals.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from .algebra.exp_poly import Atom, ExpPoly, Frequency, atom_key
from .algebra.exp_scalar import ExpScalar
from .algebra.numbers import GaussRational
from .equation import EquationSpec
from .errors import DimensionMismatch, IllConditioned, NonFiniteValue, PreconditionViolation

SampleFunction = ExpPoly | Callable[[Sequence[float]], complex]


@dataclass(frozen=True)
class SampleGrid:
    """Real sample points with complex values."""

    d: int
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        values = np.asarray(self.values, dtype=complex).reshape(-1)
        if points.shape[1] != self.d:
            raise DimensionMismatch(self.d, points.shape[1], "sample points")
        if len(points) != len(values):
            raise ValueError(f"{len(points)} points but {len(values)} values")
        if len(np.unique(points, axis=0)) != len(points):
            raise ValueError("Sample points must be distinct")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.points)


def tensor_grid(d: int, points: int = 20, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    """Tensor grid of ``points**d`` points over ``[low, high]^d``."""
    if points < 1:
        raise ValueError("A grid needs at least one point per axis")
    axis = np.linspace(low, high, points)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _evaluate(f: SampleFunction, point: Sequence[float]) -> complex:
    if isinstance(f, ExpPoly):
        return f.evaluate(point)
    return complex(f(point))


def sample(f: SampleFunction, points: np.ndarray | Sequence[Sequence[float]], d: int | None = None) -> SampleGrid:
    """Evaluate ``f`` at every point in double precision."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dim = f.d if isinstance(f, ExpPoly) else (d if d is not None else pts.shape[1])
    if pts.shape[1] != dim:
        raise DimensionMismatch(dim, pts.shape[1], "sample points")
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            values = np.array([_evaluate(f, list(p)) for p in pts], dtype=complex)
        except OverflowError as e:
            raise NonFiniteValue(f"Evaluation overflowed: {e}") from e
    if not np.all(np.isfinite(values)):
        bad = int(np.argmin(np.isfinite(values)))
        raise NonFiniteValue(f"Non-finite value at point {pts[bad].tolist()}")
    return SampleGrid(dim, pts, values)


def load_csv(path: Path | str, d: int) -> SampleGrid:
    """Read ``x_1..x_d, re, im`` rows (an optional header line is skipped)."""
    path = Path(path)
    with open(path) as f:
        first = f.readline()
    try:
        float(first.split(",")[0])
        skip = 0
    except ValueError:
        skip = 1
    data = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2, comments="#")
    if data.shape[1] != d + 2:
        raise DimensionMismatch(d + 2, data.shape[1], "CSV columns")
    logger.debug(f"Loaded {len(data)} samples from {path}")
    return SampleGrid(d, data[:, :d], data[:, d] + 1j * data[:, d + 1])


@dataclass(frozen=True)
class FitModel:
    """Ansatz ``sum_s P_s(x) e^{<lambda_s, x>}`` with ``deg P_s <= max_degree[s]``."""

    frequencies: tuple[Frequency, ...]
    max_degree: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.frequencies) != len(self.max_degree):
            raise ValueError("Each frequency needs a degree bound")
        if len(set(self.frequencies)) != len(self.frequencies):
            raise ValueError("Model frequencies must be distinct")
        if any(deg < 0 for deg in self.max_degree):
            raise ValueError("Degree bounds must be nonnegative")
        dims = {len(freq) for freq in self.frequencies}
        if len(dims) > 1:
            raise ValueError("All frequencies must have the same dimension")

    @property
    def d(self) -> int:
        return len(self.frequencies[0])

    def atoms(self) -> list[Atom]:
        out = []
        for freq, deg in zip(self.frequencies, self.max_degree, strict=True):
            for alpha in itertools.product(range(deg + 1), repeat=self.d):
                if sum(alpha) <= deg:
                    out.append((freq, alpha))
        return sorted(out, key=atom_key)

    def design_matrix(self, points: np.ndarray) -> np.ndarray:
        columns = []
        for freq, alpha in self.atoms():
            lam = np.array([complex(l) for l in freq])  # noqa: E741
            mono = np.prod(points ** np.array(alpha), axis=1)
            columns.append(mono * np.exp(points @ lam))
        return np.stack(columns, axis=1)


@dataclass(frozen=True)
class FitResult:
    poly: ExpPoly
    residual: float
    coefficients: dict[str, complex] = field(default_factory=dict)
    unrounded: dict[str, complex] = field(default_factory=dict)
    condition: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "fit": str(self.poly),
            "residual": self.residual,
            "condition": self.condition,
            "unrounded": {k: [v.real, v.imag] for k, v in self.unrounded.items()},
        }


def round_rational(value: float, max_denominator: int, tolerance: float) -> Fraction | None:
    """Nearest fraction with bounded denominator, if it lies within ``tolerance``."""
    candidate = Fraction(value).limit_denominator(max_denominator)
    if abs(float(candidate) - value) <= tolerance:
        return candidate
    return None


def fit(
    grid: SampleGrid,
    model: FitModel,
    max_denominator: int = 1000,
    round_tolerance: float = 1e-9,
    condition_threshold: float = 1e12,
) -> FitResult:
    """Least-squares fit of the model's atoms to the samples."""
    if model.d != grid.d:
        raise DimensionMismatch(grid.d, model.d, "fit model")
    atoms = model.atoms()
    if len(grid) < len(atoms):
        raise PreconditionViolation(f"{len(grid)} sample points cannot determine {len(atoms)} coefficients")

    design = model.design_matrix(grid.points)
    normal = design.conj().T @ design
    condition = float(np.linalg.cond(normal))
    if not np.isfinite(condition) or condition > condition_threshold:
        raise IllConditioned(condition, condition_threshold)

    solution, *_ = np.linalg.lstsq(design, grid.values, rcond=None)
    residual = float(np.sqrt(np.mean(np.abs(design @ solution - grid.values) ** 2)))

    exact: dict[Atom, ExpScalar] = {}
    coefficients: dict[str, complex] = {}
    unrounded: dict[str, complex] = {}
    for atom, value in zip(atoms, solution, strict=True):
        label = str(ExpPoly.from_atoms(grid.d, {atom: ExpScalar.constant(1)}))
        coefficients[label] = complex(value)
        re = round_rational(float(value.real), max_denominator, round_tolerance)
        im = round_rational(float(value.imag), max_denominator, round_tolerance)
        if re is None or im is None:
            unrounded[label] = complex(value)
            continue
        exact[atom] = ExpScalar.constant(GaussRational(re, im))

    logger.debug(f"Fitted {len(atoms)} coefficients, rms residual {residual:.3e}, cond {condition:.3e}")
    return FitResult(ExpPoly.from_atoms(grid.d, exact), residual, coefficients, unrounded, condition)


@dataclass(frozen=True)
class ResidualReport:
    rank: int
    singular_values: tuple[float, ...]
    residual: float
    max_abs: float
    mean_abs: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "rank": self.rank,
            "residual": self.residual,
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "tolerance": self.tolerance,
            "singular_values": list(self.singular_values),
        }


def kernel_matrix(
    spec: EquationSpec,
    fs: Sequence[SampleFunction],
    x_points: np.ndarray,
    y_points: np.ndarray,
) -> np.ndarray:
    """``F[p, q] = sum_i f_i(b_i x_p + c_i y_q)``."""
    if len(fs) != spec.m:
        raise DimensionMismatch(spec.m, len(fs), "function list")
    F = np.zeros((len(x_points), len(y_points)), dtype=complex)
    for pair, fi in zip(spec.pairs, fs, strict=True):
        b = np.array([[float(a) for a in row] for row in pair.b.rows])
        c = np.array([[float(a) for a in row] for row in pair.c.rows])
        bx = x_points @ b.T
        cy = y_points @ c.T
        for p in range(len(x_points)):
            for q in range(len(y_points)):
                F[p, q] += _evaluate(fi, list(bx[p] + cy[q]))
    if not np.all(np.isfinite(F)):
        raise NonFiniteValue("Kernel matrix contains non-finite entries")
    return F


def equation_residual(
    spec: EquationSpec,
    fs: Sequence[SampleFunction],
    rank: int,
    x_points: np.ndarray | None = None,
    y_points: np.ndarray | None = None,
    tolerance: float = 1e-8,
    grid_points: int = 20,
) -> ResidualReport:
    """Distance of the sampled left side from its best rank-``rank`` approximation."""
    if rank < 0:
        raise ValueError("Rank must be nonnegative")
    x_points = tensor_grid(spec.d, grid_points) if x_points is None else np.atleast_2d(x_points)
    y_points = tensor_grid(spec.d, grid_points) if y_points is None else np.atleast_2d(y_points)
    F = kernel_matrix(spec, fs, x_points, y_points)

    u, s, vh = np.linalg.svd(F, full_matrices=False)
    approx = (u[:, :rank] * s[:rank]) @ vh[:rank, :]
    error = np.abs(F - approx)
    residual = float(np.sqrt(np.sum(s[rank:] ** 2)))
    logger.debug(f"Rank-{rank} residual {residual:.3e} from {len(s)} singular values")
    return ResidualReport(
        rank=rank,
        singular_values=tuple(float(v) for v in s),
        residual=residual,
        max_abs=float(error.max()) if error.size else 0.0,
        mean_abs=float(error.mean()) if error.size else 0.0,
        tolerance=tolerance,
    )
