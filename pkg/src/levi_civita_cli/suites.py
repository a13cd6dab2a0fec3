"""Seeded randomized property suites.

Each suite draws independent instances from ``random.Random(f"{seed}:{suite}:{index}")``
so any failing instance can be replayed on its own.
"""

from __future__ import annotations

import asyncio
import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from math import factorial
from typing import Any

from loguru import logger
from tqdm.asyncio import tqdm

from .algebra.exp_poly import ExpPoly
from .algebra.exp_scalar import ExpScalar
from .algebra.linalg import RatMatrix
from .algebra.numbers import ZERO
from .equation import EquationSpec, SolutionTuple
from .errors import NonFiniteValue
from .generators import (
    random_exppoly,
    random_frequency,
    random_invertible,
    random_polynomial,
    random_rational,
    random_spec,
    random_vector,
    top_form,
)
from .numeric_lab import equation_residual, tensor_grid
from .reduction import folfact_check, full_reduction
from .separation import bivariate_expand, separate_minimal, separated_rank, verify_membership
from .utils.output import ResultProcessor


def operator_algebra_instance(rng: random.Random) -> dict[str, Any]:
    """Shift group law, dilation composition, difference definition and eigenfunctions."""
    d = rng.randint(1, 2)
    f = random_exppoly(rng, d, max_degree=6 if d == 1 else 4, max_frequencies=4)
    y, z = random_vector(rng, d), random_vector(rng, d)
    b, c = random_invertible(rng, d), random_invertible(rng, d)
    freq = random_frequency(rng, d)
    eigen = ExpPoly.exponential(d, freq)
    pairing = sum((l * v for l, v in zip(freq, y.entries, strict=True)), ZERO)  # noqa: E741

    checks = {
        "shift_group": f.translate(y).translate(z) == f.translate(y + z),
        "shift_inverse": f.translate(y).translate(-y) == f,
        "dilation_composition": f.dilate(c).dilate(b) == f.dilate(c @ b),
        "difference": f.difference(y) == f.translate(y) - f,
        "eigenfunction": eigen.translate(y) == eigen.scale(ExpScalar.exp(pairing)),
    }
    return {"passed": all(checks.values()), "d": d, "f": str(f), "checks": checks}


def frechet_instance(rng: random.Random) -> dict[str, Any]:
    """``Delta_y^{k+1} p = 0`` and ``Delta_y^k p = k! P_k(y)`` for a degree-k polynomial."""
    d = rng.randint(1, 2)
    k = rng.randint(1, 6 if d == 1 else 4)
    p = random_polynomial(rng, d, k)
    y = random_vector(rng, d, nonzero=True)

    top_value = top_form(p).evaluate_exact(y).scale(factorial(k))
    kth = p.difference(y, k)
    checks = {
        "annihilated": not p.difference(y, k + 1),
        "top_difference": kth == ExpPoly.constant(d, top_value),
    }
    return {
        "passed": all(checks.values()),
        "d": d,
        "degree": k,
        "p": str(p),
        "generic": bool(kth),
        "checks": checks,
    }


def folfact_instance(rng: random.Random) -> dict[str, Any]:
    d = rng.randint(1, 2)
    f = random_exppoly(rng, d, max_degree=4 if d == 1 else 3, max_frequencies=2)
    c = RatMatrix(tuple(tuple(random_rational(rng, 3) for _ in range(d)) for _ in range(d)))
    h, k = random_vector(rng, d), random_vector(rng, d)
    verdict = folfact_check(f, c, h, k)
    return {"passed": verdict.passed, "d": d, "f": str(f)}


RANK_N_TOLERANCE = 1e-8
RANK_DEFICIT_THRESHOLD = 1e-4


def _numeric_gap(spec: EquationSpec, fs: Sequence[ExpPoly], n: int) -> dict[str, float | None] | None:
    """SVD residuals at ranks n and n-1 on a 16-point grid, plus the largest singular value.

    Returns ``None`` for d > 1 or when sampling overflows.
    """
    if spec.d != 1:
        return None
    points = tensor_grid(1, 16)
    try:
        at_n = equation_residual(spec, fs, n, points, points)
        below = equation_residual(spec, fs, n - 1, points, points).residual if n > 0 else None
    except NonFiniteValue:
        return None
    scale = at_n.singular_values[0] if at_n.singular_values else 0.0
    return {"rank_n": at_n.residual, "rank_n_minus_1": below, "scale": scale}


def gap_separates(gap: dict[str, float | None]) -> bool:
    """Rank-n residual under 1e-8 and rank-(n-1) residual over 1e-4.

    The upper bound scales with the largest singular value once it exceeds 1.
    """
    if gap["rank_n"] >= RANK_N_TOLERANCE * max(1.0, gap["scale"] or 0.0):
        return False
    below = gap["rank_n_minus_1"]
    return below is None or below > RANK_DEFICIT_THRESHOLD


def separation_instance(rng: random.Random) -> dict[str, Any]:
    """Minimal separated form reconstructs the left side and certifies membership."""
    d = rng.randint(1, 2)
    m = rng.randint(1, 3)
    spec = random_spec(rng, d, m, "thm2.1")
    sol = SolutionTuple(
        tuple(random_exppoly(rng, d, max_degree=2, max_frequencies=2, terms=2) for _ in range(m))
    )
    F = bivariate_expand(spec, sol)
    form = separate_minimal(F)
    membership = verify_membership(spec, sol, form.subspace())
    checks = {
        "reconstructs": form.reconstruct() == F.scale(form.scale),
        "minimal": form.n == separated_rank(F),
        "membership": membership.passed,
    }
    gap = _numeric_gap(spec, sol.f, form.n)
    if gap is not None:
        checks["numeric_gap"] = gap_separates(gap)
    return {
        "passed": all(checks.values()),
        "d": d,
        "m": m,
        "n": form.n,
        "numeric_gap": gap,
        "checks": checks,
    }


def reduction_instance(rng: random.Random) -> dict[str, Any]:
    """Full reduction chain: membership per step, dimension bound, degree descent."""
    d = rng.choice((1, 1, 2))
    m = rng.randint(2, 4)
    spec = random_spec(rng, d, m, "thm2.2", normalized=True)
    polynomial = rng.random() < 0.5
    if polynomial:
        fs = tuple(random_polynomial(rng, d, rng.randint(1, 3 if d == 1 else 2), terms=3) for _ in range(m))
    else:
        fs = tuple(random_exppoly(rng, d, max_degree=1, max_frequencies=2, terms=2) for _ in range(m))
    sol = SolutionTuple(fs)
    W = separate_minimal(bivariate_expand(spec, sol)).subspace()
    schedule = [random_vector(rng, d, height=3, nonzero=True) for _ in range(m - 1)]

    chain = full_reduction(spec, sol, W, schedule)
    memberships = [verify_membership(inst.spec, inst.sol, inst.W).passed for inst in chain]
    bounds = [inst.step.w_out.dim <= 2 * inst.step.w_in_dim for inst in chain]
    descent = [
        inst.step.max_degree_in < 0 or inst.step.max_degree_out < inst.step.max_degree_in for inst in chain
    ]
    checks = {
        "reaches_one": len(chain) == m - 1 and chain[-1].spec.m == 1,
        "membership": all(memberships),
        "dimension_bound": all(bounds),
        "degree_descent": all(descent) if polynomial else True,
    }
    return {
        "passed": all(checks.values()),
        "d": d,
        "m": m,
        "polynomial": polynomial,
        "dims": [W.dim] + [inst.W.dim for inst in chain],
        "checks": checks,
    }


@dataclass(frozen=True)
class PropertySuite:
    name: str
    description: str
    instance: Callable[[random.Random], dict[str, Any]]


SUITES: dict[str, PropertySuite] = {
    suite.name: suite
    for suite in (
        PropertySuite("operator_algebra", "Shift, dilation and difference operator laws", operator_algebra_instance),
        PropertySuite("frechet", "Iterated differences of polynomials", frechet_instance),
        PropertySuite("folfact", "Difference of a sheared composition", folfact_instance),
        PropertySuite("separation", "Minimal separated form round trip", separation_instance),
        PropertySuite("reduction", "Elimination chain soundness", reduction_instance),
    )
}


def instance_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def run_instance(suite: str, seed: int, index: int) -> dict[str, Any]:
    """Run one instance of a suite; the result records how to replay it."""
    result = SUITES[suite].instance(instance_rng(seed, suite, index))
    return {"suite": suite, "index": index, "seed": seed, **result}


@dataclass
class SuiteReport:
    name: str
    seed: int
    results: list[dict[str, Any]] = field(default_factory=list)

    @property
    def summary(self) -> dict[str, Any]:
        return ResultProcessor.aggregate_results(self.results)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.get("passed", False) for r in self.results)

    @property
    def failing_indices(self) -> list[int]:
        return [r["index"] for r in self.results if not r.get("passed", False)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.name,
            "seed": self.seed,
            "passed": self.passed,
            **self.summary,
            "failing_indices": self.failing_indices,
        }


async def _run_suite_with_progress(
    suite: str, count: int, seed: int, semaphore: asyncio.Semaphore, show_progress: bool
) -> SuiteReport:
    """Run ``count`` instances of one suite with concurrency control and progress tracking."""

    async def run_with_semaphore_and_progress(index: int, progress_bar) -> dict[str, Any]:
        async with semaphore:
            try:
                result = await asyncio.to_thread(run_instance, suite, seed, index)
                progress_bar.set_postfix(status="✓" if result["passed"] else "✗")
                return result
            finally:
                progress_bar.update(1)

    progress_bar = tqdm(total=count, desc=suite, unit="case", colour="green", disable=not show_progress)
    try:
        tasks = [run_with_semaphore_and_progress(index, progress_bar) for index in range(count)]
        results = await asyncio.gather(*tasks, return_exceptions=True)
    finally:
        progress_bar.close()

    processed = []
    for index, result in enumerate(results):
        if isinstance(result, Exception):
            logger.error(f"{suite} instance {index} raised: {result}")
            processed.append(
                {"suite": suite, "index": index, "seed": seed, "passed": False, "error": str(result)}
            )
        else:
            processed.append(result)

    report = SuiteReport(suite, seed, processed)
    logger.info(f"Suite {suite} completed. Pass rate: {report.summary['passed']}/{count}")
    return report


async def run_suites(
    names: Sequence[str] | None = None,
    count: int = 25,
    seed: int = 0,
    concurrency: int = 8,
    show_progress: bool = False,
) -> list[SuiteReport]:
    """Run the named suites (all of them by default) and return one report each."""
    names = list(names) if names else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"Unknown suite(s): {', '.join(unknown)}; expected {', '.join(SUITES)}")
    if count < 1:
        raise ValueError("count must be at least 1")
    if concurrency < 1:
        raise ValueError("concurrency must be at least 1")

    logger.info(f"Running {len(names)} suite(s) x {count} instances with seed {seed}, concurrency {concurrency}")
    semaphore = asyncio.Semaphore(concurrency)
    reports = []
    for name in names:
        reports.append(await _run_suite_with_progress(name, count, seed, semaphore, show_progress))
    return reports
