"""Tests for the seeded property suites and the instance generators."""

import pytest

from levi_civita_cli.equation import validate_conditions
from levi_civita_cli.generators import random_exppoly, random_invertible, random_polynomial, random_spec, top_form
from levi_civita_cli.suites import SUITES, SuiteReport, gap_separates, instance_rng, run_instance, run_suites

from .test_utils import p, seeded


class TestGenerators:
    """Random instance generation."""

    def test_invertible_matrices(self):
        rng = seeded(1)
        for _ in range(20):
            assert random_invertible(rng, 2).is_invertible()

    @pytest.mark.parametrize("profile", ["thm2.1", "thm2.2"])
    def test_specs_satisfy_profile(self, profile):
        rng = seeded(2)
        for m in (1, 2, 3):
            spec = random_spec(rng, 2, m, profile)
            assert validate_conditions(spec, profile).passed

    def test_normalized_specs(self):
        assert random_spec(seeded(3), 1, 3, "thm2.2", normalized=True).is_normalized

    def test_polynomial_has_exact_degree(self):
        f = random_polynomial(seeded(4), 2, 3)
        assert f.is_polynomial()
        assert f.degree() == 3

    def test_exppoly_dimension(self):
        assert random_exppoly(seeded(5), 2).d == 2

    def test_top_form(self):
        assert top_form(p("x1^3 + 5*x1^2 - 1")) == p("x1^3")

    def test_generation_is_deterministic(self):
        assert random_exppoly(seeded(7), 1) == random_exppoly(seeded(7), 1)


class TestInstances:
    """Single suite instances are reproducible and pass."""

    @pytest.mark.parametrize("suite", list(SUITES))
    def test_instances_pass(self, suite):
        for index in range(3):
            result = run_instance(suite, 0, index)
            assert result["passed"], result
            assert result["suite"] == suite
            assert result["index"] == index

    def test_replay_gives_same_instance(self):
        first = run_instance("frechet", 11, 4)
        again = run_instance("frechet", 11, 4)
        assert first == again

    def test_rng_depends_on_every_component(self):
        draws = {instance_rng(s, n, i).random() for s, n, i in [(0, "a", 0), (1, "a", 0), (0, "b", 0), (0, "a", 1)]}
        assert len(draws) == 4

    def test_separation_checks_numeric_gap(self):
        checked = 0
        for index in range(10):
            result = run_instance("separation", 0, index)
            if result["numeric_gap"] is not None:
                assert result["checks"]["numeric_gap"]
                checked += 1
            else:
                assert "numeric_gap" not in result["checks"]
        assert checked > 0


class TestGapSeparates:
    """Thresholds of the numeric rank cross-check."""

    def test_clear_gap(self):
        assert gap_separates({"rank_n": 1e-12, "rank_n_minus_1": 0.5, "scale": 10.0})

    def test_rank_n_residual_too_large(self):
        assert not gap_separates({"rank_n": 1e-6, "rank_n_minus_1": 0.5, "scale": 1.0})

    def test_rank_n_tolerance_scales_with_magnitude(self):
        assert gap_separates({"rank_n": 1e-6, "rank_n_minus_1": 0.5, "scale": 1e3})

    def test_rank_deficit_too_small(self):
        assert not gap_separates({"rank_n": 1e-12, "rank_n_minus_1": 1e-6, "scale": 1.0})

    def test_zero_rank(self):
        assert gap_separates({"rank_n": 0.0, "rank_n_minus_1": None, "scale": 0.0})


class TestSuiteReport:
    """Aggregation of instance results."""

    def test_summary(self):
        report = SuiteReport(
            "frechet",
            0,
            [
                {"index": 0, "passed": True},
                {"index": 1, "passed": False, "error": "boom"},
                {"index": 2, "passed": True},
            ],
        )
        assert not report.passed
        assert report.failing_indices == [1]
        data = report.to_dict()
        assert data["total"] == 3
        assert data["failed"] == 1
        assert data["errors"] == ["boom"]

    def test_empty_report_does_not_pass(self):
        assert not SuiteReport("frechet", 0).passed


class TestRunSuites:
    """Concurrent execution of suites."""

    @pytest.mark.asyncio
    async def test_run_selected_suites(self):
        reports = await run_suites(["operator_algebra", "folfact"], count=4, seed=2, concurrency=2)
        assert [r.name for r in reports] == ["operator_algebra", "folfact"]
        assert all(r.passed for r in reports)
        assert all(len(r.results) == 4 for r in reports)

    @pytest.mark.asyncio
    async def test_results_independent_of_concurrency(self):
        serial = await run_suites(["frechet"], count=5, seed=9, concurrency=1)
        parallel = await run_suites(["frechet"], count=5, seed=9, concurrency=5)
        assert serial[0].results == parallel[0].results

    @pytest.mark.asyncio
    async def test_unknown_suite(self):
        with pytest.raises(ValueError):
            await run_suites(["nonexistent"])

    @pytest.mark.asyncio
    async def test_invalid_count(self):
        with pytest.raises(ValueError):
            await run_suites(count=0)

    @pytest.mark.slow
    @pytest.mark.asyncio
    async def test_all_suites(self):
        reports = await run_suites(count=10, seed=0)
        failing = {r.name: r.failing_indices for r in reports if not r.passed}
        assert not failing
