import asyncio
import json
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import click
import jsonschema
import yaml
from loguru import logger

from . import __version__
from .algebra.exp_scalar import ONE_SCALAR
from .algebra.linalg import RatVector
from .algebra.numbers import ZERO, GaussRational, format_fraction, to_fraction
from .config import PROFILES, Config
from .equation import EquationSpec, SubspaceW, kernel_identity_holds, normalize_b_to_identity, validate_conditions
from .errors import PreconditionViolation, ReductionUnsound
from .numeric_lab import FitModel, equation_residual, fit, load_csv, sample, tensor_grid
from .reduction import default_schedule, full_reduction, levi_civita_closure, reduce_once
from .separation import bivariate_expand, separate_minimal, separated_rank, verify_membership, verify_with_remainder
from .special_equations import (
    GhuryeOlkinSpec,
    frechet_check,
    ghurye_olkin_check,
    kakutani_nagumo_check,
    skitovich_check,
    wilson_check,
)
from .suites import SUITES, run_suites
from .utils.dsl import parse_exppoly
from .utils.output import OutputFormatter
from .utils.schemas import SchemaLoader
from .utils.serialization import SolutionDocument, load_solution, load_spec, parse_vector, read_document

SUBCOMMANDS = ("validate", "separate", "verify", "reduce", "check", "fit", "residual", "closure", "suite")
CHECK_KINDS = ("frechet", "kakutani", "wilson", "skitovich", "ghurye-olkin")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


class InvalidInputError(click.ClickException):
    """Input the workbench cannot act on; exits with status 2."""

    exit_code = EXIT_INVALID


@dataclass
class WorkbenchCommand:
    """One CLI invocation: a subcommand, its input documents and its flags."""

    subcommand: str
    documents: dict[str, str] = field(default_factory=dict)
    flags: dict[str, Any] = field(default_factory=dict)


# Input helpers


def _require(command: WorkbenchCommand, name: str) -> str:
    value = command.documents.get(name)
    if not value:
        raise PreconditionViolation(f"'{command.subcommand}' requires --{name}")
    return value


def _load_instance(command: WorkbenchCommand) -> tuple[EquationSpec, str | None, SolutionDocument]:
    spec, profile = load_spec(read_document(_require(command, "spec")))
    document = load_solution(read_document(_require(command, "solution")), spec.d)
    document.sol.check_against(spec)
    return spec, profile, document


def _subspace_for(spec: EquationSpec, document: SolutionDocument) -> tuple[SubspaceW, str]:
    """The document's W, or the span of the minimal separated form's v_k."""
    if document.W is not None:
        return document.W, "document"
    form = separate_minimal(bivariate_expand(spec, document.sol))
    return form.subspace(), "minimal separated form"


def _vector(text: str, d: int) -> RatVector:
    text = text.strip()
    value = json.loads(text) if text.startswith("[") else text.split(",")
    if len(value) == 1:
        value = value[0]
    return parse_vector(value, d)


def _gauss(text: str) -> GaussRational:
    """A Gaussian rational written in the DSL, e.g. ``2``, ``-i`` or ``1/2 + 3*i``."""
    value = parse_exppoly(text, dim=1)
    if not value:
        return ZERO
    if not value.is_polynomial() or value.degree() > 0:
        raise PreconditionViolation(f"{text!r} is not a Gaussian rational")
    return value.leading_coefficient().constant_value()


def _frequency_model(specs: list[str], d: int) -> FitModel:
    """Parse ``lambda_1,...,lambda_d:degree`` items."""
    if not specs:
        raise PreconditionViolation("fit needs at least one --freq LAMBDA:DEGREE")
    frequencies = []
    degrees = []
    for item in specs:
        if ":" not in item:
            raise PreconditionViolation(f"Frequency {item!r} must look like LAMBDA:DEGREE")
        lam_text, degree_text = item.rsplit(":", 1)
        freq = tuple(_gauss(part) for part in lam_text.split(","))
        if len(freq) != d:
            raise PreconditionViolation(f"Frequency {lam_text!r} has {len(freq)} components, expected {d}")
        frequencies.append(freq)
        degrees.append(int(degree_text))
    return FitModel(tuple(frequencies), tuple(degrees))


def _report(
    command: str,
    passed: bool,
    summary: str,
    details: dict[str, Any],
    headers: list[str] | None = None,
    rows: list[list[Any]] | None = None,
) -> dict[str, Any]:
    report: dict[str, Any] = {"command": command, "passed": passed, "summary": summary, "details": details}
    if headers is not None:
        report["table"] = {"headers": headers, "rows": rows or []}
    return report


# Handlers


def _handle_validate(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    spec, doc_profile = load_spec(read_document(_require(command, "spec")))
    profile = command.flags.get("profile") or doc_profile or config.default_profile
    report = validate_conditions(spec, profile)
    details = report.to_dict()
    if all(report.c_invertible[:1]):
        details["kernel_identity"] = kernel_identity_holds(spec)

    rows = [
        [v.kind, f"{v.i + 1},{v.j + 1}", "-" if v.determinant is None else format_fraction(v.determinant), v.invertible]
        for v in report.bc_differences + report.c_differences
    ]
    summary = f"Profile {profile}: " + ("all hypotheses hold" if report.passed else "; ".join(report.failures()))
    return _report("validate", report.passed, summary, details, ["kind", "pair", "det", "invertible"], rows)


def _handle_separate(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    spec, _, document = _load_instance(command)
    F = bivariate_expand(spec, document.sol)
    form = separate_minimal(F)
    rows = [[k + 1, pair["u"], pair["v"]] for k, pair in enumerate(form.to_dict()["pairs"])]
    details = {"bivariate": str(F), "rank": form.n, "separated": form.to_dict()}
    summary = f"Minimal separated rank {form.n}" + ("" if form.scale == ONE_SCALAR else f" (scaled by {form.scale})")
    return _report("separate", True, summary, details, ["k", "u_k(y)", "v_k(x)"], rows)


def _handle_verify(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    spec, _, document = _load_instance(command)
    W, source = _subspace_for(spec, document)
    details: dict[str, Any] = {"W": W.to_dict(), "W_source": source}
    if document.R:
        verdict = verify_with_remainder(spec, document.sol, W, document.R)
        details["remainder"] = verdict.to_dict()
        rows = [[str(s.y), s.closure_dim, s.passed] for s in verdict.samples]
        summary = f"{sum(s.passed for s in verdict.samples)}/{len(verdict.samples)} sampled y pass"
        return _report("verify", verdict.passed, summary, details, ["y", "dim R(y)", "passed"], rows)

    verdict = verify_membership(spec, document.sol, W)
    details["membership"] = verdict.to_dict()
    if verdict.passed:
        summary = f"Left side lies in a {W.dim}-dimensional W for every y"
    else:
        summary = f"Membership fails at y-atom {verdict.y_atom}: residual {verdict.residual}"
    rows = [[k + 1, str(v)] for k, v in enumerate(W.basis)]
    return _report("verify", verdict.passed, summary, details, ["k", "W basis"], rows)


def _handle_reduce(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    spec, _, document = _load_instance(command)
    W, source = _subspace_for(spec, document)
    pivot = command.flags.get("pivot")
    pivot = document.pivot if pivot is None else pivot - 1
    schedule = document.h_schedule
    if command.flags.get("h"):
        schedule = [_vector(text, spec.d) for text in command.flags["h"]]

    if command.flags.get("once"):
        h = schedule[0] if schedule else default_schedule(spec.d, 1)[0]
        chain = [reduce_once(spec, document.sol, W, h, pivot)[0]]
    else:
        chain = full_reduction(spec, document.sol, W, schedule, pivot)

    rows = [
        [
            index + 1,
            inst.step.eliminated_index + 1,
            str(inst.step.h),
            inst.spec.m,
            inst.step.w_in_dim,
            inst.step.w_out.dim,
            inst.step.max_degree_in,
            inst.step.max_degree_out,
        ]
        for index, inst in enumerate(chain)
    ]
    details = {"W": W.to_dict(), "W_source": source, "chain": [inst.to_dict() for inst in chain]}
    summary = f"Eliminated {len(chain)} summand(s), m {spec.m} -> {spec.m - len(chain)}" if chain else "Nothing to eliminate (m = 1)"
    headers = ["step", "pivot", "h", "m", "dim W", "dim W*", "deg in", "deg out"]
    return _report("reduce", True, summary, details, headers, rows)


def _handle_check(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    kind = command.flags.get("kind")
    flags = command.flags
    dim = flags.get("dim")
    expressions = list(flags.get("f") or [])

    if kind == "frechet":
        if len(expressions) != 1 or not flags.get("order"):
            raise PreconditionViolation("frechet needs one --f and --order")
        f = parse_exppoly(expressions[0], dim)
        trials = [_vector(t, f.d) for t in flags.get("trial") or []]
        verdict = frechet_check(f, flags["order"], trials)
        rows = [[str(y), str(r)] for y, r in verdict.residuals]
        summary = f"Delta^{verdict.order} f " + ("vanishes" if verdict.passed else "does not vanish")
        return _report("check", verdict.passed, summary, {"kind": kind, **verdict.to_dict()}, ["y", "residual"], rows)

    if kind == "kakutani":
        if len(expressions) != 1:
            raise PreconditionViolation("kakutani needs one --f")
        f = parse_exppoly(expressions[0], 2)
        samples = []
        for text in flags.get("sample") or []:
            if ";" not in text:
                raise PreconditionViolation(f"Sample {text!r} must look like z1,z2;h1,h2")
            z_text, h_text = text.split(";", 1)
            samples.append((_vector(z_text, 2), _vector(h_text, 2)))
        verdict = kakutani_nagumo_check(f, flags.get("n") or 4, samples, config.kakutani_tolerance)
        rows = [[str(z), str(h), text, value] for z, h, text, value in verdict.residuals]
        summary = f"{verdict.mode} mode, max residual {verdict.max_residual:.3e}"
        return _report("check", verdict.passed, summary, {"kind": kind, **verdict.to_dict()}, ["z", "h", "residual", "|residual|"], rows)

    if kind == "wilson":
        alphas = [to_fraction(a) for a in (flags.get("alphas") or "").split(",") if a.strip()]
        betas = [to_fraction(b) for b in (flags.get("betas") or "").split(",") if b.strip()]
        fs = [parse_exppoly(text, 1) for text in expressions]
        verdict = wilson_check(alphas, betas, fs)
        rows = [[i + 1, str(fi), ok] for i, (fi, ok) in enumerate(zip(fs, verdict.within_degree_bound, strict=True))]
        summary = "Splits as f(x) + g(y)" if verdict.passed else f"Mixed terms: {', '.join(verdict.mixed)}"
        return _report("check", verdict.passed, summary, {"kind": kind, **verdict.to_dict()}, ["i", "f_i", f"deg <= {verdict.degree_bound}"], rows)

    if kind == "skitovich":
        spec, _, document = _load_instance(command)
        verdict = skitovich_check(spec, document.sol)
        summary = "Identity holds" if verdict.passed else f"Difference {verdict.difference}"
        return _report("check", verdict.passed, summary, {"kind": kind, **verdict.to_dict()})

    if kind == "ghurye-olkin":
        spec, _, document = _load_instance(command)
        spec, sol = normalize_b_to_identity(spec, document.sol)
        go_spec = GhuryeOlkinSpec(spec.d, tuple(spec.cs), flags.get("r") or 0, flags.get("s") or 0)
        verdict = ghurye_olkin_check(go_spec, sol)
        rows = [[i + 1, str(fi), fi.is_polynomial()] for i, fi in enumerate(sol.f)]
        summary = "Valid (A, B) split" if verdict.passed else f"{len(verdict.violations)} atom(s) fit neither side"
        return _report("check", verdict.passed, summary, {"kind": kind, **verdict.to_dict()}, ["i", "f_i", "polynomial"], rows)

    raise PreconditionViolation(f"Unknown check kind {kind!r}; expected one of {', '.join(CHECK_KINDS)}")


def _handle_fit(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    flags = command.flags
    expressions = list(flags.get("f") or [])
    if command.documents.get("csv"):
        d = flags.get("dim") or 1
        grid = load_csv(command.documents["csv"], d)
    elif expressions:
        f = parse_exppoly(expressions[0], flags.get("dim"))
        d = f.d
        points = flags.get("grid") or config.grid_points
        grid = sample(f, tensor_grid(d, points, config.grid_low, config.grid_high))
    else:
        raise PreconditionViolation("fit needs --csv or --f")

    model = _frequency_model(list(flags.get("freq") or []), d)
    tolerance = flags.get("tol") or config.fit_round_tolerance
    result = fit(grid, model, config.fit_max_denominator, tolerance, config.ill_conditioned_threshold)
    passed = result.residual <= config.residual_tolerance and not result.unrounded
    rows = [
        [label, value.real, value.imag, label not in result.unrounded]
        for label, value in result.coefficients.items()
    ]
    details = {"samples": len(grid), **result.to_dict()}
    summary = f"Fit {result.poly} with rms residual {result.residual:.3e}"
    return _report("fit", passed, summary, details, ["atom", "re", "im", "rounded"], rows)


def _handle_residual(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    spec, _, document = _load_instance(command)
    rank = command.flags.get("rank")
    if rank is None:
        rank = spec.rhs_rank_hint
    if rank is None:
        rank = separated_rank(bivariate_expand(spec, document.sol))
    points = tensor_grid(spec.d, command.flags.get("grid") or config.grid_points, config.grid_low, config.grid_high)
    tolerance = command.flags.get("tol") or config.residual_tolerance
    report = equation_residual(spec, document.sol.f, rank, points, points, tolerance)
    rows = [[k + 1, s] for k, s in enumerate(report.singular_values[: rank + 3])]
    summary = f"Rank-{rank} residual {report.residual:.3e} (tolerance {tolerance:.1e})"
    return _report("residual", report.passed, summary, report.to_dict(), ["k", "singular value"], rows)


def _handle_closure(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    expressions = list(command.flags.get("f") or [])
    if len(expressions) != 1:
        raise PreconditionViolation("closure needs one --f")
    f = parse_exppoly(expressions[0], command.flags.get("dim"))
    dim, basis = levi_civita_closure(f)
    details = {"f": str(f), "dimension": dim, "basis": [str(b) for b in basis]}
    rows = [[k + 1, str(b)] for k, b in enumerate(basis)]
    return _report("closure", True, f"Translation-invariant closure has dimension {dim}", details, ["k", "basis"], rows)


def _handle_suite(command: WorkbenchCommand, config: Config) -> dict[str, Any]:
    flags = command.flags
    reports = asyncio.run(
        run_suites(
            flags.get("names") or None,
            count=flags.get("count") or config.suite_count,
            seed=config.seed,
            concurrency=flags.get("concurrency") or config.max_concurrency,
            show_progress=bool(flags.get("progress")),
        )
    )
    passed = all(r.passed for r in reports)
    rows = []
    for r in reports:
        summary = r.summary
        rows.append([r.name, summary["total"], summary["passed"], summary["failed"], f"{summary['pass_rate']:.1f}%"])
    details = {"seed": config.seed, "suites": [r.to_dict() for r in reports]}
    failing = [f"{r.name} {r.failing_indices}" for r in reports if not r.passed]
    summary_text = f"All {len(reports)} suite(s) pass" if passed else "Failing instances: " + "; ".join(failing)
    return _report("suite", passed, summary_text, details, ["suite", "total", "passed", "failed", "rate"], rows)


HANDLERS: dict[str, Callable[[WorkbenchCommand, Config], dict[str, Any]]] = {
    "validate": _handle_validate,
    "separate": _handle_separate,
    "verify": _handle_verify,
    "reduce": _handle_reduce,
    "check": _handle_check,
    "fit": _handle_fit,
    "residual": _handle_residual,
    "closure": _handle_closure,
    "suite": _handle_suite,
}


def run(command: WorkbenchCommand, config: Config | None = None) -> tuple[int, dict[str, Any]]:
    """Execute a command; returns the exit code (0 pass, 1 check failure, 2 invalid input) and report."""
    if command.subcommand not in HANDLERS:
        raise ValueError(f"Unknown subcommand {command.subcommand!r}; expected one of {', '.join(SUBCOMMANDS)}")
    config = config or Config.load()

    try:
        report = HANDLERS[command.subcommand](command, config)
    except ReductionUnsound:
        raise
    except jsonschema.ValidationError as e:
        return EXIT_INVALID, _error_report(command, f"Schema validation failed: {e.message}", e)
    except (ValueError, TypeError, OSError) as e:
        return EXIT_INVALID, _error_report(command, str(e), e)

    SchemaLoader.validate(report, "report")
    return (EXIT_PASS if report["passed"] else EXIT_FAIL), report


def _error_report(command: WorkbenchCommand, message: str, error: Exception) -> dict[str, Any]:
    logger.debug(f"{command.subcommand} rejected its input: {type(error).__name__}: {message}")
    return _report(command.subcommand, False, message, {"error": type(error).__name__, "message": message})


# Click surface


def output_options(func: Callable) -> Callable:
    func = click.option("--output-file", help="Save the report to file")(func)
    func = click.option("--verbose", "-v", is_flag=True, help="Include details and metadata in the report")(func)
    func = click.option("--json", "as_json", is_flag=True, help="Shorthand for --output json")(func)
    func = click.option(
        "--output",
        "-o",
        type=click.Choice(["json", "text", "markdown"]),
        default="text",
        help="Output format",
    )(func)
    return func


def instance_options(func: Callable) -> Callable:
    func = click.option("--solution", help="Solution document (JSON file or inline JSON)")(func)
    func = click.option("--spec", "spec", help="Equation spec document (JSON file or inline JSON)")(func)
    return func


def _execute(
    ctx: click.Context,
    command: WorkbenchCommand,
    output: str,
    as_json: bool,
    verbose: bool,
    output_file: str | None,
) -> None:
    config: Config = ctx.obj
    try:
        exit_code, report = run(command, config)
    except ReductionUnsound as e:
        logger.error(f"Internal consistency check failed: {e}")
        raise click.ClickException(f"Internal consistency check failed: {e}")

    if exit_code == EXIT_INVALID:
        logger.error(f"{command.subcommand} failed: {report['summary']}")
        raise InvalidInputError(report["summary"])

    content = OutputFormatter().format_report(report, "json" if as_json else output, verbose=verbose)
    if output_file:
        OutputFormatter.save_to_file(content, output_file)
        logger.info(f"Report saved to {output_file}")
    else:
        click.echo(content)
    ctx.exit(exit_code)


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]),
    default="WARNING",
    help="Logging level",
)
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML configuration file",
)
@click.option("--seed", type=int, help="Seed for randomized suites (overrides configuration)")
@click.version_option(version=__version__, prog_name="levi-civita")
@click.pass_context
def main(ctx: click.Context, log_level: str, config_file: Path | None, seed: int | None) -> None:
    """Exact symbolic workbench for generalized Levi-Civita functional equations."""
    # Configure logging
    logger.remove()
    logger.add(lambda msg: click.echo(msg, err=True), level=log_level)

    try:
        config = Config.load(config_file)
        if seed is not None:
            config.seed = seed
        config.validate()
    except (ValueError, TypeError, yaml.YAMLError) as e:
        raise InvalidInputError(f"Invalid configuration: {e}")
    ctx.obj = config


@main.command()
@click.option("--spec", "spec", help="Equation spec document (JSON file or inline JSON)")
@click.option("--profile", type=click.Choice(PROFILES), help="Theorem profile (default: from document or config)")
@output_options
@click.pass_context
def validate(ctx: click.Context, spec: str | None, profile: str | None, **output: Any) -> None:
    """Check the invertibility hypotheses of a theorem profile."""
    _execute(ctx, WorkbenchCommand("validate", {"spec": spec}, {"profile": profile}), **output)


@main.command()
@instance_options
@output_options
@click.pass_context
def separate(ctx: click.Context, spec: str | None, solution: str | None, **output: Any) -> None:
    """Expand the left side and write it in minimal separated form."""
    _execute(ctx, WorkbenchCommand("separate", {"spec": spec, "solution": solution}), **output)


@main.command()
@instance_options
@output_options
@click.pass_context
def verify(ctx: click.Context, spec: str | None, solution: str | None, **output: Any) -> None:
    """Decide membership of every y-section in W (plus sampled remainders R(y))."""
    _execute(ctx, WorkbenchCommand("verify", {"spec": spec, "solution": solution}), **output)


@main.command()
@instance_options
@click.option("--h", "h", multiple=True, help="Shift vector per step, e.g. '1,0' (overrides the document)")
@click.option("--pivot", type=click.IntRange(min=1), help="1-based summand to eliminate")
@click.option("--once", is_flag=True, help="Perform a single elimination step")
@output_options
@click.pass_context
def reduce(
    ctx: click.Context,
    spec: str | None,
    solution: str | None,
    h: tuple[str, ...],
    pivot: int | None,
    once: bool,
    **output: Any,
) -> None:
    """Run the elimination calculus down to one summand."""
    command = WorkbenchCommand("reduce", {"spec": spec, "solution": solution}, {"h": list(h), "pivot": pivot, "once": once})
    _execute(ctx, command, **output)


@main.command()
@click.option("--kind", "-k", type=click.Choice(CHECK_KINDS), required=True, help="Special equation to check")
@click.option("--f", "f", multiple=True, help="Function in the expression DSL (repeat for several)")
@click.option("--dim", type=click.IntRange(min=1), help="Pin the dimension of parsed expressions")
@click.option("--order", type=click.IntRange(min=1), help="Difference order m (frechet)")
@click.option("--trial", multiple=True, help="Trial shift y (frechet)")
@click.option("--roots-order", "n", type=click.IntRange(min=2), help="Root-of-unity order N (kakutani, default 4)")
@click.option("--sample", multiple=True, help="Sample 'z1,z2;h1,h2' (kakutani)")
@click.option("--alphas", help="Comma-separated alpha_i (wilson)")
@click.option("--betas", help="Comma-separated beta_i (wilson)")
@click.option("--x-degree", "r", type=click.IntRange(min=0), help="Degree bound r in x (ghurye-olkin)")
@click.option("--y-degree", "s", type=click.IntRange(min=0), help="Degree bound s in y (ghurye-olkin)")
@instance_options
@output_options
@click.pass_context
def check(ctx: click.Context, kind: str, spec: str | None, solution: str | None, **options: Any) -> None:
    """Check one of the named special equations."""
    output = {key: options.pop(key) for key in ("output", "as_json", "verbose", "output_file")}
    options["f"] = list(options["f"])
    command = WorkbenchCommand("check", {"spec": spec, "solution": solution}, {"kind": kind, **options})
    _execute(ctx, command, **output)


@main.command("fit")
@click.option("--csv", "csv_path", type=click.Path(exists=True, dir_okay=False), help="Samples as x_1..x_d,re,im rows")
@click.option("--f", "f", help="Sample this DSL expression on a tensor grid instead")
@click.option("--freq", multiple=True, help="Model frequency and degree bound, e.g. '1:0' or '1,0:2'")
@click.option("--dim", type=click.IntRange(min=1), help="Dimension of the samples")
@click.option("--grid", type=click.IntRange(min=2), help="Grid points per axis when sampling --f")
@click.option("--tol", type=float, help="Tolerance for rounding coefficients to rationals")
@output_options
@click.pass_context
def fit_command(
    ctx: click.Context,
    csv_path: str | None,
    f: str | None,
    freq: tuple[str, ...],
    dim: int | None,
    grid: int | None,
    tol: float | None,
    **output: Any,
) -> None:
    """Least-squares fit of an exponential-polynomial model to samples."""
    flags = {"f": [f] if f else [], "freq": list(freq), "dim": dim, "grid": grid, "tol": tol}
    _execute(ctx, WorkbenchCommand("fit", {"csv": csv_path} if csv_path else {}, flags), **output)


@main.command()
@instance_options
@click.option("--rank", type=click.IntRange(min=0), help="Separated rank n (default: hint or exact rank)")
@click.option("--grid", type=click.IntRange(min=2), help="Grid points per axis")
@click.option("--tol", type=float, help="Pass threshold for the residual")
@output_options
@click.pass_context
def residual(
    ctx: click.Context,
    spec: str | None,
    solution: str | None,
    rank: int | None,
    grid: int | None,
    tol: float | None,
    **output: Any,
) -> None:
    """Sampled distance of the left side from a rank-n separated right side."""
    command = WorkbenchCommand("residual", {"spec": spec, "solution": solution}, {"rank": rank, "grid": grid, "tol": tol})
    _execute(ctx, command, **output)


@main.command()
@click.option("--f", "f", required=True, help="Function in the expression DSL")
@click.option("--dim", type=click.IntRange(min=1), help="Pin the dimension")
@output_options
@click.pass_context
def closure(ctx: click.Context, f: str, dim: int | None, **output: Any) -> None:
    """Smallest translation-invariant space containing f."""
    _execute(ctx, WorkbenchCommand("closure", {}, {"f": [f], "dim": dim}), **output)


@main.command()
@click.option("--name", "names", multiple=True, type=click.Choice(list(SUITES)), help="Suite to run (default: all)")
@click.option("--count", type=click.IntRange(min=1), help="Instances per suite (default from config)")
@click.option("--concurrency", "-c", type=click.IntRange(min=1), help="Concurrent instances (default from config)")
@click.option("--progress/--no-progress", default=False, help="Show progress bars")
@output_options
@click.pass_context
def suite(
    ctx: click.Context,
    names: tuple[str, ...],
    count: int | None,
    concurrency: int | None,
    progress: bool,
    **output: Any,
) -> None:
    """Run the seeded randomized property suites."""
    config: Config = ctx.obj
    if concurrency and concurrency > config.max_concurrency:
        raise click.ClickException(
            f"Concurrency value {concurrency} exceeds maximum limit of {config.max_concurrency}"
        )
    flags = {"names": list(names), "count": count, "concurrency": concurrency, "progress": progress}
    _execute(ctx, WorkbenchCommand("suite", {}, flags), **output)


if __name__ == "__main__":
    main()
