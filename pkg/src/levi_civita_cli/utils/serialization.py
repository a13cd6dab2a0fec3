"""JSON documents for specs and solution tuples.

Rationals travel as integers or ``"p/q"`` strings, matrices as nested lists
(a bare rational means that multiple of the identity) and functions as DSL
strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..algebra.exp_poly import ExpPoly
from ..algebra.linalg import RatMatrix, RatVector
from ..algebra.numbers import to_fraction
from ..equation import EquationSpec, MatrixPair, SolutionTuple, SubspaceW
from ..errors import DimensionMismatch
from .dsl import parse_exppoly
from .schemas import SchemaLoader


def read_document(source: str) -> Any:
    """Parse inline JSON text, or the contents of the file it names."""
    text = source.strip()
    if not text.startswith(("{", "[")):
        path = Path(source)
        with open(path, encoding="utf-8") as f:
            text = f.read()
    return json.loads(text)


def parse_matrix(value: Any, d: int) -> RatMatrix:
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return RatMatrix.scalar(d, to_fraction(value))
    matrix = RatMatrix.from_rows(value)
    if matrix.d != d:
        raise DimensionMismatch(d, matrix.d, "matrix")
    return matrix


def parse_vector(value: Any, d: int) -> RatVector:
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return RatVector(tuple(to_fraction(value) for _ in range(d)))
    vector = RatVector(tuple(to_fraction(v) for v in value))
    if vector.d != d:
        raise DimensionMismatch(d, vector.d, "vector")
    return vector


def load_spec(document: dict[str, Any]) -> tuple[EquationSpec, str | None]:
    """Validate and decode a spec document; returns the spec and its profile, if any."""
    SchemaLoader.validate(document, "spec")
    d = document["d"]
    pairs = tuple(
        MatrixPair(
            parse_matrix(pair.get("b", 1), d),
            parse_matrix(pair["c"], d),
        )
        for pair in document["pairs"]
    )
    return EquationSpec(d, pairs, document.get("rhs_rank_hint")), document.get("profile")


def dump_spec(spec: EquationSpec, profile: str | None = None) -> dict[str, Any]:
    data = spec.to_dict()
    if profile is not None:
        data["profile"] = profile
    return data


@dataclass(frozen=True)
class SolutionDocument:
    sol: SolutionTuple
    W: SubspaceW | None = None
    R: dict[RatVector, list[ExpPoly]] = field(default_factory=dict)
    h_schedule: list[RatVector] | None = None
    pivot: int = 0


def load_solution(document: dict[str, Any], d: int) -> SolutionDocument:
    """Validate and decode a solution document against dimension ``d``."""
    SchemaLoader.validate(document, "solution")
    sol = SolutionTuple(tuple(parse_exppoly(text, dim=d) for text in document["f"]))
    W = None
    if "W" in document:
        W = SubspaceW.spanned_by(d, [parse_exppoly(text, dim=d) for text in document["W"]])
    R = {
        parse_vector(item["y"], d): [parse_exppoly(text, dim=d) for text in item["generators"]]
        for item in document.get("R", [])
    }
    schedule = None
    if "h_schedule" in document:
        schedule = [parse_vector(h, d) for h in document["h_schedule"]]
    return SolutionDocument(sol, W, R, schedule, document.get("pivot", 1) - 1)
