"""Expression DSL for exponential polynomials.

Grammar (EBNF, whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INT)?
    atom   := RATIONAL | "i" | VAR | "exp" "(" expr ")" | "E" "(" expr ")" | "(" expr ")"

``RATIONAL`` is ``p`` or ``p/q``; ``VAR`` is ``x1``, ``x2``, ... (1-indexed);
``i`` is the imaginary unit. ``exp`` takes a linear form (a constant term is
allowed and becomes a formal scalar) and ``E(w)`` is the formal scalar e^w.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from lark import Lark, Token, Transformer, Tree, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from ..algebra.exp_poly import ExpPoly
from ..algebra.exp_scalar import ExpScalar
from ..algebra.numbers import ZERO, GaussRational, format_fraction
from ..errors import DimensionExceeded, ParseError, WorkbenchError

GRAMMAR = r"""
?start: expr

?expr: term
     | expr "+" term   -> add
     | expr "-" term   -> sub

?term: unary
     | term "*" unary  -> mul

?unary: power
      | "-" unary      -> neg
      | "+" unary

?power: atom
      | atom "^" INT   -> pow

?atom: RATIONAL        -> number
     | "i"             -> imag
     | VAR             -> var
     | "exp" "(" expr ")" -> exp
     | "E" "(" expr ")"   -> econst
     | "(" expr ")"

RATIONAL: /[0-9]+(\/[0-9]+)?/
INT: /[0-9]+/
VAR: /x[0-9]+/

%import common.WS
%ignore WS
"""

_parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True)


@v_args(inline=True)
class _ExpPolyBuilder(Transformer):
    """Evaluate a parse tree into an ExpPoly on R^d."""

    def __init__(self, d: int):
        super().__init__()
        self.d = d

    def number(self, token: Token) -> ExpPoly:
        value = Fraction(str(token))
        return ExpPoly.constant(self.d, value)

    def imag(self) -> ExpPoly:
        return ExpPoly.constant(self.d, GaussRational(0, 1))

    def var(self, token: Token) -> ExpPoly:
        return ExpPoly.variable(self.d, int(str(token)[1:]) - 1)

    def add(self, left: ExpPoly, right: ExpPoly) -> ExpPoly:
        return left + right

    def sub(self, left: ExpPoly, right: ExpPoly) -> ExpPoly:
        return left - right

    def mul(self, left: ExpPoly, right: ExpPoly) -> ExpPoly:
        return left * right

    def neg(self, value: ExpPoly) -> ExpPoly:
        return -value

    def pow(self, base: ExpPoly, exponent: Token) -> ExpPoly:
        return base ** int(str(exponent))

    def exp(self, argument: ExpPoly) -> ExpPoly:
        frequency, offset = _linear_form(argument, self.d)
        return ExpPoly.exponential(self.d, frequency, ExpScalar.exp(offset))

    def econst(self, argument: ExpPoly) -> ExpPoly:
        frequency, offset = _linear_form(argument, self.d)
        if any(frequency):
            raise WorkbenchError("E(...) takes a constant Gaussian rational")
        return ExpPoly.constant(self.d, ExpScalar.exp(offset))


def _linear_form(value: ExpPoly, d: int) -> tuple[list[GaussRational], GaussRational]:
    """Split ``c_0 + sum_j l_j x_j`` into ``([l_j], c_0)``; reject anything else."""
    frequency = [ZERO] * d
    offset = ZERO
    for (freq, alpha), coeff in value.atoms.items():
        if any(freq) or not coeff.is_constant or sum(alpha) > 1:
            raise WorkbenchError("exp(...) argument must be a linear form with Gaussian rational coefficients")
        c = coeff.constant_value()
        if sum(alpha) == 0:
            offset = c
        else:
            frequency[alpha.index(1)] = c
    return frequency, offset


@dataclass(frozen=True)
class DslExpression:
    """Parsed DSL text: the source, its syntax tree and the resolved dimension."""

    source: str
    tree: Tree
    d: int

    @cached_property
    def value(self) -> ExpPoly:
        try:
            return _ExpPolyBuilder(self.d).transform(self.tree)
        except VisitError as e:
            meta = getattr(e.obj, "meta", None)
            line = getattr(meta, "line", 1) if meta is not None and not meta.empty else 1
            column = getattr(meta, "column", 1) if meta is not None and not meta.empty else 1
            raise ParseError(str(e.orig_exc), line, column) from e.orig_exc


def parse_expression(text: str, dim: int | None = None) -> DslExpression:
    """Parse DSL text; the dimension is the highest variable index unless pinned."""
    try:
        tree = _parser.parse(text)
    except UnexpectedEOF as e:
        line, column = _end_position(text)
        raise ParseError(f"Unexpected end of input, expected one of {sorted(e.expected)}", line, column) from e
    except UnexpectedInput as e:
        raise ParseError(f"Unexpected input {_context(text, e)!r}", e.line, e.column) from e

    indices = [int(str(tok)[1:]) for tok in tree.scan_values(lambda v: isinstance(v, Token) and v.type == "VAR")]
    for tok in tree.scan_values(lambda v: isinstance(v, Token) and v.type == "VAR"):
        if int(str(tok)[1:]) < 1:
            raise ParseError("Variables are 1-indexed (x1, x2, ...)", tok.line, tok.column)
    highest = max(indices, default=1)
    if dim is not None:
        if dim < 1:
            raise ValueError("Pinned dimension must be positive")
        if highest > dim:
            raise DimensionExceeded(highest, dim)
        d = dim
    else:
        d = highest
    return DslExpression(text, tree, d)


def parse_exppoly(text: str, dim: int | None = None) -> ExpPoly:
    """Parse DSL text into a canonical ExpPoly."""
    return parse_expression(text, dim).value


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def _context(text: str, error: UnexpectedInput) -> str:
    pos = getattr(error, "pos_in_stream", None)
    if pos is None:
        return text
    return text[pos : pos + 10]


# Printing


def _format_gauss_factor(c: GaussRational) -> tuple[str, str]:
    """Sign and body of a Gaussian rational used as a multiplicative factor."""
    if c.im == 0:
        sign = "-" if c.re < 0 else "+"
        return sign, format_fraction(abs(c.re))
    if c.re == 0:
        sign = "-" if c.im < 0 else "+"
        return sign, str(GaussRational(0, abs(c.im)))
    return "+", f"({c})"


def _format_scalar_term(w: GaussRational, c: GaussRational) -> tuple[str, list[str]]:
    sign, body = _format_gauss_factor(c)
    factors = [] if body == "1" else [body]
    if w:
        factors.append(f"E({w})")
    return sign, factors


def _join(parts: Sequence[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    out = []
    for idx, (sign, body) in enumerate(parts):
        if idx == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_scalar(s: ExpScalar) -> str:
    """Render a formal scalar in DSL syntax, e.g. ``3/2 + 2*E(1/2)``."""
    parts = []
    for w, c in s.terms:
        sign, factors = _format_scalar_term(w, c)
        parts.append((sign, "*".join(factors) if factors else "1"))
    return _join(parts)


def _format_linear(freq: Sequence[GaussRational], names: Sequence[str]) -> str:
    parts = []
    for l, name in zip(freq, names, strict=True):  # noqa: E741
        if not l:
            continue
        sign, body = _format_gauss_factor(l)
        parts.append((sign, name if body == "1" else f"{body}*{name}"))
    return _join(parts)


def default_names(d: int) -> list[str]:
    return [f"x{j + 1}" for j in range(d)]


def bivariate_names(d: int) -> list[str]:
    return [f"x{j + 1}" for j in range(d)] + [f"y{j + 1}" for j in range(d)]


def format_exppoly(f: ExpPoly, names: Sequence[str] | None = None) -> str:
    """Canonical DSL text of an ExpPoly; parsing it gives back the same value."""
    names = list(names) if names is not None else default_names(f.d)
    parts: list[tuple[str, str]] = []
    for freq, monomials in f.terms:
        exp_factor = f"exp({_format_linear(freq, names)})" if any(freq) else None
        for alpha, coeff in monomials:
            mono = [
                name if a == 1 else f"{name}^{a}" for name, a in zip(names, alpha, strict=True) if a
            ]
            if exp_factor:
                mono.append(exp_factor)
            if coeff.is_unit:
                sign, factors = _format_scalar_term(*coeff.terms[0])
            else:
                sign, factors = "+", [f"({format_scalar(coeff)})"]
            body_factors = factors + mono
            parts.append((sign, "*".join(body_factors) if body_factors else "1"))
    return _join(parts)

