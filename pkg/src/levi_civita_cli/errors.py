"""Exception hierarchy for the workbench.

Checks that fail return verdicts; these exceptions are reserved for inputs
an operation cannot be applied to.
"""


class WorkbenchError(ValueError):
    """Base class for all workbench errors."""


class DimensionMismatch(WorkbenchError):
    """Operands live on spaces of different dimension."""

    def __init__(self, expected: int, actual: int, what: str = "operand"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {actual}")


class SingularMatrix(WorkbenchError):
    """A matrix that must be inverted has zero determinant."""


class HypothesisViolation(WorkbenchError):
    """A matrix required to be invertible by the chosen theorem profile is singular."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        self.pair = pair
        super().__init__(message)


class PreconditionViolation(WorkbenchError):
    """Inputs do not satisfy an operation's precondition."""


class NotTranslationInvariant(WorkbenchError):
    """A supplied subspace is not closed under translations."""


class NonFiniteValue(WorkbenchError):
    """Floating-point evaluation produced inf or nan."""


class IllConditioned(WorkbenchError):
    """A least-squares system is too badly conditioned to trust."""

    def __init__(self, condition: float, threshold: float):
        self.condition = condition
        self.threshold = threshold
        super().__init__(
            f"Normal system condition estimate {condition:.3e} exceeds {threshold:.1e}"
        )


class ParseError(WorkbenchError):
    """Expression text does not match the DSL grammar."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class DimensionExceeded(WorkbenchError):
    """A variable index exceeds the pinned dimension."""

    def __init__(self, index: int, dim: int):
        self.index = index
        self.dim = dim
        super().__init__(f"Variable x{index} exceeds pinned dimension {dim}")


class ReductionUnsound(WorkbenchError):
    """A reduced instance failed the membership it must satisfy (internal bug)."""
