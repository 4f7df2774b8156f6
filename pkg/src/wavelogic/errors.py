"""Exception types shared across the package."""


class WaveLogicError(Exception):
    """Base class for all errors raised by wavelogic."""


class CircuitError(WaveLogicError):
    """A constructor precondition was violated (bad arity, bad identifier, ...)."""


class ValidationError(WaveLogicError):
    """A circuit failed structural validation.

    Carries the full list of violations so callers can report all of them.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class EvaluationError(WaveLogicError):
    """An assignment does not cover the circuit, or is otherwise unusable."""


class InterferenceError(WaveLogicError):
    """A merge saw a zero pre-normalisation sum.

    Three unit phasors always sum to an odd value, so this is unreachable for
    valid circuits; raising instead of normalising keeps the model honest.
    """


class TableTooLargeError(WaveLogicError):
    """The variable count exceeds the exhaustive-enumeration cap."""


class ExprParseError(WaveLogicError):
    """Syntax error in the expression language, with a 1-based position."""

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class SoundnessError(WaveLogicError):
    """A rewrite rule failed its exhaustive certification."""


class StaleSiteError(WaveLogicError):
    """A match site was applied to a circuit it was not produced for."""


class RewriteError(WaveLogicError):
    """A rule application produced an invalid or inequivalent circuit."""


class BudgetError(WaveLogicError):
    """A rewriting budget was not a positive step count."""


class FileFormatError(WaveLogicError):
    """A circuit file is structurally malformed."""
