"""Exception hierarchy shared by the library and the CLI.

Every exception carries a readable message plus structured attributes so the
CLI can map it onto an error code and a report entry without parsing text.
"""

from typing import Any, Optional, Sequence


class RipsCollapseError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context


# === Input Errors ===

class InputError(RipsCollapseError):
    """Input could not be turned into a valid object."""


class MetricParseError(InputError):
    """Distance matrix or tree file text does not parse."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}", line=line, column=column)
        self.line = line
        self.column = column


class MetricAxiomError(InputError):
    """A metric axiom fails; `points` names the offending pair or triple."""

    def __init__(self, message: str, points: Sequence[str]):
        super().__init__(message, points=list(points))
        self.points = tuple(points)


class TreeStructureError(InputError):
    """Edge list does not describe a positively weighted tree."""


class InvalidParameterError(InputError):
    """A caller-supplied parameter is out of range."""


# === Precondition Errors ===

class PreconditionError(RipsCollapseError):
    """A construction was called on input it is not defined for."""


class NotATreeMetricError(PreconditionError):
    """The space is not the vertex metric of a weighted tree."""


class GenericityError(PreconditionError):
    """Two distinct pairs share a distance where distinct distances are required."""

    def __init__(self, message: str, pair_a: tuple[int, int], pair_b: tuple[int, int]):
        super().__init__(message, pair_a=pair_a, pair_b=pair_b)
        self.pair_a = pair_a
        self.pair_b = pair_b


class CompatibilityError(PreconditionError):
    """A vertex order does not extend the rooted tree order."""


class ThresholdError(PreconditionError):
    """A scale parameter lies below the guaranteed collapse threshold."""


class NumericModeError(PreconditionError):
    """The numeric mode cannot support the requested construction."""


class NoApexError(PreconditionError):
    """No cone apex exists for a stratum."""

    def __init__(self, message: str, index: int, level: Optional[int] = None):
        super().__init__(message, index=index, level=level)
        self.index = index
        self.level = level


# === Gradient Errors ===

class GradientError(RipsCollapseError):
    """A gradient, matching or certificate is malformed."""


class MergeHypothesisError(GradientError):
    """The union-of-gradients hypotheses fail at `simplex`."""

    def __init__(self, message: str, simplex: tuple[int, ...], parts: tuple[int, ...]):
        super().__init__(message, simplex=simplex, parts=parts)
        self.simplex = simplex
        self.parts = parts


class CollapseStuckError(GradientError):
    """No free matched pair remains but the target subcomplex is not reached."""

    def __init__(self, message: str, remaining: Sequence[tuple[int, ...]]):
        super().__init__(message, remaining=list(remaining))
        self.remaining = tuple(remaining)


class CertificateReplayError(GradientError):
    """A certificate step is not an elementary collapse of the live complex."""

    def __init__(self, message: str, step: int):
        super().__init__(message, step=step)
        self.step = step


# === Budget ===

class BudgetExceededError(RipsCollapseError):
    """A size guard refused to materialize an object."""

    def __init__(self, message: str, limit: int, requested: int):
        super().__init__(message, limit=limit, requested=requested)
        self.limit = limit
        self.requested = requested
