"""Deterministic error codes and exit codes for the command-line front end."""

from enum import Enum, IntEnum

from errors import (
    BudgetExceededError,
    CertificateReplayError,
    CollapseStuckError,
    CompatibilityError,
    GenericityError,
    GradientError,
    InputError,
    InvalidParameterError,
    MergeHypothesisError,
    MetricAxiomError,
    MetricParseError,
    NoApexError,
    NotATreeMetricError,
    NumericModeError,
    PreconditionError,
    ThresholdError,
    TreeStructureError,
)


class ErrorCode(str, Enum):
    """Error codes written into run reports.

    The prefix tells a caller what to do next:
    - input.*: fix the file or the flags
    - precondition.*: the input is valid but the construction does not apply
    - gradient.*: a construction produced something that failed its own checks
    - budget.*: shrink the input or raise the budget
    """

    # Input errors (exit 2)
    PARSE_ERROR = "input.parse"
    METRIC_AXIOM = "input.metric_axiom"
    TREE_STRUCTURE = "input.tree_structure"
    INVALID_PARAMETER = "input.invalid_parameter"
    IO_ERROR = "input.io"

    # Precondition errors (exit 2)
    NOT_A_TREE_METRIC = "precondition.not_a_tree_metric"
    GENERICITY = "precondition.genericity"
    COMPATIBILITY = "precondition.compatibility"
    THRESHOLD = "precondition.threshold"
    NUMERIC_MODE = "precondition.numeric_mode"
    NO_APEX = "precondition.no_apex"
    PRECONDITION = "precondition.failed"

    # Gradient errors (exit 1)
    MERGE_HYPOTHESIS = "gradient.merge_hypothesis"
    COLLAPSE_STUCK = "gradient.collapse_stuck"
    CERTIFICATE_REPLAY = "gradient.certificate_replay"
    INVALID_GRADIENT = "gradient.invalid"

    # Budget (exit 3)
    BUDGET_EXCEEDED = "budget.exceeded"

    # Assertions and the rest (exit 1)
    ASSERTION_FAILED = "assertion.failed"
    UNKNOWN_ERROR = "error.unknown"


class ExitCode(IntEnum):
    OK = 0
    ASSERTION_FAILED = 1
    INPUT_ERROR = 2
    BUDGET_EXCEEDED = 3


# Most specific classes first
_CODES: list[tuple[type, ErrorCode]] = [
    (MetricParseError, ErrorCode.PARSE_ERROR),
    (MetricAxiomError, ErrorCode.METRIC_AXIOM),
    (TreeStructureError, ErrorCode.TREE_STRUCTURE),
    (InvalidParameterError, ErrorCode.INVALID_PARAMETER),
    (InputError, ErrorCode.INVALID_PARAMETER),
    (NotATreeMetricError, ErrorCode.NOT_A_TREE_METRIC),
    (GenericityError, ErrorCode.GENERICITY),
    (CompatibilityError, ErrorCode.COMPATIBILITY),
    (ThresholdError, ErrorCode.THRESHOLD),
    (NumericModeError, ErrorCode.NUMERIC_MODE),
    (NoApexError, ErrorCode.NO_APEX),
    (PreconditionError, ErrorCode.PRECONDITION),
    (MergeHypothesisError, ErrorCode.MERGE_HYPOTHESIS),
    (CollapseStuckError, ErrorCode.COLLAPSE_STUCK),
    (CertificateReplayError, ErrorCode.CERTIFICATE_REPLAY),
    (GradientError, ErrorCode.INVALID_GRADIENT),
    (BudgetExceededError, ErrorCode.BUDGET_EXCEEDED),
    (OSError, ErrorCode.IO_ERROR),
    (ValueError, ErrorCode.INVALID_PARAMETER),
]


def to_error_code(exc: BaseException) -> ErrorCode:
    """Map an exception raised by a command onto its error code.

    Args:
        exc: Exception caught at the command boundary

    Returns:
        ErrorCode: The code of the most specific matching class, else UNKNOWN_ERROR
    """
    for cls, code in _CODES:
        if isinstance(exc, cls):
            return code
    return ErrorCode.UNKNOWN_ERROR


def exit_code_for(code: ErrorCode) -> ExitCode:
    """Process exit code for an error code, decided by its prefix."""
    if code.value.startswith("input.") or code.value.startswith("precondition."):
        return ExitCode.INPUT_ERROR
    if code.value.startswith("budget."):
        return ExitCode.BUDGET_EXCEEDED
    return ExitCode.ASSERTION_FAILED
