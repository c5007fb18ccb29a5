"""Pydantic models and error codes of the command-line front end."""

from .error_codes import ErrorCode, ExitCode, exit_code_for, to_error_code
from .reports import (
    AssertionResult,
    BarcodePayload,
    DegreeStatsPayload,
    ErrorInfo,
    ReductionStatsPayload,
    RunReport,
)

__all__ = [
    # Error codes
    "ErrorCode",
    "ExitCode",
    "exit_code_for",
    "to_error_code",
    # Report models
    "AssertionResult",
    "BarcodePayload",
    "DegreeStatsPayload",
    "ErrorInfo",
    "ReductionStatsPayload",
    "RunReport",
]
