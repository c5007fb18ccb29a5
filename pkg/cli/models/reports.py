"""Pydantic models of the JSON reports written by the command-line front end."""

from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Number = Union[int, float]


class AssertionResult(BaseModel):
    """One checked claim of a command or verification pipeline."""

    name: str = Field(..., description="Stable identifier of the check")
    passed: bool = Field(..., description="Whether the check held")
    detail: str = Field("", description="Human-readable explanation, empty on success")
    witness: Optional[Any] = Field(None, description="Offending object on failure (simplices as name lists)")

    model_config = ConfigDict(
        json_schema_extra={
            "examples": [
                {"name": "gradient.acyclic", "passed": True, "detail": "", "witness": None},
                {
                    "name": "apparent.covers",
                    "passed": False,
                    "detail": "2 simplices of diameter in (14, 15] are critical",
                    "witness": [["b", "e"], ["b", "d", "e"]],
                },
            ]
        }
    )


class ErrorInfo(BaseModel):
    """Error raised before a command could finish."""

    error_code: str = Field(..., description="Deterministic error code, e.g. input.parse")
    detail: str = Field(..., description="Error message")
    exit_code: int = Field(..., description="Process exit code", ge=0, le=3)
    context: Optional[dict[str, Any]] = Field(None, description="Structured attributes of the error")

    model_config = ConfigDict(
        json_schema_extra={
            "examples": [
                {
                    "error_code": "input.metric_axiom",
                    "detail": "triangle inequality fails: d(a,b) = 3 > d(a,c) + d(c,b) = 2",
                    "exit_code": 2,
                    "context": {"points": ["a", "b", "c"]},
                }
            ]
        }
    )


class DegreeStatsPayload(BaseModel):
    columns: int = Field(..., ge=0)
    apparent_skipped: int = Field(..., ge=0)
    additions: int = Field(..., ge=0)
    critical: int = Field(..., ge=0)
    reduced: int = Field(..., ge=0)


class ReductionStatsPayload(DegreeStatsPayload):
    """Column accounting of a reduction, in total and per homological degree."""

    per_degree: dict[str, DegreeStatsPayload] = Field(default_factory=dict)

    model_config = ConfigDict(
        json_schema_extra={
            "examples": [
                {
                    "columns": 15,
                    "apparent_skipped": 12,
                    "additions": 0,
                    "critical": 3,
                    "reduced": 0,
                    "per_degree": {
                        "0": {"columns": 10, "apparent_skipped": 7, "additions": 0, "critical": 3, "reduced": 0},
                        "1": {"columns": 4, "apparent_skipped": 4, "additions": 0, "critical": 0, "reduced": 0},
                    },
                }
            ]
        }
    )


class BarcodePayload(BaseModel):
    """Intervals per degree; a null death is an infinite interval."""

    intervals: dict[str, list[list[Optional[Number]]]] = Field(default_factory=dict)
    zero_length: int = Field(0, description="Number of zero-length intervals left out", ge=0)

    model_config = ConfigDict(
        json_schema_extra={"examples": [{"intervals": {"0": [[0, 1], [0, 2], [0, None]], "1": []}, "zero_length": 4}]}
    )


class RunReport(BaseModel):
    """Report of one command invocation."""

    command: str = Field(..., description="Command name, with the pipeline for verify")
    input_digest: Optional[str] = Field(None, description="SHA-256 of the input bytes")
    parameters: dict[str, Any] = Field(default_factory=dict, description="Effective parameters")
    results: dict[str, Any] = Field(default_factory=dict, description="Command-specific payload")
    assertions: list[AssertionResult] = Field(default_factory=list)
    passed: bool = Field(True, description="True iff every assertion passed and no error occurred")
    error: Optional[ErrorInfo] = None
    wall_time: float = Field(0.0, description="Seconds spent in the command", ge=0)

    model_config = ConfigDict(
        json_schema_extra={
            "examples": [
                {
                    "command": "analyze",
                    "input_digest": "9f2c...",
                    "parameters": {"format": "tree", "mode": "rational"},
                    "results": {"delta": 0, "nu": 0.5, "threshold": 1, "levels": [0, 1, 2]},
                    "assertions": [],
                    "passed": True,
                    "error": None,
                    "wall_time": 0.004,
                }
            ]
        }
    )

    def add(self, assertion: AssertionResult) -> None:
        self.assertions.append(assertion)
        if not assertion.passed:
            self.passed = False
