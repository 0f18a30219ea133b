"""
Exceptions raised across the benchmark.
Every class carries the CLI exit code it maps to.
"""

from pydantic import BaseModel


class ParseIssue(BaseModel):
    """
    One malformed input line
    """

    file: str
    line: int
    reason: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.reason}"


class LoanBenchError(Exception):
    exit_code: int = 1


class ConfigError(LoanBenchError):
    exit_code = 1


class DataError(LoanBenchError):
    exit_code = 2


class VintageParseError(DataError):

    def __init__(self, issues: list[ParseIssue]):
        self.issues = issues
        shown = "; ".join(str(issue) for issue in issues[:5])
        more = f" (+{len(issues) - 5} more)" if len(issues) > 5 else ""
        super().__init__(f"{len(issues)} malformed line(s): {shown}{more}")


class ResamplingError(DataError):
    pass


class FeatureSelectionError(DataError):
    pass


class EvaluationError(DataError):
    pass


class ModelError(LoanBenchError):
    exit_code = 2


class CapabilityError(ModelError):
    pass


class PipelineError(LoanBenchError):
    """
    Wraps a failure with the pipeline stage it happened in
    """

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 2)
        super().__init__(f"[{stage}] {cause}")


__all__ = [
    "ParseIssue",
    "LoanBenchError",
    "ConfigError",
    "DataError",
    "VintageParseError",
    "ResamplingError",
    "FeatureSelectionError",
    "EvaluationError",
    "ModelError",
    "CapabilityError",
    "PipelineError",
]
