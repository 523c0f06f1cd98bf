"""Domain errors. Each carries a stable ``code`` used in CLI error objects."""

from __future__ import annotations


class PTBrachError(ValueError):
    code = "DOMAIN_ERROR"

    def __init__(self, message: str, *, tag: str | None = None):
        super().__init__(message)
        self.tag = tag

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        if self.tag is not None:
            out["tag"] = self.tag
        return out


class ZeroVectorError(PTBrachError):
    code = "ZERO_VECTOR"


class ParallelStatesError(PTBrachError):
    code = "PARALLEL_STATES"


class BadGapError(PTBrachError):
    code = "BAD_GAP"


class UnreachableError(PTBrachError):
    code = "UNREACHABLE"


class BadSpecError(PTBrachError):
    code = "BAD_SPEC"


class BrokenPTError(PTBrachError):
    """Raised outside the unbroken region; ``tag == "EXCEPTIONAL"`` on the boundary."""

    code = "BROKEN_PT"


class NotPositiveError(PTBrachError):
    code = "NOT_POSITIVE"


class CompletionFailure(PTBrachError):
    code = "COMPLETION_FAILURE"


class StepTooLargeError(PTBrachError):
    code = "STEP_TOO_LARGE"


class NoClosureError(PTBrachError):
    code = "NO_CLOSURE"
