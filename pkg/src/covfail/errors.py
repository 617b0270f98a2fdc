"""Exception types shared across the package."""


class CovfailError(Exception):
    pass


class FenceInvalid(CovfailError, ValueError):
    """The fence is not a simple cycle of adjacent nodes."""

    def __init__(self, message: str, problems: list[str] | None = None):
        super().__init__(message)
        self.problems = problems or [message]


class FenceGapError(FenceInvalid):
    """Two consecutive fence nodes are out of broadcast range."""


class FenceRemovalError(CovfailError, ValueError):
    pass


class UnknownVertex(CovfailError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else "unknown vertex"


class IncidenceError(CovfailError, ValueError):
    """A simplex cannot be moved past one of its cofaces."""


class BlockError(CovfailError, ValueError):
    """A transposition would break the fence / 1-skeleton / triangle blocks."""


class InvariantBreach(CovfailError, RuntimeError):
    pass


class BudgetExceeded(CovfailError, RuntimeError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class TooLarge(CovfailError, ValueError):
    pass


class BaselineFailure(CovfailError, RuntimeError):
    pass


class AlreadyDead(CovfailError, ValueError):
    pass


class OutOfOrderEvent(CovfailError, ValueError):
    pass


class DegenerateGraph(CovfailError, ValueError):
    pass


class ParseError(CovfailError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
