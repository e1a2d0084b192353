"""Exception types shared across the library."""


class OneCenterError(Exception):
    """Base class for all library errors."""


class ArgumentError(OneCenterError, ValueError):
    """An argument is malformed or out of its documented range."""


class UnsupportedFractionError(ArgumentError):
    """The requested weight fraction is outside what the solver supports."""


class DegenerateInputError(OneCenterError):
    """The input admits no meaningful answer (e.g. an empty membership set)."""


class ConvergenceError(OneCenterError):
    """An iterative routine hit its iteration cap before reaching tolerance.

    Carries the best estimate seen so far in ``best_estimate``.
    """

    def __init__(self, message: str, best_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate


class ParseError(OneCenterError, ValueError):
    """An input file is malformed; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
