"""Errors raised while analyzing game logs."""


class AnalysisError(Exception):
    """Base class for analysis errors."""

    pass


class EmptyInputError(AnalysisError):
    """Raised when there are no usable logs or turns to analyze."""

    pass
