"""Errors raised while running, persisting and replaying games."""


class ArenaError(Exception):
    """Base class for arena errors."""

    pass


class MalformedLogError(ArenaError):
    """Raised when a game log cannot be read or is structurally invalid."""

    pass


class DivergenceDetectedError(ArenaError):
    """Raised when replaying a log does not reproduce what the log recorded."""

    def __init__(self, message: str, turn_number: int, field: str) -> None:
        super().__init__(message)
        self.turn_number = turn_number
        self.field = field
