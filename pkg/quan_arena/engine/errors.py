"""
Engine error hierarchy.

Every rule violation the engine can detect raises a subclass of EngineError
so callers can catch engine problems separately from I/O or agent failures.
"""


class EngineError(Exception):
    """Base class for all rules-engine errors."""

    pass


class InvalidConfigError(EngineError):
    """Raised when a RuleConfig holds values the engine cannot play with."""

    pass


class IllegalActionError(EngineError):
    """Raised when an action is not in legal_actions for the given state."""

    pass


class InvalidSourceError(EngineError):
    """Raised when a scatter is requested from a pit that cannot be scattered."""

    pass


class EmptySourceError(InvalidSourceError):
    """Raised when the scatter source pit holds no peasants."""

    pass


class QuanSourceError(InvalidSourceError):
    """Raised when the scatter source is a Quan pit."""

    pass


class GameFinishedError(EngineError):
    """Raised when an in-progress operation is called on a finished game."""

    pass


class GameNotFinishedError(EngineError):
    """Raised when scoring is requested before the game has ended."""

    pass


class StepBudgetExceededError(EngineError):
    """Raised when a single move emits more events than the step budget allows."""

    pass


class ConservationError(EngineError):
    """Raised when token totals drift from the initial 50 peasants / 2 Mandarins."""

    pass
