"""Errors raised while agents choose moves."""


class AgentError(Exception):
    """Base class for agent errors."""

    pass


class NoLegalActionsError(AgentError):
    """Raised when an agent is asked to move in a state without legal actions."""

    pass


class DecisionBudgetExceededError(AgentError):
    """Raised when a search agent visits more nodes than its budget allows."""

    pass


class TransportError(AgentError):
    """Raised when a chat-completions endpoint cannot be reached or fails."""

    pass


class InvalidAgentSpecError(AgentError, ValueError):
    """Raised when an agent specification is missing or has misplaced fields."""

    pass
