"""
Agent Module

Agent specifications, scripted agents (Random, Greedy, Search) and the
LLM-backed agent with its prompt builder, answer parser and chat session.
"""

from .base import (
    Agent,
    AgentDecision,
    AgentKind,
    AgentSpec,
    Exchange,
    GreedyAgent,
    RandomAgent,
    SearchAgent,
    TurnSummary,
    create_agent,
    decide,
    derive_agent_seed,
)
from .errors import (
    AgentError,
    DecisionBudgetExceededError,
    InvalidAgentSpecError,
    NoLegalActionsError,
    TransportError,
)
from .llm import (
    LlmAgent,
    ParseFailure,
    ParseFailureKind,
    PromptBundle,
    build_prompt,
    llm_decide,
    parse_decision,
    render_state,
)
from .session import ChatBackend, ChatSession, configure_in_flight_limit

__all__ = [
    "Agent",
    "AgentDecision",
    "AgentKind",
    "AgentSpec",
    "Exchange",
    "GreedyAgent",
    "RandomAgent",
    "SearchAgent",
    "TurnSummary",
    "create_agent",
    "decide",
    "derive_agent_seed",
    "AgentError",
    "DecisionBudgetExceededError",
    "InvalidAgentSpecError",
    "NoLegalActionsError",
    "TransportError",
    "LlmAgent",
    "ParseFailure",
    "ParseFailureKind",
    "PromptBundle",
    "build_prompt",
    "llm_decide",
    "parse_decision",
    "render_state",
    "ChatBackend",
    "ChatSession",
    "configure_in_flight_limit",
]
