"""
Agent abstraction and scripted agents.

Every agent turns a GameState (plus a summary of the previous turn) into an
AgentDecision. Scripted agents are pure: the same agent asked about the same
state always answers the same way.
"""

import logging
import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from ..config.constants import (
    DEFAULT_SEARCH_DEPTH,
    DEFAULT_SEARCH_NODE_BUDGET,
    RANDOM_REASON,
)
from ..config.providers import LlmAgentConfig, ProviderConfigurationError
from ..engine import (
    Action,
    GameState,
    Player,
    apply_move,
    final_scores,
    legal_actions,
    mix_seed,
    state_hash,
)
from .errors import DecisionBudgetExceededError, InvalidAgentSpecError, NoLegalActionsError

logger = logging.getLogger(__name__)


class AgentKind(Enum):
    RANDOM = "Random"
    GREEDY = "Greedy"
    SEARCH = "Search"
    LLM = "Llm"


@dataclass(frozen=True)
class AgentSpec:
    """
    Declarative description of an agent as written in the run configuration.

    depth is only meaningful for Search agents and llm only for Llm agents.
    """

    kind: AgentKind
    name: str
    seed: Optional[int] = None
    depth: Optional[int] = None
    llm: Optional[LlmAgentConfig] = None

    def validate(self) -> None:
        """
        Check that kind-specific fields are present exactly when required.

        Raises:
            InvalidAgentSpecError: If the spec cannot describe a playable agent
        """
        if not isinstance(self.name, str) or not self.name.strip():
            raise InvalidAgentSpecError("Agent name must be a non-empty string")
        if self.seed is not None and (isinstance(self.seed, bool) or not isinstance(self.seed, int)):
            raise InvalidAgentSpecError(f"Agent '{self.name}': seed must be an integer")
        if self.kind is AgentKind.SEARCH:
            if isinstance(self.depth, bool) or not isinstance(self.depth, int) or self.depth < 1:
                raise InvalidAgentSpecError(
                    f"Agent '{self.name}': Search depth must be a positive integer"
                )
        elif self.depth is not None:
            raise InvalidAgentSpecError(f"Agent '{self.name}': depth is only valid for Search")
        if self.kind is AgentKind.LLM:
            if self.llm is None:
                raise InvalidAgentSpecError(f"Agent '{self.name}': Llm agents need an llm config")
        elif self.llm is not None:
            raise InvalidAgentSpecError(f"Agent '{self.name}': llm is only valid for Llm agents")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "name": self.name, "seed": self.seed}
        if self.depth is not None:
            data["depth"] = self.depth
        if self.llm is not None:
            # LlmAgentConfig only carries the env var name, never the key
            data["llm"] = self.llm.to_dict()
        return data

    @classmethod
    def from_dict(
        cls,
        data: Dict[str, Any],
        name: Optional[str] = None,
        llm_defaults: Optional[LlmAgentConfig] = None,
    ) -> "AgentSpec":
        """
        Build an AgentSpec from a JSON object.

        Args:
            data: Object with kind and optional seed, depth and llm fields
            name: Name to use when the object has no "name" field
            llm_defaults: Base values for Llm agents' llm settings

        Raises:
            InvalidAgentSpecError: If the object is malformed
        """
        if not isinstance(data, dict):
            raise InvalidAgentSpecError("Agent specification must be an object")
        unknown = sorted(set(data) - {"kind", "name", "seed", "depth", "llm"})
        if unknown:
            raise InvalidAgentSpecError(f"Unknown agent settings: {', '.join(unknown)}")
        try:
            kind = AgentKind(data.get("kind"))
        except ValueError:
            raise InvalidAgentSpecError(
                f"Agent kind must be one of {', '.join(k.value for k in AgentKind)}, "
                f"got {data.get('kind')!r}"
            ) from None

        depth = data.get("depth")
        if kind is AgentKind.SEARCH and depth is None:
            depth = DEFAULT_SEARCH_DEPTH

        llm = None
        if kind is AgentKind.LLM:
            try:
                llm = LlmAgentConfig.from_dict(data.get("llm") or {}, base=llm_defaults)
            except ProviderConfigurationError as e:
                raise InvalidAgentSpecError(f"Agent '{data.get('name', name)}': {e}") from e
        elif "llm" in data:
            raise InvalidAgentSpecError("llm is only valid for Llm agents")

        spec = cls(
            kind=kind,
            name=data.get("name", name),
            seed=data.get("seed"),
            depth=depth,
            llm=llm,
        )
        spec.validate()
        return spec


@dataclass(frozen=True)
class Exchange:
    """One prompt/response round trip with an LLM endpoint."""

    attempt: int
    prompt: str
    response: Optional[str]
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "attempt": self.attempt,
            "prompt": self.prompt,
            "response": self.response,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Exchange":
        return cls(
            attempt=int(data["attempt"]),
            prompt=data["prompt"],
            response=data.get("response"),
            error=data.get("error"),
        )


@dataclass(frozen=True)
class AgentDecision:
    """An action together with the agent's explanation of it."""

    reason: str
    action: Action
    fallback_used: bool = False
    attempts: int = 1
    exchanges: Tuple[Exchange, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class TurnSummary:
    """What the previous turn looked like, as shown to the next mover."""

    mover: Player
    action: Action
    reason: str
    points_delta: int

    @property
    def position(self) -> int:
        """The action's pit counted 1-5 along the mover's own row."""
        return self.mover.pits.index(self.action.pit) + 1

    def render(self) -> str:
        return (
            f"Player {self.mover.value} scattered position {self.position} "
            f"({self.action.direction.value}) and captured {self.points_delta} points. "
            f"Their reasoning: {self.reason}"
        )


def derive_agent_seed(game_seed: int, side: Player, spec_seed: Optional[int]) -> int:
    """Seed for one agent in one game: independent of every other agent's stream."""
    return mix_seed(game_seed, side.index, spec_seed or 0)


class Agent(ABC):
    """Base class for everything that can play a turn."""

    def __init__(self, spec: AgentSpec, seed: Optional[int] = None) -> None:
        self.spec = spec
        self.seed = seed if seed is not None else (spec.seed or 0)

    @property
    def name(self) -> str:
        return self.spec.name

    def decide(self, state: GameState, history: Optional[TurnSummary] = None) -> AgentDecision:
        """
        Choose a legal action for the player to move.

        Args:
            state: Position to decide in
            history: Summary of the previous turn, None on the first move

        Returns:
            AgentDecision: The chosen action and its reason

        Raises:
            NoLegalActionsError: If the game is over or the mover cannot move
        """
        if state.is_finished:
            raise NoLegalActionsError(f"{self.name} was asked to move in a finished game")
        legal = legal_actions(state)
        if not legal:
            raise NoLegalActionsError(
                f"{self.name} has no legal actions on turn {state.turn_number}"
            )
        decision = self._choose(state, legal, history)
        logger.debug(
            f"{self.name} chose {decision.action} on turn {state.turn_number}"
            f" (attempts={decision.attempts}, fallback={decision.fallback_used})"
        )
        return decision

    @abstractmethod
    def _choose(
        self,
        state: GameState,
        legal: Tuple[Action, ...],
        history: Optional[TurnSummary],
    ) -> AgentDecision:
        """Pick one of legal; legal is non-empty and in canonical order."""


class RandomAgent(Agent):
    """Uniform choice over legal actions, seeded per (agent seed, state)."""

    def _choose(self, state, legal, history):
        rng = random.Random(mix_seed(self.seed, state_hash(state)))
        return AgentDecision(reason=RANDOM_REASON, action=rng.choice(legal))


class GreedyAgent(Agent):
    """Takes the action capturing the most points right now."""

    def _choose(self, state, legal, history):
        value = state.config.mandarin_point_value
        best_action, best_points = legal[0], -1
        for action in legal:
            _, outcome = apply_move(state, action)
            points = outcome.points(value)
            if points > best_points:
                best_action, best_points = action, points
        return AgentDecision(
            reason=f"greedy: {best_action} captures {best_points} points now",
            action=best_action,
        )


class SearchAgent(Agent):
    """
    Depth-limited alpha-beta search over the score differential.

    Finished positions are scored by final_scores, end-of-game sweep
    included. Unfinished ones at the depth cutoff are scored by captured
    points, the mover's ledger minus the opponent's, so while no move ends
    the game a one-ply search picks exactly what GreedyAgent picks. Ties keep
    the first action in canonical order.
    """

    def __init__(
        self,
        spec: AgentSpec,
        seed: Optional[int] = None,
        node_budget: int = DEFAULT_SEARCH_NODE_BUDGET,
    ) -> None:
        super().__init__(spec, seed)
        self.depth = spec.depth or DEFAULT_SEARCH_DEPTH
        self.node_budget = node_budget
        self._nodes = 0

    def _choose(self, state, legal, history):
        self._nodes = 0
        best_action, best_value = legal[0], -math.inf
        alpha = -math.inf
        for action in legal:
            child = self._expand(state, action)
            value = -self._negamax(child, self.depth - 1, -math.inf, -alpha)
            if value > best_value:
                best_action, best_value = action, value
            alpha = max(alpha, value)
        logger.debug(f"{self.name} searched {self._nodes} nodes at depth {self.depth}")
        return AgentDecision(
            reason=f"search depth {self.depth}: {best_action} value {int(best_value):+d}",
            action=best_action,
        )

    def _expand(self, state: GameState, action: Action) -> GameState:
        self._nodes += 1
        if self._nodes > self.node_budget:
            raise DecisionBudgetExceededError(
                f"{self.name} exceeded its budget of {self.node_budget} search nodes"
            )
        child, _ = apply_move(state, action)
        return child

    def _negamax(self, state: GameState, depth: int, alpha: float, beta: float) -> float:
        if depth == 0 or state.is_finished:
            return self._evaluate(state)
        best = -math.inf
        for action in legal_actions(state):
            value = -self._negamax(self._expand(state, action), depth - 1, -beta, -alpha)
            best = max(best, value)
            alpha = max(alpha, value)
            if alpha >= beta:
                break
        return best

    @staticmethod
    def _evaluate(state: GameState) -> int:
        mover = state.current_player
        if state.is_finished:
            scores = final_scores(state)
            return scores[mover] - scores[mover.opponent]
        value = state.config.mandarin_point_value
        return state.ledger(mover).points(value) - state.ledger(mover.opponent).points(value)


def create_agent(spec: AgentSpec, seed: Optional[int] = None, chat_session: Any = None) -> Agent:
    """
    Create an agent from its specification.

    Args:
        spec: Agent specification
        seed: Effective seed; defaults to spec.seed
        chat_session: Chat backend for Llm agents; created from spec.llm if None

    Returns:
        Agent: Ready to decide
    """
    spec.validate()
    if spec.kind is AgentKind.RANDOM:
        return RandomAgent(spec, seed)
    if spec.kind is AgentKind.GREEDY:
        return GreedyAgent(spec, seed)
    if spec.kind is AgentKind.SEARCH:
        return SearchAgent(spec, seed)

    from .llm import LlmAgent

    return LlmAgent(spec, seed, chat_session=chat_session)


def decide(
    spec: AgentSpec, state: GameState, history: Optional[TurnSummary] = None
) -> AgentDecision:
    """Decide once with a freshly created agent."""
    return create_agent(spec).decide(state, history)
