"""
LLM Agent Implementation.

Builds the decision prompt from the game state, the previous turn and the
agent's persona, sends it to a chat-completions endpoint, and turns the
answer into a legal action. Unusable answers are retried with a note about
what went wrong; when retries run out a seeded random legal action is played
and the decision is flagged as a fallback.
"""

import json
import logging
import random
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, List, Optional, Tuple, Union

from ..config.constants import FALLBACK_REASON_MAX_CHARS, FIRST_MOVE_HISTORY
from ..config.providers import LlmAgentConfig, Persona, ProviderFactory
from ..engine import (
    Action,
    Direction,
    GameState,
    PitKind,
    begin_turn,
    legal_actions,
    mix_seed,
    pit_owner,
    state_hash,
)
from ..utils.logging import CONVERSATION_LOGGER_NAME
from .base import Agent, AgentDecision, AgentSpec, Exchange, TurnSummary
from .errors import NoLegalActionsError
from .prompts import (
    DECISION_PLACEHOLDERS,
    DECISION_TEMPLATE,
    GAME_STATE_PLACEHOLDER,
    HISTORY_PLACEHOLDER,
    OUTPUT_FORMAT_INSTRUCTION,
    PERSONA_PLACEHOLDER,
    RETRY_NOTE_TEMPLATE,
    RULES_PLACEHOLDER,
    RULES_TEXT,
)
from .session import ChatBackend

logger = logging.getLogger(__name__)
conversation_logger = logging.getLogger(CONVERSATION_LOGGER_NAME)

EMPTY_RESPONSE_REASON = "(empty response)"
DECISION_FIELDS = ("reason", "position", "direction")

_PLACEHOLDER_PATTERN = re.compile("|".join(re.escape(p) for p in DECISION_PLACEHOLDERS))


def render_state(state: GameState) -> str:
    """
    Render a state as stable key=value lines.

    One line per pit (index, side, kind, mover-relative position, peasants,
    Mandarin flag), then both ledgers, the player to move, turn and round.
    """
    lines = []
    for index, pit in enumerate(state.board.pits):
        owner = pit_owner(index)
        if pit.kind is PitKind.QUAN:
            side, position = "Quan", "-"
        else:
            side, position = owner.value, str(owner.pits.index(index) + 1)
        lines.append(
            f"pit={index} side={side} kind={pit.kind.value} position={position} "
            f"peasants={pit.peasants} mandarin={'yes' if pit.has_mandarin else 'no'}"
        )
    value = state.config.mandarin_point_value
    for player, ledger in zip(("A", "B"), state.captured):
        lines.append(
            f"captured player={player} peasants={ledger.peasants} "
            f"mandarins={ledger.mandarins} points={ledger.points(value)}"
        )
    lines.append(f"current_player={state.current_player.value}")
    lines.append(f"turn={state.turn_number}")
    lines.append(f"round={state.round_number}")
    return "\n".join(lines)


@dataclass(frozen=True)
class PromptBundle:
    """The four texts substituted into the decision template."""

    game_state_text: str
    history_text: str
    rules_text: str
    persona_text: str

    @classmethod
    def from_state(
        cls, state: GameState, history: Optional[TurnSummary], persona: Persona
    ) -> "PromptBundle":
        """Assemble a bundle; the board is shown after any forced redistribution."""
        prepared, _ = begin_turn(state)
        return cls(
            game_state_text=render_state(prepared),
            history_text=history.render() if history is not None else FIRST_MOVE_HISTORY,
            rules_text=RULES_TEXT,
            persona_text=persona.instruction,
        )


def build_prompt(bundle: PromptBundle) -> str:
    """Fill the decision template and append the answer-format instruction."""
    values = {
        PERSONA_PLACEHOLDER: bundle.persona_text,
        GAME_STATE_PLACEHOLDER: bundle.game_state_text,
        HISTORY_PLACEHOLDER: bundle.history_text or FIRST_MOVE_HISTORY,
        RULES_PLACEHOLDER: bundle.rules_text,
    }
    # Single pass, so placeholder-like text inside a slot is left alone
    body = _PLACEHOLDER_PATTERN.sub(lambda match: values[match.group(0)], DECISION_TEMPLATE)
    return body + "\n" + OUTPUT_FORMAT_INSTRUCTION


class ParseFailureKind(Enum):
    MISSING_BLOCK = "MissingBlock"
    MALFORMED_FIELDS = "MalformedFields"
    OUT_OF_RANGE = "OutOfRange"
    ILLEGAL_ACTION = "IllegalAction"


@dataclass(frozen=True)
class ParseFailure:
    kind: ParseFailureKind
    message: str

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.message}"


def _last_block(raw: str) -> Optional[dict]:
    decoder = json.JSONDecoder()
    found = None
    for match in re.finditer(r"\{", raw):
        try:
            obj, _ = decoder.raw_decode(raw, match.start())
        except ValueError:
            continue
        if isinstance(obj, dict) and any(key in obj for key in DECISION_FIELDS):
            found = obj
    return found


def parse_decision(raw: Optional[str], state: GameState) -> Union[AgentDecision, ParseFailure]:
    """
    Extract the last JSON action block from a model answer.

    Args:
        raw: Model output
        state: State the answer refers to

    Returns:
        AgentDecision for a usable legal answer, otherwise a ParseFailure
        saying whether the block was missing, malformed, out of range or
        illegal
    """
    block = _last_block(raw or "")
    if block is None:
        return ParseFailure(ParseFailureKind.MISSING_BLOCK, "no JSON object with the answer fields")

    reason = block.get("reason")
    position = block.get("position")
    direction = block.get("direction")
    if not isinstance(reason, str):
        return ParseFailure(ParseFailureKind.MALFORMED_FIELDS, "'reason' must be a string")
    if isinstance(position, bool) or not isinstance(position, int):
        return ParseFailure(ParseFailureKind.MALFORMED_FIELDS, "'position' must be an integer")
    if not isinstance(direction, str) or direction.strip().upper() not in ("LTR", "RTL"):
        return ParseFailure(ParseFailureKind.MALFORMED_FIELDS, "'direction' must be LTR or RTL")
    if not 1 <= position <= 5:
        return ParseFailure(
            ParseFailureKind.OUT_OF_RANGE, f"position {position} is outside 1-5"
        )

    mover = state.current_player
    action = Action(mover.pits[position - 1], Direction(direction.strip().upper()))
    if action not in legal_actions(state):
        return ParseFailure(
            ParseFailureKind.ILLEGAL_ACTION,
            f"position {position} {action.direction.value} is not legal, the pit is empty",
        )
    return AgentDecision(reason=reason, action=action)


def _fallback_reason(raw: Optional[str]) -> str:
    if raw is None or not raw.strip():
        return EMPTY_RESPONSE_REASON
    return raw.strip()[:FALLBACK_REASON_MAX_CHARS]


def llm_decide(
    config: LlmAgentConfig,
    state: GameState,
    history: Optional[TurnSummary] = None,
    session: Optional[ChatBackend] = None,
    seed: int = 0,
) -> AgentDecision:
    """
    Ask an LLM for a move, retrying unusable answers.

    Args:
        config: Endpoint, retry and persona settings
        state: Position to decide in
        history: Previous turn, None on the first move
        session: Chat backend; created from config if None
        seed: Seed for the fallback choice

    Returns:
        AgentDecision: Always a legal action; fallback_used marks a random one

    Raises:
        NoLegalActionsError: If the mover has no legal action
        TransportError: If the endpoint fails
    """
    legal = legal_actions(state)
    if not legal:
        raise NoLegalActionsError(f"No legal actions on turn {state.turn_number}")
    session = session or ProviderFactory.create_chat_session(config)

    prompt = build_prompt(PromptBundle.from_state(state, history, config.persona))
    request = prompt
    exchanges: List[Exchange] = []
    raw: Optional[str] = None

    for attempt in range(1, config.max_retries + 2):
        conversation_logger.debug(
            f"model={config.model_name} turn={state.turn_number} attempt={attempt} prompt:\n{request}"
        )
        raw = session.complete([{"role": "user", "content": request}])
        conversation_logger.debug(
            f"model={config.model_name} turn={state.turn_number} attempt={attempt} response:\n{raw}"
        )

        result = parse_decision(raw, state)
        if isinstance(result, AgentDecision):
            exchanges.append(Exchange(attempt, request, raw))
            return replace(result, attempts=attempt, exchanges=tuple(exchanges))

        exchanges.append(Exchange(attempt, request, raw, error=str(result)))
        logger.warning(
            f"Unusable answer from {config.model_name} on turn {state.turn_number} "
            f"(attempt {attempt}): {result}"
        )
        request = prompt + "\n\n" + RETRY_NOTE_TEMPLATE.format(error=result.message)

    rng = random.Random(mix_seed(seed, state_hash(state)))
    action = rng.choice(legal)
    logger.warning(
        f"{config.model_name} gave no usable answer in {len(exchanges)} attempts on turn "
        f"{state.turn_number}; playing random fallback {action}"
    )
    return AgentDecision(
        reason=_fallback_reason(raw),
        action=action,
        fallback_used=True,
        attempts=len(exchanges),
        exchanges=tuple(exchanges),
    )


class LlmAgent(Agent):
    """Agent backed by a chat-completions endpoint."""

    def __init__(
        self, spec: AgentSpec, seed: Optional[int] = None, chat_session: Any = None
    ) -> None:
        super().__init__(spec, seed)
        self.config: LlmAgentConfig = spec.llm
        self.session: ChatBackend = chat_session or ProviderFactory.create_chat_session(spec.llm)

    def _choose(
        self, state: GameState, legal: Tuple[Action, ...], history: Optional[TurnSummary]
    ) -> AgentDecision:
        return llm_decide(self.config, state, history, session=self.session, seed=self.seed)
