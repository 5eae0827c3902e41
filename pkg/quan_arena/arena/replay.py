"""
Replay verification.

Re-applies every recorded action through the engine and compares each
recorded field with what the engine produces. The first mismatch is
reported with its turn number and field name.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

from ..engine import (
    EngineError,
    GameState,
    RuleConfig,
    apply_move,
    final_scores,
    format_digest,
    new_game,
    state_hash,
    winner,
)
from .errors import DivergenceDetectedError
from .records import GameLog

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Divergence:
    turn_number: int
    field: str
    expected: Any
    recorded: Any

    def describe(self) -> str:
        return (
            f"turn {self.turn_number}: {self.field} differs "
            f"(engine {self.expected!r}, log {self.recorded!r})"
        )


@dataclass(frozen=True)
class ReplayReport:
    """Outcome of replaying one log."""

    game_id: str
    verified: bool
    turns_checked: int
    divergence: Optional[Divergence] = None
    # Step counts recomputed by the engine, one per replayed turn
    step_counts: Tuple[int, ...] = ()

    def describe(self) -> str:
        if self.verified:
            return f"{self.game_id}: verified ({self.turns_checked} turns)"
        return f"{self.game_id}: DIVERGED at {self.divergence.describe()}"


class _Diverged(Exception):
    def __init__(self, divergence: Divergence) -> None:
        super().__init__(divergence.describe())
        self.divergence = divergence


def _expect(turn_number: int, field: str, expected: Any, recorded: Any) -> None:
    if expected != recorded:
        raise _Diverged(Divergence(turn_number, field, expected, recorded))


def replay(
    log: GameLog,
    rule_config_override: Optional[RuleConfig] = None,
    strict: bool = False,
) -> ReplayReport:
    """
    Replay a game log and verify it turn by turn.

    Args:
        log: Log to verify
        rule_config_override: Rules to replay under instead of the header's
        strict: Raise on the first divergence instead of reporting it

    Returns:
        ReplayReport: verified flag, first divergence and recomputed step counts

    Raises:
        DivergenceDetectedError: On divergence when strict is set
    """
    config = rule_config_override or log.header.rule_config
    step_counts: List[int] = []
    state = new_game(config)
    try:
        for turn in log.turns:
            state = _replay_turn(state, turn, step_counts)
        _check_result(state, log)
    except _Diverged as e:
        report = ReplayReport(
            game_id=log.game_id,
            verified=False,
            turns_checked=len(step_counts),
            divergence=e.divergence,
            step_counts=tuple(step_counts),
        )
        logger.error(f"Replay of {report.describe()}")
        if strict:
            raise DivergenceDetectedError(
                report.describe(), e.divergence.turn_number, e.divergence.field
            ) from None
        return report

    logger.debug(f"Replay of {log.game_id} verified {len(step_counts)} turns")
    return ReplayReport(
        game_id=log.game_id,
        verified=True,
        turns_checked=len(step_counts),
        step_counts=tuple(step_counts),
    )


def _replay_turn(state: GameState, turn: Any, step_counts: List[int]) -> GameState:
    number = turn.turn_number
    if state.is_finished:
        raise _Diverged(Divergence(number, "status", state.status_tag, "InProgress"))
    _expect(number, "turn_number", state.turn_number, turn.turn_number)
    _expect(number, "round_number", state.round_number, turn.round_number)
    _expect(number, "mover", state.current_player, turn.mover)
    _expect(number, "board_before", state.board, turn.board_before)

    try:
        after, outcome = apply_move(state, turn.action)
    except EngineError as e:
        raise _Diverged(Divergence(number, "action", str(e), turn.action.to_dict())) from None
    step_counts.append(outcome.step_count)

    _expect(number, "board_after", after.board, turn.board_after)
    _expect(number, "ledgers_after", after.captured, turn.ledgers_after)
    _expect(number, "step_count", outcome.step_count, turn.step_count)
    _expect(number, "peasants_captured", outcome.peasants_captured, turn.peasants_captured)
    _expect(number, "mandarins_captured", outcome.mandarins_captured, turn.mandarins_captured)
    _expect(number, "state_hash_after", format_digest(state_hash(after)), turn.state_hash_after)
    return after


def _check_result(state: GameState, log: GameLog) -> None:
    result = log.result
    # Reported against the turn after the last one played
    number = state.turn_number
    if result.aborted:
        _expect(number, "status", "InProgress", state.status_tag)
        return
    _expect(number, "end_reason", state.end_reason, result.end_reason)
    if not state.is_finished:
        raise _Diverged(Divergence(number, "status", state.status_tag, "Finished"))
    scores = final_scores(state)
    _expect(number, "points", scores, result.points)
    _expect(number, "winner", winner(scores), result.winner)
    last_round = log.turns[-1].round_number if log.turns else 0
    _expect(number, "ending_round", last_round, result.ending_round)
