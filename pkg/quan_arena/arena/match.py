"""
Single-game runner.

run_game plays one seeded game between the two agents of a MatchConfig and
returns the complete GameLog. A transport failure ends the game early: the
turns played so far are kept and the result is marked aborted.
"""

import logging
import time
from typing import Dict, List, Mapping, Optional

from .. import __version__
from ..agent import (
    ChatBackend,
    TransportError,
    TurnSummary,
    create_agent,
    derive_agent_seed,
)
from ..engine import (
    GameState,
    Player,
    apply_move,
    final_scores,
    format_digest,
    new_game,
    state_hash,
    winner,
)
from ..utils.logging import correlation_scope, log_error_with_context, log_performance
from .records import GameHeader, GameLog, GameResult, MatchConfig, TurnRecord

logger = logging.getLogger(__name__)


def run_game(
    config: MatchConfig,
    game_index: int,
    sessions: Optional[Mapping[str, ChatBackend]] = None,
) -> GameLog:
    """
    Play one game.

    Args:
        config: Match configuration
        game_index: Index of the game within the match, in [0, games)
        sessions: Chat backends for Llm agents keyed by agent name; agents
            without one get a session created from their llm config

    Returns:
        GameLog: Header, every turn and the result

    Raises:
        ValueError: If game_index is out of range
    """
    if not 0 <= game_index < config.games:
        raise ValueError(f"game_index {game_index} is outside [0, {config.games})")
    sessions = sessions or {}
    game_id = config.game_id(game_index)
    seed = config.game_seed(game_index)
    players = config.players(game_index)
    header = GameHeader(
        game_id=game_id,
        game_index=game_index,
        seed=seed,
        rule_config=config.rule_config,
        players=players,
        version=__version__,
    )

    with correlation_scope(game_id):
        started = time.perf_counter()
        logger.info(
            f"Starting game {game_id}: A={players[Player.A].name} B={players[Player.B].name} "
            f"seed={seed}"
        )
        agents = {
            side: create_agent(
                spec,
                seed=derive_agent_seed(seed, side, spec.seed),
                chat_session=sessions.get(spec.name),
            )
            for side, spec in players.items()
        }

        state = new_game(config.rule_config)
        history: Optional[TurnSummary] = None
        turns: List[TurnRecord] = []
        value = config.rule_config.mandarin_point_value
        try:
            while not state.is_finished:
                mover = state.current_player
                decision = agents[mover].decide(state, history)
                after, outcome = apply_move(state, decision.action)
                turns.append(
                    TurnRecord(
                        turn_number=state.turn_number,
                        round_number=state.round_number,
                        mover=mover,
                        board_before=state.board,
                        action=decision.action,
                        reason=decision.reason,
                        fallback_used=decision.fallback_used,
                        attempts=decision.attempts,
                        step_count=outcome.step_count,
                        peasants_captured=outcome.peasants_captured,
                        mandarins_captured=outcome.mandarins_captured,
                        board_after=after.board,
                        ledgers_after=after.captured,
                        state_hash_after=format_digest(state_hash(after)),
                        exchanges=decision.exchanges,
                    )
                )
                history = TurnSummary(
                    mover=mover,
                    action=decision.action,
                    reason=decision.reason,
                    points_delta=outcome.points(value),
                )
                state = after
        except TransportError as e:
            log_error_with_context(
                logger, f"Game {game_id} aborted", e, turn=state.turn_number
            )
            result = GameResult(
                end_reason=None,
                points=None,
                winner=None,
                ending_round=turns[-1].round_number if turns else 0,
                aborted=True,
                error=str(e),
            )
            return GameLog(header=header, turns=tuple(turns), result=result)

        result = _finished_result(state, turns)
        log_performance(
            logger,
            "game",
            (time.perf_counter() - started) * 1000,
            game_id=game_id,
            turns=len(turns),
            end_reason=result.end_reason.value,
        )
        return GameLog(header=header, turns=tuple(turns), result=result)


def _finished_result(state: GameState, turns: List[TurnRecord]) -> GameResult:
    scores: Dict[Player, int] = final_scores(state)
    result = GameResult(
        end_reason=state.end_reason,
        points=scores,
        winner=winner(scores),
        ending_round=turns[-1].round_number if turns else 0,
    )
    logger.info(
        f"Game finished: {state.end_reason.value}, A={scores[Player.A]} B={scores[Player.B]}, "
        f"winner={result.winner.value if result.winner else 'draw'}"
    )
    return result
