"""
Engine Module

Deterministic Ô Ăn Quan rules engine: domain types, the move pipeline,
extra rules, termination, scoring and state digests.
"""

from .board import (
    Action,
    BoardState,
    CaptureLedger,
    Direction,
    EndReason,
    GameState,
    GameStatus,
    MoveEvent,
    MoveEventKind,
    MoveOutcome,
    Pit,
    PitKind,
    Player,
    RuleConfig,
    pit_kind,
    pit_owner,
    quan_owner,
)
from .errors import (
    ConservationError,
    EmptySourceError,
    EngineError,
    GameFinishedError,
    GameNotFinishedError,
    IllegalActionError,
    InvalidConfigError,
    InvalidSourceError,
    QuanSourceError,
    StepBudgetExceededError,
)
from .hashing import format_digest, mix_seed, state_hash
from .rules import (
    apply_move,
    begin_turn,
    capture_chain,
    check_end,
    final_scores,
    legal_actions,
    new_game,
    scatter_once,
    winner,
)

__all__ = [
    "Action",
    "BoardState",
    "CaptureLedger",
    "Direction",
    "EndReason",
    "GameState",
    "GameStatus",
    "MoveEvent",
    "MoveEventKind",
    "MoveOutcome",
    "Pit",
    "PitKind",
    "Player",
    "RuleConfig",
    "pit_kind",
    "pit_owner",
    "quan_owner",
    "ConservationError",
    "EmptySourceError",
    "EngineError",
    "GameFinishedError",
    "GameNotFinishedError",
    "IllegalActionError",
    "InvalidConfigError",
    "InvalidSourceError",
    "QuanSourceError",
    "StepBudgetExceededError",
    "format_digest",
    "mix_seed",
    "state_hash",
    "apply_move",
    "begin_turn",
    "capture_chain",
    "check_end",
    "final_scores",
    "legal_actions",
    "new_game",
    "scatter_once",
    "winner",
]
