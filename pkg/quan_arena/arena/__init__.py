"""
Arena Module

Seeded matches and tournaments between agents, JSONL game logs and replay
verification.
"""

from .errors import ArenaError, DivergenceDetectedError, MalformedLogError
from .logfile import list_game_logs, read_game_log, serialize_game_log, write_game_log
from .match import run_game
from .records import GameHeader, GameLog, GameResult, MatchConfig, TurnRecord
from .replay import Divergence, ReplayReport, replay
from .tournament import ManifestEntry, TournamentSummary, run_tournament, summarize

__all__ = [
    "ArenaError",
    "DivergenceDetectedError",
    "MalformedLogError",
    "list_game_logs",
    "read_game_log",
    "serialize_game_log",
    "write_game_log",
    "run_game",
    "GameHeader",
    "GameLog",
    "GameResult",
    "MatchConfig",
    "TurnRecord",
    "Divergence",
    "ReplayReport",
    "replay",
    "ManifestEntry",
    "TournamentSummary",
    "run_tournament",
    "summarize",
]
