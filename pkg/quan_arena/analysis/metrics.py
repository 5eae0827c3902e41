"""
Log-derived metrics.

Everything here is computed from finished game logs for one focal agent:
win and draw rates, mean final score grouped by the phase in which a game
ended, and per-round distributions of planning depth.
"""

import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .. import __version__
from ..arena import GameLog, list_game_logs, read_game_log, replay
from ..config.constants import (
    DEFAULT_MAX_ROUNDS,
    EARLY_GAME_LAST_ROUND,
    MID_GAME_LAST_ROUND,
    RATE_DECIMALS,
)
from ..engine import Player
from .errors import EmptyInputError

logger = logging.getLogger(__name__)

PHASE_GROUPING_NOTE = (
    "mean final score of the focal agent over games grouped by the round in which they ended"
)
PLANNING_DEPTH_NOTE = (
    "steps = drops + relay pickups + captures of the focal agent's move; "
    "reasoning_length = non-empty lines of its reason text"
)


class Phase(Enum):
    EGE = "EGE"
    MGE = "MGE"
    LGE = "LGE"

    @classmethod
    def for_round(cls, ending_round: int) -> "Phase":
        if ending_round <= EARLY_GAME_LAST_ROUND:
            return cls.EGE
        if ending_round <= MID_GAME_LAST_ROUND:
            return cls.MGE
        return cls.LGE


def round_half_up(value: float, decimals: int = RATE_DECIMALS) -> float:
    """Round like the result tables do: halves go away from zero."""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def load_logs(path: Union[str, Path]) -> List[GameLog]:
    """
    Load one .jsonl log, or the logs of a run directory.

    A directory with a manifest yields the logs it lists; otherwise every
    .jsonl file in it is loaded in file-name order.

    Raises:
        EmptyInputError: If no log files are found
        MalformedLogError: If a file is not a valid log or the manifest is broken
    """
    path = Path(path)
    if path.is_dir():
        files = list_game_logs(path)
    elif path.is_file():
        files = [path]
    else:
        raise EmptyInputError(f"No such log file or directory: {path}")
    if not files:
        raise EmptyInputError(f"No .jsonl game logs in {path}")
    logs = [read_game_log(file) for file in files]
    logger.info(f"Loaded {len(logs)} game logs from {path}")
    return logs


def focal_games(logs: Iterable[GameLog], focal: str) -> List[Tuple[GameLog, Player]]:
    """
    Completed games the focal agent played, with the side it played.

    Raises:
        EmptyInputError: If no completed game includes the focal agent
    """
    games = []
    skipped_aborted = skipped_other = 0
    for log in logs:
        side = log.side_of(focal)
        if side is None:
            skipped_other += 1
        elif log.aborted:
            skipped_aborted += 1
        else:
            games.append((log, side))
    if skipped_other:
        logger.warning(f"{skipped_other} logs do not include agent '{focal}' and were skipped")
    if skipped_aborted:
        logger.info(f"Excluded {skipped_aborted} aborted games of '{focal}'")
    if not games:
        raise EmptyInputError(f"No completed games for agent '{focal}'")
    return games


@dataclass(frozen=True)
class Rates:
    focal: str
    games: int
    wins: int
    draws: int
    losses: int
    win_rate: float
    draw_rate: float
    loss_rate: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "focal": self.focal,
            "games": self.games,
            "wins": self.wins,
            "draws": self.draws,
            "losses": self.losses,
            "win_rate": self.win_rate,
            "draw_rate": self.draw_rate,
            "loss_rate": self.loss_rate,
        }


def rates_from_counts(focal: str, wins: int, draws: int, games: int) -> Rates:
    """Percentages of games won, drawn and lost, rounded half-up to 1 decimal."""
    if games < 1:
        raise EmptyInputError("Rates need at least one game")
    losses = games - wins - draws

    def pct(count: int) -> float:
        return round_half_up(count * 100 / games, RATE_DECIMALS)

    return Rates(
        focal=focal,
        games=games,
        wins=wins,
        draws=draws,
        losses=losses,
        win_rate=pct(wins),
        draw_rate=pct(draws),
        loss_rate=pct(losses),
    )


def win_draw_rates(logs: Iterable[GameLog], focal: str) -> Rates:
    """Win, draw and loss percentages of the focal agent over completed games."""
    games = focal_games(logs, focal)
    wins = sum(1 for log, side in games if log.result.winner is side)
    draws = sum(1 for log, _ in games if log.result.is_draw)
    return rates_from_counts(focal, wins, draws, len(games))


@dataclass(frozen=True)
class PhaseScores:
    """Mean focal score per ending phase (None when no game ended there)."""

    means: Dict[Phase, Optional[float]]
    counts: Dict[Phase, int]
    overall: float
    games: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "phases": {
                phase.value: {"games": self.counts[phase], "mean_score": self.means[phase]}
                for phase in Phase
            },
            "overall": {"games": self.games, "mean_score": self.overall},
        }


def phase_scores(logs: Iterable[GameLog], focal: str) -> PhaseScores:
    """Mean final score of the focal agent by the phase in which each game ended."""
    games = focal_games(logs, focal)
    grouped: Dict[Phase, List[int]] = {phase: [] for phase in Phase}
    scores = []
    for log, side in games:
        score = log.result.points[side]
        grouped[Phase.for_round(log.result.ending_round)].append(score)
        scores.append(score)
    return PhaseScores(
        means={
            phase: round_half_up(float(np.mean(values)), RATE_DECIMALS) if values else None
            for phase, values in grouped.items()
        },
        counts={phase: len(values) for phase, values in grouped.items()},
        overall=round_half_up(float(np.mean(scores)), RATE_DECIMALS),
        games=len(scores),
    )


@dataclass(frozen=True)
class Distribution:
    """Five-number summary plus mean; statistics are None when count is 0."""

    count: int
    min: Optional[float] = None
    q1: Optional[float] = None
    median: Optional[float] = None
    q3: Optional[float] = None
    max: Optional[float] = None
    mean: Optional[float] = None

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "Distribution":
        if not samples:
            return cls(count=0)
        arr = np.asarray(samples, dtype=float)
        q1, median, q3 = np.percentile(arr, [25, 50, 75])
        return cls(
            count=int(arr.size),
            min=float(arr.min()),
            q1=float(q1),
            median=float(median),
            q3=float(q3),
            max=float(arr.max()),
            mean=float(arr.mean()),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count": self.count,
            "min": self.min,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.max,
            "mean": self.mean,
        }


@dataclass(frozen=True)
class RoundDepth:
    round_number: int
    steps: Distribution
    reasoning_length: Distribution

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round": self.round_number,
            "steps": self.steps.to_dict(),
            "reasoning_length": self.reasoning_length.to_dict(),
        }


def reasoning_length(reason: str) -> int:
    return sum(1 for line in reason.splitlines() if line.strip())


def planning_depth(
    logs: Iterable[GameLog], focal: str, from_replay: bool = False
) -> Tuple[RoundDepth, ...]:
    """
    Per-round distributions of the focal agent's move step counts.

    Args:
        logs: Game logs
        focal: Agent name
        from_replay: Take step counts from replaying each log instead of the
            stored step_count fields

    Returns:
        One RoundDepth per round 1..max_rounds, including empty rounds
    """
    games = focal_games(logs, focal)
    max_rounds = max(
        (log.header.rule_config.max_rounds for log, _ in games), default=DEFAULT_MAX_ROUNDS
    )
    steps: Dict[int, List[int]] = {r: [] for r in range(1, max_rounds + 1)}
    lengths: Dict[int, List[int]] = {r: [] for r in range(1, max_rounds + 1)}
    for log, side in games:
        if from_replay:
            counts = replay(log).step_counts
        else:
            counts = tuple(turn.step_count for turn in log.turns)
        for turn, step_count in zip(log.turns, counts):
            if turn.mover is side and turn.round_number in steps:
                steps[turn.round_number].append(step_count)
                lengths[turn.round_number].append(reasoning_length(turn.reason))
    return tuple(
        RoundDepth(
            round_number=r,
            steps=Distribution.from_samples(steps[r]),
            reasoning_length=Distribution.from_samples(lengths[r]),
        )
        for r in range(1, max_rounds + 1)
    )


@dataclass(frozen=True)
class MetricsReport:
    """All log-derived tables for one focal agent."""

    focal: str
    matchups: Tuple[str, ...]
    games: int
    rates: Rates
    phases: PhaseScores
    depth: Tuple[RoundDepth, ...]
    reasoning: Optional[Any] = None
    metadata: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "focal": self.focal,
            "matchups": list(self.matchups),
            "games": self.games,
            "rates": self.rates.to_dict(),
            "phase_scores": self.phases.to_dict(),
            "planning_depth": [row.to_dict() for row in self.depth],
            "reasoning": self.reasoning.to_dict() if self.reasoning is not None else None,
            "metadata": dict(self.metadata),
        }


def matchup_of(log: GameLog) -> str:
    return log.game_id.rsplit("-g", 1)[0]


def build_report(logs: Sequence[GameLog], focal: str, reasoning: Any = None) -> MetricsReport:
    """
    Compute every log-derived metric for a focal agent.

    Args:
        logs: Game logs; aborted games and games without the focal agent are skipped
        focal: Agent name
        reasoning: Optional ReasoningDistribution from classify_reasoning

    Raises:
        EmptyInputError: If no completed game includes the focal agent
    """
    games = focal_games(logs, focal)
    rates = win_draw_rates(logs, focal)
    return MetricsReport(
        focal=focal,
        matchups=tuple(sorted({matchup_of(log) for log, _ in games})),
        games=len(games),
        rates=rates,
        phases=phase_scores(logs, focal),
        depth=planning_depth(logs, focal),
        reasoning=reasoning,
        metadata={
            "phase_grouping": PHASE_GROUPING_NOTE,
            "planning_depth": PLANNING_DEPTH_NOTE,
            "version": __version__,
        },
    )
