"""
Tournament runner.

Runs every game of a MatchConfig, possibly in parallel, writes one JSONL log
per game, verifies each log by replaying it from disk, and writes a manifest
describing the run. Game seeds depend only on (base_seed, game_index), so
results do not depend on the number of workers.
"""

import hashlib
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from .. import __version__
from ..agent import ChatBackend
from ..config.constants import DEFAULT_WORKERS, LOG_FILENAME_TEMPLATE, MANIFEST_FILENAME
from ..engine import Player
from ..utils.logging import log_performance
from .logfile import atomic_write_text, clear_run_directory, read_game_log, write_game_log
from .match import run_game
from .records import GameLog, MatchConfig
from .replay import replay

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    game_index: int
    seed: int
    first_player: str
    sha256: str
    verified: bool
    aborted: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "file": self.file,
            "game_index": self.game_index,
            "seed": self.seed,
            "first_player": self.first_player,
            "sha256": self.sha256,
            "verified": self.verified,
            "aborted": self.aborted,
        }


@dataclass(frozen=True)
class TournamentSummary:
    """
    Counts and mean points of a tournament, from agent_a's and agent_b's view.

    Aborted games are counted separately and left out of wins, draws and means.
    """

    matchup: str
    agent_a: str
    agent_b: str
    games: int
    wins_a: int
    wins_b: int
    draws: int
    aborted: int
    mean_points_a: Optional[float]
    mean_points_b: Optional[float]
    manifest_path: str
    manifest_sha256: str
    unverified: int = 0

    @property
    def completed(self) -> int:
        return self.wins_a + self.wins_b + self.draws

    def to_dict(self) -> Dict[str, Any]:
        return {
            "matchup": self.matchup,
            "agent_a": self.agent_a,
            "agent_b": self.agent_b,
            "games": self.games,
            "wins_a": self.wins_a,
            "wins_b": self.wins_b,
            "draws": self.draws,
            "aborted": self.aborted,
            "mean_points_a": self.mean_points_a,
            "mean_points_b": self.mean_points_b,
            "manifest_path": self.manifest_path,
            "manifest_sha256": self.manifest_sha256,
            "unverified": self.unverified,
        }


def _play_and_persist(
    config: MatchConfig,
    game_index: int,
    output_dir: Path,
    sessions: Optional[Mapping[str, ChatBackend]],
) -> Tuple[GameLog, ManifestEntry]:
    log = run_game(config, game_index, sessions)
    filename = LOG_FILENAME_TEMPLATE.format(index=game_index)
    path = output_dir / filename
    digest = write_game_log(log, path)
    # Verify what actually landed on disk
    report = replay(read_game_log(path))
    if not report.verified:
        logger.error(f"Log {filename} failed replay verification: {report.describe()}")
    entry = ManifestEntry(
        file=filename,
        game_index=game_index,
        seed=log.header.seed,
        first_player=log.agent_name(Player.A),
        sha256=digest,
        verified=report.verified,
        aborted=log.aborted,
    )
    return log, entry


def run_tournament(
    config: MatchConfig,
    output_dir: Union[str, Path],
    workers: int = DEFAULT_WORKERS,
    sessions: Optional[Mapping[str, ChatBackend]] = None,
) -> TournamentSummary:
    """
    Run all games of a match and persist their logs and a manifest.

    Args:
        config: Match configuration
        output_dir: Directory for game_NNNN.jsonl files and manifest.json; logs
            and manifest of an earlier run there are removed first
        workers: Number of games played concurrently
        sessions: Chat backends for Llm agents keyed by agent name

    Returns:
        TournamentSummary: Win/draw/abort counts and mean points

    Raises:
        ValueError: If the configuration or worker count is invalid
        OSError: If the output directory is not writable
    """
    config.validate()
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    clear_run_directory(output_dir)

    logger.info(
        f"Starting tournament {config.matchup_id}: {config.games} games, "
        f"base_seed={config.base_seed}, workers={workers}"
    )
    started = time.perf_counter()
    if workers == 1:
        results = [
            _play_and_persist(config, index, output_dir, sessions) for index in range(config.games)
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_play_and_persist, config, index, output_dir, sessions)
                for index in range(config.games)
            ]
            results = [future.result() for future in futures]

    logs = [log for log, _ in results]
    entries = [entry for _, entry in results]
    manifest_path = output_dir / MANIFEST_FILENAME
    manifest_text = json.dumps(_manifest(config, entries), indent=2, ensure_ascii=False) + "\n"
    atomic_write_text(manifest_path, manifest_text)

    summary = summarize(
        config,
        logs,
        manifest_path=str(manifest_path),
        manifest_sha256=hashlib.sha256(manifest_text.encode("utf-8")).hexdigest(),
        unverified=sum(1 for entry in entries if not entry.verified),
    )
    log_performance(
        logger,
        "tournament",
        (time.perf_counter() - started) * 1000,
        matchup=config.matchup_id,
        games=config.games,
        aborted=summary.aborted,
    )
    return summary


def _manifest(config: MatchConfig, entries: List[ManifestEntry]) -> Dict[str, Any]:
    return {
        "matchup": config.matchup_id,
        "version": __version__,
        "agents": {"a": config.agent_a.to_dict(), "b": config.agent_b.to_dict()},
        "rule_config": config.rule_config.to_dict(),
        "games": config.games,
        "base_seed": config.base_seed,
        "seed_mixing": "fnv1a64(le64(base_seed) || le64(game_index))",
        "first_player_policy": "alternating" if config.swap_sides else "fixed",
        "logs": [entry.to_dict() for entry in entries],
    }


def summarize(
    config: MatchConfig,
    logs: List[GameLog],
    manifest_path: str = "",
    manifest_sha256: str = "",
    unverified: int = 0,
) -> TournamentSummary:
    """Count wins, draws and aborts per agent and average their points."""
    name_a, name_b = config.agent_a.name, config.agent_b.name
    wins = {name_a: 0, name_b: 0}
    points: Dict[str, List[int]] = {name_a: [], name_b: []}
    draws = aborted = 0
    for log in logs:
        result = log.result
        if result.aborted:
            aborted += 1
            continue
        if result.is_draw:
            draws += 1
        else:
            wins[log.agent_name(result.winner)] += 1
        for side in Player:
            points[log.agent_name(side)].append(result.points[side])

    def mean(values: List[int]) -> Optional[float]:
        return sum(values) / len(values) if values else None

    summary = TournamentSummary(
        matchup=config.matchup_id,
        agent_a=name_a,
        agent_b=name_b,
        games=len(logs),
        wins_a=wins[name_a],
        wins_b=wins[name_b],
        draws=draws,
        aborted=aborted,
        mean_points_a=mean(points[name_a]),
        mean_points_b=mean(points[name_b]),
        manifest_path=manifest_path,
        manifest_sha256=manifest_sha256,
        unverified=unverified,
    )
    logger.info(
        f"Tournament {summary.matchup}: {name_a} {summary.wins_a} wins, "
        f"{name_b} {summary.wins_b} wins, {summary.draws} draws, {summary.aborted} aborted"
    )
    return summary
