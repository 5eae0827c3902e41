"""
Command-line interface for Quan Arena.

Subcommands:
    play        run one game and print its transcript
    tournament  run every game of the configured match
    replay      verify game logs by replaying them
    analyze     compute rates, phase scores and planning depth from logs
    classify    label each turn's reasoning with a classifier model

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
Logs go to stderr; transcripts and tables go to stdout.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from dotenv import load_dotenv

from .agent import AgentError, configure_in_flight_limit
from .analysis import (
    AnalysisError,
    ClassificationCache,
    ReportFormat,
    build_report,
    classify_reasoning,
    comparison_table,
    emit_report,
    load_logs,
)
from .analysis.report import reasoning_frame
from .arena import (
    ArenaError,
    GameLog,
    MalformedLogError,
    list_game_logs,
    read_game_log,
    replay,
    run_game,
    run_tournament,
    write_game_log,
)
from .arena.logfile import atomic_write_text
from .config.constants import (
    ANALYSIS_SUBDIR,
    CLASSIFICATION_CACHE_FILENAME,
    COMPARISON_CSV_FILENAME,
    DEFAULT_RUN_CONFIG_PATH,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_RUNTIME_ERROR,
    LABELED_TURNS_FILENAME,
    LOG_FILENAME_TEMPLATE,
    PLAY_SUBDIR,
    REASONING_CSV_FILENAME,
    REASONING_JSON_FILENAME,
)
from .config.run_config import RunConfig, RunConfigLoader, RunConfigurationError, load_classifier_config
from .engine import BoardState, EngineError, Player
from .utils.logging import set_correlation_id, setup_logging

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Raised for command-line usage problems."""

    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="quan-arena", description="Ô Ăn Quan agent arena")
    parser.add_argument(
        "--config", default=DEFAULT_RUN_CONFIG_PATH, help="run configuration JSON file"
    )
    parser.add_argument("--seed", type=int, help="override match.base_seed")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--workers", type=int, help="games to run concurrently")
    parser.add_argument("--log-level", default="INFO", help="DEBUG, INFO, WARNING or ERROR")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    play = subparsers.add_parser("play", help="run one game and print its transcript")
    play.add_argument("--game-index", type=int, default=0, help="game index within the match")
    play.set_defaults(handler=cmd_play)

    tournament = subparsers.add_parser("tournament", help="run every game of the match")
    tournament.add_argument("--games", type=int, help="override match.games")
    tournament.set_defaults(handler=cmd_tournament)

    replay_cmd = subparsers.add_parser("replay", help="verify game logs")
    replay_cmd.add_argument("logs", help="a .jsonl log or a directory of logs")
    replay_cmd.add_argument(
        "--verify",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="replay through the engine (default); --no-verify only prints results",
    )
    replay_cmd.set_defaults(handler=cmd_replay)

    analyze = subparsers.add_parser("analyze", help="compute metrics from logs")
    analyze.add_argument("logs", help="a .jsonl log or a directory of logs")
    analyze.add_argument(
        "--focal", action="append", help="agent to analyze; repeat for a comparison table"
    )
    analyze.add_argument("--format", choices=("json", "csv", "both"), default="both")
    analyze.set_defaults(handler=cmd_analyze)

    classify = subparsers.add_parser("classify", help="classify each turn's reasoning")
    classify.add_argument("logs", help="a .jsonl log or a directory of logs")
    classify.add_argument("--classifier", help="classifier endpoint JSON file")
    classify.add_argument("--focal", help="only classify this agent's turns")
    classify.add_argument(
        "--include-fallback", action="store_true", help="also classify random-fallback turns"
    )
    classify.set_defaults(handler=cmd_classify)
    return parser


def _load_run_config(args: argparse.Namespace, games: Optional[int] = None) -> RunConfig:
    config = RunConfigLoader(args.config).load()
    config = config.with_overrides(
        seed=args.seed, games=games, workers=args.workers, output_dir=args.out
    )
    configure_in_flight_limit(config.max_in_flight)
    return config


def render_board(board: BoardState) -> List[str]:
    """Three text lines: B's row right to left, the Quan pits, A's row."""

    def quan(index: int) -> str:
        pit = board[index]
        return f"Q{index}:{pit.peasants}{'+M' if pit.has_mandarin else ''}"

    top = " ".join(f"{board[i].peasants:>3}" for i in reversed(Player.B.pits))
    bottom = " ".join(f"{board[i].peasants:>3}" for i in Player.A.pits)
    return [
        f"          B {top}",
        f"  {quan(0):<8}{'':21}{quan(6)}",
        f"          A {bottom}",
    ]


def _print_transcript(log: GameLog) -> None:
    value = log.header.rule_config.mandarin_point_value
    print(f"Game {log.game_id} (seed {log.header.seed})")
    print(f"  A: {log.agent_name(Player.A)}   B: {log.agent_name(Player.B)}")
    for turn in log.turns:
        print(
            f"Turn {turn.turn_number} (round {turn.round_number}) "
            f"{turn.mover.value} [{log.agent_name(turn.mover)}]: {turn.action}, "
            f"steps {turn.step_count}, captured {turn.points_captured(value)}"
            + (" (fallback)" if turn.fallback_used else "")
        )
        reason = " ".join(turn.reason.split())
        print(f"  reason: {reason}")
        for line in render_board(turn.board_after):
            print(line)
    print(_result_line(log))


def _result_line(log: GameLog) -> str:
    result = log.result
    if result.aborted:
        return f"Result: aborted after round {result.ending_round} ({result.error})"
    points = f"A {result.points[Player.A]} - B {result.points[Player.B]}"
    ending = f"{result.end_reason.value}, round {result.ending_round}"
    if result.winner is None:
        return f"Result: draw, {points} ({ending})"
    return (
        f"Result: {result.winner.value} ({log.agent_name(result.winner)}) wins, "
        f"{points} ({ending})"
    )


def cmd_play(args: argparse.Namespace) -> int:
    config = _load_run_config(args)
    if not 0 <= args.game_index < config.match.games:
        raise UsageError(f"--game-index must be in [0, {config.match.games})")
    log = run_game(config.match, args.game_index)
    path = config.output_dir / PLAY_SUBDIR / LOG_FILENAME_TEMPLATE.format(index=args.game_index)
    write_game_log(log, path)
    _print_transcript(log)
    print(f"Log written to {path}")
    return EXIT_RUNTIME_ERROR if log.aborted else EXIT_OK


def cmd_tournament(args: argparse.Namespace) -> int:
    config = _load_run_config(args, games=args.games)
    summary = run_tournament(config.match, config.output_dir, workers=config.workers)
    print(f"Tournament {summary.matchup}: {summary.games} games")

    def mean(value: Optional[float]) -> str:
        return f"{value:.1f}" if value is not None else "-"

    print(f"  {'agent':<24}{'wins':>6}{'mean points':>14}")
    print(f"  {summary.agent_a:<24}{summary.wins_a:>6}{mean(summary.mean_points_a):>14}")
    print(f"  {summary.agent_b:<24}{summary.wins_b:>6}{mean(summary.mean_points_b):>14}")
    print(f"  draws {summary.draws}, aborted {summary.aborted}")
    print(f"Manifest {summary.manifest_path} sha256 {summary.manifest_sha256}")
    if summary.unverified:
        logger.error(f"{summary.unverified} logs failed replay verification")
        return EXIT_RUNTIME_ERROR
    return EXIT_OK


def _log_paths(path: Path) -> List[Path]:
    if path.is_dir():
        return list_game_logs(path)
    if path.is_file():
        return [path]
    raise UsageError(f"No such log file or directory: {path}")


def cmd_replay(args: argparse.Namespace) -> int:
    paths = _log_paths(Path(args.logs))
    if not paths:
        raise UsageError(f"No .jsonl game logs in {args.logs}")
    failures = 0
    for path in paths:
        try:
            log = read_game_log(path)
        except MalformedLogError as e:
            print(f"{path.name}: MALFORMED {e}")
            failures += 1
            continue
        if not args.verify:
            print(f"{path.name}: {_result_line(log)}")
            continue
        report = replay(log)
        print(f"{path.name}: {report.describe()}")
        if not report.verified:
            failures += 1
    print(f"{len(paths) - failures}/{len(paths)} logs OK")
    return EXIT_RUNTIME_ERROR if failures else EXIT_OK


def _analysis_dir(args: argparse.Namespace) -> Path:
    if args.out:
        return Path(args.out)
    logs = Path(args.logs)
    return (logs if logs.is_dir() else logs.parent) / ANALYSIS_SUBDIR


def _agent_names(logs: Sequence[GameLog]) -> List[str]:
    return sorted({spec.name for log in logs for spec in log.header.players.values()})


def cmd_analyze(args: argparse.Namespace) -> int:
    logs = load_logs(args.logs)
    focals = args.focal or _agent_names(logs)
    formats = {
        "json": (ReportFormat.JSON,),
        "csv": (ReportFormat.CSV,),
        "both": (ReportFormat.JSON, ReportFormat.CSV),
    }[args.format]
    out_dir = _analysis_dir(args)

    reports = []
    for focal in focals:
        report = build_report(logs, focal)
        target = out_dir if len(focals) == 1 else out_dir / focal
        emit_report(report, target, formats)
        rates = report.rates
        print(
            f"{focal}: games {rates.games}, win {rates.win_rate:.1f}%, "
            f"draw {rates.draw_rate:.1f}%, loss {rates.loss_rate:.1f}%, "
            f"avg points {report.phases.overall:.1f}"
        )
        reports.append(report)

    if len(reports) > 1:
        table = comparison_table(reports)
        atomic_write_text(
            out_dir / COMPARISON_CSV_FILENAME, table.to_csv(index=False, lineterminator="\n")
        )
        print(table.to_string(index=False))
    print(f"Reports written to {out_dir}")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    if args.classifier:
        classifier = load_classifier_config(args.classifier)
    else:
        config = _load_run_config(args)
        if config.classifier is None:
            raise RunConfigurationError(
                "No classifier configured: pass --classifier or add 'classifier' to the run config"
            )
        classifier = config.classifier

    logs = load_logs(args.logs)
    out_dir = _analysis_dir(args)
    cache = ClassificationCache(out_dir / CLASSIFICATION_CACHE_FILENAME)
    labeled, result = classify_reasoning(
        logs,
        classifier,
        cache=cache,
        focal=args.focal,
        include_fallback=args.include_fallback,
    )

    atomic_write_text(
        out_dir / LABELED_TURNS_FILENAME,
        "".join(json.dumps(turn.to_dict(), ensure_ascii=False) + "\n" for turn in labeled),
    )
    atomic_write_text(
        out_dir / REASONING_JSON_FILENAME,
        json.dumps(result.to_dict(), indent=2, ensure_ascii=False) + "\n",
    )
    atomic_write_text(
        out_dir / REASONING_CSV_FILENAME,
        reasoning_frame(result).to_csv(index=False, lineterminator="\n"),
    )
    shares = ", ".join(f"{label.value} {pct:.2f}%" for label, pct in result.percentages.items())
    print(f"Classified {result.total} turns: {shares}; {result.errors} errors")
    print(f"Labels written to {out_dir}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name; sys.argv[1:] if None

    Returns:
        Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        setup_logging(level=args.log_level, stream=sys.stderr)
    except AttributeError:
        parser.error(f"unknown log level {args.log_level!r}")
    run_id = set_correlation_id()
    logger.info(f"Running {args.command} (run {run_id})")

    try:
        return args.handler(args)
    except (RunConfigurationError, UsageError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (AgentError, ArenaError, AnalysisError, EngineError, OSError) as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_RUNTIME_ERROR


def run() -> None:
    """Console-script entry point: load .env, run, exit with the status."""
    load_dotenv()
    sys.exit(main())
