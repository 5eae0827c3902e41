"""
Tests for log-derived metrics: rates, phase scores and planning depth.
"""

from dataclasses import replace

import pytest

from quan_arena.agent import AgentKind, AgentSpec
from quan_arena.analysis import (
    Distribution,
    EmptyInputError,
    Phase,
    build_report,
    load_logs,
    phase_scores,
    planning_depth,
    rates_from_counts,
    round_half_up,
    win_draw_rates,
)
from quan_arena.arena import GameHeader, GameLog, GameResult, MatchConfig, run_tournament, write_game_log
from quan_arena.engine import EndReason, Player, RuleConfig

FOCAL = AgentSpec(kind=AgentKind.RANDOM, name="llm", seed=1)
GREEDY = AgentSpec(kind=AgentKind.GREEDY, name="greedy")


def synthetic_log(index, focal_points, ending_round, focal_side=Player.A, aborted=False):
    """A turn-less log whose result gives the focal agent focal_points out of 70."""
    other = focal_side.opponent
    players = {focal_side: FOCAL, other: GREEDY}
    header = GameHeader(
        game_id=f"llm-vs-greedy-g{index:04d}",
        game_index=index,
        seed=index,
        rule_config=RuleConfig(),
        players=players,
        version="1.0.0",
    )
    if aborted:
        result = GameResult(None, None, None, ending_round, aborted=True, error="timeout")
    else:
        points = {focal_side: focal_points, other: 70 - focal_points}
        if points[focal_side] == points[other]:
            winner = None
        else:
            winner = focal_side if points[focal_side] > points[other] else other
        result = GameResult(EndReason.BOTH_MANDARINS_CAPTURED, points, winner, ending_round)
    return GameLog(header=header, turns=(), result=result)


def finished(one_move_log):
    """The aborted fixture log with a finished result, so it counts as played."""
    result = GameResult(
        end_reason=EndReason.ROUND_LIMIT,
        points={Player.A: 35, Player.B: 35},
        winner=None,
        ending_round=1,
    )
    return replace(one_move_log, result=result)


class TestRates:
    """Test cases for win/draw rates."""

    @pytest.mark.parametrize(
        "wins, draws, win_rate, draw_rate",
        [(19, 11, 38.0, 22.0), (12, 12, 24.0, 24.0), (0, 0, 0.0, 0.0)],
    )
    def test_rates_from_counts(self, wins, draws, win_rate, draw_rate):
        rates = rates_from_counts("llm", wins, draws, 50)
        assert rates.win_rate == win_rate
        assert rates.draw_rate == draw_rate
        assert rates.losses == 50 - wins - draws

    def test_round_half_up(self):
        assert round_half_up(0.25, 1) == 0.3
        assert round_half_up(100 / 3) == 33.3
        assert round_half_up(200 / 3) == 66.7

    def test_zero_games(self):
        with pytest.raises(EmptyInputError):
            rates_from_counts("llm", 0, 0, 0)

    def test_from_logs_follow_focal_side(self):
        logs = [
            synthetic_log(0, 40, 12),
            synthetic_log(1, 40, 12, focal_side=Player.B),
            synthetic_log(2, 35, 12),
            synthetic_log(3, 10, 12, focal_side=Player.B),
            synthetic_log(4, 0, 3, aborted=True),
        ]
        rates = win_draw_rates(logs, "llm")
        assert rates.games == 4
        assert (rates.wins, rates.draws, rates.losses) == (2, 1, 1)
        assert (rates.win_rate, rates.draw_rate, rates.loss_rate) == (50.0, 25.0, 25.0)

    @pytest.mark.slow
    def test_random_against_random_partitions_fifty_games(self, temp_dir):
        config = MatchConfig(
            agent_a=AgentSpec(kind=AgentKind.RANDOM, name="random-a", seed=1),
            agent_b=AgentSpec(kind=AgentKind.RANDOM, name="random-b", seed=2),
            games=50,
            base_seed=2024,
            swap_sides=True,
        )
        summary = run_tournament(config, temp_dir, workers=4)
        logs = load_logs(temp_dir)

        for focal in ("random-a", "random-b"):
            rates = win_draw_rates(logs, focal)
            assert rates.games == 50
            assert rates.wins + rates.draws + rates.losses == 50
            assert rates.win_rate + rates.draw_rate + rates.loss_rate == pytest.approx(100.0, abs=0.15)
        assert summary.wins_a + summary.wins_b + summary.draws == 50
        assert win_draw_rates(logs, "random-a").wins == win_draw_rates(logs, "random-b").losses

    def test_no_games_for_focal(self):
        with pytest.raises(EmptyInputError, match="No completed games for agent 'search'"):
            win_draw_rates([synthetic_log(0, 40, 12)], "search")


class TestPhaseScores:
    """Test cases for phase-grouped scores."""

    def test_grouped_means(self):
        logs = [
            synthetic_log(0, 30, 5),
            synthetic_log(1, 28, 10, focal_side=Player.B),
            synthetic_log(2, 20, 23),
            synthetic_log(3, 70, 15, aborted=True),
        ]
        scores = phase_scores(logs, "llm")
        assert scores.means == {Phase.EGE: 29.0, Phase.MGE: None, Phase.LGE: 20.0}
        assert scores.counts == {Phase.EGE: 2, Phase.MGE: 0, Phase.LGE: 1}
        assert scores.overall == 26.0
        assert scores.games == 3

    @pytest.mark.parametrize(
        "ending_round, phase",
        [(1, Phase.EGE), (10, Phase.EGE), (11, Phase.MGE), (20, Phase.MGE), (21, Phase.LGE)],
    )
    def test_phase_boundaries(self, ending_round, phase):
        assert Phase.for_round(ending_round) is phase


class TestPlanningDepth:
    """Test cases for planning-depth distributions."""

    def test_one_move_log(self, one_move_log):
        rows = planning_depth([finished(one_move_log)], "llm")

        assert len(rows) == 25
        first = rows[0]
        assert first.round_number == 1
        assert first.steps.count == 1
        assert first.steps.median == 11.0
        assert first.reasoning_length.median == 1.0
        assert all(row.steps.count == 0 and row.steps.median is None for row in rows[1:])

    def test_from_replay_matches_stored_counts(self, one_move_log):
        log = finished(one_move_log)
        assert planning_depth([log], "greedy", from_replay=True) == planning_depth([log], "greedy")

    def test_rows_follow_max_rounds(self, one_move_log):
        log = finished(one_move_log)
        header = replace(log.header, rule_config=RuleConfig(max_rounds=4))
        rows = planning_depth([replace(log, header=header)], "llm")
        assert [row.round_number for row in rows] == [1, 2, 3, 4]

    def test_distribution_summary(self):
        summary = Distribution.from_samples([1, 2, 3, 4, 5])
        assert (summary.min, summary.q1, summary.median, summary.q3, summary.max) == (
            1.0,
            2.0,
            3.0,
            4.0,
            5.0,
        )
        assert summary.mean == 3.0
        assert Distribution.from_samples([]) == Distribution(count=0)


class TestLoadLogs:
    """Test cases for load_logs."""

    def test_directory_in_name_order(self, temp_dir):
        for index in (1, 0):
            write_game_log(synthetic_log(index, 40, 12), temp_dir / f"game_{index:04d}.jsonl")
        (temp_dir / "manifest.json").write_text("{}", encoding="utf-8")

        logs = load_logs(temp_dir)

        assert [log.header.game_index for log in logs] == [0, 1]

    def test_single_file(self, temp_dir):
        path = temp_dir / "one.jsonl"
        write_game_log(synthetic_log(0, 40, 12), path)
        assert len(load_logs(path)) == 1

    def test_empty_directory(self, temp_dir):
        with pytest.raises(EmptyInputError, match="No .jsonl game logs"):
            load_logs(temp_dir)

    def test_missing_path(self, temp_dir):
        with pytest.raises(EmptyInputError, match="No such log file"):
            load_logs(temp_dir / "missing")


class TestBuildReport:
    """Test cases for build_report."""

    def test_report_tables(self, one_move_log):
        logs = [synthetic_log(0, 30, 5), synthetic_log(1, 50, 24), finished(one_move_log)]
        report = build_report(logs, "llm")

        assert report.focal == "llm"
        assert report.matchups == ("llm-vs-greedy",)
        assert report.games == 3
        assert report.rates.games == 3
        assert len(report.depth) == 25
        assert report.reasoning is None
        assert "phase_grouping" in report.metadata
        assert report.to_dict()["planning_depth"][0]["steps"]["median"] == 11.0
