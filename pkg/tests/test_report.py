"""
Tests for report emission and the multi-agent comparison table.
"""

import json
from dataclasses import replace

import pandas as pd

from quan_arena.analysis import (
    ReportFormat,
    build_report,
    classify_reasoning,
    comparison_table,
    emit_report,
)
from quan_arena.arena import run_game

from tests.conftest import ScriptedChat


def match_report(scripted_match, focal="greedy"):
    logs = [run_game(scripted_match, index) for index in range(scripted_match.games)]
    return build_report(logs, focal)


class TestEmitReport:
    """Test cases for emit_report."""

    def test_files_written(self, scripted_match, temp_dir):
        paths = emit_report(match_report(scripted_match), temp_dir)
        assert [path.name for path in paths] == [
            "report.json",
            "rates.csv",
            "phases.csv",
            "depth_per_round.csv",
        ]

    def test_output_is_byte_identical(self, scripted_match, temp_dir):
        report = match_report(scripted_match)
        emit_report(report, temp_dir / "first")
        emit_report(report, temp_dir / "second")
        for name in ("report.json", "rates.csv", "phases.csv", "depth_per_round.csv"):
            first = (temp_dir / "first" / name).read_bytes()
            assert first == (temp_dir / "second" / name).read_bytes()

    def test_json_matches_report(self, scripted_match, temp_dir):
        report = match_report(scripted_match)
        emit_report(report, temp_dir, formats=[ReportFormat.JSON])

        data = json.loads((temp_dir / "report.json").read_text(encoding="utf-8"))

        assert data == report.to_dict()
        assert not (temp_dir / "rates.csv").exists()
        assert len(data["planning_depth"]) == 25

    def test_depth_table_has_a_row_per_round(self, scripted_match, temp_dir):
        emit_report(match_report(scripted_match), temp_dir, formats=[ReportFormat.CSV])
        depth = pd.read_csv(temp_dir / "depth_per_round.csv")
        assert list(depth["round"]) == list(range(1, 26))
        assert "steps_median" in depth.columns
        assert "reasoning_length_mean" in depth.columns

    def test_phases_table(self, scripted_match, temp_dir):
        report = match_report(scripted_match)
        emit_report(report, temp_dir, formats=[ReportFormat.CSV])
        phases = pd.read_csv(temp_dir / "phases.csv")
        assert list(phases["phase"]) == ["EGE", "MGE", "LGE", "overall"]
        assert phases["games"].iloc[-1] == report.phases.games

    def test_reasoning_table_when_classified(self, scripted_match, temp_dir, llm_config):
        logs = [run_game(scripted_match, index) for index in range(2)]
        _, reasoning = classify_reasoning(
            logs, llm_config, session=ScriptedChat(["SHORT_TERM_GAIN"]), focal="greedy"
        )
        report = build_report(logs, "greedy", reasoning=reasoning)

        paths = emit_report(report, temp_dir, formats=[ReportFormat.CSV])

        assert paths[-1].name == "reasoning_per_round.csv"
        table = pd.read_csv(paths[-1])
        assert table["SHORT_TERM_GAIN"].iloc[-1] == 100.0
        assert str(table["round"].iloc[-1]) == "overall"


class TestComparisonTable:
    """Test cases for comparison_table."""

    def test_best_and_second_marked(self, scripted_match):
        report = match_report(scripted_match)

        def with_win_rate(focal, win_rate):
            return replace(report, focal=focal, rates=replace(report.rates, win_rate=win_rate))

        table = comparison_table(
            [with_win_rate("middle", 50.0), with_win_rate("low", 10.0), with_win_rate("high", 99.0)]
        )

        assert list(table["focal"]) == ["middle", "low", "high"]
        assert list(table["win_rate"]) == ["_50.0_", "10.0", "**99.0**"]
        assert "SHORT_TERM_GAIN" not in table.columns

    def test_missing_phase_is_blank(self, scripted_match):
        report = match_report(scripted_match)
        means = dict(report.phases.means)
        means[next(iter(means))] = None
        blank = replace(report, focal="blank", phases=replace(report.phases, means=means))

        table = comparison_table([report, blank])

        assert table[next(iter(means)).value].iloc[1] == ""
