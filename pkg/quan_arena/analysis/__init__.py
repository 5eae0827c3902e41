"""
Analysis Module

Win/draw rates, phase-grouped scores, planning-depth distributions,
reasoning classification and report emission over game logs.
"""

from .classify import (
    ClassificationCache,
    LabeledTurn,
    ReasoningDistribution,
    ReasoningLabel,
    classify_reasoning,
    distribution,
    parse_label,
)
from .errors import AnalysisError, EmptyInputError
from .metrics import (
    Distribution,
    MetricsReport,
    Phase,
    PhaseScores,
    Rates,
    RoundDepth,
    build_report,
    load_logs,
    phase_scores,
    planning_depth,
    rates_from_counts,
    round_half_up,
    win_draw_rates,
)
from .report import ReportFormat, comparison_table, emit_report

__all__ = [
    "ClassificationCache",
    "LabeledTurn",
    "ReasoningDistribution",
    "ReasoningLabel",
    "classify_reasoning",
    "distribution",
    "parse_label",
    "AnalysisError",
    "EmptyInputError",
    "Distribution",
    "MetricsReport",
    "Phase",
    "PhaseScores",
    "Rates",
    "RoundDepth",
    "build_report",
    "load_logs",
    "phase_scores",
    "planning_depth",
    "rates_from_counts",
    "round_half_up",
    "win_draw_rates",
    "ReportFormat",
    "comparison_table",
    "emit_report",
]
