"""
Report emission.

A MetricsReport is written as report.json and/or one CSV per table. Output
is deterministic: emitting the same report twice gives identical bytes.
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from ..arena.logfile import atomic_write_text
from ..config.constants import (
    DEPTH_CSV_FILENAME,
    PHASES_CSV_FILENAME,
    RATES_CSV_FILENAME,
    REASONING_CSV_FILENAME,
    REPORT_JSON_FILENAME,
)
from .classify import ReasoningDistribution, ReasoningLabel
from .metrics import MetricsReport, Phase

logger = logging.getLogger(__name__)

DISTRIBUTION_COLUMNS = ("count", "min", "q1", "median", "q3", "max", "mean")
BEST_MARK = "**"
SECOND_MARK = "_"


class ReportFormat(Enum):
    JSON = "json"
    CSV = "csv"


def rates_frame(reports: Sequence[MetricsReport]) -> pd.DataFrame:
    return pd.DataFrame([report.rates.to_dict() for report in reports])


def phases_frame(report: MetricsReport) -> pd.DataFrame:
    rows = [
        {
            "phase": phase.value,
            "games": report.phases.counts[phase],
            "mean_score": report.phases.means[phase],
        }
        for phase in Phase
    ]
    rows.append(
        {"phase": "overall", "games": report.phases.games, "mean_score": report.phases.overall}
    )
    return pd.DataFrame(rows)


def depth_frame(report: MetricsReport) -> pd.DataFrame:
    rows = []
    for row in report.depth:
        record = {"round": row.round_number}
        steps = row.steps.to_dict()
        lengths = row.reasoning_length.to_dict()
        record.update({f"steps_{name}": steps[name] for name in DISTRIBUTION_COLUMNS})
        record.update({f"reasoning_length_{name}": lengths[name] for name in DISTRIBUTION_COLUMNS})
        rows.append(record)
    return pd.DataFrame(rows)


def reasoning_frame(reasoning: ReasoningDistribution) -> pd.DataFrame:
    rows = [
        {
            "round": r,
            "count": reasoning.per_round_counts[r],
            **{label.value: reasoning.per_round[r][label] for label in ReasoningLabel},
        }
        for r in sorted(reasoning.per_round)
    ]
    rows.append(
        {
            "round": "overall",
            "count": reasoning.labeled,
            **{label.value: reasoning.percentages[label] for label in ReasoningLabel},
        }
    )
    return pd.DataFrame(rows)


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    atomic_write_text(path, frame.to_csv(index=False, lineterminator="\n"))


def emit_report(
    report: MetricsReport,
    output_dir: Union[str, Path],
    formats: Sequence[ReportFormat] = (ReportFormat.JSON, ReportFormat.CSV),
) -> List[Path]:
    """
    Write a report's tables.

    Args:
        report: Report to write
        output_dir: Destination directory (created if missing)
        formats: JSON writes report.json; CSV writes rates, phases,
            depth-per-round and (when classified) reasoning-per-round tables

    Returns:
        Paths written, in a fixed order

    Raises:
        OSError: If the destination is not writable
    """
    output_dir = Path(output_dir)
    written: List[Path] = []
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        if ReportFormat.JSON in formats:
            path = output_dir / REPORT_JSON_FILENAME
            atomic_write_text(path, json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n")
            written.append(path)
        if ReportFormat.CSV in formats:
            tables = [
                (RATES_CSV_FILENAME, rates_frame([report])),
                (PHASES_CSV_FILENAME, phases_frame(report)),
                (DEPTH_CSV_FILENAME, depth_frame(report)),
            ]
            if report.reasoning is not None:
                tables.append((REASONING_CSV_FILENAME, reasoning_frame(report.reasoning)))
            for filename, frame in tables:
                path = output_dir / filename
                _write_csv(frame, path)
                written.append(path)
    except OSError as e:
        logger.error(f"Failed to write report to {output_dir}: {e}")
        raise
    logger.info(f"Wrote {len(written)} report files to {output_dir}")
    return written


def _mark(values: List[Optional[float]]) -> List[str]:
    ranked = sorted({v for v in values if v is not None}, reverse=True)
    best = ranked[0] if ranked else None
    second = ranked[1] if len(ranked) > 1 else None
    cells = []
    for value in values:
        if value is None:
            cells.append("")
        elif value == best:
            cells.append(f"{BEST_MARK}{value}{BEST_MARK}")
        elif value == second:
            cells.append(f"{SECOND_MARK}{value}{SECOND_MARK}")
        else:
            cells.append(str(value))
    return cells


def comparison_table(reports: Sequence[MetricsReport]) -> pd.DataFrame:
    """
    Side-by-side table of several focal agents.

    Each numeric column marks its highest value as **best** and the runner-up
    as _second_.
    """
    columns: Dict[str, List[Optional[float]]] = {
        "win_rate": [r.rates.win_rate for r in reports],
        "draw_rate": [r.rates.draw_rate for r in reports],
    }
    for phase in Phase:
        columns[phase.value] = [r.phases.means[phase] for r in reports]
    columns["avg_points"] = [r.phases.overall for r in reports]
    if all(r.reasoning is not None for r in reports):
        for label in ReasoningLabel:
            columns[label.value] = [r.reasoning.percentages[label] for r in reports]

    table = {"focal": [r.focal for r in reports]}
    table.update({name: _mark(values) for name, values in columns.items()})
    return pd.DataFrame(table)
