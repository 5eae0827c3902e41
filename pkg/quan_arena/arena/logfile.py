"""
JSONL game log files.

Line 1 is the header, then one line per turn, then the result. Files are
written to a temporary sibling and renamed into place, so a reader never
sees a half-written log.
"""

import hashlib
import json
import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Union

from ..config.constants import MANIFEST_FILENAME
from .errors import MalformedLogError
from .records import GameLog

logger = logging.getLogger(__name__)

LOG_FILENAME_PATTERN = re.compile(r"game_\d{4,}\.jsonl")


def dumps_record(record: Dict[str, Any]) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def serialize_game_log(log: GameLog) -> str:
    """Render a log as JSONL text, one record per line."""
    return "".join(dumps_record(record) + "\n" for record in log.to_records())


def atomic_write_text(path: Union[str, Path], text: str) -> None:
    """Write text to path via a temporary file and an atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + ".tmp")
    with open(tmp_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp_path, path)


def write_game_log(log: GameLog, path: Union[str, Path]) -> str:
    """
    Persist a game log.

    Args:
        log: Log to write
        path: Destination .jsonl file

    Returns:
        str: sha256 hex digest of the written bytes
    """
    text = serialize_game_log(log)
    try:
        atomic_write_text(path, text)
    except OSError as e:
        logger.error(f"Failed to write game log {path}: {e}")
        raise
    logger.debug(f"Wrote game log {path} ({len(log.turns)} turns)")
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def read_game_log(path: Union[str, Path]) -> GameLog:
    """
    Load a game log from a JSONL file.

    Raises:
        MalformedLogError: If the file is unreadable or not a valid log
    """
    path = Path(path)
    records: List[Dict[str, Any]] = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise MalformedLogError(f"{path}:{line_number}: invalid JSON: {e}") from e
    except OSError as e:
        raise MalformedLogError(f"Cannot read game log {path}: {e}") from e

    try:
        return GameLog.from_records(tuple(records))
    except MalformedLogError as e:
        raise MalformedLogError(f"{path}: {e}") from e


def list_game_logs(directory: Union[str, Path]) -> List[Path]:
    """
    The game logs of a run directory.

    When the directory holds a manifest, exactly the logs it lists are
    returned, in manifest order; other .jsonl files are ignored. Without one
    (an interrupted tournament, or hand-collected logs) every .jsonl file
    directly inside the directory is returned in name order.

    Raises:
        MalformedLogError: If the manifest is unreadable or lists a missing log
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_FILENAME
    if not manifest_path.is_file():
        return sorted(p for p in directory.iterdir() if p.suffix == ".jsonl" and p.is_file())

    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        files = [directory / entry["file"] for entry in manifest["logs"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        raise MalformedLogError(f"Cannot read manifest {manifest_path}: {e}") from e
    missing = [path.name for path in files if not path.is_file()]
    if missing:
        raise MalformedLogError(f"Manifest {manifest_path} lists missing logs: {', '.join(missing)}")
    listed = set(files)
    ignored = sum(1 for p in directory.iterdir() if p.suffix == ".jsonl" and p not in listed)
    if ignored:
        logger.warning(f"Ignoring {ignored} .jsonl files in {directory} not listed in {MANIFEST_FILENAME}")
    return files


def clear_run_directory(directory: Union[str, Path]) -> int:
    """
    Remove the manifest and game_NNNN.jsonl logs of an earlier run.

    Returns:
        int: Number of files removed
    """
    directory = Path(directory)
    stale = [p for p in directory.iterdir() if p.is_file() and LOG_FILENAME_PATTERN.fullmatch(p.name)]
    manifest_path = directory / MANIFEST_FILENAME
    if manifest_path.is_file():
        stale.append(manifest_path)
    for path in stale:
        path.unlink()
    if stale:
        logger.warning(f"Removed {len(stale)} files of a previous run from {directory}")
    return len(stale)
