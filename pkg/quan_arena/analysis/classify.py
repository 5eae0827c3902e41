"""
Zero-shot reasoning classification.

Each turn's reason text is sent to a classifier model, one request per
turn, and the first label token in the answer is taken as its label.
Answers are cached on disk keyed by log id, turn number, model and a digest
of the reason text, so a rerun never pays for the same turn twice and a
re-played game under the same id is classified afresh.
"""

import hashlib
import json
import logging
import re
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from ..agent.prompts import CLASSIFICATION_TEMPLATE, REASONING_LABELS, REASONING_PLACEHOLDER
from ..agent.session import ChatBackend
from ..arena import GameLog
from ..config.constants import DISTRIBUTION_DECIMALS, REASON_DIGEST_LENGTH
from ..config.providers import LlmAgentConfig, ProviderFactory
from ..utils.logging import CONVERSATION_LOGGER_NAME
from .errors import EmptyInputError
from .metrics import round_half_up

logger = logging.getLogger(__name__)
conversation_logger = logging.getLogger(CONVERSATION_LOGGER_NAME)

_LABEL_PATTERN = re.compile(r"\b(" + "|".join(REASONING_LABELS) + r")\b")


class ReasoningLabel(Enum):
    SHORT_TERM_GAIN = "SHORT_TERM_GAIN"
    LONG_TERM_STRATEGY = "LONG_TERM_STRATEGY"
    AMBIGUOUS = "AMBIGUOUS"


def parse_label(text: Optional[str]) -> Optional[ReasoningLabel]:
    """Return the first label token in text, or None if there is none."""
    match = _LABEL_PATTERN.search(text or "")
    return ReasoningLabel(match.group(1)) if match else None


def build_classification_prompt(reason: str) -> str:
    return CLASSIFICATION_TEMPLATE.replace(REASONING_PLACEHOLDER, reason)


@dataclass(frozen=True)
class LabeledTurn:
    log_id: str
    turn_number: int
    round_number: int
    agent: str
    model: str
    label: Optional[ReasoningLabel]
    raw: str

    @property
    def is_error(self) -> bool:
        return self.label is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "log_id": self.log_id,
            "turn_number": self.turn_number,
            "round_number": self.round_number,
            "agent": self.agent,
            "model": self.model,
            "label": self.label.value if self.label else None,
            "error": "no label in classifier output" if self.is_error else None,
            "raw": self.raw,
        }


class ClassificationCache:
    """
    Append-only JSONL cache of classifier answers.

    Keys are "<log id>|<turn number>|<model>|<reason digest>"; later lines win.
    """

    def __init__(self, path: Union[str, Path]) -> None:
        self.path = Path(path)
        self._entries: Dict[str, str] = {}
        self._lock = threading.Lock()
        self._load()

    @staticmethod
    def key(log_id: str, turn_number: int, model: str, reason: str) -> str:
        digest = hashlib.sha256(reason.encode("utf-8")).hexdigest()[:REASON_DIGEST_LENGTH]
        return f"{log_id}|{turn_number}|{model}|{digest}"

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                    self._entries[entry["key"]] = entry["raw"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    logger.warning(f"Skipping corrupt cache line {self.path}:{line_number}")
        logger.debug(f"Loaded {len(self._entries)} cached classifications from {self.path}")

    def get(self, key: str) -> Optional[str]:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: str, raw: str) -> None:
        with self._lock:
            self._entries[key] = raw
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps({"key": key, "raw": raw}, ensure_ascii=False) + "\n")

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


@dataclass(frozen=True)
class ReasoningDistribution:
    """Label percentages overall and per round, plus error and exclusion counts."""

    total: int
    labeled: int
    errors: int
    excluded_fallback: int
    counts: Dict[ReasoningLabel, int]
    percentages: Dict[ReasoningLabel, float]
    per_round: Dict[int, Dict[ReasoningLabel, float]]
    per_round_counts: Dict[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total": self.total,
            "labeled": self.labeled,
            "errors": self.errors,
            "excluded_fallback": self.excluded_fallback,
            "counts": {label.value: self.counts[label] for label in ReasoningLabel},
            "percentages": {label.value: self.percentages[label] for label in ReasoningLabel},
            "per_round": [
                {
                    "round": r,
                    "count": self.per_round_counts[r],
                    **{label.value: self.per_round[r][label] for label in ReasoningLabel},
                }
                for r in sorted(self.per_round)
            ],
        }


def _percentages(labels: List[ReasoningLabel]) -> Dict[ReasoningLabel, float]:
    total = len(labels)
    return {
        label: (
            round_half_up(labels.count(label) * 100 / total, DISTRIBUTION_DECIMALS)
            if total
            else 0.0
        )
        for label in ReasoningLabel
    }


def distribution(turns: Iterable[LabeledTurn], excluded_fallback: int = 0) -> ReasoningDistribution:
    """Aggregate labeled turns; errors are counted but not part of any percentage."""
    turns = list(turns)
    labels = [turn.label for turn in turns if not turn.is_error]
    by_round: Dict[int, List[ReasoningLabel]] = {}
    for turn in turns:
        if not turn.is_error:
            by_round.setdefault(turn.round_number, []).append(turn.label)
    return ReasoningDistribution(
        total=len(turns),
        labeled=len(labels),
        errors=len(turns) - len(labels),
        excluded_fallback=excluded_fallback,
        counts={label: labels.count(label) for label in ReasoningLabel},
        percentages=_percentages(labels),
        per_round={r: _percentages(values) for r, values in by_round.items()},
        per_round_counts={r: len(values) for r, values in by_round.items()},
    )


def classify_reasoning(
    logs: Iterable[GameLog],
    classifier: LlmAgentConfig,
    session: Optional[ChatBackend] = None,
    cache: Optional[ClassificationCache] = None,
    focal: Optional[str] = None,
    include_fallback: bool = False,
) -> Tuple[Tuple[LabeledTurn, ...], ReasoningDistribution]:
    """
    Label the reasoning of every turn in the logs.

    Args:
        logs: Game logs
        classifier: Classifier endpoint configuration
        session: Chat backend; created on the first cache miss if None
        cache: Answer cache; cached turns make no request
        focal: Only classify turns played by this agent
        include_fallback: Also classify turns whose action was a random fallback

    Returns:
        The labeled turns in log order and their distribution

    Raises:
        EmptyInputError: If there are no turns to classify
        TransportError: If the classifier endpoint fails
    """
    model = classifier.model_name
    labeled: List[LabeledTurn] = []
    excluded = 0
    requests = 0
    for log in logs:
        for turn in log.turns:
            agent = log.agent_name(turn.mover)
            if focal is not None and agent != focal:
                continue
            if turn.fallback_used and not include_fallback:
                excluded += 1
                continue

            key = ClassificationCache.key(log.game_id, turn.turn_number, model, turn.reason)
            raw = cache.get(key) if cache is not None else None
            if raw is None:
                if session is None:
                    session = ProviderFactory.create_chat_session(classifier)
                prompt = build_classification_prompt(turn.reason)
                conversation_logger.debug(f"classify {key} prompt:\n{prompt}")
                raw = session.complete([{"role": "user", "content": prompt}])
                conversation_logger.debug(f"classify {key} response:\n{raw}")
                requests += 1
                if cache is not None:
                    cache.put(key, raw)

            label = parse_label(raw)
            if label is None:
                logger.warning(f"No reasoning label in classifier output for {key}")
            labeled.append(
                LabeledTurn(
                    log_id=log.game_id,
                    turn_number=turn.turn_number,
                    round_number=turn.round_number,
                    agent=agent,
                    model=model,
                    label=label,
                    raw=raw,
                )
            )

    if not labeled:
        raise EmptyInputError("No turns to classify")
    result = distribution(labeled, excluded_fallback=excluded)
    logger.info(
        f"Classified {result.total} turns with {model} ({requests} requests, "
        f"{result.total - requests} cached, {result.errors} errors, {excluded} fallback excluded)"
    )
    return tuple(labeled), result
