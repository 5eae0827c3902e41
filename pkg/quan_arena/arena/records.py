"""
Match configuration and game log records.

A game log is a header, one TurnRecord per move and a result. Each record
serializes to one JSON object tagged with record_type.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from ..agent import AgentSpec, Exchange
from ..config.constants import DEFAULT_BASE_SEED, DEFAULT_GAMES
from ..engine import (
    Action,
    BoardState,
    CaptureLedger,
    EndReason,
    InvalidConfigError,
    Player,
    RuleConfig,
    mix_seed,
)
from .errors import MalformedLogError

HEADER_RECORD = "header"
TURN_RECORD = "turn"
RESULT_RECORD = "result"


@dataclass(frozen=True)
class MatchConfig:
    """
    Two agents, the rules they play under and how many games to run.

    With swap_sides the agents trade sides every odd-numbered game, so each
    gets to move first half of the time; otherwise agent_a always plays A
    and moves first.
    """

    agent_a: AgentSpec
    agent_b: AgentSpec
    rule_config: RuleConfig = field(default_factory=RuleConfig)
    games: int = DEFAULT_GAMES
    base_seed: int = DEFAULT_BASE_SEED
    swap_sides: bool = False

    def validate(self) -> None:
        if isinstance(self.games, bool) or not isinstance(self.games, int) or self.games < 1:
            raise ValueError(f"games must be a positive integer, got {self.games!r}")
        if isinstance(self.base_seed, bool) or not isinstance(self.base_seed, int):
            raise ValueError("base_seed must be an integer")
        if self.agent_a.name == self.agent_b.name:
            raise ValueError(f"Both agents are named '{self.agent_a.name}'; names must differ")
        self.agent_a.validate()
        self.agent_b.validate()
        self.rule_config.validate()

    @property
    def matchup_id(self) -> str:
        return f"{self.agent_a.name}-vs-{self.agent_b.name}"

    def game_seed(self, game_index: int) -> int:
        """Per-game seed: FNV-1a 64 over (base_seed, game_index) as 8-byte LE words."""
        return mix_seed(self.base_seed, game_index)

    def players(self, game_index: int) -> Dict[Player, AgentSpec]:
        """Which agent plays which side in a game."""
        if self.swap_sides and game_index % 2 == 1:
            return {Player.A: self.agent_b, Player.B: self.agent_a}
        return {Player.A: self.agent_a, Player.B: self.agent_b}

    def game_id(self, game_index: int) -> str:
        return f"{self.matchup_id}-g{game_index:04d}"


@dataclass(frozen=True)
class GameHeader:
    game_id: str
    game_index: int
    seed: int
    rule_config: RuleConfig
    players: Dict[Player, AgentSpec]
    version: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "record_type": HEADER_RECORD,
            "game_id": self.game_id,
            "game_index": self.game_index,
            "seed": self.seed,
            "rule_config": self.rule_config.to_dict(),
            "agents": {side.value: spec.to_dict() for side, spec in self.players.items()},
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameHeader":
        agents = data["agents"]
        return cls(
            game_id=data["game_id"],
            game_index=int(data["game_index"]),
            seed=int(data["seed"]),
            rule_config=RuleConfig.from_dict(data["rule_config"]),
            players={side: _spec_from_log(agents[side.value]) for side in Player},
            version=data["version"],
        )


def _spec_from_log(data: Dict[str, Any]) -> AgentSpec:
    # seed is written as null for unseeded agents
    values = {key: value for key, value in data.items() if value is not None}
    return AgentSpec.from_dict(values)


@dataclass(frozen=True)
class TurnRecord:
    """Everything about one move needed to replay and analyze it."""

    turn_number: int
    round_number: int
    mover: Player
    board_before: BoardState
    action: Action
    reason: str
    fallback_used: bool
    attempts: int
    step_count: int
    peasants_captured: int
    mandarins_captured: int
    board_after: BoardState
    ledgers_after: Tuple[CaptureLedger, CaptureLedger]
    state_hash_after: str
    exchanges: Tuple[Exchange, ...] = ()

    def points_captured(self, mandarin_point_value: int) -> int:
        return self.peasants_captured + self.mandarins_captured * mandarin_point_value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "record_type": TURN_RECORD,
            "turn_number": self.turn_number,
            "round_number": self.round_number,
            "mover": self.mover.value,
            "board_before": self.board_before.to_dict(),
            "action": self.action.to_dict(),
            "reason": self.reason,
            "fallback_used": self.fallback_used,
            "attempts": self.attempts,
            "step_count": self.step_count,
            "peasants_captured": self.peasants_captured,
            "mandarins_captured": self.mandarins_captured,
            "board_after": self.board_after.to_dict(),
            "ledgers_after": [ledger.to_dict() for ledger in self.ledgers_after],
            "state_hash_after": self.state_hash_after,
            "exchanges": [exchange.to_dict() for exchange in self.exchanges],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TurnRecord":
        ledgers = data["ledgers_after"]
        if len(ledgers) != 2:
            raise ValueError("ledgers_after must hold two ledgers")
        return cls(
            turn_number=int(data["turn_number"]),
            round_number=int(data["round_number"]),
            mover=Player(data["mover"]),
            board_before=BoardState.from_dict(data["board_before"]),
            action=Action.from_dict(data["action"]),
            reason=str(data["reason"]),
            fallback_used=bool(data["fallback_used"]),
            attempts=int(data["attempts"]),
            step_count=int(data["step_count"]),
            peasants_captured=int(data["peasants_captured"]),
            mandarins_captured=int(data["mandarins_captured"]),
            board_after=BoardState.from_dict(data["board_after"]),
            ledgers_after=(
                CaptureLedger.from_dict(ledgers[0]),
                CaptureLedger.from_dict(ledgers[1]),
            ),
            state_hash_after=str(data["state_hash_after"]),
            exchanges=tuple(Exchange.from_dict(item) for item in data.get("exchanges", ())),
        )


@dataclass(frozen=True)
class GameResult:
    """
    How a game ended.

    Aborted games carry no end reason, points or winner.
    """

    end_reason: Optional[EndReason]
    points: Optional[Dict[Player, int]]
    winner: Optional[Player]
    ending_round: int
    aborted: bool = False
    error: Optional[str] = None

    @property
    def is_draw(self) -> bool:
        return not self.aborted and self.winner is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "record_type": RESULT_RECORD,
            "end_reason": self.end_reason.value if self.end_reason else None,
            "points": (
                {side.value: self.points[side] for side in Player} if self.points else None
            ),
            "winner": self.winner.value if self.winner else None,
            "ending_round": self.ending_round,
            "aborted": self.aborted,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameResult":
        points = data.get("points")
        return cls(
            end_reason=EndReason(data["end_reason"]) if data.get("end_reason") else None,
            points={side: int(points[side.value]) for side in Player} if points else None,
            winner=Player(data["winner"]) if data.get("winner") else None,
            ending_round=int(data["ending_round"]),
            aborted=bool(data.get("aborted", False)),
            error=data.get("error"),
        )


@dataclass(frozen=True)
class GameLog:
    header: GameHeader
    turns: Tuple[TurnRecord, ...]
    result: GameResult

    @property
    def game_id(self) -> str:
        return self.header.game_id

    @property
    def aborted(self) -> bool:
        return self.result.aborted

    def side_of(self, agent_name: str) -> Optional[Player]:
        """Side played by the named agent, or None if it did not play."""
        for side, spec in self.header.players.items():
            if spec.name == agent_name:
                return side
        return None

    def agent_name(self, side: Player) -> str:
        return self.header.players[side].name

    def to_records(self) -> Tuple[Dict[str, Any], ...]:
        return (
            self.header.to_dict(),
            *(turn.to_dict() for turn in self.turns),
            self.result.to_dict(),
        )

    @classmethod
    def from_records(cls, records: Tuple[Dict[str, Any], ...]) -> "GameLog":
        """
        Rebuild a log from its JSON records.

        Raises:
            MalformedLogError: If records are missing, out of order or invalid
        """
        if len(records) < 2:
            raise MalformedLogError("A game log needs at least a header and a result")
        kinds = [record.get("record_type") if isinstance(record, dict) else None for record in records]
        if kinds[0] != HEADER_RECORD or kinds[-1] != RESULT_RECORD:
            raise MalformedLogError("A game log must start with a header and end with a result")
        if any(kind != TURN_RECORD for kind in kinds[1:-1]):
            raise MalformedLogError("Only turn records may appear between header and result")
        try:
            return cls(
                header=GameHeader.from_dict(records[0]),
                turns=tuple(TurnRecord.from_dict(record) for record in records[1:-1]),
                result=GameResult.from_dict(records[-1]),
            )
        except (KeyError, TypeError, ValueError, InvalidConfigError) as e:
            raise MalformedLogError(f"Invalid record: {type(e).__name__}: {e}") from e
