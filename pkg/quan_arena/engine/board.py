"""
Domain types for the Ô Ăn Quan rules engine.

The board is a ring of 12 pits. Pits 0 and 6 are Quan pits that start with a
Mandarin token; pits 1-5 belong to Player A and pits 7-11 to Player B. All
types here are immutable so states can be shared freely between threads and
kept in game histories without copying.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

from ..config.constants import (
    DEFAULT_MANDARIN_POINT_VALUE,
    DEFAULT_MAX_ROUNDS,
    DEFAULT_QUAN_LEFTOVER_TO_SIDE_OWNER,
    DEFAULT_RELAY_ENABLED,
    DEFAULT_SWEEP_AT_END,
    INITIAL_PEASANTS_PER_PIT,
    INITIAL_QUAN_PEASANTS,
    PIT_COUNT,
    PLAYER_A_PITS,
    PLAYER_B_PITS,
    QUAN_PITS,
)
from .errors import InvalidConfigError


class Player(Enum):
    """The two sides of the board."""

    A = "A"
    B = "B"

    @property
    def index(self) -> int:
        """Position of this player's ledger in GameState.captured."""
        return 0 if self is Player.A else 1

    @property
    def opponent(self) -> "Player":
        return Player.B if self is Player.A else Player.A

    @property
    def pits(self) -> Tuple[int, ...]:
        """Absolute indices of this player's five Regular pits."""
        return PLAYER_A_PITS if self is Player.A else PLAYER_B_PITS


class PitKind(Enum):
    QUAN = "Quan"
    REGULAR = "Regular"


class Direction(Enum):
    """Scatter direction: LTR walks increasing indices, RTL decreasing."""

    LTR = "LTR"
    RTL = "RTL"

    @property
    def step(self) -> int:
        return 1 if self is Direction.LTR else -1


PIT_KINDS: Tuple[PitKind, ...] = tuple(
    PitKind.QUAN if index in QUAN_PITS else PitKind.REGULAR
    for index in range(PIT_COUNT)
)


def pit_kind(index: int) -> PitKind:
    """Return the fixed kind of the pit at an absolute index."""
    return PIT_KINDS[index]


def pit_owner(index: int) -> Optional[Player]:
    """Return the owner of a Regular pit, or None for Quan pits."""
    if index in PLAYER_A_PITS:
        return Player.A
    if index in PLAYER_B_PITS:
        return Player.B
    return None


def quan_owner(index: int) -> Player:
    """
    Return the side a Quan pit is scored to at the end-of-game sweep.

    Each Quan precedes its owner's first Regular pit in LTR order:
    Quan 0 precedes pit 1 (Player A), Quan 6 precedes pit 7 (Player B).
    """
    if index == QUAN_PITS[0]:
        return Player.A
    if index == QUAN_PITS[1]:
        return Player.B
    raise ValueError(f"Pit {index} is not a Quan pit")


@dataclass(frozen=True)
class Pit:
    """A single pit: peasant count plus the Mandarin flag for Quan pits."""

    peasants: int
    has_mandarin: bool
    kind: PitKind

    def __post_init__(self) -> None:
        if self.peasants < 0:
            raise ValueError(f"Pit cannot hold {self.peasants} peasants")
        if self.has_mandarin and self.kind is not PitKind.QUAN:
            raise ValueError("Only Quan pits can hold a Mandarin")

    @property
    def is_empty(self) -> bool:
        return self.peasants == 0 and not self.has_mandarin


@dataclass(frozen=True)
class BoardState:
    """The 12-pit ring."""

    pits: Tuple[Pit, ...]

    def __post_init__(self) -> None:
        if len(self.pits) != PIT_COUNT:
            raise ValueError(f"Board must have {PIT_COUNT} pits, got {len(self.pits)}")
        for index, pit in enumerate(self.pits):
            if pit.kind is not PIT_KINDS[index]:
                raise ValueError(f"Pit {index} must be {PIT_KINDS[index].value}")

    @classmethod
    def initial(cls) -> "BoardState":
        """Standard setup: a Mandarin in each Quan, five peasants per Regular pit."""
        return cls.from_vectors(
            [
                INITIAL_QUAN_PEASANTS if kind is PitKind.QUAN else INITIAL_PEASANTS_PER_PIT
                for kind in PIT_KINDS
            ],
            [kind is PitKind.QUAN for kind in PIT_KINDS],
        )

    @classmethod
    def from_vectors(
        cls, peasants: Sequence[int], mandarins: Optional[Sequence[bool]] = None
    ) -> "BoardState":
        """
        Build a board from a peasant vector and optional Mandarin flags.

        Args:
            peasants: 12 peasant counts in pit order
            mandarins: 12 Mandarin flags; defaults to no Mandarins on the board

        Returns:
            BoardState: The assembled board
        """
        if mandarins is None:
            mandarins = [False] * PIT_COUNT
        if len(peasants) != PIT_COUNT or len(mandarins) != PIT_COUNT:
            raise ValueError(f"Board vectors must have {PIT_COUNT} entries")
        return cls(
            pits=tuple(
                Pit(peasants=int(count), has_mandarin=bool(flag), kind=PIT_KINDS[index])
                for index, (count, flag) in enumerate(zip(peasants, mandarins))
            )
        )

    def __getitem__(self, index: int) -> Pit:
        return self.pits[index]

    @property
    def peasant_vector(self) -> Tuple[int, ...]:
        return tuple(pit.peasants for pit in self.pits)

    @property
    def mandarin_flags(self) -> Tuple[bool, ...]:
        return tuple(pit.has_mandarin for pit in self.pits)

    @property
    def total_peasants(self) -> int:
        return sum(pit.peasants for pit in self.pits)

    @property
    def mandarins_on_board(self) -> int:
        return sum(1 for pit in self.pits if pit.has_mandarin)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "peasants": list(self.peasant_vector),
            "mandarins": list(self.mandarin_flags),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoardState":
        return cls.from_vectors(data["peasants"], data["mandarins"])


@dataclass(frozen=True)
class Action:
    """A scatter from one of the mover's Regular pits in a direction."""

    pit: int
    direction: Direction

    def to_dict(self) -> Dict[str, Any]:
        return {"pit": self.pit, "direction": self.direction.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Action":
        return cls(pit=int(data["pit"]), direction=Direction(data["direction"]))

    def __str__(self) -> str:
        return f"pit {self.pit} {self.direction.value}"


@dataclass(frozen=True)
class CaptureLedger:
    """Tokens a player has captured so far."""

    peasants: int = 0
    mandarins: int = 0

    def points(self, mandarin_point_value: int) -> int:
        return self.peasants + self.mandarins * mandarin_point_value

    def to_dict(self) -> Dict[str, int]:
        return {"peasants": self.peasants, "mandarins": self.mandarins}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CaptureLedger":
        return cls(peasants=int(data["peasants"]), mandarins=int(data["mandarins"]))


@dataclass(frozen=True)
class RuleConfig:
    """Rule toggles fixed for the duration of a game."""

    mandarin_point_value: int = DEFAULT_MANDARIN_POINT_VALUE
    max_rounds: int = DEFAULT_MAX_ROUNDS
    relay_enabled: bool = DEFAULT_RELAY_ENABLED
    sweep_at_end: bool = DEFAULT_SWEEP_AT_END
    quan_leftover_to_side_owner: bool = DEFAULT_QUAN_LEFTOVER_TO_SIDE_OWNER

    def validate(self) -> None:
        """
        Check that the configuration can be played.

        Raises:
            InvalidConfigError: If a numeric setting is not a positive integer
        """
        for name in ("mandarin_point_value", "max_rounds"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidConfigError(f"{name} must be a positive integer, got {value!r}")
        for name in ("relay_enabled", "sweep_at_end", "quan_leftover_to_side_owner"):
            if not isinstance(getattr(self, name), bool):
                raise InvalidConfigError(f"{name} must be a boolean")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mandarin_point_value": self.mandarin_point_value,
            "max_rounds": self.max_rounds,
            "relay_enabled": self.relay_enabled,
            "sweep_at_end": self.sweep_at_end,
            "quan_leftover_to_side_owner": self.quan_leftover_to_side_owner,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RuleConfig":
        """
        Build a RuleConfig from a mapping, rejecting unknown keys.

        Raises:
            InvalidConfigError: If the mapping has unknown keys or invalid values
        """
        if not isinstance(data, dict):
            raise InvalidConfigError("Rule configuration must be an object")
        known = set(cls().to_dict())
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfigError(f"Unknown rule settings: {', '.join(unknown)}")
        config = cls(**data)
        config.validate()
        return config


class EndReason(Enum):
    BOTH_MANDARINS_CAPTURED = "BothMandarinsCaptured"
    NO_LEGAL_MOVES = "NoLegalMoves"
    ROUND_LIMIT = "RoundLimit"


class GameStatus(Enum):
    IN_PROGRESS = "InProgress"
    FINISHED = "Finished"


@dataclass(frozen=True)
class GameState:
    """
    Full game position.

    turn_number is the number of the turn about to be played, so a fresh game
    is on turn 1 and round 1; round k covers turns 2k-1 and 2k.
    """

    board: BoardState
    captured: Tuple[CaptureLedger, CaptureLedger]
    current_player: Player
    turn_number: int
    config: RuleConfig
    end_reason: Optional[EndReason] = None

    @property
    def round_number(self) -> int:
        return (self.turn_number + 1) // 2

    @property
    def status(self) -> GameStatus:
        return GameStatus.IN_PROGRESS if self.end_reason is None else GameStatus.FINISHED

    @property
    def is_finished(self) -> bool:
        return self.end_reason is not None

    @property
    def status_tag(self) -> str:
        """Status as written into hashes and logs: InProgress or Finished:<reason>."""
        if self.end_reason is None:
            return GameStatus.IN_PROGRESS.value
        return f"{GameStatus.FINISHED.value}:{self.end_reason.value}"

    def ledger(self, player: Player) -> CaptureLedger:
        return self.captured[player.index]

    @property
    def mandarins_captured(self) -> int:
        return sum(ledger.mandarins for ledger in self.captured)


class MoveEventKind(Enum):
    DROP = "Drop"
    RELAY_PICKUP = "RelayPickup"
    CAPTURE = "Capture"
    TURN_END_EMPTY = "TurnEndEmpty"
    TURN_END_QUAN = "TurnEndQuan"
    TURN_END_BLOCKED_QUAN = "TurnEndBlockedQuan"
    # Forced redistribution: one returned peasant placed in a pit
    REDISTRIBUTE = "Redistribute"


STEP_EVENT_KINDS = frozenset(
    {MoveEventKind.DROP, MoveEventKind.RELAY_PICKUP, MoveEventKind.CAPTURE}
)
TURN_END_KINDS = frozenset(
    {
        MoveEventKind.TURN_END_EMPTY,
        MoveEventKind.TURN_END_QUAN,
        MoveEventKind.TURN_END_BLOCKED_QUAN,
    }
)


@dataclass(frozen=True)
class MoveEvent:
    """One step of a move's trace."""

    kind: MoveEventKind
    pit: int
    amount: int = 0
    mandarin_captured: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "pit": self.pit,
            "amount": self.amount,
            "mandarin_captured": self.mandarin_captured,
        }


@dataclass(frozen=True)
class MoveOutcome:
    """Ordered event trace of one move plus its capture totals."""

    events: Tuple[MoveEvent, ...]
    peasants_captured: int
    mandarins_captured: int
    step_count: int

    @classmethod
    def from_events(cls, events: Sequence[MoveEvent]) -> "MoveOutcome":
        captures = [event for event in events if event.kind is MoveEventKind.CAPTURE]
        return cls(
            events=tuple(events),
            peasants_captured=sum(event.amount for event in captures),
            mandarins_captured=sum(1 for event in captures if event.mandarin_captured),
            step_count=sum(1 for event in events if event.kind in STEP_EVENT_KINDS),
        )

    @property
    def end_event(self) -> Optional[MoveEvent]:
        """The TurnEnd* event that closed the move, if any."""
        for event in reversed(self.events):
            if event.kind in TURN_END_KINDS:
                return event
        return None

    def points(self, mandarin_point_value: int) -> int:
        return self.peasants_captured + self.mandarins_captured * mandarin_point_value
