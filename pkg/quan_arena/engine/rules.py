"""
Ô Ăn Quan rules: setup, move generation, the scatter/relay/capture pipeline,
the extra rules, termination and scoring.

Every public function is pure: it takes immutable values and returns new
ones. Moves are executed on a private mutable workspace and frozen back into
a GameState at the end.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..config.constants import (
    MOVE_EVENT_BUDGET,
    PIT_COUNT,
    PROTECTED_OPENING_ROUNDS,
    QUAN_NON_THRESHOLD,
    QUAN_PITS,
    REDISTRIBUTION_COST,
    TOTAL_MANDARINS,
    TOTAL_PEASANTS,
)
from .board import (
    Action,
    BoardState,
    CaptureLedger,
    Direction,
    EndReason,
    GameState,
    MoveEvent,
    MoveEventKind,
    MoveOutcome,
    PitKind,
    Player,
    RuleConfig,
    pit_kind,
    quan_owner,
)
from .errors import (
    ConservationError,
    EmptySourceError,
    GameFinishedError,
    GameNotFinishedError,
    IllegalActionError,
    QuanSourceError,
    StepBudgetExceededError,
)

logger = logging.getLogger(__name__)

MoveObserver = Callable[[MoveEvent, BoardState, Tuple[CaptureLedger, CaptureLedger]], None]


class _Workspace:
    """Mutable scratch copy of a state used while a move is executed."""

    __slots__ = ("peasants", "mandarins", "ledger_peasants", "ledger_mandarins", "events", "observer")

    def __init__(self, state: GameState, observer: Optional[MoveObserver] = None) -> None:
        self.peasants: List[int] = list(state.board.peasant_vector)
        self.mandarins: List[bool] = list(state.board.mandarin_flags)
        self.ledger_peasants: List[int] = [ledger.peasants for ledger in state.captured]
        self.ledger_mandarins: List[int] = [ledger.mandarins for ledger in state.captured]
        self.events: List[MoveEvent] = []
        self.observer = observer

    def emit(self, event: MoveEvent) -> None:
        self.events.append(event)
        if len(self.events) > MOVE_EVENT_BUDGET:
            raise StepBudgetExceededError(
                f"Move exceeded the budget of {MOVE_EVENT_BUDGET} events"
            )
        if self.observer is not None:
            self.observer(event, self.board(), self.ledgers())

    def is_empty(self, index: int) -> bool:
        return self.peasants[index] == 0 and not self.mandarins[index]

    def board(self) -> BoardState:
        return BoardState.from_vectors(self.peasants, self.mandarins)

    def ledgers(self) -> Tuple[CaptureLedger, CaptureLedger]:
        return (
            CaptureLedger(self.ledger_peasants[0], self.ledger_mandarins[0]),
            CaptureLedger(self.ledger_peasants[1], self.ledger_mandarins[1]),
        )

    def check_conservation(self) -> None:
        peasants = sum(self.peasants) + sum(self.ledger_peasants)
        mandarins = sum(self.mandarins) + sum(self.ledger_mandarins)
        if peasants != TOTAL_PEASANTS or mandarins != TOTAL_MANDARINS:
            raise ConservationError(
                f"Token totals drifted: {peasants} peasants, {mandarins} Mandarins"
            )


def new_game(config: Optional[RuleConfig] = None) -> GameState:
    """
    Create the initial game state with Player A to move.

    Args:
        config: Rule configuration; defaults to RuleConfig()

    Returns:
        GameState: Turn 1, round 1, empty ledgers, standard board

    Raises:
        InvalidConfigError: If the configuration is not playable
    """
    config = config or RuleConfig()
    config.validate()
    return GameState(
        board=BoardState.initial(),
        captured=(CaptureLedger(), CaptureLedger()),
        current_player=Player.A,
        turn_number=1,
        config=config,
    )


def _needs_redistribution(peasants: Sequence[int], ledger_peasants: int, player: Player) -> bool:
    return all(peasants[pit] == 0 for pit in player.pits) and ledger_peasants >= REDISTRIBUTION_COST


def _redistribute(ws: _Workspace, player: Player) -> None:
    # One returned peasant into each of the mover's five pits
    if not _needs_redistribution(ws.peasants, ws.ledger_peasants[player.index], player):
        return
    for pit in player.pits:
        ws.ledger_peasants[player.index] -= 1
        ws.peasants[pit] += 1
        ws.emit(MoveEvent(MoveEventKind.REDISTRIBUTE, pit, amount=1))
    logger.debug(f"Player {player.value} redistributed {REDISTRIBUTION_COST} captured peasants")


def begin_turn(state: GameState) -> Tuple[GameState, Tuple[MoveEvent, ...]]:
    """
    Apply forced redistribution for the player about to move, if required.

    Returns:
        The (possibly) updated state and the Redistribute events emitted
    """
    if state.is_finished:
        raise GameFinishedError("Game is already finished")
    player = state.current_player
    if not _needs_redistribution(
        state.board.peasant_vector, state.ledger(player).peasants, player
    ):
        return state, ()
    ws = _Workspace(state)
    _redistribute(ws, player)
    return _freeze(ws, state), tuple(ws.events)


def _legal_from(peasants: Sequence[int], player: Player) -> Tuple[Action, ...]:
    return tuple(
        Action(pit, direction)
        for pit in player.pits
        if peasants[pit] > 0
        for direction in (Direction.LTR, Direction.RTL)
    )


def legal_actions(state: GameState) -> Tuple[Action, ...]:
    """
    Every legal action for the player to move, in canonical order.

    Forced redistribution is taken into account first, so a player with an empty
    row and at least 5 captured peasants gets all ten actions. The result is
    empty only when check_end reports NoLegalMoves.

    Raises:
        GameFinishedError: If the game has already ended
    """
    prepared, _ = begin_turn(state)
    return _legal_from(prepared.board.peasant_vector, prepared.current_player)


def _sow(ws: _Workspace, source: int, direction: Direction) -> int:
    """Distribute every peasant of source one by one; return the last pit reached."""
    count = ws.peasants[source]
    step = direction.step
    position = source
    for _ in range(count):
        position = (position + step) % PIT_COUNT
        # Tokens leave the source one at a time so board totals hold after each drop;
        # a lap of 12 or more drops back into the source.
        ws.peasants[source] -= 1
        ws.peasants[position] += 1
        ws.emit(MoveEvent(MoveEventKind.DROP, position, amount=1))
    return position


def scatter_once(board: BoardState, i: int, d: Direction) -> BoardState:
    """
    Scatter every peasant of pit i one per pit in direction d.

    Raises:
        QuanSourceError: If i is a Quan pit
        EmptySourceError: If pit i holds no peasants
    """
    _check_source(board.peasant_vector, i)
    peasants = list(board.peasant_vector)
    count = peasants[i]
    peasants[i] = 0
    for k in range(1, count + 1):
        peasants[(i + k * d.step) % PIT_COUNT] += 1
    return BoardState.from_vectors(peasants, board.mandarin_flags)


def _check_source(peasants: Sequence[int], i: int) -> None:
    if pit_kind(i) is PitKind.QUAN:
        raise QuanSourceError(f"Pit {i} is a Quan pit and cannot be scattered")
    if peasants[i] < 1:
        raise EmptySourceError(f"Pit {i} holds no peasants")


def _capture_permitted(ws: _Workspace, index: int, round_number: int) -> bool:
    if pit_kind(index) is PitKind.REGULAR:
        return True
    if round_number <= PROTECTED_OPENING_ROUNDS:
        return False
    # An immature Mandarin (Quan Non) is immune
    return not (ws.mandarins[index] and ws.peasants[index] < QUAN_NON_THRESHOLD)


def _capture_chain(
    ws: _Workspace, i: int, direction: Direction, round_number: int, mover: Player
) -> None:
    step = direction.step
    while True:
        j1 = (i + step) % PIT_COUNT
        j2 = (i + 2 * step) % PIT_COUNT
        if not ws.is_empty(j1):
            return
        if ws.is_empty(j2):
            # Two empty pits end the turn
            ws.emit(MoveEvent(MoveEventKind.TURN_END_EMPTY, j2))
            return
        if not _capture_permitted(ws, j2, round_number):
            ws.emit(MoveEvent(MoveEventKind.TURN_END_BLOCKED_QUAN, j2))
            return
        # A permitted capture is always taken
        taken = ws.peasants[j2]
        mandarin = ws.mandarins[j2]
        ws.peasants[j2] = 0
        ws.mandarins[j2] = False
        ws.ledger_peasants[mover.index] += taken
        if mandarin:
            ws.ledger_mandarins[mover.index] += 1
        ws.emit(MoveEvent(MoveEventKind.CAPTURE, j2, amount=taken, mandarin_captured=mandarin))
        i = j2


def capture_chain(
    state: GameState, i: int, d: Direction
) -> Tuple[GameState, Tuple[MoveEvent, ...]]:
    """
    Run the capture loop from the pit that received the final drop.

    While the next pit is empty and the one beyond it holds tokens that may be
    captured, the mover takes them and the loop continues from the captured
    pit. A Quan pit may only be taken after the opening rounds and, while
    its Mandarin is present, only with at least 5 peasants; a blocked
    Quan ends the chain with TurnEndBlockedQuan. Ownership is not checked.

    Returns:
        The state with captured tokens moved to the mover's ledger, and the
        chain's events. Turn counters are not advanced.
    """
    if state.is_finished:
        raise GameFinishedError("Game is already finished")
    ws = _Workspace(state)
    _capture_chain(ws, i, d, state.round_number, state.current_player)
    return _freeze(ws, state), tuple(ws.events)


def apply_move(
    state: GameState, action: Action, on_event: Optional[MoveObserver] = None
) -> Tuple[GameState, MoveOutcome]:
    """
    Execute one full move and hand the turn to the opponent.

    Pipeline: forced redistribution if required, scatter from action.pit, then
    inspect the pit after the last drop. A nonempty Regular pit is picked up
    and scattered again (relay, when enabled); a Quan pit ends the turn; an
    empty pit starts the capture chain.

    Args:
        state: Position before the move
        action: One of legal_actions(state)
        on_event: Optional observer called after every event with the live
            board and ledgers

    Returns:
        The next state (counters advanced, end condition evaluated) and the
        move's outcome

    Raises:
        GameFinishedError: If the game has already ended
        IllegalActionError: If the action is not legal in this state
        StepBudgetExceededError: If the move emits more than 10,000 events
    """
    if state.is_finished:
        raise GameFinishedError("Game is already finished")

    mover = state.current_player
    ws = _Workspace(state, on_event)
    _redistribute(ws, mover)
    if action not in _legal_from(ws.peasants, mover):
        raise IllegalActionError(f"{action} is not legal for Player {mover.value}")

    step = action.direction.step
    source = action.pit
    while True:
        last = _sow(ws, source, action.direction)
        nxt = (last + step) % PIT_COUNT
        if pit_kind(nxt) is PitKind.QUAN:
            ws.emit(MoveEvent(MoveEventKind.TURN_END_QUAN, nxt))
            break
        if ws.peasants[nxt] > 0 and state.config.relay_enabled:
            ws.emit(MoveEvent(MoveEventKind.RELAY_PICKUP, nxt, amount=ws.peasants[nxt]))
            source = nxt
            continue
        _capture_chain(ws, last, action.direction, state.round_number, mover)
        break

    ws.check_conservation()
    outcome = MoveOutcome.from_events(ws.events)
    advanced = GameState(
        board=ws.board(),
        captured=ws.ledgers(),
        current_player=mover.opponent,
        turn_number=state.turn_number + 1,
        config=state.config,
    )
    end_reason = check_end(advanced)
    if end_reason is not None:
        advanced = GameState(
            board=advanced.board,
            captured=advanced.captured,
            current_player=advanced.current_player,
            turn_number=advanced.turn_number,
            config=advanced.config,
            end_reason=end_reason,
        )
        logger.debug(f"Game finished after turn {state.turn_number}: {end_reason.value}")
    return advanced, outcome


def check_end(state: GameState) -> Optional[EndReason]:
    """
    Return the reason the game is over, or None while play continues.

    BothMandarinsCaptured when both ledgers together hold 2 Mandarins;
    NoLegalMoves when the player to move has an empty row and cannot afford
    redistribution; RoundLimit when the next turn would fall past max_rounds.
    """
    if state.mandarins_captured >= TOTAL_MANDARINS:
        return EndReason.BOTH_MANDARINS_CAPTURED
    player = state.current_player
    peasants = state.board.peasant_vector
    if all(peasants[pit] == 0 for pit in player.pits) and (
        state.ledger(player).peasants < REDISTRIBUTION_COST
    ):
        return EndReason.NO_LEGAL_MOVES
    if state.round_number > state.config.max_rounds:
        return EndReason.ROUND_LIMIT
    return None


def final_scores(state: GameState) -> Dict[Player, int]:
    """
    Points per player for a finished game.

    Captured peasants score 1 and captured Mandarins mandarin_point_value.
    With sweep_at_end each player also collects the peasants left in their
    own five pits, and with quan_leftover_to_side_owner each Quan's leftover
    peasants and any Mandarin still in it go to the Quan's side owner.

    Raises:
        GameNotFinishedError: If the game is still in progress
    """
    if not state.is_finished:
        raise GameNotFinishedError("Scores are only defined for finished games")
    value = state.config.mandarin_point_value
    scores = {player: state.ledger(player).points(value) for player in Player}
    if state.config.sweep_at_end:
        board = state.board
        for player in Player:
            scores[player] += sum(board[pit].peasants for pit in player.pits)
        if state.config.quan_leftover_to_side_owner:
            for index in QUAN_PITS:
                pit = board[index]
                scores[quan_owner(index)] += pit.peasants + (value if pit.has_mandarin else 0)
    return scores


def winner(scores: Dict[Player, int]) -> Optional[Player]:
    """Return the player with more points, or None for a draw."""
    if scores[Player.A] == scores[Player.B]:
        return None
    return Player.A if scores[Player.A] > scores[Player.B] else Player.B


def _freeze(ws: _Workspace, state: GameState) -> GameState:
    return GameState(
        board=ws.board(),
        captured=ws.ledgers(),
        current_player=state.current_player,
        turn_number=state.turn_number,
        config=state.config,
        end_reason=state.end_reason,
    )
