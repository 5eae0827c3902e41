"""
Unit tests for state digests and seed mixing.

The golden values pin the 64-bit FNV-1a digests so logs written by other
builds keep verifying.
"""

import pytest

from quan_arena.engine import (
    Action,
    Direction,
    EndReason,
    GameState,
    RuleConfig,
    apply_move,
    format_digest,
    mix_seed,
    new_game,
    state_hash,
)
from quan_arena.engine.hashing import canonical_bytes, fnv1a_64

INITIAL_CANONICAL = b"0,1;5,0;5,0;5,0;5,0;5,0;0,1;5,0;5,0;5,0;5,0;5,0|0,0;0,0|A|1|InProgress"
INITIAL_DIGEST = "2f409e681007bda9"
AFTER_RELAY_FIXTURE_DIGEST = "8874701943542b21"


class TestFnv1a:
    """Test cases for the raw digest."""

    def test_reference_vectors(self):
        assert fnv1a_64(b"") == 0xCBF29CE484222325
        assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C

    def test_digest_is_64_bit(self):
        assert 0 <= fnv1a_64(b"x" * 1000) < 2**64


class TestStateHash:
    """Test cases for state_hash and its canonical serialization."""

    def test_initial_canonical_serialization(self):
        assert canonical_bytes(new_game()) == INITIAL_CANONICAL

    def test_initial_state_golden_digest(self):
        assert format_digest(state_hash(new_game())) == INITIAL_DIGEST

    def test_digest_after_canonical_relay_move(self):
        state, _ = apply_move(new_game(), Action(5, Direction.LTR))
        assert format_digest(state_hash(state)) == AFTER_RELAY_FIXTURE_DIGEST

    def test_rule_config_is_not_part_of_the_digest(self):
        assert state_hash(new_game(RuleConfig(max_rounds=10))) == state_hash(new_game())

    def test_status_is_part_of_the_digest(self):
        state = new_game()
        finished = GameState(
            board=state.board,
            captured=state.captured,
            current_player=state.current_player,
            turn_number=state.turn_number,
            config=state.config,
            end_reason=EndReason.ROUND_LIMIT,
        )
        assert canonical_bytes(finished).endswith(b"|Finished:RoundLimit")
        assert state_hash(finished) != state_hash(state)

    def test_format_digest_pads_to_sixteen_digits(self):
        assert format_digest(0xABC) == "0000000000000abc"


class TestMixSeed:
    """Test cases for seed mixing."""

    def test_golden_values(self):
        assert mix_seed(0, 0) == 0x88201FB960FF6465
        assert mix_seed(42, 1) == 0x9F4F797EB24004AE

    def test_order_matters(self):
        assert mix_seed(1, 2) != mix_seed(2, 1)

    @pytest.mark.parametrize("value", [-1, -12345])
    def test_negative_parts_wrap_modulo_two_to_the_64(self, value):
        assert mix_seed(value) == mix_seed(value + 2**64)
