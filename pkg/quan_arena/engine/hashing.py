"""
State digests and seed mixing.

Both use 64-bit FNV-1a so that other implementations can reproduce log
hashes and per-game seeds byte for byte.

Canonical state serialization (ASCII):

    <p0>,<m0>;<p1>,<m1>;...;<p11>,<m11>|<Apeasants>,<Amandarins>;<Bpeasants>,<Bmandarins>|<player>|<turn>|<status>

where m is 1 when the pit holds a Mandarin, player is A or B and status is
InProgress or Finished:<EndReason>.
"""

from typing import Iterable

from .board import GameState

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK_64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """Return the 64-bit FNV-1a digest of data."""
    digest = FNV_OFFSET_BASIS
    for byte in data:
        digest ^= byte
        digest = (digest * FNV_PRIME) & MASK_64
    return digest


def canonical_bytes(state: GameState) -> bytes:
    pits = ";".join(
        f"{pit.peasants},{int(pit.has_mandarin)}" for pit in state.board.pits
    )
    ledgers = ";".join(f"{ledger.peasants},{ledger.mandarins}" for ledger in state.captured)
    return (
        f"{pits}|{ledgers}|{state.current_player.value}|{state.turn_number}|{state.status_tag}"
    ).encode("ascii")


def state_hash(state: GameState) -> int:
    """Stable 64-bit digest of a game state."""
    return fnv1a_64(canonical_bytes(state))


def format_digest(digest: int) -> str:
    """Render a digest the way logs store it: 16 lowercase hex digits."""
    return f"{digest:016x}"


def mix_seed(*parts: int) -> int:
    """
    Combine integers into one 64-bit seed.

    Each part is reduced modulo 2**64 and serialized as 8 little-endian bytes;
    the seed is the FNV-1a digest of the concatenation. A tournament's
    per-game seed is mix_seed(base_seed, game_index).
    """
    return fnv1a_64(_pack(parts))


def _pack(parts: Iterable[int]) -> bytes:
    return b"".join((part & MASK_64).to_bytes(8, "little") for part in parts)
