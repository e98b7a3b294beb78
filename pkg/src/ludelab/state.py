"""Immutable game state, moves and outcomes.

The 64-bit state hash mixes (cell, occupant) pairs with the player to
move; move_count is deliberately excluded so that transposition keys,
state enumeration and the solver identify positions by board + mover.
"""

from __future__ import annotations

from dataclasses import dataclass

M64 = (1 << 64) - 1
_HASH_SEED = 0x6C75_6465_6C61_6201  # fixed: hashes are stable across runs


def _mix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return (x ^ (x >> 31)) & M64


def derive_seed(*parts) -> int:
    """Deterministically combine seed components (splitmix chain)."""
    x = _HASH_SEED
    for p in parts:
        x = _mix((x ^ (int(p) & M64)) & M64)
    return x


def zobrist_keys(cell_count: int, max_code: int) -> tuple:
    """keys[cell][occupant_code] plus two mover keys at the end."""
    keys = tuple(
        tuple(_mix(_HASH_SEED + cell * 64 + occ) for occ in range(max_code + 1))
        for cell in range(cell_count)
    )
    mover = (_mix(_HASH_SEED + 0x1000_0000 + 1), _mix(_HASH_SEED + 0x1000_0000 + 2))
    return keys, mover


ONGOING = "ongoing"
WIN = "win"
DRAW = "draw"


@dataclass(frozen=True)
class Outcome:
    status: str
    winner: int | None = None

    @property
    def is_terminal(self) -> bool:
        return self.status != ONGOING

    def __str__(self):
        if self.status == WIN:
            return f"win({self.winner})"
        return self.status


OUTCOME_ONGOING = Outcome(ONGOING)
OUTCOME_DRAW = Outcome(DRAW)


def win(player: int) -> Outcome:
    return Outcome(WIN, player)


@dataclass(frozen=True, order=True)
class Move:
    kind: str          # "add" | "step"
    frm: int           # -1 for add moves
    to: int
    player: int

    def to_line(self) -> str:
        frm = "-" if self.frm < 0 else str(self.frm)
        return f"{self.player} {self.kind} {frm} {self.to}"

    @classmethod
    def from_line(cls, line: str) -> "Move":
        player, kind, frm, to = line.split()
        return cls(kind, -1 if frm == "-" else int(frm), int(to), int(player))


@dataclass(frozen=True)
class GameState:
    board: tuple            # occupant code per cell: 0 empty, 1/2 player seat
    mover: int              # 1 or 2
    move_count: int
    hash: int

    def occupant(self, cell: int) -> int:
        return self.board[cell]


def other(player: int) -> int:
    return 3 - player
