"""Seeded playouts under a move policy."""

from __future__ import annotations

import random

from .state import M64, Outcome


class UniformPolicy:
    """Every legal move equally likely."""

    def select(self, game, s, moves, rng):
        return moves[rng.randrange(len(moves))]

    def __repr__(self):
        return "UniformPolicy()"


UNIFORM = UniformPolicy()


def playout(game, s, policy=UNIFORM, rng_seed: int = 0):
    """Play moves sampled from `policy` until terminal (or the game's
    move cap forces a draw).  Returns (Outcome, plies played)."""
    rng = random.Random(rng_seed & M64)
    plies = 0
    while True:
        out: Outcome = game.status(s)
        if out.is_terminal:
            return out, plies
        moves = game._moves(s)
        m = policy.select(game, s, moves, rng)
        s = game.apply(s, m, trusted=True)
        plies += 1
