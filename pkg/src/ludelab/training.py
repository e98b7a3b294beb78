"""Feature learning through self-play.

Candidate patterns are all one- and two-element patterns over the
game's direction labels (in a documented order, truncated at a cap).
Self-play games are played with the base search configuration; after
each decisive game the weights of patterns matching the winner's chosen
moves are increased by the learning rate and those matching the loser's
decreased.  The returned table is pruned to the strongest patterns by
absolute weight.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .features import BoundFeatures, FeatureElement, FeaturePattern, FeatureTable
from .mcts import SearchConfig, choose_move
from .state import WIN, derive_seed

CANDIDATE_CAP = 512
PRUNE_TO = 64
CONTENT_ORDER = ("Own", "Enemy", "Empty", "OffBoard")


def _walkable_labels(game):
    board = game.board
    return [lab for lab in board.direction_labels
            if any(board.step(c, lab) is not None for c in range(board.cell_count))]


def generate_candidates(game, cap: int = CANDIDATE_CAP):
    """Candidate patterns in documented order:

    1. one element, one-step walk (anchor MoveTo)
    2. same, anchored MoveFrom (step games only)
    3. two elements, both one-step walks with distinct directions
    4. one element, two-step walk
    5. two elements, one one-step + one two-step walk
    """
    labels = _walkable_labels(game)
    elems1 = [FeatureElement((lab,), c) for lab in labels for c in CONTENT_ORDER]
    elems2 = [FeatureElement((a, b), c)
              for a in labels for b in labels for c in CONTENT_ORDER]
    out: list[FeaturePattern] = []

    def emit(elements, anchor="to"):
        if len(out) < cap:
            out.append(FeaturePattern(tuple(elements), anchor))

    for e in elems1:
        emit((e,))
    if game.move_rule.kind == "step":
        for e in elems1:
            emit((e,), anchor="from")
    for e1, e2 in combinations(elems1, 2):
        if e1.walk != e2.walk:
            emit((e1, e2))
    for e in elems2:
        emit((e,))
    for e1 in elems1:
        for e2 in elems2:
            emit((e1, e2))
    return tuple(out[:cap])


def train_features(game, games: int, base_cfg: SearchConfig, learn_rate: float,
                   *, cap: int = CANDIDATE_CAP, prune_to: int = PRUNE_TO,
                   temperature: float = 1.0) -> FeatureTable:
    """Self-play reinforcement over the candidate set; deterministic for
    a fixed base_cfg.rng_seed."""
    if games < 1:
        raise ValueError("games must be >= 1")
    candidates = generate_candidates(game, cap)
    table = FeatureTable(candidates, temperature)
    bound = BoundFeatures(game, table)
    weights = np.zeros(len(candidates), dtype=np.float64)

    for gi in range(games):
        s = game.initial_state()
        history = []  # (state, move, mover)
        ply = 0
        while True:
            out = game.status(s)
            if out.is_terminal:
                break
            seed = derive_seed(base_cfg.rng_seed, gi, s.mover, ply)
            m = choose_move(game, s, base_cfg.with_seed(seed))
            history.append((s, m, s.mover))
            s = game.apply(s, m, trusted=True)
            ply += 1
        if out.status != WIN or learn_rate == 0.0:
            continue
        for before, move, mover in history:
            matched = bound.matched_patterns(before, move)
            if mover == out.winner:
                weights[matched] += learn_rate
            else:
                weights[matched] -= learn_rate

    keep = sorted(range(len(candidates)),
                  key=lambda i: (-abs(weights[i]), i))[:prune_to]
    keep.sort()
    pruned = tuple(
        FeaturePattern(candidates[i].elements, candidates[i].anchor, float(weights[i]))
        for i in keep)
    return FeatureTable(pruned, temperature)
