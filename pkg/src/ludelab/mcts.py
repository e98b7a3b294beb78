"""UCT Monte Carlo tree search with optional feature-biased playouts.

Single-seed runs are bit-reproducible: one master RNG drives playout
seeds, selection is deterministic, and all ties break toward the lowest
move order (moves are generated in sorted order).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from .errors import CalledOnTerminal
from .features import FeaturePolicy, FeatureTable
from .playout import UNIFORM, playout
from .state import M64, Move, Outcome, WIN

DEFAULT_EXPLORATION = 0.7


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = 256
    exploration_c: float = DEFAULT_EXPLORATION
    rng_seed: int = 0
    playout_policy: FeatureTable | None = None  # None = uniform playouts

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.exploration_c < 0:
            raise ValueError("exploration_c must be >= 0")

    def with_seed(self, seed: int) -> "SearchConfig":
        return replace(self, rng_seed=seed & M64)


def _reward_for(outcome: Outcome, player: int) -> float:
    if outcome.status == WIN:
        return 1.0 if outcome.winner == player else 0.0
    return 0.5  # draws score half


class _Node:
    __slots__ = ("state", "moves", "children", "visits", "rewards", "expanded",
                 "terminal")

    def __init__(self, game, state):
        self.state = state
        self.terminal = game.status(state)
        self.moves = [] if self.terminal.is_terminal else game._moves(state)
        self.children = [None] * len(self.moves)
        self.visits = [0] * len(self.moves)
        self.rewards = [0.0] * len(self.moves)
        self.expanded = 0


def search(game, s, cfg: SearchConfig) -> _Node:
    """Run the full UCT search and return the root node with statistics."""
    root = _Node(game, s)
    if root.terminal.is_terminal:
        raise CalledOnTerminal("search on a terminal state")
    rng = random.Random(cfg.rng_seed & M64)
    policy = UNIFORM if cfg.playout_policy is None \
        else FeaturePolicy(game, cfg.playout_policy)
    c = cfg.exploration_c

    for _ in range(cfg.iterations):
        node = root
        path = []
        while True:
            if node.terminal.is_terminal:
                outcome = node.terminal
                break
            if node.expanded < len(node.moves):
                i = node.expanded  # expand children in move order
                node.expanded += 1
                path.append((node, i))
                child = _Node(game, game.apply(node.state, node.moves[i], trusted=True))
                node.children[i] = child
                if child.terminal.is_terminal:
                    outcome = child.terminal
                else:
                    outcome, _ = playout(game, child.state, policy, rng.getrandbits(64))
                break
            total = sum(node.visits)
            log_total = math.log(total)
            best_i, best_v = 0, -1.0
            for i, n_i in enumerate(node.visits):
                v = node.rewards[i] / n_i + c * math.sqrt(log_total / n_i)
                if v > best_v:
                    best_i, best_v = i, v
            path.append((node, best_i))
            node = node.children[best_i]

        for parent, i in path:
            parent.visits[i] += 1
            parent.rewards[i] += _reward_for(outcome, parent.state.mover)
    return root


def choose_move(game, s, cfg: SearchConfig) -> Move:
    """Most-visited root move after cfg.iterations; ties break toward
    the lowest move order."""
    root = search(game, s, cfg)
    best_i = max(range(len(root.moves)), key=lambda i: (root.visits[i], -i))
    return root.moves[best_i]


def root_statistics(game, s, cfg: SearchConfig):
    """(moves, visit counts) of the root after a full search."""
    root = search(game, s, cfg)
    return root.moves, list(root.visits)
