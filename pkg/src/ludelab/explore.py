"""Exhaustive exploration: reachable-state enumeration (optionally
reduced by board symmetry and color swap) and backward-induction solving
of small games.

Both operations identify positions by (board, mover) and ignore move
counters, so games with an explicit (moveLimit n) end rule are rejected:
their state space is not a function of the board alone.  Cycles that a
move cap would eventually cut off are treated as draws under optimal
play by the solver.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import StateBudgetExceeded, UnsupportedLudemeCombination
from .game import ConnectCond, Game, LineCond
from .state import DRAW, GameState, OUTCOME_DRAW, Outcome, other, win

REDUCTIONS = ("none", "symmetry", "symmetry_color")


def _rule_signatures(game: Game, perm, swap: bool):
    sigs = []
    for rule in game.end_rules:
        if swap and rule.who:
            who = tuple(sorted(other(p) for p in rule.who))
        else:
            who = rule.who
        cond = rule.cond
        if isinstance(cond, ConnectCond):
            a = frozenset(perm[c] for c in cond.a)
            b = frozenset(perm[c] for c in cond.b)
            sig = ("connect", frozenset((a, b)))
        elif isinstance(cond, LineCond):
            sig = ("line", cond.k, len(cond.rays))
        else:
            sig = (type(cond).__name__,)
        sigs.append((rule.verb, who, sig))
    return sigs


def state_transforms(game: Game, color_swap: bool):
    """Board symmetries (optionally combined with a color swap) that are
    automorphisms of the *game*, i.e. leave the rules invariant."""
    identity = tuple(range(game.board.cell_count))
    base = _rule_signatures(game, identity, False)
    gate_region = getattr(game.move_rule, "gate_region", None)
    out = []
    for swap in ((False, True) if color_swap else (False,)):
        if swap and game.piece_limits[1] != game.piece_limits[2]:
            continue
        for perm in game.board.symmetries:
            if gate_region is not None:
                if {perm[c] for c in gate_region} != set(gate_region):
                    continue
            if _rule_signatures(game, perm, swap) == base:
                out.append((perm, swap))
    return out


def canonical_form(game: Game, s: GameState, transforms):
    """Lexicographically minimal (board, mover) over the transform set."""
    best = None
    for perm, swap in transforms:
        nb = [0] * len(s.board)
        if swap:
            for c, o in enumerate(s.board):
                nb[perm[c]] = other(o) if o else 0
            mv = other(s.mover)
        else:
            for c, o in enumerate(s.board):
                nb[perm[c]] = o
            mv = s.mover
        cand = (tuple(nb), mv)
        if best is None or cand < best:
            best = cand
    return best


@dataclass
class EnumerationResult:
    reduction: str
    states: dict           # canonical key -> representative GameState
    transform_count: int
    raw_count: int         # reachable (board, mover) states before reduction

    @property
    def count(self) -> int:
        return len(self.states)


def enumerate_states(game: Game, reduction: str = "none",
                     budget: int = 10_000_000) -> EnumerationResult:
    """BFS over legal play from the initial state.

    Without reduction, states are keyed by (board, mover).  The reduced
    conventions key on the *board pattern* alone, canonicalized over the
    game-preserving board symmetries ("symmetry") optionally combined
    with a color swap ("symmetry_color").  Dropping the mover from the
    reduced keys is the convention that reproduces the published
    position counts for small games; the BFS itself always runs over
    full (board, mover) states, so reachability is exact.
    """
    if reduction not in REDUCTIONS:
        raise ValueError(f"reduction must be one of {REDUCTIONS}")
    if game.has_move_limit_rule:
        raise UnsupportedLudemeCombination(
            "state enumeration is undefined for (moveLimit n) games")
    if reduction == "none":
        transforms = [(tuple(range(game.board.cell_count)), False)]
    else:
        transforms = state_transforms(game, color_swap=(reduction == "symmetry_color"))

    s0 = game.initial_state()
    seen = {(s0.board, s0.mover)}
    frontier = deque([s0])
    order = [s0]
    while frontier:
        s = frontier.popleft()
        if game.status(s, ignore_cap=True).is_terminal:
            continue
        for m in game._moves(s):
            child = game.apply(s, m, trusted=True)
            key = (child.board, child.mover)
            if key not in seen:
                if len(seen) >= budget:
                    raise StateBudgetExceeded(f"more than {budget} states")
                seen.add(key)
                order.append(child)
                frontier.append(child)

    states: dict = {}
    if reduction == "none":
        for s in order:
            states[(s.board, s.mover)] = s
    else:
        for s in order:
            key = _canonical_board(s.board, transforms)
            if key not in states:
                states[key] = s
    return EnumerationResult(reduction, states, len(transforms), len(order))


def _canonical_board(board, transforms):
    best = None
    for perm, swap in transforms:
        nb = [0] * len(board)
        if swap:
            for c, o in enumerate(board):
                nb[perm[c]] = other(o) if o else 0
        else:
            for c, o in enumerate(board):
                nb[perm[c]] = o
        t = tuple(nb)
        if best is None or t < best:
            best = t
    return best


# --- solver -------------------------------------------------------------------

WIN_LABEL, LOSS_LABEL, DRAW_LABEL = 1, -1, 0


@dataclass
class SolveResult:
    game: Game
    index: dict        # (board, mover) -> node id
    nodes: list        # node id -> GameState
    labels: list       # node id -> WIN/LOSS/DRAW from the mover's perspective

    @property
    def state_count(self) -> int:
        return len(self.nodes)

    def _label(self, s: GameState) -> int:
        return self.labels[self.index[(s.board, s.mover)]]

    def outcome_of(self, s: GameState) -> Outcome:
        lab = self._label(s)
        if lab == WIN_LABEL:
            return win(s.mover)
        if lab == LOSS_LABEL:
            return win(other(s.mover))
        return OUTCOME_DRAW

    @property
    def game_value(self) -> Outcome:
        return self.outcome_of(self.game.initial_state())

    def move_outcomes(self, s: GameState):
        out = []
        for m in self.game._moves(s):
            child = self.game.apply(s, m, trusted=True)
            out.append((m, self.outcome_of(child)))
        return out

    def best_moves(self, s: GameState):
        """Moves preserving the state's optimal value for the mover."""
        target = self.outcome_of(s)
        return [m for m, o in self.move_outcomes(s) if o == target]

    def immediate_winning_moves(self, s: GameState):
        g = self.game
        return [m for m in g._moves(s)
                if g.status(g.apply(s, m, trusted=True), ignore_cap=True) == win(s.mover)]


def solve(game: Game, budget: int = 1_000_000) -> SolveResult:
    """Backward induction over the reachable (board, mover) graph.

    Positions that are not forced wins or losses (including any position
    on an unforced cycle) are draws under optimal play.
    """
    if game.has_move_limit_rule:
        raise UnsupportedLudemeCombination(
            "solving is undefined for (moveLimit n) games")
    s0 = game.initial_state()
    key0 = (s0.board, s0.mover)
    index = {key0: 0}
    nodes = [s0]
    succs: list = []
    terminal: list = []
    frontier = deque([0])
    while frontier:
        i = frontier.popleft()
        while len(succs) <= i:
            succs.append(None)
            terminal.append(None)
        s = nodes[i]
        out = game.status(s, ignore_cap=True)
        if out.is_terminal:
            succs[i] = []
            terminal[i] = out
            continue
        kids = []
        for m in game._moves(s):
            child = game.apply(s, m, trusted=True)
            key = (child.board, child.mover)
            j = index.get(key)
            if j is None:
                j = len(nodes)
                if j >= budget:
                    raise StateBudgetExceeded(f"more than {budget} states")
                index[key] = j
                nodes.append(child)
                frontier.append(j)
            kids.append(j)
        succs[i] = kids
        terminal[i] = None

    n = len(nodes)
    preds: list = [[] for _ in range(n)]
    for i, kids in enumerate(succs):
        for j in kids:
            preds[j].append(i)
    labels = [None] * n
    undecided = [len(k) for k in succs]
    has_draw_child = [False] * n
    queue = deque()
    for i in range(n):
        if terminal[i] is not None:
            out = terminal[i]
            if out.status == DRAW:
                labels[i] = DRAW_LABEL
            else:
                labels[i] = WIN_LABEL if out.winner == nodes[i].mover else LOSS_LABEL
            queue.append(i)
    while queue:
        j = queue.popleft()
        lab = labels[j]
        for i in preds[j]:
            if labels[i] is not None:
                continue
            if lab == LOSS_LABEL:
                labels[i] = WIN_LABEL
                queue.append(i)
            else:
                if lab == DRAW_LABEL:
                    has_draw_child[i] = True
                undecided[i] -= 1
                if undecided[i] == 0:
                    labels[i] = DRAW_LABEL if has_draw_child[i] else LOSS_LABEL
                    queue.append(i)
    for i in range(n):
        if labels[i] is None:
            labels[i] = DRAW_LABEL  # unforced cycle
    return SolveResult(game, index, nodes, labels)
