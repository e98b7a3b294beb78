"""Compilation of validated game descriptions into executable games:
initial state, legal move generation, transitions and terminal detection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .board import BoardGraph, build_board
from .errors import (
    CalledOnTerminal,
    IllegalMove,
    PlacementConflict,
    UnsupportedLudemeCombination,
    ValidationError,
)
from .sexpr import LudemeNode
from .state import (
    DRAW,
    GameState,
    Move,
    ONGOING,
    OUTCOME_DRAW,
    OUTCOME_ONGOING,
    Outcome,
    other,
    win,
    zobrist_keys,
)
from .validate import GameDescription

DEFAULT_CAP_FACTOR = 10


# --- conditions -------------------------------------------------------------

@dataclass
class AdjacentCond:
    which: str    # "from" | "to"
    content: str  # "Own" | "Enemy" | "Empty"

    def holds(self, game, board, player, frm, to):
        cell = frm if self.which == "from" else to
        want = {"Own": player, "Enemy": other(player), "Empty": 0}[self.content]
        for nb in game.board.adjacency[cell]:
            if board[nb] == want:
                return True
        return False


def _compile_gate(game, node):
    region_name, cond = node.args[0], node.args[1]
    if region_name not in game.board.regions:
        raise UnsupportedLudemeCombination(
            f"(whenTo {region_name} ...): board has no region {region_name!r}")
    if cond.keyword != "adjacent":
        raise UnsupportedLudemeCombination(
            f"(whenTo): unsupported gate condition ({cond.keyword} ...)")
    return game.board.regions[region_name], AdjacentCond(cond.args[0], cond.args[1])


# --- move rules -------------------------------------------------------------

class AddRule:
    kind = "add"

    def __init__(self, game, node):
        what, where = node.args[0], node.args[1]
        if what.args[0] != "Own":
            raise UnsupportedLudemeCombination("(add): only (piece Own) is supported")
        if not where.args or where.args[0] != "Empty":
            raise UnsupportedLudemeCombination("(add): only (board Empty) is supported")
        self.game = game

    def stock_left(self, s, player):
        limit = self.game.piece_limits[player]
        if limit is None:
            return True
        return sum(1 for o in s.board if o == player) < limit

    def moves(self, s):
        if not self.stock_left(s, s.mover):
            return []
        p = s.mover
        return [Move("add", -1, c, p) for c, o in enumerate(s.board) if o == 0]

    def has_moves(self, s):
        return self.stock_left(s, s.mover) and any(o == 0 for o in s.board)


class StepRule:
    kind = "step"

    def __init__(self, game, node):
        what = node.args[0]
        if what.args[0] != "Own":
            raise UnsupportedLudemeCombination("(step): only (piece Own) is supported")
        self.game = game
        self.gate_region = None
        self.gate_cond = None
        gate = next((a for a in node.args if isinstance(a, LudemeNode)
                     and a.keyword == "whenTo"), None)
        if gate is not None:
            self.gate_region, self.gate_cond = _compile_gate(game, gate)

    def _allowed(self, board, player, frm, to):
        if self.gate_region is not None and to in self.gate_region:
            return self.gate_cond.holds(self.game, board, player, frm, to)
        return True

    def moves(self, s):
        p = s.mover
        adj = self.game.board.adjacency
        out = []
        for frm, o in enumerate(s.board):
            if o != p:
                continue
            for to in adj[frm]:
                if s.board[to] == 0 and self._allowed(s.board, p, frm, to):
                    out.append(Move("step", frm, to, p))
        out.sort()
        return out

    def has_moves(self, s):
        p = s.mover
        adj = self.game.board.adjacency
        for frm, o in enumerate(s.board):
            if o != p:
                continue
            for to in adj[frm]:
                if s.board[to] == 0 and self._allowed(s.board, p, frm, to):
                    return True
        return False


# --- end rule conditions -----------------------------------------------------

class LineCond:
    def __init__(self, game, node):
        if not game.board.rays:
            raise UnsupportedLudemeCombination(
                "(line): board has no direction structure")
        self.k = node.args[0]
        dirs = node.args[2] if len(node.args) > 2 else "Any"
        self.rays = game.board.rays_for(dirs)
        if not self.rays:
            raise UnsupportedLudemeCombination(f"(line ... {dirs}): no such rays on this board")

    def holds(self, game, s, player):
        k = self.k
        for ray in self.rays:
            cells = ray.cells
            if ray.cyclic:
                if len(cells) < k:
                    continue
                run = 0
                for c in list(cells) + list(cells[: k - 1]):
                    run = run + 1 if s.board[c] == player else 0
                    if run >= k:
                        return True
            else:
                run = 0
                for c in cells:
                    run = run + 1 if s.board[c] == player else 0
                    if run >= k:
                        return True
        return False


class ConnectCond:
    def __init__(self, game, node):
        self.a = _resolve_region(game, node.args[0])
        self.b = _resolve_region(game, node.args[1])

    def holds(self, game, s, player):
        board = s.board
        stack = [c for c in self.a if board[c] == player]
        if not stack:
            return False
        seen = set(stack)
        adj = game.board.adjacency
        while stack:
            c = stack.pop()
            if c in self.b:
                return True
            for nb in adj[c]:
                if board[nb] == player and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return False


class NoMovesCond:
    def __init__(self, game, node):
        pass

    def holds(self, game, s, player):
        return player == s.mover and not game.move_rule.has_moves(s)


class FullBoardCond:
    def __init__(self, game, node):
        pass

    def holds(self, game, s, player=None):
        return all(o != 0 for o in s.board)


class MoveLimitCond:
    def __init__(self, game, node):
        self.n = node.args[0]

    def holds(self, game, s, player=None):
        return s.move_count >= self.n


def _resolve_region(game, node) -> frozenset:
    if node.keyword == "side":
        name = node.args[0]
        region = game.board.regions.get(name)
        if region is None:
            raise UnsupportedLudemeCombination(f"(side {name}): board has no sides")
        return region
    if node.keyword == "cells":
        cells = node.args
        for c in cells:
            if not 0 <= c < game.board.cell_count:
                raise ValidationError(f"(cells): index {c} out of range")
        return frozenset(cells)
    raise UnsupportedLudemeCombination(f"unsupported region ({node.keyword} ...)")


_CONDS = {
    "line": LineCond,
    "connect": ConnectCond,
    "noMoves": NoMovesCond,
    "fullBoard": FullBoardCond,
    "moveLimit": MoveLimitCond,
}


@dataclass
class EndRule:
    verb: str            # win | lose | draw
    who: tuple           # affected seats (empty for draw)
    cond: object
    player_free: bool    # condition ignores the player argument

    def evaluate(self, game, s):
        if self.verb == "draw":
            if self.cond.holds(game, s):
                return OUTCOME_DRAW
            return None
        for p in self.who:
            if self.cond.holds(game, s, p):
                return win(p) if self.verb == "win" else win(other(p))
        return None


# --- the compiled game --------------------------------------------------------

class Game:
    """Executable game: board + rules compiled from a description."""

    def __init__(self, description: GameDescription, move_cap: int | None = None):
        if description.is_partial:
            raise UnsupportedLudemeCombination(
                "cannot compile a partial (equipment-only) description")
        self.description = description
        self.name = description.name
        self.player_names = description.player_names
        self.board: BoardGraph = build_board(description.equipment.args[0])
        self.move_cap = move_cap if move_cap is not None \
            else DEFAULT_CAP_FACTOR * self.board.cell_count

        self.piece_limits = {1: None, 2: None}
        for node in description.equipment.args[1:]:
            if isinstance(node, LudemeNode) and node.keyword == "pieces":
                seat = self._seat(node.args[0])
                self.piece_limits[seat] = node.args[1]

        rules = description.rules
        start = next((a for a in rules.args if isinstance(a, LudemeNode)
                      and a.keyword == "start"), None)
        self.placements: list = []
        if start is not None:
            for pl in start.args:
                if pl.keyword == "place":
                    seat = self._seat(pl.args[0])
                    for cell in pl.args[1:]:
                        if not 0 <= cell < self.board.cell_count:
                            raise ValidationError(f"(place): cell {cell} out of range")
                        self.placements.append((seat, cell))

        play = next(a for a in rules.args if isinstance(a, LudemeNode)
                    and a.keyword == "play")
        move_node = play.args[0]
        self.move_rule = (AddRule if move_node.keyword == "add" else StepRule)(self, move_node)
        self.capture_steps = None
        cap_node = next((a for a in play.args[1:] if isinstance(a, LudemeNode)
                         and a.keyword == "custodialCapture"), None)
        if cap_node is not None:
            if not self.board.rays:
                raise UnsupportedLudemeCombination(
                    "(custodialCapture): board has no direction structure")
            self.capture_steps = self.board.capture_steps(cap_node.args[0])

        end = next(a for a in rules.args if isinstance(a, LudemeNode)
                   and a.keyword == "end")
        self.end_rules: list[EndRule] = []
        for node in end.args:
            verb = node.keyword
            if verb == "draw":
                cond_node = node.args[0]
                who = ()
            else:
                who_name = node.args[0]
                who = (1, 2) if who_name == "All" else (self._seat(who_name),)
                cond_node = node.args[1]
            cond = _CONDS[cond_node.keyword](self, cond_node)
            self.end_rules.append(EndRule(
                verb, who, cond,
                player_free=cond_node.keyword in ("fullBoard", "moveLimit")))
        self.has_move_limit_rule = any(
            isinstance(r.cond, MoveLimitCond) for r in self.end_rules)

        self._keys, self._mover_keys = zobrist_keys(self.board.cell_count, 2)

    def _seat(self, name: str) -> int:
        try:
            return self.player_names.index(name) + 1
        except ValueError:
            raise ValidationError(f"unknown player name {name!r}") from None

    # --- state space ---------------------------------------------------------

    def state_hash(self, board, mover) -> int:
        h = self._mover_keys[mover - 1]
        keys = self._keys
        for c, o in enumerate(board):
            if o:
                h ^= keys[c][o]
        return h

    def make_state(self, board, mover, move_count=0) -> GameState:
        board = tuple(board)
        return GameState(board, mover, move_count, self.state_hash(board, mover))

    def initial_state(self) -> GameState:
        board = [0] * self.board.cell_count
        for seat, cell in self.placements:
            if board[cell] != 0:
                raise PlacementConflict(f"two pieces placed on cell {cell}")
            board[cell] = seat
        return self.make_state(board, 1, 0)

    def _moves(self, s: GameState) -> list[Move]:
        return self.move_rule.moves(s)

    def legal_moves(self, s: GameState) -> list[Move]:
        if self.status(s).is_terminal:
            raise CalledOnTerminal("legal_moves on a terminal state")
        return self._moves(s)

    def apply(self, s: GameState, m: Move, *, trusted: bool = False) -> GameState:
        if not trusted and m not in self._moves(s):
            raise IllegalMove(f"{m.to_line()} is not legal here")
        board = list(s.board)
        p = m.player
        h = s.hash ^ self._mover_keys[s.mover - 1] ^ self._mover_keys[other(s.mover) - 1]
        if m.kind == "step":
            board[m.frm] = 0
            h ^= self._keys[m.frm][p]
        board[m.to] = p
        h ^= self._keys[m.to][p]
        if self.capture_steps is not None:
            enemy = other(p)
            removed = [n1 for n1, n2 in self.capture_steps[m.to]
                       if board[n1] == enemy and board[n2] == p]
            for c in removed:
                board[c] = 0
                h ^= self._keys[c][enemy]
        return GameState(tuple(board), other(s.mover), s.move_count + 1, h)

    def status(self, s: GameState, *, ignore_cap: bool = False) -> Outcome:
        for rule in self.end_rules:
            out = rule.evaluate(self, s)
            if out is not None:
                return out
        if not self.move_rule.has_moves(s):
            return OUTCOME_DRAW  # stalemate default: no rule fired, no moves
        if not ignore_cap and s.move_count >= self.move_cap:
            return OUTCOME_DRAW
        return OUTCOME_ONGOING

    # --- traces ---------------------------------------------------------------

    def replay(self, lines) -> GameState:
        s = self.initial_state()
        for line in lines:
            line = line.strip()
            if not line:
                continue
            s = self.apply(s, Move.from_line(line))
        return s


def compile_game(gd: GameDescription, move_cap: int | None = None) -> Game:
    return Game(gd, move_cap)
