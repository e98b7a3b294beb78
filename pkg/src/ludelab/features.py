"""Local piece-pattern features over board-graph adjacency.

A pattern is a set of walks (direction-label sequences) from an anchor
cell, each with a required content.  Matching is defined purely over
adjacency labels, so learned tables transfer between board types that
share labels, and is tried under every board symmetry: a pattern counts
once if any symmetric image of it matches.

Binding a table to a game precomputes, for every anchor cell and every
distinct symmetry action on labels, the absolute cells each walk hits;
scoring a move is then a vectorized gather + compare.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .state import other

CONTENTS = ("Empty", "Own", "Enemy", "OffBoard")
_CODE = {"Empty": 0, "Own": 1, "Enemy": 2, "OffBoard": 3}
_OFF = 3
_PAD = 127


@dataclass(frozen=True)
class FeatureElement:
    walk: tuple        # direction labels from the anchor; () means the anchor
    required: str      # Empty | Own | Enemy | OffBoard

    def __post_init__(self):
        if self.required not in CONTENTS:
            raise ValueError(f"bad required content {self.required!r}")


@dataclass(frozen=True)
class FeaturePattern:
    elements: tuple              # FeatureElement, ...
    anchor: str = "to"           # "to" (MoveTo) | "from" (MoveFrom)
    weight: float = 0.0

    def __post_init__(self):
        if self.anchor not in ("to", "from"):
            raise ValueError(f"bad anchor {self.anchor!r}")
        if sum(1 for e in self.elements if not e.walk) > 1:
            raise ValueError("at most one empty (anchor) walk per pattern")
        if not math.isfinite(self.weight):
            raise ValueError("pattern weight must be finite")


def pattern(elements, anchor="to", weight=0.0) -> FeaturePattern:
    """Convenience constructor: elements as (walk-iterable, content) pairs."""
    return FeaturePattern(
        tuple(FeatureElement(tuple(w), c) for w, c in elements), anchor, weight)


@dataclass(frozen=True)
class FeatureTable:
    patterns: tuple = ()
    temperature: float = 1.0

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError("temperature must be positive")

    def reweighted(self, weights) -> "FeatureTable":
        return FeatureTable(
            tuple(replace(p, weight=float(w)) for p, w in zip(self.patterns, weights)),
            self.temperature)


EMPTY_TABLE = FeatureTable()


# --- JSON serialization -----------------------------------------------------

def table_to_json(table: FeatureTable) -> str:
    doc = {
        "patterns": [
            {
                "walks": [list(e.walk) for e in p.elements],
                "required": [e.required for e in p.elements],
                "anchor": p.anchor,
                "weight": p.weight,
            }
            for p in table.patterns
        ],
        "temperature": table.temperature,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def table_from_json(text: str) -> FeatureTable:
    doc = json.loads(text)
    pats = []
    for p in doc["patterns"]:
        elements = tuple(
            FeatureElement(tuple(w), r)
            for w, r in zip(p["walks"], p["required"])
        )
        pats.append(FeaturePattern(elements, p.get("anchor", "to"), float(p["weight"])))
    return FeatureTable(tuple(pats), float(doc.get("temperature", 1.0)))


# --- binding ------------------------------------------------------------------

def _distinct_label_actions(board) -> list:
    seen = []
    for lp in board.label_perms:
        if lp and lp not in seen:
            seen.append(lp)
    return seen or [{}]


def _resolve_walk(board, cell: int, walk) -> int:
    cur = cell
    for lab in walk:
        nxt = board.step(cur, lab)
        if nxt is None:
            return board.cell_count  # off board / unresolvable
        cur = nxt
    return cur


class _Group:
    """Bound instantiations for one anchor role."""

    def __init__(self, board, patterns, indices, actions):
        rows = []           # (pattern_pos, mapped elements)
        starts = []
        for pos, p in enumerate(patterns):
            starts.append(len(rows))
            for act in actions:
                mapped = []
                ok = True
                for e in p.elements:
                    try:
                        walk = tuple(act[lab] for lab in e.walk)
                    except KeyError:
                        ok = False
                        break
                    mapped.append((walk, e.required))
                if ok:
                    rows.append(mapped)
            if len(rows) == starts[-1]:
                rows.append([((), "__never__")])  # keeps segment non-empty
        self.pattern_indices = np.asarray(indices, dtype=np.int64)
        self.starts = np.asarray(starts, dtype=np.int64)
        n = board.cell_count
        k = max((len(r) for r in rows), default=1)
        r_count = len(rows)
        self.idx = np.full((n, r_count, k), n, dtype=np.int32)
        req = np.full((r_count, k), _PAD, dtype=np.int8)
        self.pad = np.ones((r_count, k), dtype=bool)
        for j, row in enumerate(rows):
            for kk, (walk, content) in enumerate(row):
                if content == "__never__":
                    req[j, kk] = _PAD - 1  # matches nothing
                    self.pad[j, kk] = False
                    continue
                req[j, kk] = _CODE[content]
                self.pad[j, kk] = False
                for c in range(n):
                    self.idx[c, j, kk] = _resolve_walk(board, c, walk)
        # requirement arrays translated per mover (Own/Enemy are relative)
        self.req_by_mover = {}
        for mover in (1, 2):
            t = req.copy()
            t[req == _CODE["Own"]] = mover
            t[req == _CODE["Enemy"]] = other(mover)
            self.req_by_mover[mover] = t

    def match_matrix(self, board_ext, cells, mover):
        """(len(cells), n_patterns) bool: pattern matches at each anchor."""
        gathered = board_ext[self.idx[cells]]
        hit = (gathered == self.req_by_mover[mover]) | self.pad
        rows = hit.all(axis=2)
        return np.maximum.reduceat(rows, self.starts, axis=1)


class BoundFeatures:
    """A FeatureTable instantiated against one game's board."""

    def __init__(self, game, table: FeatureTable):
        self.game = game
        self.table = table
        board = game.board
        actions = _distinct_label_actions(board)
        self.weights = np.asarray([p.weight for p in table.patterns], dtype=np.float64)
        self.groups = {}
        for role in ("to", "from"):
            pats = [(i, p) for i, p in enumerate(table.patterns) if p.anchor == role]
            if pats and board.direction_labels:
                self.groups[role] = _Group(
                    board, [p for _, p in pats], [i for i, _ in pats], actions)

    def board_ext(self, s) -> np.ndarray:
        return np.asarray(list(s.board) + [_OFF], dtype=np.int8)

    def matched_patterns(self, s, move) -> np.ndarray:
        """Boolean vector over table.patterns for one move."""
        out = np.zeros(len(self.table.patterns), dtype=bool)
        if not self.groups:
            return out
        be = self.board_ext(s)
        for role, group in self.groups.items():
            anchor = move.to if role == "to" else move.frm
            if anchor < 0:
                continue
            mm = group.match_matrix(be, np.asarray([anchor]), s.mover)[0]
            out[group.pattern_indices] |= mm
        return out

    def score_moves(self, s, moves) -> np.ndarray:
        scores = np.zeros(len(moves), dtype=np.float64)
        if not self.groups or not len(self.weights):
            return scores
        be = self.board_ext(s)
        for role, group in self.groups.items():
            anchors = np.asarray(
                [m.to if role == "to" else m.frm for m in moves], dtype=np.int64)
            valid = anchors >= 0
            if not valid.any():
                continue
            mm = group.match_matrix(be, anchors[valid], s.mover)
            scores[valid] += mm @ self.weights[group.pattern_indices]
        return scores

    def score_move(self, s, move) -> float:
        return float(self.score_moves(s, [move])[0])


_BIND_CACHE: dict = {}


def bind(game, table: FeatureTable) -> BoundFeatures:
    key = (id(game), id(table))
    bf = _BIND_CACHE.get(key)
    if bf is None or bf.game is not game or bf.table is not table:
        bf = BoundFeatures(game, table)
        if len(_BIND_CACHE) > 64:
            _BIND_CACHE.clear()
        _BIND_CACHE[key] = bf
    return bf


def match_features(game, s, move, table: FeatureTable) -> float:
    """Summed weight of patterns matching the move in state s (mover's
    perspective, all board symmetries tried)."""
    return bind(game, table).score_move(s, move)


# --- softmax policy -------------------------------------------------------------

def softmax_probs(scores, temperature: float) -> np.ndarray:
    z = np.asarray(scores, dtype=np.float64) / temperature
    z -= z.max()
    e = np.exp(z)
    return e / e.sum()


def sample_index(probs, rng) -> int:
    r = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if r < acc:
            return i
    return len(probs) - 1


def playout_policy_sample(game, s, table: FeatureTable, rng):
    """One move drawn with probability proportional to exp(score/T)."""
    moves = game._moves(s)
    bf = bind(game, table)
    probs = softmax_probs(bf.score_moves(s, moves), table.temperature)
    return moves[sample_index(probs, rng)]


class FeaturePolicy:
    """Playout policy: softmax over bound feature scores."""

    def __init__(self, game, table: FeatureTable):
        self.table = table
        self.bound = bind(game, table)

    def select(self, game, s, moves, rng):
        probs = softmax_probs(self.bound.score_moves(s, moves), self.table.temperature)
        return moves[sample_index(probs, rng)]


# --- explanation ------------------------------------------------------------------

_CONTENT_PHRASE = {
    "Own": "an own piece",
    "Enemy": "an enemy piece",
    "Empty": "an empty cell",
    "OffBoard": "the board edge",
}


def explain_feature(p: FeaturePattern, library=None) -> str:
    """Deterministic human-readable rendering in ludeme vocabulary."""
    head = ("move onto a cell where" if p.anchor == "to"
            else "move a piece away from a cell where")
    clauses = []
    for e in p.elements:
        phrase = _CONTENT_PHRASE[e.required]
        if not e.walk:
            clauses.append(f"the cell itself holds {phrase}")
        elif len(e.walk) == 1:
            clauses.append(f"the adjacent cell toward {e.walk[0]} holds {phrase}")
        else:
            clauses.append(f"the cell along {'-'.join(e.walk)} holds {phrase}")
    body = "; ".join(clauses) if clauses else "no condition applies"
    sign = "encouraged" if p.weight >= 0 else "discouraged"
    return f"{head} {body} ({sign}, weight {p.weight:+.3f})"
