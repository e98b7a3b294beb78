"""Ludeme constructor library.

Each constructor is described by a LudemeSchema: its category, ordered
parameters, optional flags and the mathematical concept tags it carries.
The standard library below is the keyword inventory this system ships;
it is versioned through the generated grammar file.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Category(enum.Enum):
    Game = "Game"
    Players = "Players"
    Equipment = "Equipment"
    Board = "Board"
    Piece = "Piece"
    StartRule = "StartRule"
    PlayRule = "PlayRule"
    EndRule = "EndRule"
    Condition = "Condition"
    Region = "Region"
    Modifier = "Modifier"


class Kind:
    """Parameter kind markers (see grammar reference)."""


@dataclass(frozen=True)
class Int(Kind):
    minimum: int | None = None


@dataclass(frozen=True)
class Ident(Kind):
    choices: tuple[str, ...] | None = None


@dataclass(frozen=True)
class LudCat(Kind):
    category: Category


@dataclass(frozen=True)
class LudKw(Kind):
    keyword: str


@dataclass(frozen=True)
class ListOf(Kind):
    element: Kind
    min_len: int = 0
    unordered: bool = False


@dataclass(frozen=True)
class Param:
    name: str
    kind: Kind
    required: bool = True
    default: object = None  # canonical value inserted when omitted


@dataclass(frozen=True)
class LudemeSchema:
    keyword: str
    category: Category
    params: tuple[Param, ...] = ()
    flags: tuple[str, ...] = ()  # optional bare-identifier flags
    concept_tags: tuple[str, ...] = ()
    # name of the section reported when a required param is missing
    # (game/rules containers report MissingSection instead of ArityMismatch)
    section_errors: bool = False


def _p(name, kind, required=True, default=None):
    return Param(name, kind, required, default)


STANDARD_LIBRARY: tuple[LudemeSchema, ...] = (
    LudemeSchema(
        "game", Category.Game,
        params=(
            _p("name", Ident()),
            _p("players", LudKw("players")),
            _p("equipment", LudKw("equipment")),
            _p("rules", LudKw("rules")),
        ),
        section_errors=True,
    ),
    LudemeSchema(
        "players", Category.Players,
        params=(_p("names", ListOf(Ident(), min_len=2)),),
    ),
    LudemeSchema(
        "equipment", Category.Equipment,
        params=(
            _p("board", LudKw("board")),
            _p("pieces", ListOf(LudKw("pieces"), unordered=True), required=False),
        ),
    ),
    # `board` plays two roles: equipment wrapper around a shape constructor,
    # and content test inside play rules, e.g. (board Empty).  Exactly one
    # of shape/content must be given (checked in the validator).
    LudemeSchema(
        "board", Category.Equipment,
        params=(
            _p("shape", LudCat(Category.Board), required=False),
            _p("content", Ident(("Empty", "Own", "Enemy")), required=False),
        ),
        flags=("diagonals",),
    ),
    LudemeSchema("square", Category.Board, params=(_p("n", Int(1)),),
                 concept_tags=("grid",)),
    LudemeSchema("rect", Category.Board, params=(_p("cols", Int(1)), _p("rows", Int(1))),
                 concept_tags=("grid",)),
    LudemeSchema("hex", Category.Board, params=(_p("n", Int(1)),),
                 concept_tags=("grid", "hexagonal")),
    LudemeSchema("rhombus", Category.Board, params=(_p("n", Int(1)),),
                 concept_tags=("grid", "hexagonal")),
    LudemeSchema("wheel", Category.Board, params=(_p("n", Int(3)),),
                 concept_tags=("cycle", "radial")),
    LudemeSchema(
        "graph", Category.Board,
        params=(_p("n", Int(1)), _p("edges", ListOf(LudKw("edge"), unordered=True))),
        concept_tags=("graph",),
    ),
    LudemeSchema("edge", Category.Region, params=(_p("a", Int(0)), _p("b", Int(0)))),
    LudemeSchema("pieces", Category.Piece,
                 params=(_p("owner", Ident()), _p("count", Int(1)))),
    LudemeSchema("piece", Category.Piece,
                 params=(_p("who", Ident(("Own", "Enemy"))),)),
    LudemeSchema(
        "rules", Category.Game,
        params=(
            _p("start", LudKw("start"), required=False),
            _p("play", LudKw("play")),
            _p("end", LudKw("end")),
        ),
        section_errors=True,
    ),
    LudemeSchema("start", Category.Game,
                 params=(_p("placements", ListOf(LudCat(Category.StartRule), unordered=True)),)),
    LudemeSchema("place", Category.StartRule,
                 params=(_p("owner", Ident()),
                         _p("cells", ListOf(Int(0), min_len=1, unordered=True)))),
    LudemeSchema("empty", Category.StartRule),
    LudemeSchema(
        "play", Category.Game,
        params=(
            _p("move", LudCat(Category.PlayRule)),
            _p("capture", LudKw("custodialCapture"), required=False),
        ),
    ),
    LudemeSchema("add", Category.PlayRule,
                 params=(_p("what", LudKw("piece")), _p("where", LudKw("board"))),
                 concept_tags=("placement",)),
    LudemeSchema("step", Category.PlayRule,
                 params=(_p("what", LudKw("piece")), _p("to", LudKw("to")),
                         _p("gate", LudKw("whenTo"), required=False)),
                 concept_tags=("locomotion",)),
    LudemeSchema("to", Category.Condition,
                 params=(_p("content", Ident(("Empty",))),)),
    LudemeSchema("whenTo", Category.Modifier,
                 params=(_p("region", Ident()), _p("cond", LudCat(Category.Condition)))),
    LudemeSchema("custodialCapture", Category.Modifier,
                 params=(_p("dirs", Ident(("Orthogonal", "Diagonal", "Any"))),),
                 concept_tags=("flanking",)),
    LudemeSchema("end", Category.Game,
                 params=(_p("rules", ListOf(LudCat(Category.EndRule), min_len=1)),)),
    LudemeSchema("win", Category.EndRule,
                 params=(_p("who", Ident()), _p("cond", LudCat(Category.Condition)))),
    LudemeSchema("lose", Category.EndRule,
                 params=(_p("who", Ident()), _p("cond", LudCat(Category.Condition)))),
    LudemeSchema("draw", Category.EndRule,
                 params=(_p("cond", LudCat(Category.Condition)),)),
    LudemeSchema("line", Category.Condition,
                 params=(_p("k", Int(1)), _p("content", Ident(("Own",))),
                         _p("dirs", Ident(("Any", "Orthogonal", "Diagonal")),
                            required=False, default="Any")),
                 concept_tags=("collinearity",)),
    LudemeSchema("connect", Category.Condition,
                 params=(_p("a", LudCat(Category.Region)), _p("b", LudCat(Category.Region))),
                 concept_tags=("connectivity",)),
    LudemeSchema("noMoves", Category.Condition, concept_tags=("mobility",)),
    LudemeSchema("fullBoard", Category.Condition, concept_tags=("capacity",)),
    LudemeSchema("moveLimit", Category.Condition, params=(_p("n", Int(1)),),
                 concept_tags=("counting",)),
    LudemeSchema("adjacent", Category.Condition,
                 params=(_p("which", Ident(("from", "to"))),
                         _p("content", Ident(("Own", "Enemy", "Empty")))),
                 concept_tags=("adjacency",)),
    LudemeSchema("side", Category.Region,
                 params=(_p("which", Ident(("N", "E", "S", "W"))),)),
    LudemeSchema("cells", Category.Region,
                 params=(_p("cells", ListOf(Int(0), min_len=1, unordered=True)),)),
)


class Library:
    """Keyword-indexed schema set; keywords must be unique."""

    def __init__(self, schemas=STANDARD_LIBRARY):
        self.schemas = tuple(schemas)
        self.by_keyword: dict[str, LudemeSchema] = {}
        for s in self.schemas:
            if s.keyword in self.by_keyword:
                raise ValueError(f"duplicate ludeme keyword {s.keyword!r}")
            self.by_keyword[s.keyword] = s
        cats = {s.category for s in self.schemas}
        for s in self.schemas:
            for k in self._kinds(s):
                if isinstance(k, LudCat) and k.category not in cats:
                    raise ValueError(
                        f"{s.keyword}: parameter references empty category {k.category}")
                if isinstance(k, LudKw) and k.keyword not in self.by_keyword:
                    raise ValueError(f"{s.keyword}: unknown keyword reference {k.keyword!r}")

    @staticmethod
    def _kinds(schema):
        for p in schema.params:
            k = p.kind
            yield k
            while isinstance(k, ListOf):
                k = k.element
                yield k

    def __contains__(self, keyword: str) -> bool:
        return keyword in self.by_keyword

    def __getitem__(self, keyword: str) -> LudemeSchema:
        return self.by_keyword[keyword]

    def of_category(self, category: Category) -> list[LudemeSchema]:
        return [s for s in self.schemas if s.category is category]


_standard = None


def standard_library() -> Library:
    global _standard
    if _standard is None:
        _standard = Library()
    return _standard
