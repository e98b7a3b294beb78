"""Validation of parsed trees against the ludeme library, and the
canonical normal form used for comparison and distance computations."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    KindMismatch,
    MissingSection,
    UnknownKeyword,
    ValidationError,
)
from .schema import Ident, Int, Library, ListOf, LudCat, LudKw, standard_library
from .sexpr import LudemeNode, serialize


def _kind_accepts(lib: Library, kind, arg) -> bool:
    if isinstance(kind, Int):
        return isinstance(arg, int)
    if isinstance(kind, Ident):
        if not isinstance(arg, str):
            return False
        return kind.choices is None or arg in kind.choices
    if isinstance(kind, LudKw):
        return isinstance(arg, LudemeNode) and arg.keyword == kind.keyword
    if isinstance(kind, LudCat):
        if not isinstance(arg, LudemeNode):
            return False
        schema = lib.by_keyword.get(arg.keyword)
        return schema is not None and schema.category is kind.category
    raise TypeError(f"unhandled kind {kind}")


def _describe(arg) -> str:
    if isinstance(arg, LudemeNode):
        return f"({arg.keyword} ...)"
    return repr(arg)


def match_args(lib: Library, node: LudemeNode, schema, *,
               lenient: bool = False) -> dict:
    """Assign node.args to schema params positionally.

    Returns {param_name: value_or_list, "__flags__": set}.  Optional
    params that do not accept the next argument are skipped.  Raises
    ArityMismatch / KindMismatch / MissingSection on failure; with
    lenient=True missing required params are tolerated (partial
    descriptions).
    """
    assigned: dict = {"__flags__": set()}
    pi = 0
    params = schema.params
    for arg in node.args:
        if isinstance(arg, str) and arg in schema.flags:
            if arg in assigned["__flags__"]:
                raise ArityMismatch(f"({node.keyword}): duplicate flag {arg!r}")
            assigned["__flags__"].add(arg)
            continue
        placed = False
        while pi < len(params):
            p = params[pi]
            if isinstance(p.kind, ListOf):
                if _kind_accepts(lib, p.kind.element, arg):
                    assigned.setdefault(p.name, []).append(arg)
                    placed = True
                    break
                if p.name in assigned or not p.required or p.kind.min_len == 0:
                    pi += 1  # list finished or skippable
                    continue
                raise KindMismatch(
                    f"({node.keyword}): expected {p.name} element, got {_describe(arg)}")
            if _kind_accepts(lib, p.kind, arg):
                assigned[p.name] = arg
                pi += 1
                placed = True
                break
            if not p.required:
                pi += 1
                continue
            raise KindMismatch(
                f"({node.keyword}): parameter {p.name!r} does not accept {_describe(arg)}")
        if not placed:
            raise ArityMismatch(f"({node.keyword}): unexpected argument {_describe(arg)}")
    for p in params:
        if p.name in assigned:
            if isinstance(p.kind, ListOf) and len(assigned[p.name]) < p.kind.min_len:
                raise ArityMismatch(
                    f"({node.keyword}): {p.name} needs at least {p.kind.min_len} entries")
            continue
        if isinstance(p.kind, ListOf) and (not p.required or p.kind.min_len == 0):
            if p.required:
                assigned[p.name] = []
            continue
        if p.required and not lenient:
            if schema.section_errors:
                raise MissingSection(p.name)
            raise ArityMismatch(f"({node.keyword}): missing required parameter {p.name!r}")
    return assigned


def _check_numeric(node: LudemeNode, schema, assigned):
    for p in schema.params:
        if p.name not in assigned:
            continue
        vals = assigned[p.name] if isinstance(p.kind, ListOf) else [assigned[p.name]]
        kind = p.kind.element if isinstance(p.kind, ListOf) else p.kind
        if isinstance(kind, Int) and kind.minimum is not None:
            for v in vals:
                if isinstance(v, int) and v < kind.minimum:
                    raise ValidationError(
                        f"({node.keyword}): {p.name} = {v} below minimum {kind.minimum}")


def _node_hooks(lib: Library, node: LudemeNode, assigned):
    kw = node.keyword
    if kw == "players":
        names = assigned["names"]
        if len(names) != 2:
            raise ArityMismatch("(players): exactly two player names required")
        if len(set(names)) != 2:
            raise ValidationError("(players): player names must be distinct")
    elif kw == "board":
        has_shape = "shape" in assigned
        has_content = "content" in assigned
        if has_shape == has_content:
            raise KindMismatch("(board): give either a shape constructor or a content test")
        if "diagonals" in assigned["__flags__"]:
            if not has_shape or assigned["shape"].keyword not in ("square", "rect"):
                raise ValidationError("(board): diagonals flag applies to square/rect only")
    elif kw == "edge":
        if assigned["a"] == assigned["b"]:
            raise ValidationError("(edge): self-loop not allowed")


@dataclass
class GameDescription:
    """A validated (and possibly canonicalized) game description."""

    root: LudemeNode
    library: Library

    @property
    def name(self) -> str:
        return self.root.args[0]

    def _section(self, keyword):
        for a in self.root.args:
            if isinstance(a, LudemeNode) and a.keyword == keyword:
                return a
        return None

    @property
    def players(self) -> LudemeNode:
        return self._section("players")

    @property
    def equipment(self) -> LudemeNode:
        return self._section("equipment")

    @property
    def rules(self) -> LudemeNode | None:
        return self._section("rules")

    @property
    def board_node(self) -> LudemeNode:
        wrapper = self.equipment.args[0]
        return next(a for a in wrapper.args if isinstance(a, LudemeNode))

    @property
    def board_flags(self) -> set:
        return {a for a in self.equipment.args[0].args if isinstance(a, str)}

    @property
    def is_partial(self) -> bool:
        return self.rules is None

    @property
    def player_names(self) -> tuple[str, str]:
        return tuple(self.players.args)

    def canonical_text(self) -> str:
        return serialize(canonicalize(self).root)

    def copy(self) -> "GameDescription":
        return GameDescription(self.root.copy(), self.library)


def _check_keywords(lib: Library, tree: LudemeNode):
    for node in tree.walk():
        if node.keyword not in lib:
            line, col = node.source_span
            raise UnknownKeyword(node.keyword, line, col)


def _validate_node(lib: Library, node: LudemeNode):
    schema = lib.by_keyword.get(node.keyword)
    if schema is None:
        line, col = node.source_span
        raise UnknownKeyword(node.keyword, line, col)
    assigned = match_args(lib, node, schema)
    _check_numeric(node, schema, assigned)
    _node_hooks(lib, node, assigned)
    for a in node.args:
        if isinstance(a, LudemeNode):
            _validate_node(lib, a)
    return assigned


def validate(tree: LudemeNode, library: Library | None = None, *,
             partial: bool = False) -> GameDescription:
    """Check a parsed tree against the library and return a typed description.

    With partial=True the rules section may be absent (equipment-only
    stubs used by the reconstruction pipeline); everything present is
    still schema-checked.
    """
    lib = library or standard_library()
    if tree.keyword != "game":
        raise ValidationError(f"expected (game ...), got ({tree.keyword} ...)")
    _check_keywords(lib, tree)
    if partial:
        probe = tree.copy()
        if not any(isinstance(a, LudemeNode) and a.keyword == "rules" for a in probe.args):
            probe.args.append(LudemeNode("rules", [
                LudemeNode("play", [LudemeNode("add", [
                    LudemeNode("piece", ["Own"]), LudemeNode("board", ["Empty"])])]),
                LudemeNode("end", [LudemeNode("draw", [LudemeNode("fullBoard", [])])]),
            ]))
        _validate_node(lib, probe)
        return GameDescription(tree, lib)
    _validate_node(lib, tree)
    gd = GameDescription(tree, lib)
    # the equipment board must be a shape, not a content test
    board = gd.equipment.args[0]
    if not any(isinstance(a, LudemeNode) for a in board.args):
        raise KindMismatch("(equipment): board must name a shape constructor")
    return gd


def parse_and_validate(text: str, library: Library | None = None, *,
                       partial: bool = False) -> GameDescription:
    from .sexpr import parse
    return validate(parse(text), library, partial=partial)


# --- canonical form -------------------------------------------------------

def _sort_key(value):
    if isinstance(value, int):
        return (0, value, "")
    if isinstance(value, LudemeNode):
        return (1, 0, serialize(value))
    return (1, 0, str(value))


def _canonical_node(lib: Library, node: LudemeNode, lenient: bool) -> LudemeNode:
    schema = lib.by_keyword.get(node.keyword)
    assigned = match_args(lib, node, schema, lenient=lenient)
    out = LudemeNode(node.keyword, [], node.source_span)
    for p in schema.params:
        if isinstance(p.kind, ListOf):
            vals = [
                _canonical_node(lib, v, lenient) if isinstance(v, LudemeNode) else v
                for v in assigned.get(p.name, [])
            ]
            if p.kind.unordered:
                vals.sort(key=_sort_key)
            out.args.extend(vals)
        elif p.name in assigned:
            v = assigned[p.name]
            out.args.append(
                _canonical_node(lib, v, lenient) if isinstance(v, LudemeNode) else v)
        elif p.default is not None:
            out.args.append(p.default)
    out.args.extend(sorted(assigned["__flags__"]))
    if node.keyword == "edge" and out.args[0] > out.args[1]:
        out.args[0], out.args[1] = out.args[1], out.args[0]
    return out


def canonicalize(gd: GameDescription) -> GameDescription:
    """Deterministic normal form: unordered lists sorted, defaulted
    optional parameters made explicit, flags ordered.  Idempotent."""
    root = _canonical_node(gd.library, gd.root, gd.is_partial)
    return GameDescription(root, gd.library)
