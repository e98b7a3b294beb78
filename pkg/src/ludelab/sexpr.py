"""S-expression reader/writer for ludeme game descriptions.

The concrete syntax is parenthesized S-expressions with `//` line
comments.  Atoms are signed decimal integers or case-sensitive
identifiers matching [A-Za-z][A-Za-z0-9_-]*.  parse() returns an untyped
LudemeNode tree; typing happens later in the validator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EmptyInput, UnbalancedParenthesis, UnexpectedToken

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
INT_RE = re.compile(r"-?[0-9]+")


@dataclass
class LudemeNode:
    """One node of a parsed game description: (keyword arg arg ...)."""

    keyword: str
    args: list = field(default_factory=list)
    source_span: tuple[int, int] = (0, 0)  # (line, column), 1-based

    def __eq__(self, other):
        if not isinstance(other, LudemeNode):
            return NotImplemented
        return self.keyword == other.keyword and self.args == other.args

    def __repr__(self):
        return f"LudemeNode({serialize(self)!r})"

    def child_nodes(self):
        return [a for a in self.args if isinstance(a, LudemeNode)]

    def walk(self):
        """Yield this node and every descendant node, preorder."""
        yield self
        for a in self.args:
            if isinstance(a, LudemeNode):
                yield from a.walk()

    def copy(self) -> "LudemeNode":
        return LudemeNode(
            self.keyword,
            [a.copy() if isinstance(a, LudemeNode) else a for a in self.args],
            self.source_span,
        )


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(_Token(c, line, col))
            col += 1
            i += 1
        else:
            m = INT_RE.match(text, i) if (c == "-" or c.isdigit()) else None
            if m is None:
                m = IDENT_RE.match(text, i)
            if m is None or m.start() != i:
                raise UnexpectedToken(f"unexpected character {c!r}", line, col)
            tokens.append(_Token(m.group(), line, col))
            col += len(m.group())
            i = m.end()
    return tokens


def _atom_value(tok: _Token):
    if INT_RE.fullmatch(tok.text):
        return int(tok.text)
    return tok.text


def parse(text: str) -> LudemeNode:
    """Parse one S-expression into an untyped LudemeNode tree."""
    tokens = _tokenize(text)
    if not tokens:
        raise EmptyInput()
    pos = 0

    def read():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok.text == "(":
            if pos >= len(tokens):
                raise UnbalancedParenthesis("unclosed '('", tok.line, tok.column)
            head = tokens[pos]
            if head.text in "()":
                raise UnexpectedToken("expected keyword after '('", head.line, head.column)
            if not IDENT_RE.fullmatch(head.text):
                raise UnexpectedToken(f"keyword expected, got {head.text!r}", head.line, head.column)
            pos += 1
            node = LudemeNode(head.text, [], (tok.line, tok.column))
            while True:
                if pos >= len(tokens):
                    raise UnbalancedParenthesis("unclosed '('", tok.line, tok.column)
                if tokens[pos].text == ")":
                    pos += 1
                    return node
                node.args.append(read())
        if tok.text == ")":
            raise UnbalancedParenthesis("unmatched ')'", tok.line, tok.column)
        return _atom_value(tok)

    result = read()
    if pos != len(tokens):
        extra = tokens[pos]
        if extra.text == ")":
            raise UnbalancedParenthesis("unmatched ')'", extra.line, extra.column)
        raise UnexpectedToken("trailing content after expression", extra.line, extra.column)
    if not isinstance(result, LudemeNode):
        raise UnexpectedToken("top-level expression must be a '(' form", tokens[0].line, tokens[0].column)
    return result


def serialize(node) -> str:
    """Compact single-line form; parse(serialize(t)) == t."""
    if isinstance(node, LudemeNode):
        parts = [node.keyword] + [serialize(a) for a in node.args]
        return "(" + " ".join(parts) + ")"
    return str(node)


def pretty(node, indent: int = 0) -> str:
    """Human-oriented multi-line rendering, deterministic."""
    pad = "    " * indent
    if not isinstance(node, LudemeNode):
        return pad + str(node)
    if not any(isinstance(a, LudemeNode) for a in node.args):
        return pad + serialize(node)
    lines = [pad + "(" + node.keyword]
    for a in node.args:
        if isinstance(a, LudemeNode):
            lines.append(pretty(a, indent + 1))
        else:
            lines.append("    " * (indent + 1) + str(a))
    lines.append(pad + ")")
    return "\n".join(lines)
