"""EBNF emission for the ludeme library.

One production per category (alternation over its constructors) and one
per constructor, derived mechanically from the schemas.  Output is
stable across runs: schemas and alternatives are emitted in sorted
order.  This file doubles as the grammar reference for parameter kinds:

  <int>         signed decimal integer
  <identifier>  [A-Za-z][A-Za-z0-9_-]*
  <Keyword>     category nonterminal (capitalised), e.g. <Board>
  <keyword>     constructor nonterminal, e.g. <square>
  [x]           optional, {x} zero or more repetitions
"""

from __future__ import annotations

from .schema import Ident, Int, Library, ListOf, LudCat, LudKw

GRAMMAR_VERSION = "1"

_PREAMBLE = f"""// ludeme grammar, version {GRAMMAR_VERSION}
// generated from the ludeme constructor library; do not edit by hand

<int>        ::= /-?[0-9]+/
<identifier> ::= /[A-Za-z][A-Za-z0-9_-]*/
"""


def _kind_ref(kind) -> str:
    if isinstance(kind, Int):
        return "<int>"
    if isinstance(kind, Ident):
        if kind.choices:
            return "(" + " | ".join(f'"{c}"' for c in kind.choices) + ")"
        return "<identifier>"
    if isinstance(kind, LudKw):
        return f"<{kind.keyword}>"
    if isinstance(kind, LudCat):
        return f"<{kind.category.value}>"
    raise TypeError(kind)


def _param_ref(param) -> str:
    kind = param.kind
    if isinstance(kind, ListOf):
        elem = _kind_ref(kind.element)
        body = f"{{{elem}}}"
        if kind.min_len > 0:
            body = " ".join([elem] * kind.min_len) + " " + body
        return body
    ref = _kind_ref(kind)
    return ref if param.required else f"[{ref}]"


def constructor_production(schema) -> str:
    parts = ['"("', f'"{schema.keyword}"']
    parts += [_param_ref(p) for p in schema.params]
    parts += [f'["{f}"]' for f in schema.flags]
    parts.append('")"')
    return f"<{schema.keyword}> ::= " + " ".join(parts)


def grammar_text(library: Library | None = None) -> str:
    """Full EBNF grammar for the given (possibly empty) library."""
    lines = [_PREAMBLE]
    if library is None or not library.schemas:
        return "\n".join(lines) + "\n"
    categories = sorted({s.category for s in library.schemas}, key=lambda c: c.value)
    lines.append("// categories")
    for cat in categories:
        members = sorted(library.of_category(cat), key=lambda s: s.keyword)
        alts = " | ".join(f"<{s.keyword}>" for s in members)
        lines.append(f"<{cat.value}> ::= {alts}")
    lines.append("")
    lines.append("// constructors")
    for schema in sorted(library.schemas, key=lambda s: s.keyword):
        lines.append(constructor_production(schema))
    return "\n".join(lines) + "\n"
