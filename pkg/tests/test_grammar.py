import random

import pytest

from conftest import TABLE_I_TEXT, golden_check, load_fixture
from ebnf_check import EbnfGrammar, sexpr_tokens
from ludelab.ebnf import grammar_text
from ludelab.errors import (
    ArityMismatch,
    EmptyInput,
    KindMismatch,
    MissingSection,
    UnbalancedParenthesis,
    UnexpectedToken,
    UnknownKeyword,
    ValidationError,
)
from ludelab.schema import Category, Library, LudemeSchema, standard_library
from ludelab.sexpr import LudemeNode, parse, pretty, serialize
from ludelab.validate import canonicalize, validate


# --- parsing ---------------------------------------------------------------------


def test_parse_table_i_shape():
    tree = parse(TABLE_I_TEXT)
    assert tree.keyword == "game"
    assert len(tree.args) == 4
    assert tree.args[0] == "Tic-Tac-Toe"
    assert [a.keyword for a in tree.args[1:]] == ["players", "equipment", "rules"]


def test_parse_unbalanced():
    with pytest.raises(UnbalancedParenthesis):
        parse("(game X")
    with pytest.raises(UnbalancedParenthesis):
        parse("(game X))")


def test_parse_structural_echo():
    tree = parse("(a (b 1) c)")
    assert tree.keyword == "a"
    assert isinstance(tree.args[0], LudemeNode)
    assert tree.args[0].keyword == "b"
    assert tree.args[0].args == [1]
    assert tree.args[1] == "c"


def test_parse_empty_and_bad_tokens():
    with pytest.raises(EmptyInput):
        parse("   // just a comment\n")
    with pytest.raises(UnexpectedToken):
        parse("(a $)")
    with pytest.raises(UnexpectedToken):
        parse("bare")


def test_comments_and_whitespace_insensitive():
    a = parse("(a (b 1) c) // trailing")
    b = parse("(a//x\n (b\n\t1)\n c)")
    assert a == b


def _random_tree(rng, depth=0):
    kw = rng.choice(["alpha", "beta", "gamma"])
    node = LudemeNode(kw)
    for _ in range(rng.randrange(0, 4)):
        r = rng.random()
        if r < 0.4 and depth < 3:
            node.args.append(_random_tree(rng, depth + 1))
        elif r < 0.7:
            node.args.append(rng.randrange(-9, 99))
        else:
            node.args.append(rng.choice(["Own", "x0", "N-e_2"]))
    return node


def test_serialize_round_trip_random_trees():
    rng = random.Random(7)
    for _ in range(200):
        t = _random_tree(rng)
        assert parse(serialize(t)) == t
        assert parse(pretty(t)) == t


# --- validation --------------------------------------------------------------------


def test_validate_table_i():
    gd = validate(parse(TABLE_I_TEXT))
    assert gd.name == "Tic-Tac-Toe"
    assert gd.player_names == ("White", "Black")
    assert not gd.is_partial


def test_validate_unknown_keyword():
    with pytest.raises(UnknownKeyword):
        validate(parse("(game X (players A B) (equipment (board (flurble 3))) "
                       "(rules (play (add (piece Own) (board Empty))) "
                       "(end (draw (fullBoard)))))"))


def test_validate_missing_rules_section():
    with pytest.raises(MissingSection) as exc:
        validate(parse("(game X (players A B) (equipment (board (square 3))))"))
    assert exc.value.section == "rules"


def test_validate_partial_allows_missing_rules():
    gd = validate(parse("(game X (players A B) (equipment (board (square 3))))"),
                  partial=True)
    assert gd.is_partial


def test_validate_arity_and_kinds():
    with pytest.raises(ArityMismatch):
        validate(parse(TABLE_I_TEXT.replace("(players White Black)",
                                            "(players White)")))
    with pytest.raises(KindMismatch):
        validate(parse(TABLE_I_TEXT.replace("(square 3)", "(square three)")))
    with pytest.raises(ValidationError):
        validate(parse(TABLE_I_TEXT.replace("(square 3)", "(square 0)")))
    with pytest.raises(ValidationError):
        validate(parse(TABLE_I_TEXT.replace("(line 3", "(line 0")))


def test_validate_board_dual_role():
    # equipment wants a shape; play rules want a content test
    with pytest.raises(KindMismatch):
        validate(parse("(game X (players A B) (equipment (board Empty)) "
                       "(rules (play (add (piece Own) (board Empty))) "
                       "(end (draw (fullBoard)))))"))
    with pytest.raises(ValidationError):
        validate(parse(TABLE_I_TEXT.replace("(board (square 3) diagonals)",
                                            "(board (wheel 8) diagonals)")))


def test_stub_fixture_round_trip():
    gd = load_fixture("coinflip")
    assert gd.name == "Coinflip"


# --- canonicalization -----------------------------------------------------------------


def test_canonical_flag_order_irrelevant():
    a = "(game X (players A B) (equipment (board (square 3) diagonals)) " \
        "(rules (play (add (piece Own) (board Empty))) (end (draw (fullBoard)))))"
    b = a.replace("(board (square 3) diagonals)", "(board diagonals (square 3))")
    ca = canonicalize(validate(parse(a))).canonical_text()
    cb = canonicalize(validate(parse(b))).canonical_text()
    assert ca == cb


def test_canonical_inserts_defaults_and_sorts():
    text = "(game X (players A B) (equipment (board (square 3))) " \
           "(rules (start (place B 2 1) (place A 0)) " \
           "(play (add (piece Own) (board Empty))) " \
           "(end (win All (line 2 Own)))))"
    canon = canonicalize(validate(parse(text))).canonical_text()
    assert "(line 2 Own Any)" in canon          # defaulted dirs made explicit
    assert "(place B 1 2)" in canon             # cell lists sorted
    assert canon.index("(place A 0)") < canon.index("(place B 1 2)")


def test_canonical_idempotent_on_corpus_and_random_edits():
    gd = validate(parse(TABLE_I_TEXT))
    once = canonicalize(gd)
    twice = canonicalize(once)
    assert once.canonical_text() == twice.canonical_text()


def test_canonical_table_i_golden():
    canon = canonicalize(validate(parse(TABLE_I_TEXT))).canonical_text()
    golden_check("tictactoe.canonical.txt", canon + "\n")


# --- grammar emission ------------------------------------------------------------------


def test_grammar_square_production_present():
    text = grammar_text(standard_library())
    assert '<square> ::= "(" "square" <int> ")"' in text
    assert '<board> ::= "(" "board" [<Board>]' in text
    assert '["diagonals"]' in text


def test_grammar_empty_library():
    text = grammar_text(Library(()))
    assert "<identifier>" in text
    assert "::= \"(\"" not in text  # no constructor productions


def test_grammar_monotone_one_schema_adds_one_production():
    base = standard_library()
    extended = Library(base.schemas + (
        LudemeSchema("zigzag", Category.Board, params=()),))
    before = set(grammar_text(base).splitlines())
    after = set(grammar_text(extended).splitlines())
    added = after - before
    removed = before - after
    # one new constructor production, one rewritten category alternation
    assert '<zigzag> ::= "(" "zigzag" ")"' in added
    assert len(added) == 2 and len(removed) == 1


def test_grammar_stable_across_runs():
    assert grammar_text(standard_library()) == grammar_text(standard_library())


def test_grammar_golden():
    golden_check("grammar.ebnf", grammar_text(standard_library()))


# --- validation soundness: accepted descriptions parse under the emitted EBNF ----------


def test_validated_descriptions_conform_to_emitted_grammar():
    grammar = EbnfGrammar(grammar_text(standard_library()))
    from ludelab.corpus import load_corpus

    for entry in load_corpus():
        if entry.is_partial:
            continue
        text = entry.description.canonical_text()
        assert grammar.match("game", sexpr_tokens(text)), entry.name
    for name in ("coinflip", "lockstep", "onecell", "custodial3"):
        text = canonicalize(load_fixture(name)).canonical_text()
        assert grammar.match("game", sexpr_tokens(text)), name


def test_emitted_grammar_rejects_malformed():
    grammar = EbnfGrammar(grammar_text(standard_library()))
    assert not grammar.match("game", sexpr_tokens("(game X (players A B))"))
    assert not grammar.match("game", sexpr_tokens("(square 3)"))
