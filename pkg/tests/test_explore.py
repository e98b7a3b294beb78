import pytest

from conftest import TABLE_I_TEXT
from ludelab.errors import StateBudgetExceeded, UnsupportedLudemeCombination
from ludelab.explore import enumerate_states, solve
from ludelab.game import compile_game
from ludelab.sexpr import parse
from ludelab.state import DRAW, WIN
from ludelab.validate import validate


# --- enumeration -----------------------------------------------------------------


def test_mutorere_counts_by_convention(mutorere):
    # oracle-derived: raw reachable (board, mover) states and the
    # convention that reproduces the published 46-position count
    assert enumerate_states(mutorere, "none").count == 1180
    assert enumerate_states(mutorere, "symmetry").count == 46
    assert enumerate_states(mutorere, "symmetry_color").count == 26


def test_ttt_reachable_positions(ttt):
    result = enumerate_states(ttt, "none")
    assert result.count == 5478
    # the classic position count up to symmetry cross-checks the convention
    assert enumerate_states(ttt, "symmetry").count == 765


def test_single_cell_game_two_states(onecell):
    assert enumerate_states(onecell, "none").count == 2


def test_reduction_never_increases_counts(ttt, mutorere, coinflip):
    for game in (ttt, mutorere, coinflip):
        none = enumerate_states(game, "none").count
        sym = enumerate_states(game, "symmetry").count
        symc = enumerate_states(game, "symmetry_color").count
        assert symc <= sym <= none


def test_enumeration_budget(ttt):
    with pytest.raises(StateBudgetExceeded):
        enumerate_states(ttt, "none", budget=100)


def test_enumeration_rejects_move_limit_games():
    text = """(game Limited (players A B)
        (equipment (board (square 2)))
        (rules (play (add (piece Own) (board Empty)))
               (end (draw (moveLimit 2)))))"""
    game = compile_game(validate(parse(text)))
    with pytest.raises(UnsupportedLudemeCombination):
        enumerate_states(game)
    with pytest.raises(UnsupportedLudemeCombination):
        solve(game)


def test_state_hashes_collision_free_on_ttt(ttt):
    result = enumerate_states(ttt, "none")
    hashes = {s.hash for s in result.states.values()}
    assert len(hashes) == result.count


# --- solver -----------------------------------------------------------------------


def test_ttt_game_value_draw(ttt):
    result = solve(ttt)
    assert result.game_value.status == DRAW
    assert result.state_count == 5478


def test_ttt_solver_agrees_with_independent_minimax(ttt):
    from oracles import ttt_minimax

    result = solve(ttt)
    import random
    rng = random.Random(2)
    states = list(result.nodes)
    for s in rng.sample(states, 300):
        got = result.outcome_of(s)
        want = ttt_minimax(tuple(s.board), s.mover)
        if want == 0:
            assert got.status == DRAW
        elif want == 1:
            assert got == type(got)(WIN, s.mover)
        else:
            assert got == type(got)(WIN, 3 - s.mover)


def test_mutorere_free_has_immediate_first_move_win(mutorere_free):
    result = solve(mutorere_free)
    s0 = mutorere_free.initial_state()
    wins = result.immediate_winning_moves(s0)
    assert wins, "the unrestricted variant is won on the spot"
    assert {m.frm for m in wins} == {1, 2}
    assert result.game_value.status == WIN and result.game_value.winner == 1


def test_mutorere_standard_no_immediate_win(mutorere):
    result = solve(mutorere)
    s0 = mutorere.initial_state()
    assert result.immediate_winning_moves(s0) == []


def test_solver_budget(ttt):
    with pytest.raises(StateBudgetExceeded):
        solve(ttt, budget=50)


def test_line2_variant_first_player_win(ttt):
    k2 = compile_game(validate(parse(TABLE_I_TEXT.replace("line 3", "line 2"))))
    assert solve(k2).game_value == type(solve(k2).game_value)(WIN, 1)


def test_line4_and_line5_variants_forced_draw():
    for k in (4, 5):
        game = compile_game(validate(parse(TABLE_I_TEXT.replace("line 3", f"line {k}"))))
        assert solve(game).game_value.status == DRAW


def test_solver_best_moves_stay_optimal(ttt):
    result = solve(ttt)
    s = ttt.initial_state()
    # following best moves from a drawn game keeps it drawn to the end
    while not ttt.status(s).is_terminal:
        m = result.best_moves(s)[0]
        s = ttt.apply(s, m)
    assert ttt.status(s).status == DRAW
