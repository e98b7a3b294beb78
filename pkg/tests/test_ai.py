import math
import random
from collections import Counter

import pytest

from ludelab.errors import CalledOnTerminal
from ludelab.features import (
    EMPTY_TABLE,
    BoundFeatures,
    FeaturePattern,
    FeatureTable,
    explain_feature,
    match_features,
    pattern,
    playout_policy_sample,
    softmax_probs,
    table_from_json,
    table_to_json,
)
from ludelab.game import compile_game
from ludelab.mcts import SearchConfig, choose_move, root_statistics
from ludelab.sexpr import parse
from ludelab.state import Move
from ludelab.training import generate_candidates, train_features
from ludelab.validate import validate


BRIDGE = pattern(
    [(("SW",), "Own"), (("E",), "Own"), (("SE",), "Enemy")], anchor="to", weight=2.0)


def bridge_state(hex5):
    """Threatened-bridge fixture: own stones at cells 6 and 3, enemy
    intrusion at carrier 2; the saving move is carrier 7."""
    board = [0] * 25
    board[6] = 1
    board[3] = 1
    board[2] = 2
    return hex5.make_state(tuple(board), 1, 3)


# --- match_features ------------------------------------------------------------------


def test_empty_table_scores_zero(ttt):
    s = ttt.initial_state()
    for m in ttt.legal_moves(s):
        assert match_features(ttt, s, m, EMPTY_TABLE) == 0.0


def test_bridge_completion_scores_positive(hex5):
    s = bridge_state(hex5)
    table = FeatureTable((BRIDGE,), 1.0)
    completing = Move("add", -1, 7, 1)
    unrelated = Move("add", -1, 24, 1)
    assert match_features(hex5, s, completing, table) > 0
    assert match_features(hex5, s, unrelated, table) == 0.0


def test_matching_invariant_under_board_symmetry(hex5):
    s = bridge_state(hex5)
    table = FeatureTable((BRIDGE,), 1.0)
    for perm in hex5.board.symmetries:
        mapped_board = [0] * 25
        for c, o in enumerate(s.board):
            mapped_board[perm[c]] = o
        ms = hex5.make_state(tuple(mapped_board), s.mover, s.move_count)
        for cell in (7, 24, 12, 0):
            m = Move("add", -1, cell, 1)
            mm = Move("add", -1, perm[cell], 1)
            assert match_features(hex5, s, m, table) == \
                match_features(hex5, ms, mm, table)


def test_matching_invariance_random_tables(ttt):
    rng = random.Random(8)
    labels = ttt.board.direction_labels
    pats = []
    for _ in range(12):
        elems = []
        for _ in range(rng.randint(1, 2)):
            walk = tuple(rng.choice(labels) for _ in range(rng.randint(1, 2)))
            elems.append((walk, rng.choice(["Own", "Enemy", "Empty", "OffBoard"])))
        pats.append(pattern(elems, weight=rng.uniform(-2, 2)))
    table = FeatureTable(tuple(pats), 1.0)
    boards = []
    for _ in range(5):
        b = [rng.choice([0, 0, 1, 2]) for _ in range(9)]
        boards.append(tuple(b))
    for b in boards:
        s = ttt.make_state(b, 1, 0)
        for perm in ttt.board.symmetries:
            mb = [0] * 9
            for c, o in enumerate(b):
                mb[perm[c]] = o
            ms = ttt.make_state(tuple(mb), 1, 0)
            for cell in range(9):
                if b[cell] == 0:
                    a = match_features(ttt, s, Move("add", -1, cell, 1), table)
                    bb = match_features(ttt, ms, Move("add", -1, perm[cell], 1), table)
                    assert abs(a - bb) < 1e-12


def test_pattern_validation():
    with pytest.raises(ValueError):
        FeaturePattern((), anchor="sideways")
    with pytest.raises(ValueError):
        pattern([((), "Own"), ((), "Empty")])  # two anchor walks
    with pytest.raises(ValueError):
        FeatureTable((), temperature=0.0)


# --- softmax sampling ------------------------------------------------------------------


def test_empty_table_sampling_uniform_chi_square(ttt):
    s = ttt.initial_state()
    rng = random.Random(4)
    n = 18000
    counts = Counter(playout_policy_sample(ttt, s, EMPTY_TABLE, rng).to
                     for _ in range(n))
    expected = n / 9
    chi2 = sum((counts[c] - expected) ** 2 / expected for c in range(9))
    # 8 degrees of freedom: critical value at alpha=0.001 is 26.12
    assert chi2 < 26.12


def test_single_hot_move_closed_form():
    # a 10-cell strip with an enemy stone at 0: exactly one of the nine
    # replies touches it from the east, scoring +10
    text = """(game Strip (players A B)
        (equipment (board (rect 10 1)))
        (rules (play (add (piece Own) (board Empty)))
               (end (draw (fullBoard)))))"""
    game = compile_game(validate(parse(text)))
    s0 = game.initial_state()
    s = game.apply(s0, Move("add", -1, 0, 1))
    table = FeatureTable((pattern([(("W",), "Enemy")], weight=10.0),), 1.0)
    moves = game._moves(s)
    assert len(moves) == 9
    bf = BoundFeatures(game, table)
    scores = bf.score_moves(s, moves)
    assert sorted(scores)[-1] == 10.0 and sorted(scores)[-2] == 0.0
    want = math.exp(10) / (math.exp(10) + 8)
    probs = softmax_probs(scores, 1.0)
    assert abs(max(probs) - want) < 1e-12
    rng = random.Random(12)
    n = 20000
    hot = moves[int(scores.argmax())].to
    hits = sum(playout_policy_sample(game, s, table, rng).to == hot
               for _ in range(n))
    assert hits / n > 0.99


def test_sampling_deterministic_with_seed(hex5):
    s = bridge_state(hex5)
    table = FeatureTable((BRIDGE,), 1.0)
    a = [playout_policy_sample(hex5, s, table, random.Random(5)) for _ in range(10)]
    b = [playout_policy_sample(hex5, s, table, random.Random(5)) for _ in range(10)]
    assert a == b


# --- choose_move ------------------------------------------------------------------------


def test_choose_move_always_legal_and_visits_sum(ttt):
    rng = random.Random(3)
    s = ttt.initial_state()
    for iters in (1, 7, 50):
        cfg = SearchConfig(iterations=iters, rng_seed=rng.getrandbits(32))
        m = choose_move(ttt, s, cfg)
        assert m in ttt.legal_moves(s)
        moves, visits = root_statistics(ttt, s, cfg)
        assert sum(visits) == iters


def test_choose_move_bit_reproducible(ttt):
    s = ttt.initial_state()
    cfg = SearchConfig(iterations=300, rng_seed=42)
    assert choose_move(ttt, s, cfg) == choose_move(ttt, s, cfg)


def test_choose_move_terminal_raises(onecell):
    s = onecell.initial_state()
    s = onecell.apply(s, Move("add", -1, 0, 1))
    with pytest.raises(CalledOnTerminal):
        choose_move(onecell, s, SearchConfig(iterations=10))


def test_choose_move_finds_immediate_wins(ttt):
    from oracles import ttt_tactic_positions

    wins, _ = ttt_tactic_positions()
    rng = random.Random(6)
    for board, mover, cell in rng.sample(wins, 12):
        s = ttt.make_state(board, mover, sum(1 for o in board if o))
        m = choose_move(ttt, s, SearchConfig(iterations=500, rng_seed=9))
        assert m.to == cell


def test_choose_move_blocks_forced_losses(ttt):
    from oracles import ttt_tactic_positions

    _, blocks = ttt_tactic_positions()
    board, mover, cell = blocks[17]
    s = ttt.make_state(board, mover, sum(1 for o in board if o))
    found = sum(
        choose_move(ttt, s, SearchConfig(iterations=1000, rng_seed=seed)).to == cell
        for seed in range(100))
    assert found >= 95


def test_exploration_zero_visit_dominance(ttt):
    from oracles import ttt_tactic_positions

    wins, _ = ttt_tactic_positions()
    rng = random.Random(10)
    for board, mover, cell in rng.sample(wins, 6):
        s = ttt.make_state(board, mover, sum(1 for o in board if o))
        cfg = SearchConfig(iterations=500, exploration_c=0.0, rng_seed=3)
        moves, visits = root_statistics(ttt, s, cfg)
        best = max(range(len(moves)), key=lambda i: visits[i])
        assert moves[best].to == cell


# --- training ----------------------------------------------------------------------------


def test_candidates_documented_order(hex5, mutorere):
    cands = generate_candidates(hex5)
    assert len(cands) == 512
    assert all(len(p.elements) <= 2 for p in cands)
    # stage 1: single one-step elements over 6 labels x 4 contents
    first = cands[:24]
    assert all(len(p.elements) == 1 and len(p.elements[0].walk) == 1 for p in first)
    # step games add MoveFrom-anchored singles
    step_cands = generate_candidates(mutorere)
    assert any(p.anchor == "from" for p in step_cands)


def test_train_zero_learn_rate(ttt):
    table = train_features(ttt, 3, SearchConfig(iterations=8, rng_seed=1), 0.0)
    assert all(p.weight == 0.0 for p in table.patterns)


def test_train_deterministic(ttt):
    cfg = SearchConfig(iterations=8, rng_seed=77)
    a = train_features(ttt, 4, cfg, 0.05)
    b = train_features(ttt, 4, cfg, 0.05)
    assert a == b


def test_table_json_round_trip(hex5):
    table = train_features(hex5, 2, SearchConfig(iterations=8, rng_seed=5), 0.1,
                           prune_to=16)
    again = table_from_json(table_to_json(table))
    assert again == table


# --- explanation ------------------------------------------------------------------------


def test_explain_bridge_mentions_elements():
    text = explain_feature(BRIDGE)
    for lab in ("SW", "E", "SE"):
        assert lab in text
    assert "own piece" in text and "enemy piece" in text


def test_explain_anchor_own():
    p = pattern([((), "Own")], anchor="to", weight=0.5)
    assert "own piece" in explain_feature(p)


def test_explain_adjacent_once_per_single_step_element():
    p = pattern([(("NE",), "Own"), (("SW",), "Empty")], weight=1.0)
    text = explain_feature(p)
    assert text.count("adjacent") == 2
    p2 = pattern([(("NE", "NE"), "Own")], weight=1.0)
    assert explain_feature(p2).count("adjacent") == 0
