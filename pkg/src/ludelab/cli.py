"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/domain error.  Every
subcommand is deterministic for fixed flags and seeds: primary outputs
(stdout, JSON/CSV/Newick/DOT files) are byte-identical across runs and
independent of --threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import ebnf, recon as recon_mod
from .corpus import load_corpus, math_profile, packaged_corpus_dir
from .distance import DistanceMatrix, WeightTable, distance_matrix
from .errors import LudelabError
from .explore import enumerate_states, solve
from .features import table_to_json
from .game import compile_game
from .mcts import SearchConfig, choose_move
from .phylo import fitch_ancestral, influence_network, neighbor_joining
from .quality import Thresholds, TrialSpec, evaluate, records_to_csv, run_trials
from .schema import standard_library
from .sexpr import parse, pretty, serialize
from .state import Move, derive_seed
from .training import train_features
from .validate import canonicalize, validate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_usage(message))

    def exit_usage(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        return 1


def _resolve_game_path(name: str) -> Path:
    p = Path(name)
    if p.suffix == ".lud" or p.exists():
        return p
    for cand in sorted(packaged_corpus_dir().glob("*.lud")):
        tree = parse(cand.read_text(encoding="utf-8"))
        if tree.args and tree.args[0] == name or cand.stem == name:
            return cand
    raise LudelabError(f"no such game file or corpus game: {name}")


def _load_description(name: str, partial: bool = False):
    path = _resolve_game_path(name)
    return validate(parse(path.read_text(encoding="utf-8")), partial=partial)


def _write(path, text: str):
    Path(path).write_text(text, encoding="utf-8")


def _agent(text: str):
    return recon_mod.parse_agent(text)


def _ladder(text: str):
    return [SearchConfig(int(n)) for n in text.split(",") if n]


# --- subcommand implementations -----------------------------------------------------

def _cmd_parse(args) -> int:
    gd = _load_description(args.game, partial=True)
    canon = canonicalize(gd)
    print(serialize(canon.root) if args.compact else pretty(canon.root))
    return 0


def _cmd_grammar(args) -> int:
    text = ebnf.grammar_text(standard_library())
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    return 0


def _cmd_games(args) -> int:
    rows = []
    for e in load_corpus(args.corpus):
        profile = dict(math_profile(e.description).tags)
        rows.append({**e.metadata.to_dict(), "partial": e.is_partial,
                     "concepts": profile})
    print(json.dumps(rows, indent=2, sort_keys=True))
    return 0


def _render_board(game, s) -> str:
    board = game.board
    if board.kind in ("square", "rect"):
        w = round(max(x for x, _ in board.layout)) + 1
        sym = {0: ".", 1: "X", 2: "O"}
        lines = []
        for r in range(board.cell_count // w):
            lines.append(" ".join(sym[s.board[r * w + c]] for c in range(w)))
        return "\n".join(lines)
    sym = {0: ".", 1: "X", 2: "O"}
    return " ".join(f"{i}:{sym[s.board[i]]}" for i in range(board.cell_count))


def _cmd_play(args) -> int:
    gd = _load_description(args.game)
    game = compile_game(gd)
    s = game.initial_state()
    if args.replay:
        s = game.replay(Path(args.replay).read_text().splitlines())
        out = game.status(s)
        print(_render_board(game, s))
        print(f"status: {out}  plies: {s.move_count}  hash: {s.hash:016x}")
        return 0
    human = args.human
    cfg = SearchConfig(iterations=args.iterations, rng_seed=args.seed)
    print(f"playing {game.name}; you are seat {human} "
          f"({game.player_names[human - 1]}); enter 'to' or 'from to'")
    while True:
        out = game.status(s)
        print(_render_board(game, s))
        if out.is_terminal:
            print(f"game over: {out}")
            return 0
        if s.mover == human:
            line = input(f"your move ({len(game.legal_moves(s))} legal): ").strip()
            parts = line.split()
            try:
                if len(parts) == 1:
                    m = Move(game.move_rule.kind, -1, int(parts[0]), s.mover)
                else:
                    m = Move(game.move_rule.kind, int(parts[0]), int(parts[1]), s.mover)
                s = game.apply(s, m)
            except (ValueError, IndexError, LudelabError):
                print("illegal; legal moves:",
                      ", ".join(mv.to_line() for mv in game.legal_moves(s)))
                continue
        else:
            m = choose_move(game, s, cfg.with_seed(derive_seed(args.seed, s.move_count)))
            print(f"ai plays: {m.to_line()}")
            s = game.apply(s, m)


def _cmd_eval(args) -> int:
    gd = _load_description(args.game)
    game = compile_game(gd)
    agent = _agent(args.agent)
    spec = TrialSpec(num_games=args.games, agent_a=agent, agent_b=agent,
                     base_seed=args.seed)
    thresholds = Thresholds.from_dict(json.loads(Path(args.thresholds).read_text())) \
        if args.thresholds else None
    report = evaluate(game, spec, _ladder(args.ladder), thresholds=thresholds,
                      ladder_games=args.ladder_games, threads=args.threads)
    text = report.to_json()
    print(text)
    if args.out:
        _write(args.out, text + "\n")
    if args.csv:
        _write(args.csv, records_to_csv(run_trials(game, spec, args.threads)))
    if args.fig:
        from .plots import quality_figure, save_figure
        save_figure(quality_figure(report), args.fig)
    return 0


def _cmd_train(args) -> int:
    gd = _load_description(args.game)
    game = compile_game(gd)
    base = SearchConfig(iterations=args.iterations, rng_seed=args.seed)
    table = train_features(game, args.games, base, args.lr,
                           cap=args.cap, prune_to=args.prune,
                           temperature=args.temperature)
    text = table_to_json(table)
    if args.out:
        _write(args.out, text + "\n")
    else:
        print(text)
    return 0


def _cmd_dist(args) -> int:
    entries = load_corpus(args.corpus)
    weights = WeightTable.from_json(Path(args.weights).read_text()) \
        if args.weights else WeightTable.default()
    matrix = distance_matrix([e.description for e in entries], weights)
    text = matrix.to_csv()
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    if args.fig:
        from .plots import heatmap_figure, save_figure
        save_figure(heatmap_figure(matrix), args.fig)
    return 0


def _cmd_phylo(args) -> int:
    matrix = DistanceMatrix.from_csv(Path(args.matrix).read_text())
    if args.mode == "nj":
        tree = neighbor_joining(matrix)
        text = tree.to_newick() + "\n"
        if args.out:
            _write(args.out, text)
        else:
            print(text, end="")
        if args.fig:
            from .plots import save_figure, tree_figure
            save_figure(tree_figure(tree), args.fig)
        return 0
    if args.mode == "fitch":
        tree = neighbor_joining(matrix)
        entries = {e.name: e for e in load_corpus(args.corpus)}
        trait = {}
        for name in matrix.labels:
            if name not in entries:
                raise LudelabError(f"game {name!r} not in corpus")
            gd = entries[name].description
            trait[name] = any(n.keyword == args.trait for n in gd.root.walk())
        cost, sets = fitch_ancestral(tree, trait)
        doc = {
            "trait": args.trait,
            "parsimony_cost": cost,
            "leaf_values": {k: bool(v) for k, v in sorted(trait.items())},
            "node_state_sets": {str(k): sorted(v) for k, v in sorted(sets.items())},
        }
        text = json.dumps(doc, indent=2, sort_keys=True)
        if args.out:
            _write(args.out, text + "\n")
        else:
            print(text)
        return 0
    # him
    entries = {e.name: e for e in load_corpus(args.corpus)}
    dates = {}
    for name in matrix.labels:
        if name not in entries:
            raise LudelabError(f"game {name!r} not in corpus")
        dates[name] = entries[name].metadata.earliest_date
    if args.threshold == "median":
        vals = sorted(matrix.d[i][j] for i in range(len(matrix.labels))
                      for j in range(i + 1, len(matrix.labels)))
        threshold = vals[len(vals) // 2]
    else:
        threshold = float(args.threshold)
    net = influence_network(dates, matrix, threshold)
    text = net.to_dot()
    if args.out:
        _write(args.out, text)
    else:
        print(text, end="")
    return 0


def _cmd_recon(args) -> int:
    spec = recon_mod.spec_from_json(Path(args.spec).read_text())
    if args.seed is not None:
        spec.base_seed = args.seed
    ranked = recon_mod.reconstruct(spec, threads=args.threads)
    text = recon_mod.results_to_json(ranked)
    if args.out:
        _write(args.out, text + "\n")
    else:
        print(text)
    if args.fig:
        from .plots import recon_figure, save_figure
        save_figure(recon_figure(ranked), args.fig)
    return 0


def _cmd_enumerate(args) -> int:
    gd = _load_description(args.game)
    game = compile_game(gd)
    reduction = args.reduction.replace("-", "_")
    result = enumerate_states(game, reduction, budget=args.budget)
    doc = {
        "game": game.name,
        "reduction": result.reduction,
        "positions": result.count,
        "raw_states": result.raw_count,
        "transforms": result.transform_count,
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _cmd_solve(args) -> int:
    gd = _load_description(args.game)
    game = compile_game(gd)
    result = solve(game, budget=args.budget)
    s0 = game.initial_state()
    doc = {
        "game": game.name,
        "value": str(result.game_value),
        "states": result.state_count,
        "immediate_winning_first_moves":
            [m.to_line() for m in result.immediate_winning_moves(s0)],
        "optimal_first_moves": [m.to_line() for m in result.best_moves(s0)],
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    app = create_app(corpus_dir=args.corpus, recon_budget=args.recon_budget,
                     ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- parser ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="ludelab", description=__doc__)
    p.add_argument("--json", action="store_true", help="machine-readable errors")
    p.add_argument("--seed", type=int, default=None, dest="global_seed",
                   help="default seed for subcommands that take one")
    p.add_argument("--threads", type=int, default=None, dest="global_threads",
                   help="default worker count for trial/candidate pools")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("parse", _cmd_parse, "parse and canonicalize a game description")
    sp.add_argument("game")
    sp.add_argument("--compact", action="store_true")

    sp = add("grammar", _cmd_grammar, "emit the EBNF grammar reference")
    sp.add_argument("--out")

    sp = add("games", _cmd_games, "list the corpus with metadata and profiles")
    sp.add_argument("--corpus")

    sp = add("play", _cmd_play, "play a corpus game against the AI")
    sp.add_argument("game")
    sp.add_argument("--human", type=int, default=1, choices=(1, 2))
    sp.add_argument("--iterations", type=int, default=512)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--replay", help="apply a move trace file and print the result")

    sp = add("eval", _cmd_eval, "evaluate game quality via self-play trials")
    sp.add_argument("game")
    sp.add_argument("--games", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--agent", default="uniform", help="uniform or mcts:N")
    sp.add_argument("--ladder", default="16,64,256,1024")
    sp.add_argument("--ladder-games", type=int, default=32)
    sp.add_argument("--thresholds", help="JSON file overriding flag thresholds")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--csv", help="write per-game records CSV here")
    sp.add_argument("--fig", help="write a metrics figure here")

    sp = add("train", _cmd_train, "learn a feature table through self-play")
    sp.add_argument("game")
    sp.add_argument("--games", type=int, default=200)
    sp.add_argument("--iterations", type=int, default=24)
    sp.add_argument("--lr", type=float, default=0.02)
    sp.add_argument("--temperature", type=float, default=1.0)
    sp.add_argument("--cap", type=int, default=512)
    sp.add_argument("--prune", type=int, default=64)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", help="write the feature table JSON here")

    sp = add("dist", _cmd_dist, "pairwise ludemic distance over the corpus")
    sp.add_argument("corpus", nargs="?", help="corpus directory (default: shipped)")
    sp.add_argument("--weights", help="JSON weight table")
    sp.add_argument("--out", help="write the CSV matrix here")
    sp.add_argument("--fig", help="write a heatmap figure here")

    sp = add("phylo", _cmd_phylo, "phylogenetic analyses over a distance matrix")
    sp.add_argument("mode", choices=("nj", "fitch", "him"))
    sp.add_argument("matrix", help="distance matrix CSV")
    sp.add_argument("--corpus")
    sp.add_argument("--trait", help="ludeme keyword (fitch)")
    sp.add_argument("--threshold", default="median", help="distance threshold (him)")
    sp.add_argument("--out")
    sp.add_argument("--fig")

    sp = add("recon", _cmd_recon, "rank rule reconstructions for a spec file")
    sp.add_argument("spec")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--out")
    sp.add_argument("--fig")

    sp = add("enumerate", _cmd_enumerate, "count reachable positions")
    sp.add_argument("game")
    sp.add_argument("--reduction", default="none",
                    choices=("none", "symmetry", "symmetry-color"))
    sp.add_argument("--budget", type=int, default=10_000_000)

    sp = add("solve", _cmd_solve, "solve a small game exhaustively")
    sp.add_argument("game")
    sp.add_argument("--budget", type=int, default=1_000_000)

    sp = add("serve", _cmd_serve, "run the HTTP service (and optionally the UI)")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    sp.add_argument("--corpus")
    sp.add_argument("--ui", help="directory of built web UI assets")
    sp.add_argument("--recon-budget", type=int, default=64)

    return p


def _resolve_globals(args):
    if hasattr(args, "seed") and args.seed is None:
        fallback = 0 if args.command != "recon" else None
        args.seed = args.global_seed if args.global_seed is not None else fallback
    if hasattr(args, "threads") and args.threads is None:
        args.threads = (args.global_threads if args.global_threads is not None
                        else os.cpu_count() or 1)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    _resolve_globals(args)
    try:
        return args.fn(args)
    except LudelabError as exc:
        if args.json:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
                  file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
