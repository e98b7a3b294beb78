"""Game-quality evaluation via seeded self-play trials.

The three flaw indicators (length, fairness, drawishness) are measured
from agent-vs-agent trials; strategic depth is proxied by win rates
between adjacent rungs of an agent-strength ladder.  Everything is a
pure function of (game, spec, ladder, seeds): trials are embarrassingly
parallel and aggregation is order-independent.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .mcts import SearchConfig, choose_move
from .state import DRAW, WIN, derive_seed

DEFAULT_LADDER_ITERS = (16, 64, 256, 1024)
LADDER_SALT = 0x4C41_4444  # seed-domain separators
TRIAL_SALT = 0x5452_4941


def default_ladder() -> list[SearchConfig]:
    return [SearchConfig(iterations=n) for n in DEFAULT_LADDER_ITERS]


@dataclass(frozen=True)
class TrialSpec:
    num_games: int
    agent_a: SearchConfig | None = None   # None = uniform random agent
    agent_b: SearchConfig | None = None
    swap_colors: bool = True
    base_seed: int = 0

    def __post_init__(self):
        if self.num_games < 2:
            raise ValueError("num_games must be >= 2")
        if self.swap_colors and self.num_games % 2 != 0:
            raise ValueError("num_games must be even when swap_colors is on")


@dataclass(frozen=True)
class GameRecord:
    index: int
    first_agent: str      # "a" | "b" (which agent had seat 1)
    status: str           # win | draw
    winner: int           # 0 when drawn
    plies: int
    cap_hit: bool

    def winner_agent(self) -> str | None:
        if self.status != WIN:
            return None
        seat_of_a = 1 if self.first_agent == "a" else 2
        return "a" if self.winner == seat_of_a else "b"


def _agent_move(game, s, agent, game_seed, ply):
    seed = derive_seed(game_seed, s.mover, ply)
    if agent is None:
        moves = game._moves(s)
        return moves[random.Random(seed).randrange(len(moves))]
    return choose_move(game, s, agent.with_seed(seed))


def _play_record(game, spec: TrialSpec, index: int) -> GameRecord:
    swapped = spec.swap_colors and index % 2 == 1
    first, second = (spec.agent_b, spec.agent_a) if swapped else (spec.agent_a, spec.agent_b)
    pair = index - (index % 2) if spec.swap_colors else index
    game_seed = derive_seed(spec.base_seed, TRIAL_SALT, pair)
    if swapped:
        game_seed = derive_seed(game_seed, 1)
    s = game.initial_state()
    ply = 0
    while True:
        out = game.status(s)
        if out.is_terminal:
            break
        agent = first if s.mover == 1 else second
        m = _agent_move(game, s, agent, game_seed, ply)
        s = game.apply(s, m, trusted=True)
        ply += 1
    cap_hit = out.status == DRAW and not game.status(s, ignore_cap=True).is_terminal
    return GameRecord(
        index=index,
        first_agent="b" if swapped else "a",
        status=out.status,
        winner=out.winner or 0,
        plies=s.move_count,
        cap_hit=cap_hit,
    )


def _run_chunk(args):
    game, spec, indices = args
    return [_play_record(game, spec, i) for i in indices]


def run_trials(game, spec: TrialSpec, threads: int = 1) -> list[GameRecord]:
    """Play spec.num_games seeded games; reproducible and independent of
    the worker count."""
    indices = list(range(spec.num_games))
    if threads <= 1 or spec.num_games < 8:
        return [_play_record(game, spec, i) for i in indices]
    chunks = [indices[k::threads] for k in range(threads)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(_run_chunk, [(game, spec, ch) for ch in chunks]))
    records = [r for part in parts for r in part]
    records.sort(key=lambda r: r.index)
    return records


# --- aggregation -----------------------------------------------------------------

@dataclass(frozen=True)
class Thresholds:
    too_short_frac: float = 0.25   # of cell count
    too_short_floor: float = 2.5   # absolute plies
    cap_rate_max: float = 0.1
    advantage_low: float = 0.35
    advantage_high: float = 0.65
    draw_rate_max: float = 0.5

    @classmethod
    def from_dict(cls, d: dict) -> "Thresholds":
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


FLAGS = ("TooShort", "TooLong", "Unfair", "Drawish", "NonTerminating")


@dataclass(frozen=True)
class QualityReport:
    game_name: str
    mean_length: float
    length_cap_rate: float
    advantage: float          # first seat's share of decisive games
    draw_rate: float
    depth_proxy: float
    flags: tuple
    score: float
    trials: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "game": self.game_name,
            "mean_length": self.mean_length,
            "length_cap_rate": self.length_cap_rate,
            "advantage": self.advantage,
            "draw_rate": self.draw_rate,
            "depth_proxy": self.depth_proxy,
            "flags": list(self.flags),
            "score": self.score,
            "trials": self.trials,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def seat_advantage(records) -> float:
    """First seat's share of decisive games (0.5 when all drawn)."""
    wins1 = sum(1 for r in records if r.status == WIN and r.winner == 1)
    decisive = sum(1 for r in records if r.status == WIN)
    return wins1 / decisive if decisive else 0.5


def agent_winrate(records, agent: str) -> float:
    """Wins + half draws for one agent, as a fraction of all games."""
    total = 0.0
    for r in records:
        w = r.winner_agent()
        if w == agent:
            total += 1.0
        elif w is None:
            total += 0.5
    return total / len(records)


def ladder_depth_proxy(game, ladder, base_seed: int, games_per_pair: int,
                       threads: int = 1):
    """Mean win rate of the stronger agent of each adjacent ladder pair,
    mapped from [0.5, 1] onto [0, 1]."""
    pairs = []
    for idx in range(len(ladder) - 1):
        weak, strong = ladder[idx], ladder[idx + 1]
        spec = TrialSpec(
            num_games=games_per_pair, agent_a=strong, agent_b=weak,
            swap_colors=True, base_seed=derive_seed(base_seed, LADDER_SALT, idx))
        records = run_trials(game, spec, threads)
        wr = agent_winrate(records, "a")
        pairs.append(max(0.0, min(1.0, (wr - 0.5) * 2.0)))
    depth = sum(pairs) / len(pairs) if pairs else 0.0
    return depth, pairs


def evaluate(game, spec: TrialSpec, ladder=None, *, thresholds: Thresholds | None = None,
             ladder_games: int = 32, threads: int = 1,
             lazy_ladder: bool = False) -> QualityReport:
    """Quality metrics, flaw flags and composite score for one game.

    With lazy_ladder the strength ladder is skipped (depth reported 0)
    whenever a flaw flag already forces the score to zero; used by the
    reconstruction search to avoid paying for agents on broken rule sets.
    """
    th = thresholds or Thresholds()
    ladder = default_ladder() if ladder is None else list(ladder)
    if any(ladder[i].iterations > ladder[i + 1].iterations for i in range(len(ladder) - 1)):
        raise ValueError("ladder must be sorted by increasing iterations")
    records = run_trials(game, spec, threads)
    n = len(records)
    mean_length = sum(r.plies for r in records) / n
    cap_rate = sum(1 for r in records if r.cap_hit) / n
    draw_rate = sum(1 for r in records if r.status == DRAW) / n
    advantage = seat_advantage(records)

    flags = []
    cells = game.board.cell_count
    if mean_length < max(th.too_short_frac * cells, th.too_short_floor):
        flags.append("TooShort")
    if cap_rate > th.cap_rate_max:
        flags.append("TooLong")
        flags.append("NonTerminating")
    if not th.advantage_low <= advantage <= th.advantage_high:
        flags.append("Unfair")
    if draw_rate > th.draw_rate_max:
        flags.append("Drawish")

    if flags and lazy_ladder:
        depth, pair_rates = 0.0, []
    else:
        depth, pair_rates = ladder_depth_proxy(
            game, ladder, spec.base_seed, ladder_games, threads)

    if flags:
        score = 0.0
    else:
        score = ((1.0 - cap_rate) * (1.0 - abs(2.0 * advantage - 1.0))
                 * (1.0 - draw_rate) * depth)
        score = max(0.0, min(1.0, score))
    return QualityReport(
        game_name=game.name,
        mean_length=mean_length,
        length_cap_rate=cap_rate,
        advantage=advantage,
        draw_rate=draw_rate,
        depth_proxy=depth,
        flags=tuple(flags),
        score=score,
        trials={
            "num_games": spec.num_games,
            "base_seed": spec.base_seed,
            "swap_colors": spec.swap_colors,
            "agent_a": _agent_desc(spec.agent_a),
            "agent_b": _agent_desc(spec.agent_b),
            "ladder": [cfg.iterations for cfg in ladder],
            "ladder_games": ladder_games,
            "ladder_pair_rates": pair_rates,
            "move_cap": game.move_cap,
        },
    )


def _agent_desc(agent) -> str:
    if agent is None:
        return "uniform"
    kind = "feature-mcts" if agent.playout_policy is not None else "mcts"
    return f"{kind}:{agent.iterations}"


def records_to_csv(records) -> str:
    lines = ["index,first_agent,status,winner,plies,cap_hit"]
    for r in records:
        lines.append(f"{r.index},{r.first_agent},{r.status},{r.winner},{r.plies},"
                     f"{int(r.cap_hit)}")
    return "\n".join(lines) + "\n"
