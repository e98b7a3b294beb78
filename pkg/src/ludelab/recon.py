"""Forensic rule-set reconstruction: enumerate candidate rule sets over
fixed equipment constraints, score each by self-play quality times an
authenticity prior, and rank.

A reconstruction spec carries a fixed description (with placeholder
nodes where rules are unknown), slots addressing tree positions by
argument-index paths, and per-slot candidate fragments.  Enumeration is
the Cartesian product over slots in declared order (last slot varies
fastest); every emitted description must validate.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import EmptySlot, InvalidSlotPath
from .game import compile_game
from .mcts import SearchConfig
from .quality import QualityReport, Thresholds, TrialSpec, evaluate
from .sexpr import LudemeNode, parse, serialize
from .validate import GameDescription, validate


@dataclass(frozen=True)
class Slot:
    path: tuple            # argument-index path from the game root
    candidates: tuple      # LudemeNode or int replacements

    def __post_init__(self):
        if not self.candidates:
            raise EmptySlot(f"slot {list(self.path)} has no candidates")


@dataclass
class ReconstructionSpec:
    fixed: GameDescription
    slots: list
    authenticity_prior: dict = field(default_factory=dict)
    budget: int = 64
    beam_width: int = 8
    num_games: int = 160
    agent_a: SearchConfig | None = None
    agent_b: SearchConfig | None = None
    base_seed: int = 0
    ladder: list = field(default_factory=lambda: [SearchConfig(16), SearchConfig(64)])
    ladder_games: int = 32
    thresholds: Thresholds = field(default_factory=Thresholds)
    move_cap: int | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        for w in self.authenticity_prior.values():
            if not 0 < w <= 1:
                raise ValueError("authenticity priors must lie in (0, 1]")

    def trial_spec(self) -> TrialSpec:
        return TrialSpec(num_games=self.num_games, agent_a=self.agent_a,
                         agent_b=self.agent_b, base_seed=self.base_seed)


def parse_agent(text: str | None):
    if text is None or text == "uniform":
        return None
    kind, _, n = text.partition(":")
    if kind != "mcts" or not n.isdigit():
        raise ValueError(f"bad agent spec {text!r} (use 'uniform' or 'mcts:N')")
    return SearchConfig(iterations=int(n))


def spec_from_json(text: str) -> ReconstructionSpec:
    doc = json.loads(text)
    fixed = validate(parse(doc["fixed"]), partial=True)
    slots = []
    for s in doc["slots"]:
        cands = []
        for c in s["candidates"]:
            cands.append(int(c) if isinstance(c, (int, float)) else parse(c))
        slots.append(Slot(tuple(int(i) for i in s["path"]), tuple(cands)))
    trials = doc.get("trials", {})
    ladder = [SearchConfig(int(n)) for n in doc.get("ladder", (16, 64))]
    return ReconstructionSpec(
        fixed=fixed,
        slots=slots,
        authenticity_prior={k: float(v)
                            for k, v in doc.get("authenticity_prior", {}).items()},
        budget=int(doc.get("budget", 64)),
        beam_width=int(doc.get("beam_width", 8)),
        num_games=int(trials.get("num_games", 160)),
        agent_a=parse_agent(trials.get("agent_a")),
        agent_b=parse_agent(trials.get("agent_b")),
        base_seed=int(trials.get("base_seed", 0)),
        ladder=ladder,
        ladder_games=int(doc.get("ladder_games", 32)),
        thresholds=Thresholds.from_dict(doc.get("thresholds", {})),
        move_cap=doc.get("move_cap"),
    )


def _node_at(root: LudemeNode, path):
    node = root
    for depth, idx in enumerate(path):
        if not isinstance(node, LudemeNode) or not 0 <= idx < len(node.args):
            raise InvalidSlotPath(f"path {list(path)} leaves the tree at depth {depth}")
        node = node.args[idx]
    return node


def _substitute(root: LudemeNode, path, value) -> LudemeNode:
    out = root.copy()
    node = out
    for idx in path[:-1]:
        if not isinstance(node, LudemeNode) or not 0 <= idx < len(node.args):
            raise InvalidSlotPath(f"path {list(path)} leaves the tree")
        node = node.args[idx]
    last = path[-1]
    if not isinstance(node, LudemeNode) or not 0 <= last < len(node.args):
        raise InvalidSlotPath(f"path {list(path)} leaves the tree")
    node.args[last] = value.copy() if isinstance(value, LudemeNode) else value
    return out


def _assignment_description(spec: ReconstructionSpec, assignment) -> GameDescription:
    root = spec.fixed.root
    for slot, choice in zip(spec.slots, assignment):
        root = _substitute(root, slot.path, slot.candidates[choice])
    return validate(root, spec.fixed.library)


def candidate_count(spec: ReconstructionSpec) -> int:
    total = 1
    for slot in spec.slots:
        total *= len(slot.candidates)
    return total


def enumerate_candidates(spec: ReconstructionSpec):
    """Lazy Cartesian product over slots, truncated at spec.budget."""
    for slot in spec.slots:
        _node_at(spec.fixed.root, slot.path)  # fail fast on bad paths
    ranges = [range(len(slot.candidates)) for slot in spec.slots]
    emitted = 0
    for assignment in itertools.product(*ranges) if ranges else iter([()]):
        if emitted >= spec.budget:
            return
        yield _assignment_description(spec, assignment)
        emitted += 1


@dataclass
class RankedCandidate:
    description: GameDescription
    quality: QualityReport
    prior: float
    score: float

    def to_dict(self) -> dict:
        return {
            "description": serialize(self.description.root),
            "canonical": self.description.canonical_text(),
            "prior": self.prior,
            "score": self.score,
            "quality": self.quality.to_dict(),
        }


def authenticity_prior(spec: ReconstructionSpec, gd: GameDescription) -> float:
    keywords = {node.keyword for node in gd.root.walk()}
    prior = 1.0
    for kw in sorted(keywords):
        prior *= spec.authenticity_prior.get(kw, 1.0)
    return prior


def score_candidate(gd: GameDescription, spec: ReconstructionSpec,
                    threads: int = 1) -> RankedCandidate:
    game = compile_game(gd, move_cap=spec.move_cap)
    report = evaluate(game, spec.trial_spec(), spec.ladder,
                      thresholds=spec.thresholds, ladder_games=spec.ladder_games,
                      threads=threads, lazy_ladder=True)
    prior = authenticity_prior(spec, gd)
    return RankedCandidate(gd, report, prior, report.score * prior)


def _rank_key(c: RankedCandidate):
    return (-c.score, c.description.canonical_text())


def reconstruct(spec: ReconstructionSpec, threads: int = 1) -> list[RankedCandidate]:
    """Exhaustive scoring when the candidate space fits the budget,
    otherwise a greedy beam over slots mutating one slot at a time."""
    if candidate_count(spec) <= spec.budget:
        ranked = [score_candidate(gd, spec, threads)
                  for gd in enumerate_candidates(spec)]
        ranked.sort(key=_rank_key)
        return ranked

    scored: dict = {}

    def score_assignment(assignment):
        if assignment not in scored and len(scored) < spec.budget:
            scored[assignment] = score_candidate(
                _assignment_description(spec, assignment), spec, threads)
        return scored.get(assignment)

    beam = [tuple(0 for _ in spec.slots)]
    score_assignment(beam[0])
    improved = True
    while improved and len(scored) < spec.budget:
        improved = False
        neighbors = []
        for assignment in beam:
            for si, slot in enumerate(spec.slots):
                for ci in range(len(slot.candidates)):
                    if ci != assignment[si]:
                        cand = assignment[:si] + (ci,) + assignment[si + 1:]
                        neighbors.append(cand)
        before = len(scored)
        for cand in neighbors:
            score_assignment(cand)
        pool = sorted(scored.items(), key=lambda kv: _rank_key(kv[1]))
        new_beam = [a for a, _ in pool[:spec.beam_width]]
        if new_beam != beam or len(scored) > before:
            improved = new_beam != beam
            beam = new_beam
    ranked = sorted(scored.values(), key=_rank_key)
    return ranked


def results_to_json(ranked) -> str:
    return json.dumps([c.to_dict() for c in ranked], indent=2, sort_keys=True)
