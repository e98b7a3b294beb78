"""ludelab: a compact general game system for traditional strategy games.

Parse ludeme-based game descriptions, compile and play them, evaluate
rule-set quality through self-play, compute ludemic distances and
phylogenies over a tagged corpus, and reconstruct plausible rule sets
from partial equipment constraints.
"""

from .board import BoardGraph, automorphisms, build_board
from .corpus import GameMetadata, classify_period, load_corpus, math_profile
from .distance import DistanceMatrix, WeightTable, distance_matrix, wed
from .ebnf import grammar_text
from .errors import LudelabError
from .explore import enumerate_states, solve
from .features import (
    FeaturePattern,
    FeatureTable,
    explain_feature,
    match_features,
    playout_policy_sample,
)
from .game import Game, compile_game
from .mcts import SearchConfig, choose_move
from .phylo import PhyloTree, fitch_ancestral, influence_network, neighbor_joining
from .playout import playout
from .quality import QualityReport, TrialSpec, evaluate, run_trials
from .recon import ReconstructionSpec, enumerate_candidates, reconstruct, score_candidate
from .schema import LudemeSchema, standard_library
from .sexpr import LudemeNode, parse, serialize
from .state import GameState, Move, Outcome
from .training import train_features
from .validate import GameDescription, canonicalize, validate

__version__ = "0.1.0"

__all__ = [
    "BoardGraph", "DistanceMatrix", "FeaturePattern", "FeatureTable", "Game",
    "GameDescription", "GameMetadata", "GameState", "LudelabError", "LudemeNode",
    "LudemeSchema", "Move", "Outcome", "PhyloTree", "QualityReport",
    "ReconstructionSpec", "SearchConfig", "TrialSpec", "WeightTable",
    "automorphisms", "build_board", "canonicalize", "choose_move",
    "classify_period", "compile_game", "distance_matrix", "enumerate_candidates",
    "enumerate_states", "evaluate", "explain_feature", "fitch_ancestral",
    "grammar_text", "influence_network", "load_corpus", "match_features",
    "math_profile", "neighbor_joining", "parse", "playout",
    "playout_policy_sample", "reconstruct", "run_trials", "score_candidate",
    "serialize", "solve", "standard_library", "train_features", "validate", "wed",
]
