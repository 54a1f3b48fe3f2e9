"""Genetic search for extremal graphs, counterexamples and transformation checks."""

from .engine import Crossover, EngineConfig, RunResult, RunStats, ablation_grid, run, run_batch
from .graph import Graph, Scheme, decode, encode, permute
from .invariants import average_distance, diameter, irregularity, repair_strong, scc_count
from .io import decode_digraph6, decode_graph6, encode_digraph6, encode_graph6, to_dot
from .objective import Fitness, ObjectiveSpec, evaluate, parse_objective, template
from .operators import Selection, align
from .oracle import brute_force_optimum, enumerate_graphs, known_optimum

__version__ = "0.1.0"

__all__ = [
    "Crossover", "EngineConfig", "RunResult", "RunStats", "ablation_grid", "run", "run_batch",
    "Graph", "Scheme", "decode", "encode", "permute",
    "average_distance", "diameter", "irregularity", "repair_strong", "scc_count",
    "decode_digraph6", "decode_graph6", "encode_digraph6", "encode_graph6", "to_dot",
    "Fitness", "ObjectiveSpec", "evaluate", "parse_objective", "template",
    "Selection", "align",
    "brute_force_optimum", "enumerate_graphs", "known_optimum",
]
