"""Hybrid annealing benchmark pipeline for dynamically weighted MWIS.

Reduces maximum-weight independent set problems to QUBOs, embeds them in a
Chimera physical graph, samples with a simulated annealer standing in for
the QPU, charges time with the k99 time-to-solution model, and compares the
embed-once hybrid schedule against embed-per-assignment and an exact
classical baseline.
"""

from .baseline import build_constraints, solve_bip, solve_dwmwis_classical
from .chimera import ChimeraGraph, build_chimera, degree_histogram
from .embedding import (
    Embedding,
    EmbeddingError,
    EmbeddingStats,
    embed_qubo,
    find_embedding,
    unembed_sample,
    verify_embedding,
)
from .graphs import (
    DwmwisInstance,
    GraphFamily,
    GraphParseError,
    WeightedGraph,
    generate_family,
    make_dwmwis_instance,
    parse_graph,
    render_graph,
)
from .metrics import UNSOLVED, DwmwisReport, TimingLedger, aggregate, k99
from .qubo import (
    QuboMatrix,
    brute_force_qubo,
    decode_independent_set,
    evaluate,
    mwis_to_qubo,
)
from .sampler import AnnealSchedule, SampleSet, TimingModel, sample, success_probability

__version__ = "0.1.0"

__all__ = [
    "AnnealSchedule",
    "ChimeraGraph",
    "DwmwisInstance",
    "DwmwisReport",
    "Embedding",
    "EmbeddingError",
    "EmbeddingStats",
    "GraphFamily",
    "GraphParseError",
    "QuboMatrix",
    "SampleSet",
    "TimingLedger",
    "TimingModel",
    "UNSOLVED",
    "WeightedGraph",
    "aggregate",
    "brute_force_qubo",
    "build_chimera",
    "build_constraints",
    "decode_independent_set",
    "degree_histogram",
    "embed_qubo",
    "evaluate",
    "find_embedding",
    "generate_family",
    "k99",
    "make_dwmwis_instance",
    "mwis_to_qubo",
    "parse_graph",
    "render_graph",
    "sample",
    "solve_bip",
    "solve_dwmwis_classical",
    "success_probability",
    "unembed_sample",
    "verify_embedding",
]
