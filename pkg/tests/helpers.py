"""Shared test utilities: random graphs and independent enumeration oracles."""

from __future__ import annotations

import math

import numpy as np

from dwmwis.graphs import WeightedGraph, canonical_edges


def dyadic_weights(rng: np.random.Generator, n: int) -> tuple[float, ...]:
    """Random weights k/128 with k in 1..128: exact in binary floating point,
    so every accumulation order yields identical sums and ties are exact."""
    return tuple(float(k) / 128.0 for k in rng.integers(1, 129, size=n))


def random_graph(rng: np.random.Generator, n: int, p: float | None = None,
                 weights: tuple[float, ...] | None = None) -> WeightedGraph:
    if p is None:
        p = float(rng.uniform(0.1, 0.9))
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    if weights is None:
        weights = dyadic_weights(rng, n)
    return WeightedGraph(n, canonical_edges(edges), weights)


def mwis_enumeration(graph: WeightedGraph) -> float:
    """Best independent-set weight by checking every vertex subset.

    Vectorised over bitmasks; independent of the QUBO and BIP solution
    paths it is used to check.
    """
    n = graph.n
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(masks.shape, dtype=bool)
    for u, v in graph.edges:
        ok &= ~(((masks >> u) & 1).astype(bool) & ((masks >> v) & 1).astype(bool))
    weight = np.zeros(masks.shape)
    for i in range(n):
        weight += ((masks >> i) & 1) * graph.weights[i]
    return float(weight[ok].max())


def mwis_enumeration_slow(graph: WeightedGraph) -> float:
    """Plain-python subset scan with fsum; for cross-checking the oracle."""
    best = 0.0
    for mask in range(1 << graph.n):
        verts = {i for i in range(graph.n) if (mask >> i) & 1}
        if graph.is_independent(verts):
            best = max(best, math.fsum(graph.weights[i] for i in verts))
    return best
