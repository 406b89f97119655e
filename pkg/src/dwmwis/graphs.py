"""Weighted-graph data model, graph-family generators, and DWMWIS instances.

A DWMWIS instance is one graph structure together with ``m`` vertex-weight
vectors; the maximum-weight independent set is solved once per weight vector.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "WeightedGraph",
    "DwmwisInstance",
    "GraphFamily",
    "GraphParseError",
    "generate_family",
    "make_dwmwis_instance",
    "parse_graph",
    "render_graph",
    "with_weights",
    "adjacency_lists",
    "exact_weight",
]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on vertices 0..n-1 with positive vertex weights.

    Edges are stored once as (u, v) pairs with u < v, no self-loops.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        if len(self.weights) != self.n:
            raise ValueError(f"expected {self.n} weights, got {len(self.weights)}")
        if any(w <= 0 for w in self.weights):
            raise ValueError("vertex weights must be strictly positive")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) not in canonical range")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @property
    def max_weight(self) -> float:
        return max(self.weights)

    def degree(self, v: int) -> int:
        return sum(1 for u, w in self.edges if v in (u, w))

    def is_independent(self, vertices: set[int] | frozenset[int]) -> bool:
        return not any(u in vertices and v in vertices for u, v in self.edges)


def canonical_edges(edges) -> tuple[tuple[int, int], ...]:
    """Deduplicate and sort edges into the canonical (u < v) form."""
    return tuple(sorted({(min(u, v), max(u, v)) for u, v in edges}))


def with_weights(graph: WeightedGraph, weights) -> WeightedGraph:
    """Same structure, new weight vector."""
    return WeightedGraph(graph.n, graph.edges, tuple(float(w) for w in weights))


def adjacency_lists(graph: WeightedGraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    return [sorted(nb) for nb in adj]


def exact_weight(weights, vertices) -> Fraction:
    """Weight of a vertex set accumulated in exact rational arithmetic.

    Floating-point weights are summed as the exact rationals they represent,
    so two computations of the same set always agree and mathematically tied
    sets compare as ties.
    """
    total = Fraction(0)
    for v in vertices:
        total += Fraction(weights[v])
    return total


@dataclass(frozen=True)
class DwmwisInstance:
    """A graph structure plus m weight vectors drawn from a seeded RNG."""

    graph: WeightedGraph
    weight_sets: tuple[tuple[float, ...], ...]
    seed: int

    def __post_init__(self) -> None:
        if len(self.weight_sets) < 1:
            raise ValueError("need at least one weight vector")
        for ws in self.weight_sets:
            if len(ws) != self.graph.n:
                raise ValueError("weight vector length does not match vertex count")
            if any(not (0.0 < w <= 1.0) for w in ws):
                raise ValueError("instance weights must lie in (0, 1]")

    @property
    def m(self) -> int:
        return len(self.weight_sets)


_FAMILY_KINDS = ("cycle", "path", "star", "complete", "grid", "bipartite")


@dataclass(frozen=True)
class GraphFamily:
    """A named graph family with its size parameter(s).

    kind: one of cycle, path, star, complete, grid, bipartite.
    params: (n,) for the one-parameter families, (rows, cols) for grid,
    (a, b) for complete bipartite.
    """

    kind: str
    params: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in _FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        want = 2 if self.kind in ("grid", "bipartite") else 1
        if len(self.params) != want:
            raise ValueError(f"{self.kind} expects {want} size parameter(s)")

    @property
    def name(self) -> str:
        tag = {"cycle": "C", "path": "P", "star": "S", "complete": "K",
               "grid": "G", "bipartite": "B"}[self.kind]
        if len(self.params) == 1:
            return f"{tag}{self.params[0]}"
        return f"{tag}{self.params[0]}x{self.params[1]}"


def generate_family(family: GraphFamily) -> WeightedGraph:
    """Build the canonical graph of a family with all weights equal to 1."""
    kind, params = family.kind, family.params
    if kind == "cycle":
        (n,) = params
        if n < 3:
            raise ValueError(f"cycle needs n >= 3, got {n}")
        edges = [(i, (i + 1) % n) for i in range(n)]
        return _unit_graph(n, edges)
    if kind == "path":
        (n,) = params
        if n < 1:
            raise ValueError(f"path needs n >= 1, got {n}")
        edges = [(i, i + 1) for i in range(n - 1)]
        return _unit_graph(n, edges)
    if kind == "star":
        (leaves,) = params
        if leaves < 1:
            raise ValueError(f"star needs >= 1 leaf, got {leaves}")
        edges = [(0, i) for i in range(1, leaves + 1)]
        return _unit_graph(leaves + 1, edges)
    if kind == "complete":
        (n,) = params
        if n < 1:
            raise ValueError(f"complete graph needs n >= 1, got {n}")
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        return _unit_graph(n, edges)
    if kind == "grid":
        rows, cols = params
        if rows < 1 or cols < 1:
            raise ValueError(f"grid needs positive dimensions, got {rows}x{cols}")
        idx = lambda r, c: r * cols + c
        edges = []
        for r in range(rows):
            for c in range(cols):
                if c + 1 < cols:
                    edges.append((idx(r, c), idx(r, c + 1)))
                if r + 1 < rows:
                    edges.append((idx(r, c), idx(r + 1, c)))
        return _unit_graph(rows * cols, edges)
    if kind == "bipartite":
        a, b = params
        if a < 1 or b < 1:
            raise ValueError(f"bipartite needs positive part sizes, got {a},{b}")
        edges = [(i, a + j) for i in range(a) for j in range(b)]
        return _unit_graph(a + b, edges)
    raise ValueError(f"unknown family kind {kind!r}")


def _unit_graph(n: int, edges) -> WeightedGraph:
    return WeightedGraph(n, canonical_edges(edges), (1.0,) * n)


def make_dwmwis_instance(graph: WeightedGraph, m: int, seed: int) -> DwmwisInstance:
    """Draw m weight vectors, uniform on [0, 1) rounded to 2 decimals.

    Entries that round to 0.00 are remapped to 0.01 to keep every weight
    strictly positive.  Bit-reproducible: weights come from a PCG64 stream
    seeded with ``seed``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    raw = rng.random((m, graph.n))
    rounded = np.round(raw, 2)
    rounded[rounded == 0.0] = 0.01
    weight_sets = tuple(tuple(float(w) for w in row) for row in rounded)
    return DwmwisInstance(graph=graph, weight_sets=weight_sets, seed=seed)


class GraphParseError(ValueError):
    """Malformed graph document; message carries the offending line number."""


_HEADER_RE = re.compile(r"^n\s+(\d+)$")
_WEIGHT_RE = re.compile(r"^w\s+(\d+)\s+(\S+)$")
_ADJ_RE = re.compile(r"^(\d+)\s*:\s*(.*)$")


def parse_graph(text: str) -> WeightedGraph:
    """Parse the line-oriented adjacency-list format.

    Format: a header ``n <vertex_count>``, optional ``w <index> <weight>``
    lines, and adjacency lines ``<u>: <v1> <v2> ...``.  Lines starting with
    ``#`` and blank lines are ignored.  Missing weights default to 1; edges
    listed in both directions are stored once.
    """
    n: int | None = None
    weights: dict[int, float] = {}
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise GraphParseError(f"line {lineno}: expected header 'n <count>', got {line!r}")
            n = int(m.group(1))
            if n < 1:
                raise GraphParseError(f"line {lineno}: vertex count must be >= 1")
            continue
        m = _WEIGHT_RE.match(line)
        if m:
            idx = int(m.group(1))
            if idx >= n:
                raise GraphParseError(f"line {lineno}: weight index {idx} out of range")
            try:
                w = float(m.group(2))
            except ValueError:
                raise GraphParseError(f"line {lineno}: bad weight value {m.group(2)!r}") from None
            if not math.isfinite(w) or w <= 0:
                raise GraphParseError(f"line {lineno}: weight must be positive, got {w}")
            weights[idx] = w
            continue
        m = _ADJ_RE.match(line)
        if m:
            u = int(m.group(1))
            if u >= n:
                raise GraphParseError(f"line {lineno}: vertex {u} out of range")
            for tok in m.group(2).split():
                if not tok.isdigit():
                    raise GraphParseError(f"line {lineno}: bad neighbour token {tok!r}")
                v = int(tok)
                if v >= n:
                    raise GraphParseError(f"line {lineno}: vertex {v} out of range")
                if v == u:
                    raise GraphParseError(f"line {lineno}: self-loop on vertex {u}")
                edges.add((min(u, v), max(u, v)))
            continue
        raise GraphParseError(f"line {lineno}: unrecognised line {line!r}")
    if n is None:
        raise GraphParseError("line 1: empty document, expected header 'n <count>'")
    weight_vec = tuple(weights.get(i, 1.0) for i in range(n))
    return WeightedGraph(n, canonical_edges(edges), weight_vec)


def render_graph(graph: WeightedGraph, comment: str | None = None) -> str:
    """Render to the adjacency-list format; parse_graph round-trips it.

    Weights are written with repr so they survive the round trip bit-exactly.
    """
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"n {graph.n}")
    for i, w in enumerate(graph.weights):
        lines.append(f"w {i} {w!r}")
    adj = adjacency_lists(graph)
    for u in range(graph.n):
        succ = [v for v in adj[u] if v > u]
        if succ:
            lines.append(f"{u}: {' '.join(str(v) for v in succ)}")
    return "\n".join(lines) + "\n"
