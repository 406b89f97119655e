"""MWIS-to-QUBO reduction, QUBO evaluation, decoding, and exact enumeration.

The reduction puts -w(v) on the diagonal and a penalty S > max weight on
every edge, so minimising x^T Q x over binary x selects a maximum-weight
independent set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import WeightedGraph

__all__ = [
    "QuboMatrix",
    "DecodedSet",
    "mwis_to_qubo",
    "evaluate",
    "decode_independent_set",
    "brute_force_qubo",
    "render_qubo",
    "parse_qubo",
]

BRUTE_FORCE_CAP = 24
_BLOCK_BITS = 16


@dataclass(frozen=True)
class QuboMatrix:
    """Upper-triangular QUBO in sparse (i, j) -> value form, i <= j.

    provenance is "logical" for matrices built straight from a problem graph
    and "embedded" for matrices rewritten onto a physical graph.
    """

    n: int
    entries: tuple[tuple[tuple[int, int], float], ...]
    provenance: str = "logical"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("QUBO dimension must be >= 1")
        seen = set()
        for (i, j), _ in self.entries:
            if not (0 <= i <= j < self.n):
                raise ValueError(f"entry ({i}, {j}) outside upper triangle of dim {self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry ({i}, {j})")
            seen.add((i, j))

    @classmethod
    def from_dict(cls, n: int, data: dict[tuple[int, int], float],
                  provenance: str = "logical") -> "QuboMatrix":
        entries = tuple(sorted((ij, float(v)) for ij, v in data.items() if v != 0.0))
        return cls(n=n, entries=entries, provenance=provenance)

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {ij: v for ij, v in self.entries}

    def diagonal(self) -> np.ndarray:
        diag = np.zeros(self.n)
        for (i, j), v in self.entries:
            if i == j:
                diag[i] = v
        return diag


@dataclass(frozen=True)
class DecodedSet:
    vertices: tuple[int, ...]
    weight: float
    independent: bool


def mwis_to_qubo(graph: WeightedGraph, penalty: float | None = None) -> QuboMatrix:
    """Build the MWIS QUBO: Q(i,i) = -w(v_i), Q(i,j) = S on edges.

    The penalty S must exceed the maximum vertex weight W; the default is
    W + 1, which dominates any single weight while keeping the coefficient
    range small.
    """
    w_max = graph.max_weight
    if penalty is None:
        penalty = w_max + 1.0
    elif penalty <= w_max:
        raise ValueError(f"penalty {penalty} must exceed max vertex weight {w_max}")
    data: dict[tuple[int, int], float] = {(i, i): -graph.weights[i] for i in range(graph.n)}
    for u, v in graph.edges:
        data[(u, v)] = penalty
    return QuboMatrix.from_dict(graph.n, data, provenance="logical")


def evaluate(q: QuboMatrix, x) -> float:
    """x^T Q x as the double sum over i <= j, order-independent (fsum)."""
    if len(x) != q.n:
        raise ValueError(f"assignment length {len(x)} does not match QUBO dim {q.n}")
    return math.fsum(v * x[i] * x[j] for (i, j), v in q.entries)


def decode_independent_set(graph: WeightedGraph, x) -> DecodedSet:
    """Read off the selected vertices, their weight, and independence."""
    if len(x) != graph.n:
        raise ValueError(f"assignment length {len(x)} does not match graph order {graph.n}")
    chosen = tuple(i for i in range(graph.n) if x[i])
    weight = math.fsum(graph.weights[i] for i in chosen)
    independent = graph.is_independent(set(chosen))
    return DecodedSet(vertices=chosen, weight=weight, independent=independent)


def brute_force_qubo(q: QuboMatrix, cap: int = BRUTE_FORCE_CAP) -> tuple[tuple[int, ...], float]:
    """Global minimum over all 2^n assignments.

    Ties break toward the lowest binary value of x, where bit i of the value
    is x_i (vertex 0 least significant).  Enumeration runs in vectorised
    blocks, so it stays practical up to the default cap of n = 24.
    """
    if q.n > cap:
        raise ValueError(f"QUBO dimension {q.n} exceeds brute-force cap {cap}")
    n = q.n
    best_code = 0
    best_energy = math.inf
    block = 1 << min(n, _BLOCK_BITS)
    for start in range(0, 1 << n, block):
        codes = np.arange(start, start + block, dtype=np.int64)
        energies = np.zeros(block)
        bits = [(codes >> i) & 1 for i in range(n)]
        for (i, j), v in q.entries:
            if i == j:
                energies += v * bits[i]
            else:
                energies += v * (bits[i] & bits[j])
        k = int(np.argmin(energies))  # first occurrence = lowest code in block
        if energies[k] < best_energy:
            best_energy = float(energies[k])
            best_code = start + k
    assignment = tuple((best_code >> i) & 1 for i in range(n))
    # recompute with the exact summation used everywhere else
    return assignment, evaluate(q, assignment)


def render_qubo(q: QuboMatrix) -> str:
    """Serialise as 'qubo n <dim>' plus one '<i> <j> <value>' line per entry.

    Values use repr, the shortest decimal that round-trips the float.
    """
    lines = [f"qubo n {q.n}"]
    for (i, j), v in q.entries:
        lines.append(f"{i} {j} {v!r}")
    return "\n".join(lines) + "\n"


def parse_qubo(text: str, provenance: str = "logical") -> QuboMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("qubo n "):
        raise ValueError("expected 'qubo n <dim>' header")
    n = int(lines[0].split()[2])
    data: dict[tuple[int, int], float] = {}
    for ln in lines[1:]:
        i_s, j_s, v_s = ln.split()
        data[(int(i_s), int(j_s))] = float(v_s)
    return QuboMatrix.from_dict(n, data, provenance=provenance)
