"""Heuristic minor embedding into Chimera, plus the embedded-QUBO rewrite.

Chains are grown one logical vertex at a time (most-placed-neighbours
first) by routing shortest paths to the chains of already-placed
neighbours.  Qubit sharing between chains is allowed at a congestion price
that grows every refinement round; rip-up-and-reroute repeats until chains
are disjoint or the round budget runs out, then the whole attempt restarts
with a fresh seed.
"""

from __future__ import annotations

import math
from collections import deque
import time
from dataclasses import dataclass

import numpy as np

from .chimera import ChimeraGraph
from .graphs import WeightedGraph, adjacency_lists
from .qubo import QuboMatrix

__all__ = [
    "Embedding",
    "EmbeddingStats",
    "EmbeddingError",
    "find_embedding",
    "verify_embedding",
    "embed_qubo",
    "unembed_sample",
    "render_embedding",
    "parse_embedding",
]

MAX_REFINE_ROUNDS = 32


class EmbeddingError(RuntimeError):
    """No valid embedding found within the attempt budget."""


@dataclass(frozen=True)
class Embedding:
    """Map from logical vertex to its chain of physical qubits."""

    chains: tuple[tuple[int, ...], ...]
    logical: WeightedGraph
    physical: ChimeraGraph

    @property
    def used_qubits(self) -> tuple[int, ...]:
        return tuple(sorted(q for chain in self.chains for q in chain))

    def physical_index(self) -> dict[int, int]:
        """Physical qubit id -> compact index over the used qubits."""
        return {q: i for i, q in enumerate(self.used_qubits)}

    @property
    def max_chain_length(self) -> int:
        return max(len(c) for c in self.chains)


@dataclass(frozen=True)
class EmbeddingStats:
    qubits_used: int
    max_chain_length: int
    mean_chain_length: float
    wall_ms: float
    attempts: int


def find_embedding(
    logical: WeightedGraph,
    physical: ChimeraGraph,
    seed: int,
    max_attempts: int = 10,
) -> tuple[Embedding, EmbeddingStats]:
    """Search for a minor embedding; deterministic for a given seed.

    Raises EmbeddingError after max_attempts failed attempts (each attempt
    re-seeds the placement order and routing tie-breaks).
    """
    if physical.num_active == 0:
        raise EmbeddingError("physical graph has no active qubits")
    start = time.perf_counter()
    if logical.n > physical.num_active:
        # pigeonhole: chains are disjoint and nonempty
        raise EmbeddingError(
            f"{logical.n} logical vertices cannot embed in "
            f"{physical.num_active} active qubits"
        )
    for attempt in range(1, max_attempts + 1):
        rng = np.random.default_rng(np.random.SeedSequence((seed, attempt)))
        chains = _attempt_embedding(logical, physical, rng)
        if chains is not None:
            embedding = Embedding(
                chains=tuple(tuple(sorted(c)) for c in chains),
                logical=logical,
                physical=physical,
            )
            violations = verify_embedding(embedding)
            if violations:  # defensive: the search should never produce these
                continue
            wall_ms = (time.perf_counter() - start) * 1e3
            sizes = [len(c) for c in chains]
            stats = EmbeddingStats(
                qubits_used=sum(sizes),
                max_chain_length=max(sizes),
                mean_chain_length=sum(sizes) / len(sizes),
                wall_ms=wall_ms,
                attempts=attempt,
            )
            return embedding, stats
    raise EmbeddingError(
        f"no embedding of {logical.n}-vertex graph into chimera k={physical.k} "
        f"after {max_attempts} attempts"
    )


def _placement_order(logical: WeightedGraph, rng: np.random.Generator) -> list[int]:
    """Highest degree first, then whoever touches the most placed vertices."""
    adj = adjacency_lists(logical)
    degree = [len(a) for a in adj]
    jitter = rng.random(logical.n)  # random tie-breaks, fixed per attempt
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(logical.n))
    while remaining:
        best = max(
            remaining,
            key=lambda v: (sum(1 for u in adj[v] if u in placed), degree[v], jitter[v]),
        )
        order.append(best)
        placed.add(best)
        remaining.discard(best)
    return order


def _csr_adjacency(physical: ChimeraGraph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(physical.total_sites + 1, dtype=np.int64)
    for q in range(physical.total_sites):
        indptr[q + 1] = indptr[q] + len(physical.adjacency[q])
    indices = np.empty(indptr[-1], dtype=np.int64)
    for q in range(physical.total_sites):
        indices[indptr[q] : indptr[q + 1]] = physical.adjacency[q]
    return indptr, indices


def _bfs_free(
    chain: set[int],
    indptr: np.ndarray,
    indices: np.ndarray,
    free: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Layered BFS through free qubits, starting just outside the chain.

    parent[q] is the next hop back toward the chain; -1 marks qubits
    adjacent to it, -2 unreached.  dist counts path qubits, chain excluded.
    """
    total = free.shape[0]
    dist = np.full(total, np.inf)
    parent = np.full(total, -2, dtype=np.int64)
    seed = np.fromiter(
        (q for q in sorted(chain)), dtype=np.int64, count=len(chain)
    )
    starts = np.repeat(seed, indptr[seed + 1] - indptr[seed])
    reach = np.concatenate(
        [indices[indptr[q] : indptr[q + 1]] for q in seed]
    ) if len(chain) else np.empty(0, dtype=np.int64)
    mask = free[reach] & (parent[reach] == -2)
    frontier = np.unique(reach[mask])
    dist[frontier] = 1.0
    parent[frontier] = -1
    d = 1.0
    while frontier.size:
        d += 1.0
        preds = np.repeat(frontier, indptr[frontier + 1] - indptr[frontier])
        cand = np.concatenate(
            [indices[indptr[q] : indptr[q + 1]] for q in frontier]
        )
        mask = free[cand] & (parent[cand] == -2)
        cand, preds = cand[mask], preds[mask]
        if cand.size == 0:
            break
        uniq, first = np.unique(cand, return_index=True)
        parent[uniq] = preds[first]
        dist[uniq] = d
        frontier = uniq
        _ = starts  # seed predecessors are implicit: parent == -1
    return dist, parent


def _attempt_embedding(
    logical: WeightedGraph,
    physical: ChimeraGraph,
    rng: np.random.Generator,
) -> list[set[int]] | None:
    """One seeded construction pass; None when the step budget runs out.

    Chains stay strictly disjoint.  Each vertex routes through free qubits
    to every placed neighbour's chain; the far half of each routing path is
    ceded to that neighbour, so heavily-connected chains grow where
    attachment demand appears.  When a neighbour's chain is walled in, one
    adjacent occupied qubit is annexed to it and the evicted vertex goes
    back into the placement queue.
    """
    n = logical.n
    adj_l = adjacency_lists(logical)
    total_sites = physical.total_sites
    adj_p = physical.adjacency
    indptr, indices = _csr_adjacency(physical)

    free = np.zeros(total_sites, dtype=bool)
    for q in physical.active:
        free[q] = True
    owner = np.full(total_sites, -1, dtype=np.int64)
    chains: list[set[int] | None] = [None] * n
    cells = np.arange(total_sites) // 8
    rows, cols = cells // physical.k, cells % physical.k
    placed_cells: list[tuple[int, int]] = []

    def claim(q: int, v: int) -> None:
        free[q] = False
        owner[q] = v
        placed_cells.append((int(rows[q]), int(cols[q])))

    def touches(chain_a: set[int], chain_b: set[int]) -> bool:
        return any(nb in chain_b for q in chain_a for nb in adj_p[q])

    def rip(v: int) -> None:
        for q in chains[v]:  # type: ignore[union-attr]
            free[q] = True
            owner[q] = -1
        chains[v] = None

    def place(v: int):
        """True on success, None on hard failure, or ('steal', u)."""
        placed = [u for u in adj_l[v] if chains[u] is not None]
        if not placed:
            free_ids = np.flatnonzero(free)
            if free_ids.size == 0:
                return None
            root = int(free_ids[int(rng.integers(free_ids.size))])
            claim(root, v)
            chains[v] = {root}
            return True
        dists = []
        tightest, tightest_count = placed[0], math.inf
        for u in placed:
            dist, _ = _bfs_free(chains[u], indptr, indices, free)  # type: ignore[arg-type]
            count = int(np.isfinite(dist).sum())
            if count == 0:
                return ("steal", u)
            if count < tightest_count:
                tightest, tightest_count = u, count
            dists.append(dist)
        total = np.sum(dists, axis=0)
        total[~free] = math.inf
        best = total.min()
        if not math.isfinite(best):
            return ("steal", tightest)
        # among minimal roots, stay near the centroid of what is placed,
        # so later chains (cycle closures, grid rows) do not stretch
        ties = np.flatnonzero(total == best)
        if placed_cells:
            r_mid = sum(c[0] for c in placed_cells) / len(placed_cells)
            c_mid = sum(c[1] for c in placed_cells) / len(placed_cells)
            spread = np.abs(rows[ties] - r_mid) + np.abs(cols[ties] - c_mid)
            root = int(ties[int(np.argmin(spread))])
        else:
            root = int(ties[0])
        claim(root, v)
        mychain = {root}
        for u in placed:
            if touches(mychain, chains[u]):  # type: ignore[arg-type]
                continue
            dist, parent = _bfs_free(chains[u], indptr, indices, free)  # type: ignore[arg-type]
            attach, best = -1, math.inf
            for cq in sorted(mychain):
                for q in adj_p[cq]:
                    if free[q] and dist[q] < best:
                        best, attach = dist[q], q
            if attach < 0:
                chains[v] = mychain  # caller rips the partial chain
                return ("steal", u)
            path = [attach]
            node = int(parent[attach])
            while node >= 0:
                path.append(node)
                node = int(parent[node])
            keep = (len(path) + 1) // 2
            for q in path[:keep]:
                claim(q, v)
                mychain.add(q)
            for q in path[keep:]:  # far half grows the neighbour's chain
                claim(q, u)
                chains[u].add(q)  # type: ignore[union-attr]
        chains[v] = mychain
        return True

    queue: deque[int] = deque(_placement_order(logical, rng))
    budget = 20 * n + 80
    while queue:
        budget -= 1
        if budget <= 0:
            return None
        v = queue.popleft()
        outcome = place(v)
        if outcome is True:
            continue
        if outcome is None:
            return None
        _, u = outcome
        if chains[v] is not None:
            rip(v)
        candidates = sorted(
            q
            for cq in chains[u]  # type: ignore[union-attr]
            for q in adj_p[cq]
            if owner[q] >= 0 and owner[q] != u
        )
        if not candidates:
            return None
        # evict the cheapest chain to re-place among the annexation options
        sizes = [len(chains[int(owner[q])]) for q in candidates]  # type: ignore[arg-type]
        smallest = min(sizes)
        narrowed = [q for q, s in zip(candidates, sizes) if s == smallest]
        grab = narrowed[int(rng.integers(len(narrowed)))]
        evicted = int(owner[grab])
        rip(evicted)
        claim(grab, u)
        chains[u].add(grab)  # type: ignore[union-attr]
        queue.appendleft(v)
        queue.append(evicted)
    found = [set(c) for c in chains]  # type: ignore[misc]
    _trim_chains(found, adj_l, adj_p)
    return found


def _trim_chains(chains: list[set[int]], adj_l, adj_p) -> None:
    """Drop chain qubits that are not needed for connectivity or coverage.

    Each removal re-checks against the current chains, so the embedding
    invariants hold throughout.
    """

    def connected(chain: set[int]) -> bool:
        it = iter(chain)
        start = next(it)
        seen = {start}
        stack = [start]
        while stack:
            q = stack.pop()
            for nb in adj_p[q]:
                if nb in chain and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(chain)

    def covers(chain: set[int], other: set[int]) -> bool:
        return any(nb in other for q in chain for nb in adj_p[q])

    for v, chain in enumerate(chains):
        shrunk = True
        while shrunk and len(chain) > 1:
            shrunk = False
            for q in sorted(chain, reverse=True):
                if len(chain) == 1:
                    break
                rest = chain - {q}
                if not connected(rest):
                    continue
                if all(covers(rest, chains[u]) for u in adj_l[v]):
                    chain.discard(q)
                    shrunk = True


def verify_embedding(e: Embedding) -> list[str]:
    """Check the three minor-embedding conditions; empty list means pass.

    (i) chains pairwise disjoint, (ii) each chain induces a connected
    subgraph of the physical graph, (iii) every logical edge is covered by
    some physical edge between the two chains.
    """
    violations: list[str] = []
    if len(e.chains) != e.logical.n:
        violations.append(
            f"chain count {len(e.chains)} does not match logical order {e.logical.n}"
        )
        return violations
    seen: dict[int, int] = {}
    for v, chain in enumerate(e.chains):
        if not chain:
            violations.append(f"condition ii: chain of vertex {v} is empty")
            continue
        for q in chain:
            if q not in e.physical.active:
                violations.append(f"condition ii: vertex {v} uses inactive qubit {q}")
            if q in seen:
                violations.append(
                    f"condition i: qubit {q} shared by vertices {seen[q]} and {v}"
                )
            else:
                seen[q] = v
    for v, chain in enumerate(e.chains):
        if not chain:
            continue
        members = set(chain)
        frontier = [chain[0]]
        reached = {chain[0]}
        while frontier:
            q = frontier.pop()
            for nb in e.physical.adjacency[q]:
                if nb in members and nb not in reached:
                    reached.add(nb)
                    frontier.append(nb)
        if reached != members:
            violations.append(f"condition ii: chain of vertex {v} is disconnected")
    for u, v in e.logical.edges:
        cu, cv = set(e.chains[u]), set(e.chains[v])
        if not any(nb in cv for q in cu for nb in e.physical.adjacency[q]):
            violations.append(f"condition iii: logical edge ({u}, {v}) not coupled")
    return violations


def embed_qubo(
    logical_q: QuboMatrix,
    e: Embedding,
    chain_strength: float | None = None,
) -> QuboMatrix:
    """Rewrite a logical QUBO onto the physical qubits of an embedding.

    Each logical diagonal is split evenly across its chain; each logical
    coupler lands on one representative physical edge (first in canonical
    order); every intra-chain edge gets the equality gadget +C/+C/-2C so a
    broken chain costs at least C.  The default C = 2*(S + W) with S the
    largest logical coupler and W the largest |diagonal|, which makes broken
    chains never optimal.  Indices of the result are compact: position in
    the sorted list of used qubits.
    """
    if logical_q.n != e.logical.n:
        raise ValueError(
            f"QUBO dim {logical_q.n} does not match embedded graph order {e.logical.n}"
        )
    violations = verify_embedding(e)
    if violations:
        raise ValueError("invalid embedding: " + "; ".join(violations))

    diag_vals = {i: v for (i, j), v in logical_q.entries if i == j}
    off_vals = {(i, j): v for (i, j), v in logical_q.entries if i != j}
    w_max = max((-v for v in diag_vals.values()), default=0.0)
    s_max = max(off_vals.values(), default=0.0)
    c_chain = 2.0 * (s_max + max(w_max, 0.0)) if chain_strength is None else chain_strength
    if c_chain <= 0:
        raise ValueError(f"chain strength must be positive, got {c_chain}")

    pos = e.physical_index()
    data: dict[tuple[int, int], float] = {}

    def add(i: int, j: int, v: float) -> None:
        key = (i, j) if i <= j else (j, i)
        data[key] = data.get(key, 0.0) + v

    for v, chain in enumerate(e.chains):
        share = diag_vals.get(v, 0.0) / len(chain)
        for q in chain:
            add(pos[q], pos[q], share)
        members = set(chain)
        for q in chain:
            for nb in e.physical.adjacency[q]:
                if nb in members and q < nb:
                    add(pos[q], pos[q], c_chain)
                    add(pos[nb], pos[nb], c_chain)
                    add(pos[q], pos[nb], -2.0 * c_chain)

    for (u, v), s in off_vals.items():
        cu, cv = set(e.chains[u]), set(e.chains[v])
        candidates = sorted(
            (min(q, nb), max(q, nb))
            for q in cu
            for nb in e.physical.adjacency[q]
            if nb in cv
        )
        rep = candidates[0]
        add(pos[rep[0]], pos[rep[1]], s)

    return QuboMatrix.from_dict(len(pos), data, provenance="embedded")


def unembed_sample(
    x_phys,
    e: Embedding,
    graph: WeightedGraph,
) -> tuple[tuple[int, ...], int]:
    """Majority-vote each chain, then repair any independence violations.

    Ties in the vote go to 0.  Repair repeatedly unsets the lighter endpoint
    of a violated edge (equal weights: the higher index), so the result is
    always a valid independent set.  Returns the repaired logical assignment
    and the number of non-unanimous chains.
    """
    pos = e.physical_index()
    if len(x_phys) != len(pos):
        raise ValueError(
            f"sample length {len(x_phys)} does not match embedding size {len(pos)}"
        )
    if graph.n != e.logical.n:
        raise ValueError("graph order does not match embedding")
    bits: list[int] = []
    broken = 0
    for chain in e.chains:
        votes = sum(int(x_phys[pos[q]]) for q in chain)
        if 0 < votes < len(chain):
            broken += 1
        bits.append(1 if 2 * votes > len(chain) else 0)
    # independence repair, deterministic edge scan
    changed = True
    while changed:
        changed = False
        for u, v in graph.edges:
            if bits[u] and bits[v]:
                if graph.weights[u] < graph.weights[v]:
                    bits[u] = 0
                elif graph.weights[v] < graph.weights[u]:
                    bits[v] = 0
                else:
                    bits[max(u, v)] = 0
                changed = True
    return tuple(bits), broken


def render_embedding(e: Embedding) -> str:
    lines = [f"# embedding of {e.logical.n} vertices into chimera k={e.physical.k}"]
    for v, chain in enumerate(e.chains):
        lines.append(f"chain {v}: {' '.join(str(q) for q in chain)}")
    return "\n".join(lines) + "\n"


def parse_embedding(text: str, logical: WeightedGraph, physical: ChimeraGraph) -> Embedding:
    chains: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.startswith("chain "):
            raise ValueError(f"line {lineno}: expected 'chain <v>: <qubits>'")
        head, _, tail = line[len("chain "):].partition(":")
        chains[int(head.strip())] = tuple(sorted(int(t) for t in tail.split()))
    if sorted(chains) != list(range(logical.n)):
        raise ValueError("embedding file does not cover every logical vertex")
    return Embedding(
        chains=tuple(chains[v] for v in range(logical.n)),
        logical=logical,
        physical=physical,
    )
