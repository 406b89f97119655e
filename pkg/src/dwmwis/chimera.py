"""Chimera physical-graph model: a k x k grid of K_{4,4} cells.

Qubit ids are linear: id = 8*(row*k + col) + 4*side + unit, with side 0
("left") and side 1 ("right").  Within a cell every left qubit couples to
every right qubit.  Between cells, left qubits couple to the equal-unit left
qubit of the horizontally adjacent cells and right qubits to the equal-unit
right qubit of the vertically adjacent cells.  Any consistent orientation
convention gives an isomorphic graph; this one is fixed so ids are stable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

__all__ = ["ChimeraGraph", "build_chimera", "degree_histogram", "render_physical"]


@dataclass(frozen=True)
class ChimeraGraph:
    k: int
    active: frozenset[int]
    adjacency: tuple[tuple[int, ...], ...]  # indexed by qubit id; empty for inactive

    @property
    def total_sites(self) -> int:
        return 8 * self.k * self.k

    @property
    def num_active(self) -> int:
        return len(self.active)

    @property
    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def coordinates(self, qubit: int) -> tuple[int, int, int, int]:
        """(row, col, side, unit) of a qubit id."""
        cell, rem = divmod(qubit, 8)
        side, unit = divmod(rem, 4)
        row, col = divmod(cell, self.k)
        return row, col, side, unit

    def qubit_id(self, row: int, col: int, side: int, unit: int) -> int:
        return 8 * (row * self.k + col) + 4 * side + unit

    def neighbors(self, qubit: int) -> tuple[int, ...]:
        return self.adjacency[qubit]

    def edges(self):
        for u in sorted(self.active):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)


def build_chimera(k: int, inactive=None) -> ChimeraGraph:
    """Chimera graph of grid size k with the listed qubits removed.

    Removing a qubit drops its incident edges; duplicate entries in the
    inactive list are tolerated.
    """
    if k < 1:
        raise ValueError(f"grid size must be >= 1, got {k}")
    total = 8 * k * k
    dead = set(inactive or ())
    for q in dead:
        if not (0 <= q < total):
            raise ValueError(f"inactive qubit {q} out of range for chimera k={k}")
    active = frozenset(range(total)) - dead
    adj: list[list[int]] = [[] for _ in range(total)]

    def couple(a: int, b: int) -> None:
        if a in active and b in active:
            adj[a].append(b)
            adj[b].append(a)

    for row in range(k):
        for col in range(k):
            base = 8 * (row * k + col)
            for i in range(4):
                for j in range(4):
                    couple(base + i, base + 4 + j)  # K_{4,4} inside the cell
            if col + 1 < k:
                for i in range(4):  # left side couples horizontally
                    couple(base + i, base + 8 + i)
            if row + 1 < k:
                for i in range(4):  # right side couples vertically
                    couple(base + 4 + i, base + 8 * k + 4 + i)

    adjacency = tuple(tuple(sorted(nb)) for nb in adj)
    return ChimeraGraph(k=k, active=active, adjacency=adjacency)


def degree_histogram(g: ChimeraGraph) -> dict[int, int]:
    """Degree -> count over active qubits."""
    return dict(sorted(Counter(len(g.adjacency[q]) for q in g.active).items()))


def render_physical(g: ChimeraGraph) -> str:
    """Adjacency-list export in the shared graph format.

    Active qubits keep their physical ids; the header comment records the
    grid size and any inactive qubits.
    """
    lines = [f"# chimera k={g.k}"]
    dead = sorted(set(range(g.total_sites)) - g.active)
    if dead:
        lines.append(f"# inactive {' '.join(str(q) for q in dead)}")
    lines.append(f"n {g.total_sites}")
    for u in sorted(g.active):
        succ = [v for v in g.adjacency[u] if v > u]
        if succ:
            lines.append(f"{u}: {' '.join(str(v) for v in succ)}")
    return "\n".join(lines) + "\n"
