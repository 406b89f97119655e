"""Simulated-annealing sampler standing in for the annealing hardware.

Reads are independent Metropolis anneals with a geometric temperature
schedule.  Each read draws from its own child of the seed sequence, so a
longer run extends a shorter one read-for-read, and results do not depend
on how reads are batched.  All "quantum" durations are computed from the
TimingModel, never from the sampler's wall time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubo import QuboMatrix, evaluate

__all__ = [
    "AnnealSchedule",
    "TimingModel",
    "SampleSet",
    "sample",
    "success_probability",
    "simulated_quantum_time",
]

_MAX_RANDOM_BUFFER = 200_000_000  # bytes of pre-drawn uniforms per batch


@dataclass(frozen=True)
class AnnealSchedule:
    """Sweeps per read and the geometric temperature range.

    Temperatures left as None are auto-scaled from the QUBO coefficients:
    hot enough to accept the worst single flip half the time, cold enough
    to freeze the smallest nonzero coefficient.
    """

    sweeps: int = 64
    t_hot: float | None = None
    t_cold: float | None = None
    reads: int = 1000

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if self.t_hot is not None and self.t_hot <= 0:
            raise ValueError("t_hot must be positive")
        if self.t_cold is not None and self.t_cold <= 0:
            raise ValueError("t_cold must be positive")
        if self.t_hot is not None and self.t_cold is not None and self.t_hot < self.t_cold:
            raise ValueError("t_hot must be >= t_cold")
        if self.reads < 1:
            raise ValueError("reads must be >= 1")


@dataclass(frozen=True)
class TimingModel:
    """Per-stage durations (ms) used for all processing-time arithmetic."""

    t_prog_ms: float = 20.0
    t_anneal_ms: float = 0.309
    t_post_ms: float = 20.0

    def __post_init__(self) -> None:
        if min(self.t_prog_ms, self.t_anneal_ms, self.t_post_ms) < 0:
            raise ValueError("timing model durations must be nonnegative")


@dataclass(frozen=True)
class SampleSet:
    """Deduplicated SA reads: (assignment, energy, occurrences)."""

    records: tuple[tuple[tuple[int, ...], float, int], ...]
    sweeps: int
    t_hot: float
    t_cold: float
    reads: int
    seed: int

    @property
    def best(self) -> tuple[tuple[int, ...], float]:
        bits, energy, _ = self.records[0]
        return bits, energy

    @property
    def num_reads(self) -> int:
        return sum(count for _, _, count in self.records)

    def to_csv(self) -> str:
        lines = ["energy,count,bits"]
        for bits, energy, count in self.records:
            lines.append(f"{energy!r},{count},{''.join(str(b) for b in bits)}")
        return "\n".join(lines) + "\n"


def _auto_temperatures(q: QuboMatrix) -> tuple[float, float]:
    reach = np.zeros(q.n)
    smallest = math.inf
    for (i, j), v in q.entries:
        if v != 0.0:
            smallest = min(smallest, abs(v))
        if i == j:
            reach[i] += abs(v)
        else:
            reach[i] += abs(v)
            reach[j] += abs(v)
    biggest = float(reach.max()) if q.n else 1.0
    if not math.isfinite(smallest):  # all-zero QUBO
        smallest = 1.0
        biggest = 1.0
    t_hot = max(biggest, smallest) / math.log(2.0)
    t_cold = smallest / math.log(100.0)
    return t_hot, min(t_cold, t_hot)


def sample(q: QuboMatrix, schedule: AnnealSchedule, reads: int, seed: int) -> SampleSet:
    """Run `reads` independent anneals of the QUBO; deterministic given seed."""
    if reads < 1:
        raise ValueError("reads must be >= 1")
    t_hot, t_cold = (
        (schedule.t_hot, schedule.t_cold)
        if schedule.t_hot is not None and schedule.t_cold is not None
        else _auto_temperatures(q)
    )
    if schedule.t_hot is not None:
        t_hot = schedule.t_hot
    if schedule.t_cold is not None:
        t_cold = schedule.t_cold
    t_cold = min(t_cold, t_hot)
    sweeps = schedule.sweeps
    n = q.n

    diag = np.zeros(n)
    nbr: list[list[int]] = [[] for _ in range(n)]
    val: list[list[float]] = [[] for _ in range(n)]
    for (i, j), v in q.entries:
        if i == j:
            diag[i] = v
        else:
            nbr[i].append(j)
            val[i].append(v)
            nbr[j].append(i)
            val[j].append(v)
    nbr_idx = [np.array(a, dtype=np.intp) if a else None for a in nbr]
    nbr_val = [np.array(a) for a in val]

    if sweeps == 1:
        temps = np.array([t_cold])
    else:
        ratio = (t_cold / t_hot) ** (1.0 / (sweeps - 1))
        temps = t_hot * ratio ** np.arange(sweeps)

    children = np.random.SeedSequence(seed).spawn(reads)
    draws_per_read = n * (sweeps + 1)
    batch = max(1, min(reads, _MAX_RANDOM_BUFFER // (8 * draws_per_read)))

    counts: dict[tuple[int, ...], int] = {}
    for start in range(0, reads, batch):
        chunk = children[start : start + batch]
        uniforms = np.stack(
            [np.random.default_rng(c).random(draws_per_read) for c in chunk]
        )
        states = _anneal_batch(diag, nbr_idx, nbr_val, temps, uniforms, n)
        for row in states:
            bits = tuple(int(b) for b in row)
            counts[bits] = counts.get(bits, 0) + 1

    records = tuple(
        sorted(
            ((bits, evaluate(q, bits), count) for bits, count in counts.items()),
            key=lambda rec: (rec[1], rec[0]),
        )
    )
    return SampleSet(
        records=records,
        sweeps=sweeps,
        t_hot=float(t_hot),
        t_cold=float(t_cold),
        reads=reads,
        seed=seed,
    )


def _anneal_batch(diag, nbr_idx, nbr_val, temps, uniforms, n):
    """Metropolis sweeps, vectorised over the reads of one batch."""
    reads = uniforms.shape[0]
    x = (uniforms[:, :n] < 0.5).astype(np.float64).T  # (n, reads)
    col = n
    for t in range(len(temps)):
        inv_t = 1.0 / temps[t]
        for i in range(n):
            field = diag[i] if nbr_idx[i] is None else diag[i] + nbr_val[i] @ x[nbr_idx[i]]
            delta = (1.0 - 2.0 * x[i]) * field
            p_accept = np.exp(-np.maximum(delta, 0.0) * inv_t)
            flip = (delta <= 0.0) | (uniforms[:, col] < p_accept)
            x[i] = np.where(flip, 1.0 - x[i], x[i])
            col += 1
    return x.T.astype(np.uint8)


def success_probability(samples: SampleSet, optimum: float, tol: float) -> float:
    """Fraction of reads at energy <= optimum + tol."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    total = samples.num_reads
    if total == 0:
        raise ValueError("empty sample set")
    hits = sum(count for _, energy, count in samples.records if energy <= optimum + tol)
    return hits / total


def simulated_quantum_time(model: TimingModel, k: float) -> float:
    """Processing time t_prog + k * t_anneal in ms; k may be the unsolved inf."""
    if k < 0:
        raise ValueError("repetition count must be nonnegative")
    return model.t_prog_ms + k * model.t_anneal_ms
