"""Time-to-solution metrics and the hybrid/standard/classical timing algebra.

k99 is the expected number of anneal repetitions to see an optimal sample
with 99% confidence given a per-read success fraction.  Per-assignment
processing time is t_prog + k99 * t_anneal + t_post; the hybrid total pays
the embedding once while the standard total pays it per assignment, so the
two differ by exactly (m - 1) * t_embed.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

__all__ = [
    "UNSOLVED",
    "k99",
    "AssignmentRecord",
    "TimingLedger",
    "DwmwisReport",
    "instance_quantum_time",
    "aggregate",
    "wilson_interval",
    "REPORT_COLUMNS",
    "report_csv_row",
    "write_report_csv",
]

UNSOLVED = math.inf  # sentinel for s = 0: no finite repetition count reaches p

REPORT_COLUMNS = (
    "instance",
    "family",
    "n_vertices",
    "m",
    "t_embed_ms",
    "T_H_ms",
    "T_std_ms",
    "T_C_ms",
    "R_C",
    "unsolved_count",
)


def k99(s: float, p: float = 0.99) -> float:
    """Repetitions needed to hit an optimum with probability p.

    ceil(log(1-p)/log(1-s)) with a floor of 1; s = 1 clamps to a single
    read and s = 0 returns the UNSOLVED sentinel (infinite repetitions).
    """
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"success fraction must be in [0, 1], got {s}")
    if not (0.0 < p < 1.0):
        raise ValueError(f"target probability must be in (0, 1), got {p}")
    if s == 0.0:
        return UNSOLVED
    if s == 1.0:
        return 1
    return max(1, math.ceil(math.log(1.0 - p) / math.log(1.0 - s)))


@dataclass(frozen=True)
class AssignmentRecord:
    """Ledger row for one weight assignment."""

    t_conv_ms: float
    t_pre_ms: float
    t_prog_ms: float
    k99: float  # int, or UNSOLVED
    t_anneal_total_ms: float  # k99 * t_anneal; inf when unsolved
    t_post_ms: float
    s: float = 0.0  # per-read success fraction
    n_opt: int = 0  # reads that hit the optimum
    reads: int = 1
    best_weight: float = 0.0
    broken_chains: int = 0

    def __post_init__(self) -> None:
        for name in ("t_conv_ms", "t_pre_ms", "t_prog_ms", "t_post_ms"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class TimingLedger:
    """Per-instance timing record: one row per weight assignment.

    t_embed_ms is the embedding time actually paid by the hybrid run;
    t_embed_repeats_ms holds the repeated measurements used for error bars.
    embed_charges_ms carries per-assignment embedding charges for the
    standard algorithm; when empty, every assignment is charged t_embed_ms.
    """

    instance: str
    family: str
    n_vertices: int
    rows: tuple[AssignmentRecord, ...]
    t_embed_ms: float
    t_embed_repeats_ms: tuple[float, ...] = ()
    embed_charges_ms: tuple[float, ...] = ()
    embed_calls: int = 1

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("ledger needs at least one assignment row")
        if self.t_embed_ms < 0:
            raise ValueError("t_embed_ms must be nonnegative")
        if self.embed_charges_ms and len(self.embed_charges_ms) != len(self.rows):
            raise ValueError("embed_charges_ms must have one entry per row")

    @property
    def m(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class DwmwisReport:
    """Aggregated per-instance timings and solution statistics."""

    instance: str
    family: str
    n_vertices: int
    m: int
    t_embed_ms: float
    t_embed_min_ms: float
    t_embed_max_ms: float
    t_embed_mean_ms: float
    t_embed_median_ms: float
    T_H_ms: float
    T_std_ms: float
    T_C_ms: float | None
    R_C: float | None
    s_values: tuple[float, ...]
    s_intervals: tuple[tuple[float, float], ...]
    n_opt_total: int
    unsolved_count: int

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "family": self.family,
            "n_vertices": self.n_vertices,
            "m": self.m,
            "t_embed_ms": self.t_embed_ms,
            "t_embed_min_ms": self.t_embed_min_ms,
            "t_embed_max_ms": self.t_embed_max_ms,
            "t_embed_mean_ms": self.t_embed_mean_ms,
            "t_embed_median_ms": self.t_embed_median_ms,
            "T_H_ms": self.T_H_ms,
            "T_std_ms": self.T_std_ms,
            "T_C_ms": self.T_C_ms,
            "R_C": self.R_C,
            "s_values": list(self.s_values),
            "s_intervals": [list(iv) for iv in self.s_intervals],
            "n_opt_total": self.n_opt_total,
            "unsolved_count": self.unsolved_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DwmwisReport":
        return cls(
            instance=data["instance"],
            family=data["family"],
            n_vertices=data["n_vertices"],
            m=data["m"],
            t_embed_ms=data["t_embed_ms"],
            t_embed_min_ms=data["t_embed_min_ms"],
            t_embed_max_ms=data["t_embed_max_ms"],
            t_embed_mean_ms=data["t_embed_mean_ms"],
            t_embed_median_ms=data["t_embed_median_ms"],
            T_H_ms=data["T_H_ms"],
            T_std_ms=data["T_std_ms"],
            T_C_ms=data["T_C_ms"],
            R_C=data["R_C"],
            s_values=tuple(data["s_values"]),
            s_intervals=tuple((lo, hi) for lo, hi in data["s_intervals"]),
            n_opt_total=data["n_opt_total"],
            unsolved_count=data["unsolved_count"],
        )


def instance_quantum_time(row: AssignmentRecord) -> float:
    """Per-assignment processing time t_prog + k99 * t_anneal + t_post (ms).

    An unsolved row propagates the infinite sentinel.
    """
    if math.isinf(row.k99):
        return UNSOLVED
    return row.t_prog_ms + row.t_anneal_total_ms + row.t_post_ms


def wilson_interval(successes: int, total: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial fraction."""
    if total <= 0:
        raise ValueError("total must be positive")
    phat = successes / total
    denom = 1.0 + z * z / total
    centre = phat + z * z / (2 * total)
    spread = z * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total))
    return (max(0.0, (centre - spread) / denom), min(1.0, (centre + spread) / denom))


def aggregate(ledger: TimingLedger, classical_ms: float | None = None) -> DwmwisReport:
    """Roll a ledger up to T_H, T_std, and (when available) R_C.

    T_H charges t_embed once; T_std charges it per assignment.  Without a
    classical time, R_C is omitted.  Unsolved assignments make both totals
    infinite and are counted rather than dropped.
    """
    terms = [instance_quantum_time(row) for row in ledger.rows]
    unsolved = sum(1 for t in terms if math.isinf(t))
    charges = ledger.embed_charges_ms or (ledger.t_embed_ms,) * ledger.m
    t_h = ledger.t_embed_ms + math.fsum(terms)
    t_std = math.fsum(c + t for c, t in zip(charges, terms))
    r_c = None
    if classical_ms is not None and classical_ms > 0 and math.isfinite(t_h):
        r_c = t_h / classical_ms
    repeats = ledger.t_embed_repeats_ms or (ledger.t_embed_ms,)
    ordered = sorted(repeats)
    mid = len(ordered) // 2
    median = ordered[mid] if len(ordered) % 2 else 0.5 * (ordered[mid - 1] + ordered[mid])
    return DwmwisReport(
        instance=ledger.instance,
        family=ledger.family,
        n_vertices=ledger.n_vertices,
        m=ledger.m,
        t_embed_ms=ledger.t_embed_ms,
        t_embed_min_ms=min(repeats),
        t_embed_max_ms=max(repeats),
        t_embed_mean_ms=math.fsum(repeats) / len(repeats),
        t_embed_median_ms=median,
        T_H_ms=t_h,
        T_std_ms=t_std,
        T_C_ms=classical_ms,
        R_C=r_c,
        s_values=tuple(row.s for row in ledger.rows),
        s_intervals=tuple(
            wilson_interval(row.n_opt, max(1, row.reads)) for row in ledger.rows
        ),
        n_opt_total=sum(row.n_opt for row in ledger.rows),
        unsolved_count=unsolved,
    )


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    return f"{value:.6f}"


def report_csv_row(report: DwmwisReport) -> list[str]:
    return [
        report.instance,
        report.family,
        str(report.n_vertices),
        str(report.m),
        _fmt(report.t_embed_ms),
        _fmt(report.T_H_ms),
        _fmt(report.T_std_ms),
        _fmt(report.T_C_ms),
        _fmt(report.R_C),
        str(report.unsolved_count),
    ]


def write_report_csv(reports) -> str:
    """Timing report, one row per instance, columns fixed for golden files."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for report in reports:
        writer.writerow(report_csv_row(report))
    return buf.getvalue()
