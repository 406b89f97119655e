"""Orchestration of the hybrid, standard, and classical DWMWIS runs.

The hybrid schedule embeds a graph once and reuses the embedding for all m
weight assignments (only QUBO diagonals change); the standard schedule pays
the embedding per assignment, either as an arithmetic charge (default,
giving the exact (m-1)*t_embed identity) or by actually re-running the
embedder under --re-embed.  The classical path solves every assignment
exactly.  All randomness derives from one root seed.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .baseline import ClassicalLedger, solve_dwmwis_classical
from .chimera import ChimeraGraph, build_chimera
from .embedding import (
    Embedding,
    EmbeddingError,
    EmbeddingStats,
    embed_qubo,
    find_embedding,
    unembed_sample,
)
from .graphs import (
    DwmwisInstance,
    GraphFamily,
    generate_family,
    make_dwmwis_instance,
    with_weights,
)
from .metrics import (
    UNSOLVED,
    AssignmentRecord,
    DwmwisReport,
    TimingLedger,
    aggregate,
    k99,
    write_report_csv,
)
from .qubo import mwis_to_qubo
from .sampler import AnnealSchedule, TimingModel, sample

__all__ = [
    "ExperimentConfig",
    "QuantumRun",
    "InstanceResult",
    "derive_seed",
    "load_config",
    "config_from_dict",
    "desk_config",
    "default_config",
    "expand_corpus",
    "run_hybrid",
    "run_standard",
    "run_classical",
    "run_corpus",
    "CORPUS_COLUMNS",
]

OUTPUT_DIR_ENV = "DWMWIS_OUTPUT_DIR"
_DATA_DIR = Path(__file__).parent / "data"

CORPUS_COLUMNS = (
    "instance",
    "family",
    "n_vertices",
    "m",
    "reads",
    "status",
    "embed_qubits",
    "embed_max_chain",
    "embed_attempts",
    "unsolved_count",
    "n_opt_total",
    "s_min",
    "s_mean",
    "k99_max",
    "t_proc_total_ms",
    "matches_classical",
    "solutions_sha256",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a corpus run needs; loadable from a YAML file."""

    seed: int = 12345
    m: int = 100
    reads: int = 1000
    sweeps: int = 64
    t_hot: float | None = None
    t_cold: float | None = None
    embed_repeats: int = 10
    embed_max_attempts: int = 10
    charge_only: bool = True
    workers: int = 1
    chimera_k: int = 12
    inactive_qubits: tuple[int, ...] = ()
    inactive_random_count: int = 0
    inactive_random_seed: int = 0
    timing_model: TimingModel = field(default_factory=TimingModel)
    output_dir: str = "out"
    corpus: tuple[GraphFamily, ...] = ()

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.reads < 1:
            raise ValueError("reads must be >= 1")
        if self.embed_repeats < 1:
            raise ValueError("embed_repeats must be >= 1")

    def schedule(self) -> AnnealSchedule:
        return AnnealSchedule(
            sweeps=self.sweeps, t_hot=self.t_hot, t_cold=self.t_cold, reads=self.reads
        )

    def target(self) -> ChimeraGraph:
        inactive = list(self.inactive_qubits)
        if self.inactive_random_count > 0:
            import numpy as np

            rng = np.random.default_rng(
                np.random.SeedSequence((self.inactive_random_seed, 0xD0A))
            )
            total = 8 * self.chimera_k * self.chimera_k
            picks = rng.choice(total, size=self.inactive_random_count, replace=False)
            inactive.extend(int(q) for q in picks)
        return build_chimera(self.chimera_k, inactive)

    def resolved_output_dir(self) -> Path:
        override = os.environ.get(OUTPUT_DIR_ENV)
        return Path(override) if override else Path(self.output_dir)


def derive_seed(root: int, *labels) -> int:
    """Stable 64-bit seed from the root seed and a label path (sha256)."""
    text = ":".join([str(root), *(str(part) for part in labels)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def config_from_dict(data: dict) -> ExperimentConfig:
    data = dict(data)
    corpus = []
    for entry in data.pop("corpus", []):
        kind = entry["family"]
        for size in entry["sizes"]:
            params = tuple(size) if isinstance(size, (list, tuple)) else (int(size),)
            corpus.append(GraphFamily(kind, params))
    timing = data.pop("timing_model", None)
    kwargs = dict(data)
    if timing is not None:
        kwargs["timing_model"] = TimingModel(**timing)
    if "inactive_qubits" in kwargs:
        kwargs["inactive_qubits"] = tuple(kwargs["inactive_qubits"])
    return ExperimentConfig(corpus=tuple(corpus), **kwargs)


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(yaml.safe_load(fh))


def default_config() -> ExperimentConfig:
    """The shipped 155-graph corpus with protocol defaults (m=100)."""
    return load_config(_DATA_DIR / "default_config.yaml")


def desk_config(**overrides) -> ExperimentConfig:
    """Desk-scale corpus: cycles, stars, and cliques for n in 3..12, m=10."""
    corpus = tuple(
        GraphFamily(kind, (n,))
        for kind in ("cycle", "star", "complete")
        for n in range(3, 13)
    )
    cfg = ExperimentConfig(m=10, reads=1000, corpus=corpus)
    return replace(cfg, **overrides) if overrides else cfg


def expand_corpus(cfg: ExperimentConfig) -> list[GraphFamily]:
    return list(cfg.corpus)


@dataclass(frozen=True)
class QuantumRun:
    """Solutions plus the timing ledger of a hybrid or standard run."""

    solutions: tuple[tuple[tuple[int, ...], float], ...]  # (vertices, weight)
    ledger: TimingLedger
    embedding: Embedding
    embed_stats: EmbeddingStats
    embed_calls: int
    matches_reference: bool


@dataclass(frozen=True)
class InstanceResult:
    instance: str
    family: str
    n_vertices: int
    status: str  # "ok" or "skipped: <reason>"
    hybrid: QuantumRun | None = None
    standard_ledger: TimingLedger | None = None
    classical: ClassicalLedger | None = None
    classical_solutions: tuple[tuple[tuple[int, ...], float], ...] = ()
    report: DwmwisReport | None = None


def _weight_cents(weights, vertices) -> int:
    # protocol weights carry two decimals, so cents compare exactly
    return sum(round(weights[v] * 100) for v in vertices)


def run_classical(instance: DwmwisInstance):
    return solve_dwmwis_classical(instance)


def _quantum_pipeline(
    instance: DwmwisInstance,
    cfg: ExperimentConfig,
    instance_id: str,
    family: str,
    target: ChimeraGraph,
    reference: tuple[tuple[tuple[int, ...], float], ...] | None,
    re_embed: bool,
) -> QuantumRun:
    """Shared hybrid/standard core: embed, then sample every assignment.

    re_embed=True re-runs the embedder per assignment with the same seed
    (identical chains, so solution quality matches the hybrid run) and
    records each measured duration as that assignment's embedding charge.
    """
    graph = instance.graph
    schedule = cfg.schedule()
    model = cfg.timing_model

    repeats_ms: list[float] = []
    embedding: Embedding | None = None
    embed_stats: EmbeddingStats | None = None
    for r in range(cfg.embed_repeats):
        emb, stats = find_embedding(
            graph,
            target,
            seed=derive_seed(cfg.seed, instance_id, "embed", r),
            max_attempts=cfg.embed_max_attempts,
        )
        repeats_ms.append(stats.wall_ms)
        if r == 0:
            embedding, embed_stats = emb, stats
    assert embedding is not None and embed_stats is not None

    if reference is None:
        results, _ = solve_dwmwis_classical(instance)
        reference = tuple(results)

    rows: list[AssignmentRecord] = []
    solutions: list[tuple[tuple[int, ...], float]] = []
    charges_ms: list[float] = []
    embed_calls = 1
    all_match = True
    for i, weights in enumerate(instance.weight_sets):
        if re_embed:
            t0 = time.perf_counter()
            find_embedding(
                graph,
                target,
                seed=derive_seed(cfg.seed, instance_id, "embed", 0),
                max_attempts=cfg.embed_max_attempts,
            )
            charges_ms.append((time.perf_counter() - t0) * 1e3)
            embed_calls += 1

        weighted = with_weights(graph, weights)
        t0 = time.perf_counter()
        logical_q = mwis_to_qubo(weighted)
        t_conv_ms = (time.perf_counter() - t0) * 1e3
        t0 = time.perf_counter()
        physical_q = embed_qubo(logical_q, embedding)
        t_pre_ms = (time.perf_counter() - t0) * 1e3

        samples = sample(
            physical_q,
            schedule,
            reads=cfg.reads,
            seed=derive_seed(cfg.seed, instance_id, "sample", i),
        )

        opt_cents = _weight_cents(weights, reference[i][0])
        n_opt = 0
        best_bits: tuple[int, ...] | None = None
        best_cents = -1
        best_broken = 0
        for bits, _energy, count in samples.records:
            logical_bits, broken = unembed_sample(bits, embedding, weighted)
            cents = _weight_cents(weights, [v for v in range(graph.n) if logical_bits[v]])
            if cents == opt_cents:
                n_opt += count
            chosen = tuple(v for v in range(graph.n) if logical_bits[v])
            if cents > best_cents or (cents == best_cents and chosen < best_bits):
                best_cents, best_bits, best_broken = cents, chosen, broken
        s_i = n_opt / cfg.reads
        reps = k99(s_i)
        rows.append(
            AssignmentRecord(
                t_conv_ms=t_conv_ms,
                t_pre_ms=t_pre_ms,
                t_prog_ms=model.t_prog_ms,
                k99=reps,
                t_anneal_total_ms=(
                    UNSOLVED if math.isinf(reps) else reps * model.t_anneal_ms
                ),
                t_post_ms=model.t_post_ms,
                s=s_i,
                n_opt=n_opt,
                reads=cfg.reads,
                best_weight=best_cents / 100.0,
                broken_chains=best_broken,
            )
        )
        weight = math.fsum(weights[v] for v in best_bits)
        solutions.append((best_bits, weight))
        if best_cents != opt_cents:
            all_match = False

    ledger = TimingLedger(
        instance=instance_id,
        family=family,
        n_vertices=graph.n,
        rows=tuple(rows),
        t_embed_ms=repeats_ms[0],
        t_embed_repeats_ms=tuple(repeats_ms),
        embed_charges_ms=tuple(charges_ms) if re_embed else (),
        embed_calls=embed_calls,
    )
    return QuantumRun(
        solutions=tuple(solutions),
        ledger=ledger,
        embedding=embedding,
        embed_stats=embed_stats,
        embed_calls=embed_calls,
        matches_reference=all_match,
    )


def run_hybrid(
    instance: DwmwisInstance,
    cfg: ExperimentConfig,
    instance_id: str = "instance",
    family: str = "custom",
    target: ChimeraGraph | None = None,
    reference=None,
) -> QuantumRun:
    """Embed once, then solve every weight assignment on the sampler."""
    return _quantum_pipeline(
        instance,
        cfg,
        instance_id,
        family,
        target if target is not None else cfg.target(),
        reference,
        re_embed=False,
    )


def run_standard(
    instance: DwmwisInstance,
    cfg: ExperimentConfig,
    instance_id: str = "instance",
    family: str = "custom",
    target: ChimeraGraph | None = None,
    reference=None,
) -> QuantumRun:
    """Like the hybrid run, but the embedding cost lands on every assignment.

    With cfg.charge_only (the default) the embedder runs once and each
    assignment is charged the measured time; otherwise it genuinely re-runs
    per assignment.
    """
    run = _quantum_pipeline(
        instance,
        cfg,
        instance_id,
        family,
        target if target is not None else cfg.target(),
        reference,
        re_embed=not cfg.charge_only,
    )
    if cfg.charge_only:
        ledger = replace(
            run.ledger,
            embed_charges_ms=(run.ledger.t_embed_ms,) * run.ledger.m,
        )
        run = replace(run, ledger=ledger)
    return run


def _run_instance(cfg: ExperimentConfig, family: GraphFamily) -> InstanceResult:
    instance_id = family.name
    graph = generate_family(family)
    instance = make_dwmwis_instance(
        graph, cfg.m, derive_seed(cfg.seed, instance_id, "weights")
    )
    target = cfg.target()
    classical_solutions, classical_ledger = solve_dwmwis_classical(instance)
    try:
        hybrid = run_hybrid(
            instance, cfg, instance_id, family.kind, target, tuple(classical_solutions)
        )
        if cfg.charge_only:
            # the standard algorithm differs only in accounting here, so the
            # hybrid pipeline's results are reused with per-assignment charges
            standard_ledger = replace(
                hybrid.ledger,
                embed_charges_ms=(hybrid.ledger.t_embed_ms,) * hybrid.ledger.m,
            )
        else:
            standard_ledger = run_standard(
                instance, cfg, instance_id, family.kind, target,
                tuple(classical_solutions),
            ).ledger
    except EmbeddingError as exc:
        reason = str(exc).replace(",", ";")
        return InstanceResult(
            instance=instance_id,
            family=family.kind,
            n_vertices=graph.n,
            status=f"skipped: {reason}",
            classical=classical_ledger,
            classical_solutions=tuple(classical_solutions),
        )
    ledger = replace(hybrid.ledger, embed_charges_ms=standard_ledger.embed_charges_ms)
    report = aggregate(ledger, classical_ledger.total_ms)
    return InstanceResult(
        instance=instance_id,
        family=family.kind,
        n_vertices=graph.n,
        status="ok",
        hybrid=hybrid,
        standard_ledger=standard_ledger,
        classical=classical_ledger,
        classical_solutions=tuple(classical_solutions),
        report=report,
    )


def _solutions_digest(result: InstanceResult) -> str:
    payload = repr(
        [(sol, round(w * 100)) for sol, w in (result.hybrid.solutions if result.hybrid else ())]
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


def corpus_csv_rows(results: list[InstanceResult], cfg: ExperimentConfig) -> list[list[str]]:
    """Deterministic per-instance rows: seed-derived quantities only.

    Measured wall/CPU times stay out of this file so two runs with the same
    root seed emit identical bytes; timings live in report.csv.
    """
    rows = []
    for res in results:
        if res.hybrid is None:
            rows.append(
                [res.instance, res.family, str(res.n_vertices), str(cfg.m),
                 str(cfg.reads), res.status, "", "", "", "", "", "", "", "", "", "", ""]
            )
            continue
        ledger = res.hybrid.ledger
        emb = res.hybrid.embedding
        sizes = [len(c) for c in emb.chains]
        s_vals = [row.s for row in ledger.rows]
        k_vals = [row.k99 for row in ledger.rows]
        finite_terms = [
            row.t_prog_ms + row.t_anneal_total_ms + row.t_post_ms
            for row in ledger.rows
            if not math.isinf(row.k99)
        ]
        unsolved = sum(1 for k in k_vals if math.isinf(k))
        rows.append(
            [
                res.instance,
                res.family,
                str(res.n_vertices),
                str(cfg.m),
                str(cfg.reads),
                res.status,
                str(sum(sizes)),
                str(max(sizes)),
                str(res.hybrid.embed_stats.attempts),
                str(unsolved),
                str(sum(row.n_opt for row in ledger.rows)),
                _fmt_float(min(s_vals)),
                _fmt_float(math.fsum(s_vals) / len(s_vals)),
                "inf" if unsolved else str(int(max(k_vals))),
                _fmt_float(math.fsum(finite_terms)),
                "1" if res.hybrid.matches_reference else "0",
                _solutions_digest(res),
            ]
        )
    return rows


def write_corpus_csv(results: list[InstanceResult], cfg: ExperimentConfig) -> str:
    lines = [",".join(CORPUS_COLUMNS)]
    for row in corpus_csv_rows(results, cfg):
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


ASSIGNMENT_COLUMNS = (
    "instance",
    "assignment",
    "s",
    "n_opt",
    "k99",
    "t_conv_ms",
    "t_pre_ms",
    "t_prog_ms",
    "t_anneal_total_ms",
    "t_post_ms",
    "best_weight",
    "broken_chains",
)


def write_assignment_csv(results: list[InstanceResult]) -> str:
    lines = [",".join(ASSIGNMENT_COLUMNS)]
    for res in results:
        if res.hybrid is None:
            continue
        for i, row in enumerate(res.hybrid.ledger.rows):
            lines.append(
                ",".join(
                    [
                        res.instance,
                        str(i),
                        repr(row.s),
                        str(row.n_opt),
                        "inf" if math.isinf(row.k99) else str(int(row.k99)),
                        f"{row.t_conv_ms:.6f}",
                        f"{row.t_pre_ms:.6f}",
                        f"{row.t_prog_ms:.6f}",
                        "inf" if math.isinf(row.t_anneal_total_ms) else f"{row.t_anneal_total_ms:.6f}",
                        f"{row.t_post_ms:.6f}",
                        repr(row.best_weight),
                        str(row.broken_chains),
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def _ledger_to_dict(ledger: TimingLedger) -> dict:
    return {
        "instance": ledger.instance,
        "family": ledger.family,
        "n_vertices": ledger.n_vertices,
        "t_embed_ms": ledger.t_embed_ms,
        "t_embed_repeats_ms": list(ledger.t_embed_repeats_ms),
        "embed_charges_ms": list(ledger.embed_charges_ms),
        "embed_calls": ledger.embed_calls,
        "rows": [
            {
                "t_conv_ms": r.t_conv_ms,
                "t_pre_ms": r.t_pre_ms,
                "t_prog_ms": r.t_prog_ms,
                "k99": r.k99,
                "t_anneal_total_ms": r.t_anneal_total_ms,
                "t_post_ms": r.t_post_ms,
                "s": r.s,
                "n_opt": r.n_opt,
                "reads": r.reads,
                "best_weight": r.best_weight,
                "broken_chains": r.broken_chains,
            }
            for r in ledger.rows
        ],
    }


def ledger_from_dict(data: dict) -> TimingLedger:
    rows = tuple(AssignmentRecord(**row) for row in data["rows"])
    return TimingLedger(
        instance=data["instance"],
        family=data["family"],
        n_vertices=data["n_vertices"],
        rows=rows,
        t_embed_ms=data["t_embed_ms"],
        t_embed_repeats_ms=tuple(data["t_embed_repeats_ms"]),
        embed_charges_ms=tuple(data["embed_charges_ms"]),
        embed_calls=data["embed_calls"],
    )


def save_instance_artifacts(result: InstanceResult, out_dir: Path) -> None:
    ledger_dir = out_dir / "ledgers"
    ledger_dir.mkdir(parents=True, exist_ok=True)
    payload: dict = {
        "instance": result.instance,
        "family": result.family,
        "n_vertices": result.n_vertices,
        "status": result.status,
        "classical_total_ms": result.classical.total_ms if result.classical else None,
        "classical_clock": result.classical.clock if result.classical else None,
    }
    if result.hybrid is not None:
        payload["hybrid_ledger"] = _ledger_to_dict(result.hybrid.ledger)
        payload["standard_ledger"] = _ledger_to_dict(result.standard_ledger)
        payload["report"] = result.report.to_dict()
        payload["solutions"] = [
            {"vertices": list(sol), "weight": w} for sol, w in result.hybrid.solutions
        ]
    (ledger_dir / f"{result.instance}.json").write_text(
        json.dumps(payload, indent=1), encoding="utf-8"
    )


def load_reports(out_dir: Path) -> list[DwmwisReport]:
    reports = []
    ledger_dir = out_dir / "ledgers"
    for path in sorted(ledger_dir.glob("*.json")):
        payload = json.loads(path.read_text(encoding="utf-8"))
        if "hybrid_ledger" not in payload:
            continue
        ledger = ledger_from_dict(payload["hybrid_ledger"])
        charges = tuple(payload["standard_ledger"]["embed_charges_ms"]) or tuple(
            payload["standard_ledger"]["t_embed_ms"] for _ in payload["hybrid_ledger"]["rows"]
        )
        ledger = replace(ledger, embed_charges_ms=charges)
        reports.append(aggregate(ledger, payload["classical_total_ms"]))
    return reports


PLOT_DATA_FILES = {
    "plot_embed_vs_n.csv": ("instance", "family", "n_vertices", "t_embed_ms",
                            "t_embed_min_ms", "t_embed_max_ms"),
    "plot_rc_vs_n.csv": ("instance", "family", "n_vertices", "R_C"),
    "plot_rc_vs_tc.csv": ("instance", "family", "T_C_ms", "R_C"),
    "plot_rc_family.csv": ("family", "n_vertices", "R_C"),
}


def write_plot_data(reports: list[DwmwisReport], out_dir: Path) -> None:
    def fmt(x) -> str:
        if x is None:
            return ""
        return f"{x:.6f}"

    rows = {
        "plot_embed_vs_n.csv": [
            (r.instance, r.family, r.n_vertices, fmt(r.t_embed_ms),
             fmt(r.t_embed_min_ms), fmt(r.t_embed_max_ms))
            for r in reports
        ],
        "plot_rc_vs_n.csv": [
            (r.instance, r.family, r.n_vertices, fmt(r.R_C))
            for r in reports
            if r.R_C is not None
        ],
        "plot_rc_vs_tc.csv": [
            (r.instance, r.family, fmt(r.T_C_ms), fmt(r.R_C))
            for r in reports
            if r.R_C is not None and r.T_C_ms is not None
        ],
        "plot_rc_family.csv": [
            (r.family, r.n_vertices, fmt(r.R_C)) for r in reports if r.R_C is not None
        ],
    }
    for name, header in PLOT_DATA_FILES.items():
        lines = [",".join(header)]
        for row in rows[name]:
            lines.append(",".join(str(x) for x in row))
        (out_dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_corpus(cfg: ExperimentConfig, render_figures: bool = True) -> dict:
    """Run all three algorithms over the corpus and write every report file.

    Returns a summary dict with paths and failure counts; deterministic file
    contents (corpus.csv) depend only on the root seed and config.
    """
    out_dir = cfg.resolved_output_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    families = expand_corpus(cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_instance, [cfg] * len(families), families))
    else:
        results = [_run_instance(cfg, fam) for fam in families]

    for res in results:
        save_instance_artifacts(res, out_dir)

    (out_dir / "corpus.csv").write_text(write_corpus_csv(results, cfg), encoding="utf-8")
    reports = [res.report for res in results if res.report is not None]
    (out_dir / "report.csv").write_text(write_report_csv(reports), encoding="utf-8")
    (out_dir / "assignments.csv").write_text(write_assignment_csv(results), encoding="utf-8")
    write_plot_data(reports, out_dir)

    figure_paths: list[str] = []
    if render_figures and reports:
        from .plots import render_all_figures

        figure_paths = [str(p) for p in render_all_figures(reports, out_dir)]

    skipped = [res.instance for res in results if res.hybrid is None]
    return {
        "output_dir": str(out_dir),
        "instances": len(results),
        "skipped": skipped,
        "unsolved_rows": sum(
            res.report.unsolved_count for res in results if res.report is not None
        ),
        "figures": figure_paths,
    }
