"""Command-line interface: gen, embed, solve, bench, report."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from . import __version__
from .baseline import solve_dwmwis_classical
from .chimera import build_chimera, render_physical
from .embedding import EmbeddingError, find_embedding, parse_embedding, render_embedding
from .graphs import generate_family, make_dwmwis_instance, parse_graph, render_graph
from .harness import (
    ExperimentConfig,
    default_config,
    derive_seed,
    desk_config,
    expand_corpus,
    load_config,
    load_reports,
    run_corpus,
    run_hybrid,
    run_standard,
    write_plot_data,
)
from .metrics import write_report_csv


def _config_from_args(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    elif getattr(args, "desk", False):
        cfg = desk_config()
    else:
        cfg = default_config()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "m", None) is not None:
        overrides["m"] = args.m
    if getattr(args, "reads", None) is not None:
        overrides["reads"] = args.reads
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    if getattr(args, "out", None) is not None:
        overrides["output_dir"] = args.out
    if getattr(args, "charge_only", None) is not None:
        overrides["charge_only"] = args.charge_only
    return replace(cfg, **overrides) if overrides else cfg


def _cmd_gen(args) -> int:
    cfg = _config_from_args(args)
    out = cfg.resolved_output_dir()
    graph_dir = out / "graphs"
    graph_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for family in expand_corpus(cfg):
        graph = generate_family(family)
        (graph_dir / f"{family.name}.graph").write_text(
            render_graph(graph, comment=family.name), encoding="utf-8"
        )
        manifest.append(
            {"instance": family.name, "family": family.kind,
             "params": list(family.params), "n_vertices": graph.n,
             "n_edges": len(graph.edges)}
        )
    (out / "manifest.yaml").write_text(
        yaml.safe_dump({"seed": cfg.seed, "m": cfg.m, "graphs": manifest},
                       sort_keys=False),
        encoding="utf-8",
    )
    print(f"wrote {len(manifest)} graphs to {graph_dir} and manifest.yaml")
    return 0


def _cmd_embed(args) -> int:
    text = Path(args.graph).read_text(encoding="utf-8")
    graph = parse_graph(text)
    physical = build_chimera(args.k)
    cache_dir = Path(args.cache) if args.cache else None
    key = None
    if cache_dir is not None:
        cache_dir.mkdir(parents=True, exist_ok=True)
        g_hash = hashlib.sha256(render_graph(graph).encode()).hexdigest()[:12]
        p_hash = hashlib.sha256(render_physical(physical).encode()).hexdigest()[:12]
        key = cache_dir / f"{g_hash}-{p_hash}-{args.seed}.embedding"
        if key.exists():
            embedding = parse_embedding(key.read_text(encoding="utf-8"), graph, physical)
            sizes = [len(c) for c in embedding.chains]
            print(json.dumps({
                "cached": True, "qubits_used": sum(sizes),
                "max_chain_length": max(sizes), "file": str(key),
            }))
            return 0
    try:
        embedding, stats = find_embedding(
            graph, physical, seed=args.seed, max_attempts=args.max_attempts
        )
    except EmbeddingError as exc:
        print(f"embedding failed: {exc}", file=sys.stderr)
        return 1
    if key is not None:
        key.write_text(render_embedding(embedding), encoding="utf-8")
    if args.out:
        Path(args.out).write_text(render_embedding(embedding), encoding="utf-8")
    print(json.dumps({
        "cached": False,
        "qubits_used": stats.qubits_used,
        "max_chain_length": stats.max_chain_length,
        "mean_chain_length": round(stats.mean_chain_length, 3),
        "t_embed_ms": round(stats.wall_ms, 3),
        "attempts": stats.attempts,
        "file": str(key) if key else None,
    }))
    return 0


def _cmd_solve(args) -> int:
    text = Path(args.graph).read_text(encoding="utf-8")
    graph = parse_graph(text)
    cfg = ExperimentConfig(
        seed=args.seed,
        m=args.m,
        reads=args.reads,
        sweeps=args.sweeps,
        chimera_k=args.k,
        charge_only=not args.re_embed,
        corpus=(),
    )
    instance = make_dwmwis_instance(
        graph, cfg.m, derive_seed(cfg.seed, "solve", "weights")
    )
    if args.mode == "classical":
        results, ledger = solve_dwmwis_classical(instance)
        print(json.dumps({
            "mode": "classical",
            "optima": [w for _, w in results],
            "T_C_ms": ledger.total_ms,
            "clock": ledger.clock,
        }, indent=1))
        return 0
    runner = run_hybrid if args.mode == "hybrid" else run_standard
    try:
        run = runner(instance, cfg, instance_id="solve", family="custom")
    except EmbeddingError as exc:
        print(f"embedding failed: {exc}", file=sys.stderr)
        return 1
    ledger = run.ledger
    unsolved = sum(1 for row in ledger.rows if math.isinf(row.k99))
    print(json.dumps({
        "mode": args.mode,
        "solutions": [{"vertices": list(v), "weight": w} for v, w in run.solutions],
        "s": [row.s for row in ledger.rows],
        "k99": [None if math.isinf(row.k99) else int(row.k99) for row in ledger.rows],
        "t_embed_ms": ledger.t_embed_ms,
        "embed_calls": run.embed_calls,
        "unsolved": unsolved,
        "matches_exact": run.matches_reference,
    }, indent=1))
    return 0


def _cmd_bench(args) -> int:
    cfg = _config_from_args(args)
    summary = run_corpus(cfg, render_figures=not args.no_figures)
    print(json.dumps(summary, indent=1))
    return 1 if summary["unsolved_rows"] else 0


def _cmd_report(args) -> int:
    out = Path(args.out) if args.out else _config_from_args(args).resolved_output_dir()
    reports = load_reports(out)
    if not reports:
        print(f"no cached ledgers under {out}/ledgers", file=sys.stderr)
        return 1
    (out / "report.csv").write_text(write_report_csv(reports), encoding="utf-8")
    write_plot_data(reports, out)
    figures = []
    if not args.no_figures:
        from .plots import render_all_figures

        figures = [str(p) for p in render_all_figures(reports, out)]
    print(json.dumps({
        "instances": len(reports), "report_csv": str(out / "report.csv"),
        "figures": figures,
    }, indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwmwis",
        description=(
            "Hybrid annealing benchmark for dynamically weighted "
            "maximum-weight independent set problems."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common_cfg = argparse.ArgumentParser(add_help=False)
    common_cfg.add_argument("--config", help="YAML config file")
    common_cfg.add_argument("--desk", action="store_true",
                            help="desk-scale corpus (C/S/K, n=3..12, m=10)")
    common_cfg.add_argument("--seed", type=int, help="root seed override")
    common_cfg.add_argument("--m", type=int, help="weight assignments per instance")
    common_cfg.add_argument("--reads", type=int, help="sampler reads per assignment")
    common_cfg.add_argument("--workers", type=int, help="parallel instance workers")
    common_cfg.add_argument("--out", help="output directory (env DWMWIS_OUTPUT_DIR overrides)")

    p = sub.add_parser("gen", parents=[common_cfg],
                       help="emit the corpus manifest and graph files")
    p.set_defaults(func=_cmd_gen, charge_only=None)

    p = sub.add_parser("embed", help="embed one graph into chimera, with caching")
    p.add_argument("--graph", required=True, help="graph file (adjacency-list format)")
    p.add_argument("--k", type=int, default=12, help="chimera grid size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-attempts", type=int, default=10)
    p.add_argument("--cache", help="embedding cache directory")
    p.add_argument("--out", help="also write the embedding to this file")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("solve", help="solve one instance with one algorithm")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=("hybrid", "standard", "classical"),
                   default="hybrid")
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--reads", type=int, default=1000)
    p.add_argument("--sweeps", type=int, default=64)
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--re-embed", action="store_true",
                   help="standard mode really re-embeds per assignment")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", parents=[common_cfg],
                       help="run hybrid, standard, and classical over the corpus")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--charge-only", dest="charge_only", action="store_true",
                       default=None,
                       help="charge t_embed per assignment without re-running (default)")
    group.add_argument("--re-embed", dest="charge_only", action="store_false",
                       help="really re-run the embedder per assignment")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("report", parents=[common_cfg],
                       help="re-aggregate reports from cached ledgers")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=_cmd_report, charge_only=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
