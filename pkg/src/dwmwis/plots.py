"""Figure rendering for the benchmark reports.

Renders the plot-ready data to PNG files next to the CSV output: embedding
time against graph order, the classical speedup ratio against order and
classical time, per-family speedup trends, and the three-way time
comparison.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .metrics import DwmwisReport

__all__ = ["render_all_figures"]

_FAMILY_STYLE = {
    "cycle": ("tab:blue", "o"),
    "star": ("tab:orange", "s"),
    "complete": ("tab:green", "^"),
    "path": ("tab:red", "v"),
    "grid": ("tab:purple", "D"),
    "bipartite": ("tab:brown", "x"),
}


def _style(family: str):
    return _FAMILY_STYLE.get(family, ("tab:gray", "."))


def _scatter_by_family(ax, reports, x_of, y_of):
    for family in sorted({r.family for r in reports}):
        xs, ys = [], []
        for r in reports:
            if r.family != family:
                continue
            x, y = x_of(r), y_of(r)
            if x is None or y is None:
                continue
            xs.append(x)
            ys.append(y)
        if xs:
            color, marker = _style(family)
            ax.scatter(xs, ys, c=color, marker=marker, s=28, label=family, alpha=0.8)


def render_all_figures(reports: list[DwmwisReport], out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    paths = []

    fig, ax = plt.subplots(figsize=(7, 5))
    _scatter_by_family(ax, reports, lambda r: r.n_vertices, lambda r: r.t_embed_mean_ms)
    for r in reports:
        ax.vlines(r.n_vertices, max(r.t_embed_min_ms, 1e-3), max(r.t_embed_max_ms, 1e-3),
                  color="gray", alpha=0.3, lw=1)
    ax.set_xlabel("graph order |V|")
    ax.set_ylabel("embedding time (ms)")
    ax.set_yscale("log")
    ax.set_title("Embedding time vs graph order")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "fig_embed_vs_n.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    with_rc = [r for r in reports if r.R_C is not None]
    if with_rc:
        fig, ax = plt.subplots(figsize=(7, 5))
        _scatter_by_family(ax, with_rc, lambda r: r.n_vertices, lambda r: r.R_C)
        ax.set_xlabel("graph order |V|")
        ax.set_ylabel("classical speedup ratio $R_C = T_H / T_C$")
        ax.set_yscale("log")
        ax.set_title("Speedup ratio vs graph order")
        ax.legend()
        fig.tight_layout()
        path = out_dir / "fig_rc_vs_n.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)

        fig, ax = plt.subplots(figsize=(7, 5))
        _scatter_by_family(ax, with_rc, lambda r: r.T_C_ms, lambda r: r.R_C)
        ax.set_xlabel("classical time $T_C$ (ms)")
        ax.set_ylabel("classical speedup ratio $R_C$")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_title("Speedup ratio vs classical time")
        ax.legend()
        fig.tight_layout()
        path = out_dir / "fig_rc_vs_tc.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)

        families = sorted({r.family for r in with_rc})
        cols = min(3, len(families))
        rows = (len(families) + cols - 1) // cols
        fig, axes = plt.subplots(rows, cols, figsize=(4.5 * cols, 3.6 * rows),
                                 squeeze=False)
        for idx, family in enumerate(families):
            ax = axes[idx // cols][idx % cols]
            pts = sorted(
                (r.n_vertices, r.R_C) for r in with_rc if r.family == family
            )
            color, marker = _style(family)
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker=marker, color=color, lw=1)
            ax.set_yscale("log")
            ax.set_title(family)
            ax.set_xlabel("|V|")
            ax.set_ylabel("$R_C$")
        for idx in range(len(families), rows * cols):
            axes[idx // cols][idx % cols].set_visible(False)
        fig.suptitle("Speedup ratio per graph family")
        fig.tight_layout()
        path = out_dir / "fig_rc_families.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)

    finite = [
        r for r in reports
        if r.T_C_ms is not None and r.T_H_ms != float("inf")
    ]
    if finite:
        fig, ax = plt.subplots(figsize=(7, 5))
        ax.scatter([r.T_H_ms for r in finite], [r.T_std_ms for r in finite],
                   c="tab:blue", marker="o", s=28, label=r"$T_{std}$", alpha=0.8)
        ax.scatter([r.T_H_ms for r in finite], [r.T_C_ms for r in finite],
                   c="tab:red", marker="^", s=28, label="$T_C$", alpha=0.8)
        lims = [min(r.T_H_ms for r in finite) * 0.5, max(r.T_std_ms for r in finite) * 2]
        ax.plot(lims, lims, "k--", lw=1, label="$T_H$ parity")
        ax.set_xlabel("hybrid time $T_H$ (ms)")
        ax.set_ylabel("time (ms)")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_title("Standard and classical times against the hybrid time")
        ax.legend()
        fig.tight_layout()
        path = out_dir / "fig_times.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)

    return paths
