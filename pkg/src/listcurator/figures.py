"""Figure rendering for evaluation reports.

Written next to the CSV/JSON outputs by the CLI report commands.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import EvalReport, SiloReport


def plot_eval_report(report: EvalReport, path) -> None:
    """Precision and recall per iteration: thin per-split lines, bold mean."""
    iterations = [row.iteration for row in report.rows]
    fig, (ax_p, ax_r) = plt.subplots(1, 2, figsize=(9, 3.5), sharex=True)
    for ax, attr, mean_attr, title in (
        (ax_p, "precision", "mean_precision", "Precision"),
        (ax_r, "recall", "mean_recall", "Recall"),
    ):
        for i in range(report.k):
            ax.plot(
                iterations,
                [getattr(row, attr)[i] for row in report.rows],
                color="steelblue",
                alpha=0.35,
                linewidth=1,
            )
        ax.plot(
            iterations,
            [getattr(row, mean_attr) for row in report.rows],
            color="darkred",
            linewidth=2,
            label="mean",
        )
        ax.set_title(title)
        ax.set_xlabel("iteration")
        ax.set_ylim(0, 1.05)
        ax.legend(loc="lower right", frameon=False)
    ax_p.set_ylabel("score")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_silo_report(report: SiloReport, path) -> None:
    """Per-iteration homogeneity with cross-community selections as bars."""
    iterations = [row.iteration for row in report.rows]
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    ax.plot(
        iterations,
        [row.homogeneity for row in report.rows],
        marker="o",
        color="darkred",
        label="homogeneity",
    )
    ax.set_xlabel("iteration")
    ax.set_ylabel("homogeneity")
    ax.set_ylim(0, 1.05)
    ax2 = ax.twinx()
    ax2.bar(
        iterations,
        [row.cross_selections for row in report.rows],
        color="steelblue",
        alpha=0.4,
        label="cross selections",
    )
    ax2.set_ylabel("cross-community selections")
    lines, labels = ax.get_legend_handles_labels()
    bars, bar_labels = ax2.get_legend_handles_labels()
    ax.legend(lines + bars, labels + bar_labels, loc="center right", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
