"""Catalog report rendering: a CSV of verdicts plus summary figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .pipeline import CANDIDATE_HPP, HPP, NOT_HPP, UNDETECTED, Report

_STATUS_ORDER = (HPP, NOT_HPP, CANDIDATE_HPP, UNDETECTED)
_STATUS_COLORS = {
    HPP: "#2a9d8f",
    NOT_HPP: "#e76f51",
    CANDIDATE_HPP: "#e9c46a",
    UNDETECTED: "#8d99ae",
}


def write_report(report: Report, outdir) -> dict:
    """Write verdicts.csv, status_counts.png and deciding_stages.png into
    outdir; returns the paths."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "verdicts.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "status", "stage", "reason", "certificates"])
        for name, v in report.verdicts:
            w.writerow([name, v.status, v.stage, v.reason, len(v.certificates)])
    counts_path = out / "status_counts.png"
    _bar_figure(
        counts_path,
        [(s, report.counts.get(s, 0)) for s in _STATUS_ORDER],
        "Verdicts by status",
        color_by_status=True,
    )
    stages = {}
    for _, v in report.verdicts:
        stages[v.stage] = stages.get(v.stage, 0) + 1
    stages_path = out / "deciding_stages.png"
    _bar_figure(
        stages_path,
        sorted(stages.items()),
        "Verdicts by deciding stage",
    )
    return {
        "csv": str(csv_path),
        "status_counts": str(counts_path),
        "deciding_stages": str(stages_path),
    }


def _bar_figure(path, items, title, color_by_status=False):
    labels = [k for k, _ in items]
    values = [v for _, v in items]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    colors = (
        [_STATUS_COLORS[k] for k in labels] if color_by_status else "#457b9d"
    )
    ax.bar(range(len(labels)), values, color=colors)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("matroids")
    ax.set_title(title)
    for x, v in enumerate(values):
        ax.text(x, v, str(v), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
