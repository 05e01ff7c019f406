"""Report figures rendered next to the delimited exports.

Two figures summarize a run: the full sampling cloud with the Pareto front
highlighted, and a front-only view annotated with each solution's module
string.  Rendering always targets files (Agg backend), so the report path
works on headless machines.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .archive import ArchiveRecord, ParetoArchive, extract_pareto

_POINT_COLOR = "#9aa5b1"
_FRONT_COLOR = "#c0392b"


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.set_xlabel("task error (sum of IK residual norms)")
    ax.set_ylabel("design cost (joint count + total length)")
    ax.set_title(title)
    ax.grid(True, linewidth=0.4, alpha=0.5)
    return fig, ax


def save_archive_scatter(archive: ParetoArchive, path) -> Path:
    """All sampled solutions in objective space, Pareto front in red."""
    front = extract_pareto(archive)
    fig, ax = _new_axes(f"{archive.scenario_name}: {len(archive)} evaluations")
    ax.scatter(
        [r.task_error for r in archive.records],
        [r.design_cost for r in archive.records],
        s=6,
        c=_POINT_COLOR,
        alpha=0.5,
        linewidths=0,
        label="sampled",
    )
    ax.plot(
        [r.task_error for r in front],
        [r.design_cost for r in front],
        marker="o",
        markersize=4,
        linewidth=1.0,
        color=_FRONT_COLOR,
        label="Pareto front",
    )
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def save_front_detail(archive: ParetoArchive, path) -> Path:
    """Front-only view with module strings next to each solution."""
    front = extract_pareto(archive)
    fig, ax = _new_axes(f"{archive.scenario_name}: Pareto front")
    ax.plot(
        [r.task_error for r in front],
        [r.design_cost for r in front],
        marker="o",
        markersize=5,
        linewidth=1.0,
        color=_FRONT_COLOR,
    )
    for record in front:
        ax.annotate(
            _label(record),
            (record.task_error, record.design_cost),
            textcoords="offset points",
            xytext=(5, 3),
            fontsize=6,
        )
    return _save(fig, path)


def _label(record: ArchiveRecord) -> str:
    return record.genome.letters


def _save(fig, path) -> Path:
    path = Path(path)
    try:
        fig.savefig(path, dpi=150, bbox_inches="tight")
    finally:
        plt.close(fig)
    return path
