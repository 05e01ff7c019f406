"""Run archive: every evaluated candidate, front ranks, and exports.

The archive is the deliverable of an optimization run: one record per
evaluation, annotated with its non-domination rank computed over the whole
archive once the run has finished.  Exports are deterministic byte-for-byte
so identical runs produce identical files.
"""
from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .modules import Genome, ValidationError, decode_genome


@dataclass(frozen=True)
class ArchiveRecord:
    """One evaluated candidate: genome, objectives, and final front rank."""

    eval_index: int
    genome: Genome
    task_error: float
    design_cost: float
    rank: int

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.task_error, self.design_cost)


@dataclass(frozen=True)
class ParetoArchive:
    """Immutable record of a finished run plus its provenance settings."""

    records: tuple[ArchiveRecord, ...]
    scenario_name: str
    seed: int
    config: dict

    def __post_init__(self) -> None:
        for expected, record in enumerate(self.records):
            if record.eval_index != expected:
                raise ValidationError(
                    f"archive evaluation indices must be contiguous from 0; "
                    f"position {expected} holds index {record.eval_index}"
                )

    def __len__(self) -> int:
        return len(self.records)

    @classmethod
    def from_evaluations(
        cls,
        genomes: Sequence[Genome],
        objectives: Sequence[tuple[float, float]],
        scenario_name: str,
        seed: int,
        config: dict | None = None,
    ) -> "ParetoArchive":
        """Build an archive, assigning each record its archive-wide rank."""
        ranks = pareto_ranks(objectives)
        records = tuple(
            ArchiveRecord(i, genome, float(obj[0]), float(obj[1]), int(rank))
            for i, (genome, obj, rank) in enumerate(zip(genomes, objectives, ranks))
        )
        return cls(records=records, scenario_name=scenario_name, seed=seed, config=dict(config or {}))


def pareto_ranks(objectives: Sequence[tuple[float, float]]) -> np.ndarray:
    """Non-domination rank (front index) of every point, minimizing both axes.

    Sweep algorithm: process points in lexicographic order; each front's most
    recently assigned point carries that front's minimum second objective, and
    those minima are ascending across fronts, so each point's front is found
    by binary search.  Exact duplicates share a front.  O(n log n) overall,
    which keeps whole-archive ranking cheap even for long runs.
    """
    pts = np.asarray(objectives, dtype=np.float64)
    n = pts.shape[0]
    ranks = np.zeros(n, dtype=np.int64)
    if n == 0:
        return ranks
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    tail_f2: list[float] = []
    tail_f1: list[float] = []
    for idx in order:
        f1, f2 = float(pts[idx, 0]), float(pts[idx, 1])
        k = bisect_right(tail_f2, f2)
        if k > 0 and tail_f2[k - 1] == f2 and tail_f1[k - 1] == f1:
            k -= 1  # exact duplicate of that front's tail
        if k == len(tail_f2):
            tail_f2.append(f2)
            tail_f1.append(f1)
        else:
            tail_f2[k] = f2
            tail_f1[k] = f1
        ranks[idx] = k
    return ranks


def extract_pareto(archive: ParetoArchive) -> list[ArchiveRecord]:
    """Front-0 records, keeping one representative per objective pair.

    When several records share an exact objective pair, the earliest
    evaluation index wins.
    """
    if not archive.records:
        raise ValidationError("cannot extract a Pareto front from an empty archive")
    seen: set[tuple[float, float]] = set()
    front = []
    for record in archive.records:  # records are already in eval_index order
        if record.rank != 0 or record.objectives in seen:
            continue
        seen.add(record.objectives)
        front.append(record)
    front.sort(key=lambda r: (r.task_error, r.design_cost, r.eval_index))
    return front


def _fmt(value: float) -> str:
    return format(value, ".9g")


def _record_row(record: ArchiveRecord, with_rank: bool) -> str:
    design = decode_genome(record.genome)
    fields = [
        str(record.eval_index),
        _fmt(record.task_error),
        _fmt(record.design_cost),
        str(design.dof),
        _fmt(design.total_length),
        design.letters,
        ";".join(_fmt(m.length) for m in design.modules),
    ]
    if with_rank:
        fields.append(str(record.rank))
    return ",".join(fields)


_CSV_HEADER = "eval_index,e_task,e_design,dof,total_length,joints,lengths"


def _write_csv(records: Iterable[ArchiveRecord], path, with_rank: bool) -> None:
    header = _CSV_HEADER + (",rank" if with_rank else "")
    lines = [header]
    lines.extend(_record_row(r, with_rank) for r in records)
    text = "\n".join(lines) + "\n"
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc


def export_csv(archive: ParetoArchive, path) -> None:
    """Write every archived record as CSV, one row per evaluation."""
    _write_csv(archive.records, path, with_rank=False)


def export_pareto(archive: ParetoArchive, path) -> None:
    """Write the deduplicated Pareto front as CSV with a rank column."""
    _write_csv(extract_pareto(archive), path, with_rank=True)


def export_pareto_json(archive: ParetoArchive, path) -> None:
    """Write the Pareto front as structured records, one object per solution."""
    solutions = []
    for record in extract_pareto(archive):
        design = decode_genome(record.genome)
        solutions.append(
            {
                "eval_index": record.eval_index,
                "e_task": record.task_error,
                "e_design": record.design_cost,
                "dof": design.dof,
                "total_length": design.total_length,
                "joints": design.letters,
                "lengths": [m.length for m in design.modules],
                "rank": record.rank,
            }
        )
    payload = {
        "scenario": archive.scenario_name,
        "seed": archive.seed,
        "config": archive.config,
        "evaluations": len(archive.records),
        "pareto": solutions,
    }
    try:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc


def hypervolume(points: Sequence[tuple[float, float]], reference: tuple[float, float]) -> float:
    """Area dominated by `points` and bounded by `reference` (minimization).

    Points at or beyond the reference in either objective contribute nothing.
    """
    ref0, ref1 = float(reference[0]), float(reference[1])
    inside = [(float(a), float(b)) for a, b in points if a < ref0 and b < ref1]
    if not inside:
        return 0.0
    inside.sort()
    area = 0.0
    best1 = ref1
    for f0, f1 in inside:
        if f1 < best1:
            area += (ref0 - f0) * (best1 - f1)
            best1 = f1
    return area
