"""The two objectives scored for every candidate design.

Task error sums, over all scenario targets, the L2 norm of the pose error
remaining after inverse kinematics.  Design cost adds a joint-count term
(each single-axis module counts one, each orthogonal module counts two) to
the total module length in meters, so cheaper values mean simpler and
shorter robots.
"""
from __future__ import annotations

import hashlib
import struct
import threading
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .ik import IkConfig, IkResult, solve_ik
from .modules import Genome, JointKind, RobotDesign, decode_genome

if TYPE_CHECKING:
    from .scenario import Scenario

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class EvaluationResult:
    """Both objective values for one genome, with their breakdown."""

    task_error: float
    design_cost: float
    per_target: tuple[float, ...]
    joint_cost: int
    length_cost: float

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.task_error, self.design_cost)


def derive_seed(base_seed: int, *parts: bytes | int) -> int:
    """Stable 64-bit seed from a base seed and arbitrary parts.

    Used to give every (genome, target) pair its own IK seed so that results
    do not depend on evaluation order or worker count.
    """
    digest = hashlib.blake2b(digest_size=8)
    digest.update(struct.pack("<Q", base_seed & _SEED_MASK))
    for part in parts:
        if isinstance(part, int):
            digest.update(struct.pack("<Q", part & _SEED_MASK))
        else:
            digest.update(part)
    return int.from_bytes(digest.digest(), "little")


def solve_targets(design: RobotDesign, scenario: "Scenario", ik_config: IkConfig) -> list[IkResult]:
    """Run IK independently against every target, one derived seed per target.

    Seeds derive from the target pose's bytes rather than its list position,
    which makes the summed task error invariant under target reordering.
    """
    results = []
    for target in scenario.targets:
        pose_bytes = target.position.tobytes() + target.orientation.tobytes()
        cfg = replace(ik_config, seed=derive_seed(ik_config.seed, pose_bytes))
        results.append(solve_ik(design, scenario.root, target, cfg))
    return results


def eval_task(design: RobotDesign, scenario: "Scenario", ik_config: IkConfig) -> tuple[float, tuple[float, ...]]:
    """Total and per-target residual norms over the scenario targets."""
    per_target = tuple(r.residual_norm for r in solve_targets(design, scenario, ik_config))
    return sum(per_target), per_target


def eval_design(design: RobotDesign) -> tuple[float, int, float]:
    """(total cost, joint-count term, length term) for a design.

    The joint term counts actuated axes (orthogonal modules twice); the
    length term sums every module length, fixed spacers included.
    """
    joint_cost = sum(2 if m.kind is JointKind.ORTHOGONAL else 1 for m in design.modules if m.kind.dof)
    length_cost = sum(m.length for m in design.modules)
    return joint_cost + length_cost, joint_cost, length_cost


def evaluate(genome: Genome, scenario: "Scenario", ik_config: IkConfig) -> EvaluationResult:
    """Decode and score a genome on both objectives.

    The effective IK seed is derived from the configured seed plus the
    genome's canonical bytes, so a genome evaluates identically no matter
    where in the population (or on which worker) it appears.
    """
    design = decode_genome(genome)
    genome_cfg = replace(ik_config, seed=derive_seed(ik_config.seed, genome.canonical_bytes()))
    task_error, per_target = eval_task(design, scenario, genome_cfg)
    design_cost, joint_cost, length_cost = eval_design(design)
    return EvaluationResult(
        task_error=task_error,
        design_cost=design_cost,
        per_target=per_target,
        joint_cost=joint_cost,
        length_cost=length_cost,
    )


class EvaluationCache:
    """Optional thread-safe memo of results keyed by canonical genome bytes.

    Purely a speed knob: a hit returns the stored result object, so cached
    and uncached runs produce identical values.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._entries: dict[bytes, EvaluationResult] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, genome: Genome) -> EvaluationResult | None:
        with self._lock:
            return self._entries.get(genome.canonical_bytes())

    def put(self, genome: Genome, result: EvaluationResult) -> None:
        with self._lock:
            self._entries[genome.canonical_bytes()] = result


def evaluate_cached(
    genome: Genome,
    scenario: "Scenario",
    ik_config: IkConfig,
    cache: EvaluationCache | None = None,
) -> EvaluationResult:
    if cache is None:
        return evaluate(genome, scenario, ik_config)
    hit = cache.get(genome)
    if hit is not None:
        return hit
    result = evaluate(genome, scenario, ik_config)
    cache.put(genome, result)
    return result
