"""Damped-least-squares inverse kinematics with limit clamping and restarts.

The solver iterates q <- clamp(q + J^T (J J^T + damping^2 I)^-1 e) toward a
target pose, where e is the 6-vector pose error.  The first attempt always
starts from the straight-line zero configuration; further attempts start
from uniform random configurations inside the joint limits.  The best
iterate seen across all attempts is returned, so the result never regresses
below the zero-configuration residual.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import Pose, _assemble_jacobian, _error_vector, _walk_chain
from .modules import RobotDesign, ValidationError

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class IkConfig:
    """Solver settings.

    damping must be strictly positive: it keeps the 6x6 normal-equations
    system positive definite, so rank-deficient Jacobians never need a
    pseudoinverse.
    """

    damping: float = 0.1
    max_iterations: int = 200
    step_tolerance: float = 1e-8
    residual_tolerance: float = 1e-4
    restarts: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.damping <= 0.0:
            raise ValidationError(f"ik damping must be > 0, got {self.damping}")
        if self.max_iterations < 1:
            raise ValidationError(f"ik max_iterations must be >= 1, got {self.max_iterations}")
        if self.step_tolerance <= 0.0:
            raise ValidationError(f"ik step_tolerance must be > 0, got {self.step_tolerance}")
        if self.residual_tolerance <= 0.0:
            raise ValidationError(f"ik residual_tolerance must be > 0, got {self.residual_tolerance}")
        if self.restarts < 1:
            raise ValidationError(f"ik restarts must be >= 1, got {self.restarts}")


@dataclass(frozen=True)
class IkResult:
    """Best solution found: joint values, remaining error, and bookkeeping."""

    q: np.ndarray
    residual: np.ndarray
    residual_norm: float
    converged: bool
    iterations_used: int


def solve_ik(design: RobotDesign, root: Pose, target: Pose, config: IkConfig) -> IkResult:
    """Solve for joint values bringing the end effector to `target`.

    Non-convergence is reported through the `converged` flag, never raised.
    Deterministic for fixed (design, root, target, config).
    """
    limits = design.axis_limits()
    lower = np.array([lo for lo, _ in limits])
    upper = np.array([hi for _, hi in limits])
    n = lower.shape[0]

    root_rot = root.rotation_matrix()
    root_pos = np.array(root.position)
    target_rot = target.rotation_matrix()
    target_pos = np.array(target.position)
    damping_sq = config.damping * config.damping * np.eye(6)

    rng = np.random.default_rng(config.seed & _SEED_MASK)

    best_q = np.zeros(n)
    best_err: np.ndarray | None = None
    best_norm = np.inf
    total_iterations = 0

    for attempt in range(config.restarts):
        if attempt == 0:
            q = np.zeros(n)
        else:
            q = rng.uniform(lower, upper) if n else np.zeros(0)

        for _ in range(config.max_iterations):
            rot, pos, origins, directions, prismatic = _walk_chain(design, root_rot, root_pos, q, True)
            err = _error_vector(target_pos, target_rot, pos, rot)
            norm = float(err @ err) ** 0.5
            total_iterations += 1
            if norm < best_norm:
                best_norm, best_q, best_err = norm, q.copy(), err
            if norm < config.residual_tolerance:
                break
            jac = _assemble_jacobian(pos, origins, directions, prismatic)
            step = jac.T @ np.linalg.solve(jac @ jac.T + damping_sq, err)
            advanced = np.minimum(np.maximum(q + step, lower), upper)
            moved = advanced - q
            q = advanced
            # measure the movement actually taken: a step clamped flat against
            # the limits is a fixed point and will never progress again
            if float(moved @ moved) ** 0.5 < config.step_tolerance:
                break
        else:
            # Budget exhausted mid-descent: score the final clamped iterate too.
            rot, pos, _, _, _ = _walk_chain(design, root_rot, root_pos, q, False)
            err = _error_vector(target_pos, target_rot, pos, rot)
            norm = float(err @ err) ** 0.5
            if norm < best_norm:
                best_norm, best_q, best_err = norm, q.copy(), err

        if best_norm < config.residual_tolerance:
            break

    if best_err is None:
        best_err = np.zeros(6)
    return IkResult(
        q=best_q,
        residual=best_err,
        residual_norm=best_norm,
        converged=best_norm < config.residual_tolerance,
        iterations_used=total_iterations,
    )
