"""Forward kinematics, geometric Jacobian, and pose error for serial designs.

Chain convention: the longitudinal axis of every module is its local +z, so
the all-zeros joint configuration lays the whole chain in a straight line
along the root frame's +z axis.  Roll rotates about local +x, pitch about
local +y, yaw twists about local +z, and the prismatic axis slides along
local +z.  An orthogonal module applies roll then pitch about a shared
midpoint.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modules import JointKind, RobotDesign, ValidationError
from .rotations import (
    matrix_to_quat,
    quat_from_rpy,
    quat_to_matrix,
    rot_x,
    rot_y,
    rot_z,
    rotation_vector_from_matrix,
)

_AXIS_ROT = {"x": rot_x, "y": rot_y, "z": rot_z}
_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True, eq=False)
class Pose:
    """A rigid-body pose: position in meters plus a unit wxyz quaternion.

    The orientation is renormalized on construction and both arrays are made
    read-only, so poses can be shared freely across threads.
    """

    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self) -> None:
        p = np.array(self.position, dtype=np.float64)
        q = np.array(self.orientation, dtype=np.float64)
        if p.shape != (3,):
            raise ValidationError(f"pose position must be a 3-vector, got shape {p.shape}")
        if q.shape != (4,):
            raise ValidationError(f"pose orientation must be a wxyz quaternion, got shape {q.shape}")
        norm = float(q @ q) ** 0.5
        if norm == 0.0:
            raise ValidationError("pose orientation must be a non-zero quaternion")
        if abs(norm - 1.0) > 1e-12:  # keep already-unit quaternions bit-stable
            q = q / norm
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "orientation", q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pose):
            return NotImplemented
        return np.array_equal(self.position, other.position) and np.array_equal(
            self.orientation, other.orientation
        )

    def __hash__(self) -> int:
        return hash((self.position.tobytes(), self.orientation.tobytes()))

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.zeros(3), np.array([1.0, 0.0, 0.0, 0.0]))

    @classmethod
    def from_rpy(cls, position, rpy) -> "Pose":
        roll, pitch, yaw = rpy
        return cls(np.asarray(position, dtype=np.float64), quat_from_rpy(roll, pitch, yaw))

    def rotation_matrix(self) -> np.ndarray:
        return quat_to_matrix(self.orientation)


def _check_dof(design: RobotDesign, q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if q.shape[0] != design.dof:
        raise ValidationError(
            f"design has {design.dof} degrees of freedom but got {q.shape[0]} joint values"
        )
    return q


def _walk_chain(design: RobotDesign, rot: np.ndarray, pos: np.ndarray, q: np.ndarray, collect_axes: bool):
    """Compose module transforms, optionally recording world-frame joint axes.

    Returns (rotation, position, axis origins, axis directions, prismatic
    mask); the last three are (dof, 3)/(dof, 3)/(dof,) arrays, or None unless
    `collect_axes`.
    """
    origins = directions = prismatic = None
    if collect_axes:
        n = q.shape[0]
        origins = np.empty((n, 3))
        directions = np.empty((n, 3))
        prismatic = np.zeros(n, dtype=bool)
    k = 0
    for module in design.modules:
        kind = module.kind
        length = module.length
        if kind is JointKind.FIXED:
            pos = pos + length * rot[:, 2]
        elif kind is JointKind.PRISMATIC:
            if collect_axes:
                origins[k] = pos
                directions[k] = rot[:, 2]
                prismatic[k] = True
            pos = pos + (length + q[k]) * rot[:, 2]
            k += 1
        else:
            half = 0.5 * length
            pos = pos + half * rot[:, 2]
            for axis in kind.rotation_axes:
                if collect_axes:
                    origins[k] = pos
                    directions[k] = rot[:, _AXIS_INDEX[axis]]
                rot = rot @ _AXIS_ROT[axis](q[k])
                k += 1
            pos = pos + half * rot[:, 2]
    return rot, pos, origins, directions, prismatic


def forward_kinematics(design: RobotDesign, root: Pose, q) -> Pose:
    """End-effector pose of `design` rooted at `root` with joint values `q`."""
    q = _check_dof(design, q)
    rot, pos, _, _, _ = _walk_chain(design, root.rotation_matrix(), np.array(root.position), q, False)
    return Pose(pos, matrix_to_quat(rot))


def jacobian(design: RobotDesign, root: Pose, q) -> np.ndarray:
    """Geometric Jacobian (6 x dof) at configuration `q`.

    Rows 1-3 map joint rates to end-effector linear velocity, rows 4-6 to
    angular velocity, both in the world frame.  A revolute axis k with world
    direction z_k at origin o_k contributes (z_k x (p_ee - o_k), z_k); a
    prismatic axis contributes (z_k, 0).
    """
    q = _check_dof(design, q)
    rot, pos, origins, directions, prismatic = _walk_chain(
        design, root.rotation_matrix(), np.array(root.position), q, True
    )
    return _assemble_jacobian(pos, origins, directions, prismatic)


def _assemble_jacobian(p_ee, origins, directions, prismatic) -> np.ndarray:
    n = origins.shape[0]
    jac = np.zeros((6, n))
    if n == 0:
        return jac
    lever = p_ee - origins
    # rowwise cross(directions, lever); np.cross is slow for small batches
    linear = np.empty((n, 3))
    linear[:, 0] = directions[:, 1] * lever[:, 2] - directions[:, 2] * lever[:, 1]
    linear[:, 1] = directions[:, 2] * lever[:, 0] - directions[:, 0] * lever[:, 2]
    linear[:, 2] = directions[:, 0] * lever[:, 1] - directions[:, 1] * lever[:, 0]
    linear[prismatic] = directions[prismatic]
    angular = directions.copy()
    angular[prismatic] = 0.0
    jac[:3] = linear.T
    jac[3:] = angular.T
    return jac


def pose_error(target: Pose, actual: Pose) -> np.ndarray:
    """6-vector error: positional difference stacked on rotational difference.

    The first three components are target minus actual position in meters;
    the last three are the axis-angle vector of the relative rotation
    (target composed with the inverse of actual), with the angle in [0, pi].
    """
    return _error_vector(
        np.array(target.position),
        target.rotation_matrix(),
        np.array(actual.position),
        actual.rotation_matrix(),
    )


def _error_vector(p_target, rot_target, p_actual, rot_actual) -> np.ndarray:
    err = np.empty(6)
    err[:3] = p_target - p_actual
    err[3:] = rotation_vector_from_matrix(rot_target @ rot_actual.T)
    return err


def chain_reach(design: RobotDesign) -> float:
    """Upper bound on end-effector distance from the root over admissible q."""
    return sum(2.0 * m.length if m.kind.is_prismatic else m.length for m in design.modules)
