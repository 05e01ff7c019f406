"""Minimal rotation algebra: principal-axis matrices and wxyz quaternions."""
from __future__ import annotations

import math

import numpy as np

# Below this rotation angle the axis is numerically meaningless; fall back to
# the first-order rotation-vector approximation.
_SMALL_ANGLE = 1e-12


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    m = np.zeros((3, 3))
    m[0, 0] = 1.0
    m[1, 1] = c
    m[1, 2] = -s
    m[2, 1] = s
    m[2, 2] = c
    return m


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    m = np.zeros((3, 3))
    m[0, 0] = c
    m[0, 2] = s
    m[1, 1] = 1.0
    m[2, 0] = -s
    m[2, 2] = c
    return m


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    m = np.zeros((3, 3))
    m[0, 0] = c
    m[0, 1] = -s
    m[1, 0] = s
    m[1, 1] = c
    m[2, 2] = 1.0
    return m


def quat_normalize(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    norm = math.sqrt(float(q @ q))
    if norm == 0.0:
        raise ValueError("zero-norm quaternion cannot be normalized")
    return q / norm


def quat_multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = quat_normalize(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def matrix_to_quat(m: np.ndarray) -> np.ndarray:
    """Convert a rotation matrix to a unit quaternion with w >= 0.

    Uses the largest-diagonal branch for numerical stability near 180-degree
    rotations.
    """
    t = m[0, 0] + m[1, 1] + m[2, 2]
    if t > 0.0:
        r = math.sqrt(1.0 + t)
        s = 0.5 / r
        q = np.empty(4)
        q[0] = 0.5 * r
        q[1] = (m[2, 1] - m[1, 2]) * s
        q[2] = (m[0, 2] - m[2, 0]) * s
        q[3] = (m[1, 0] - m[0, 1]) * s
    else:
        i = 0 if m[0, 0] >= m[1, 1] and m[0, 0] >= m[2, 2] else (1 if m[1, 1] >= m[2, 2] else 2)
        j, k = (i + 1) % 3, (i + 2) % 3
        r = math.sqrt(1.0 + m[i, i] - m[j, j] - m[k, k])
        s = 0.5 / r
        q = np.empty(4)
        q[0] = (m[k, j] - m[j, k]) * s
        q[1 + i] = 0.5 * r
        q[1 + j] = (m[j, i] + m[i, j]) * s
        q[1 + k] = (m[k, i] + m[i, k]) * s
    q = quat_normalize(q)
    return -q if q[0] < 0.0 else q


def quat_from_rpy(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Fixed-axis XYZ convention: R = Rz(yaw) @ Ry(pitch) @ Rx(roll)."""
    return matrix_to_quat(rot_z(yaw) @ rot_y(pitch) @ rot_x(roll))


def rotation_vector_from_quat(q: np.ndarray) -> np.ndarray:
    """Axis-angle vector of a unit quaternion, with angle in [0, pi]."""
    w, v = q[0], np.asarray(q[1:], dtype=np.float64)
    if w < 0.0:
        w, v = -w, -v
    sin_half = math.sqrt(float(v @ v))
    if sin_half < _SMALL_ANGLE:
        return 2.0 * v
    angle = 2.0 * math.atan2(sin_half, w)
    return v * (angle / sin_half)


def rotation_vector_from_matrix(m: np.ndarray) -> np.ndarray:
    return rotation_vector_from_quat(matrix_to_quat(m))
