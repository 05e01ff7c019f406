"""Shared oracles and fixtures for the test suite.

Everything here is deliberately independent of the implementation paths it
checks: dominance classification is a literal pairwise filter, Jacobians are
finite differences of forward kinematics, and the URDF walker re-derives
chain poses from the XML using scipy rotations.
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET

import numpy as np
from scipy.spatial.transform import Rotation

from morphoforge import (
    Genome,
    Pose,
    RobotDesign,
    Scenario,
    decode_genome,
    forward_kinematics,
    random_genome,
)
from morphoforge.rotations import rotation_vector_from_matrix


# ---------------------------------------------------------------------------
# dominance oracles


def dominated_by(a, b) -> bool:
    """True iff b dominates a (minimization, weak-strict)."""
    return b[0] <= a[0] and b[1] <= a[1] and (b[0] < a[0] or b[1] < a[1])


def brute_force_fronts(points) -> list[list[int]]:
    """Pareto fronts by literal peeling of the pairwise dominance relation."""
    remaining = list(range(len(points)))
    fronts = []
    while remaining:
        front = [
            i
            for i in remaining
            if not any(dominated_by(points[i], points[j]) for j in remaining if j != i)
        ]
        fronts.append(front)
        remaining = [i for i in remaining if i not in front]
    return fronts


def brute_force_pareto(points) -> list[int]:
    n = len(points)
    return [
        i
        for i in range(n)
        if not any(dominated_by(points[i], points[j]) for j in range(n) if j != i)
    ]


# ---------------------------------------------------------------------------
# kinematics oracles


def finite_difference_jacobian(design: RobotDesign, root: Pose, q: np.ndarray, step: float = 1e-6) -> np.ndarray:
    """Central finite differences of forward kinematics, column per joint."""
    n = len(q)
    jac = np.zeros((6, n))
    for k in range(n):
        plus, minus = q.copy(), q.copy()
        plus[k] += step
        minus[k] -= step
        pose_plus = forward_kinematics(design, root, plus)
        pose_minus = forward_kinematics(design, root, minus)
        jac[:3, k] = (pose_plus.position - pose_minus.position) / (2.0 * step)
        relative = pose_plus.rotation_matrix() @ pose_minus.rotation_matrix().T
        jac[3:, k] = rotation_vector_from_matrix(relative) / (2.0 * step)
    return jac


def random_admissible_q(design: RobotDesign, rng: np.random.Generator) -> np.ndarray:
    limits = design.axis_limits()
    if not limits:
        return np.zeros(0)
    lower = np.array([lo for lo, _ in limits])
    upper = np.array([hi for _, hi in limits])
    return rng.uniform(lower, upper)


def random_design(rng: np.random.Generator, n_modules: int = 6) -> RobotDesign:
    return decode_genome(random_genome(rng, n_modules))


def random_design_with_dof(rng: np.random.Generator, lo: int, hi: int, n_modules: int = 6) -> RobotDesign:
    while True:
        design = random_design(rng, n_modules)
        if lo <= design.dof <= hi:
            return design


def random_pose(rng: np.random.Generator, radius: float = 1.0) -> Pose:
    quat = rng.normal(size=4)
    return Pose(rng.uniform(-radius, radius, size=3), quat / np.linalg.norm(quat))


# ---------------------------------------------------------------------------
# URDF walker (independent of morphoforge.kinematics)


def walk_urdf(urdf_text: str, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Re-derive the deepest link's pose from URDF joints alone.

    Composes each joint's origin transform and motion using scipy rotations;
    returns (position, wxyz quaternion) relative to the root link.
    """
    robot = ET.fromstring(urdf_text)
    joints = []
    children = set()
    for joint in robot.findall("joint"):
        origin = joint.find("origin")
        xyz = np.array([float(v) for v in origin.get("xyz", "0 0 0").split()])
        rpy = [float(v) for v in origin.get("rpy", "0 0 0").split()]
        axis_el = joint.find("axis")
        axis = (
            np.array([float(v) for v in axis_el.get("xyz").split()])
            if axis_el is not None
            else None
        )
        joints.append(
            {
                "type": joint.get("type"),
                "parent": joint.find("parent").get("link"),
                "child": joint.find("child").get("link"),
                "xyz": xyz,
                "rpy": rpy,
                "axis": axis,
            }
        )
        children.add(joint.find("child").get("link"))

    parents = {j["parent"] for j in joints}
    roots = parents - children
    assert len(roots) == 1, f"expected a single root link, found {roots}"
    link = roots.pop()

    by_parent = {j["parent"]: j for j in joints}
    rot = Rotation.identity()
    pos = np.zeros(3)
    qi = 0
    while link in by_parent:
        joint = by_parent[link]
        pos = pos + rot.apply(joint["xyz"])
        rot = rot * Rotation.from_euler("xyz", joint["rpy"])
        if joint["type"] == "revolute":
            rot = rot * Rotation.from_rotvec(joint["axis"] * q[qi])
            qi += 1
        elif joint["type"] == "prismatic":
            pos = pos + rot.apply(joint["axis"] * q[qi])
            qi += 1
        elif joint["type"] != "fixed":
            raise AssertionError(f"unexpected joint type {joint['type']}")
        link = joint["child"]
    assert qi == len(q), f"URDF consumed {qi} joint values, expected {len(q)}"
    xyzw = rot.as_quat()
    wxyz = np.array([xyzw[3], xyzw[0], xyzw[1], xyzw[2]])
    return pos, wxyz


def quat_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between unit quaternions up to the double cover."""
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


# ---------------------------------------------------------------------------
# scenarios


def toy_scenario() -> Scenario:
    """Two-module search space with two planar-ish targets; fast to evaluate."""
    return Scenario(
        name="toy-2dof",
        root=Pose.identity(),
        targets=(
            Pose.from_rpy([0.25, 0.0, 0.35], [0.0, math.pi / 2.0, 0.0]),
            Pose.from_rpy([0.0, 0.0, 0.70], [0.0, 0.0, 0.0]),
        ),
        n_modules=2,
        ik_overrides={"restarts": 3, "max_iterations": 60},
    )


def single_target_scenario(design: RobotDesign, n_modules: int | None = None) -> Scenario:
    """Scenario whose sole target is `design`'s straight-line end pose."""
    end = forward_kinematics(design, Pose.identity(), np.zeros(design.dof))
    return Scenario(
        name="straight-line",
        root=Pose.identity(),
        targets=(end,),
        n_modules=n_modules or len(design.modules),
    )


def grid_genomes_2mod(steps: int = 11) -> list[Genome]:
    """Exhaustive 2-module genome grid: all kind pairs x fraction lattice."""
    from morphoforge import JointKind

    fractions = [i / (steps - 1) for i in range(steps)]
    genomes = []
    for ka in JointKind:
        for kb in JointKind:
            for ca in fractions:
                for cb in fractions:
                    genomes.append(Genome((ka, kb), (ca, cb)))
    return genomes
