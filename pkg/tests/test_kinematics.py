"""Forward kinematics, Jacobian, pose error, and reach bound."""
import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from morphoforge import (
    JointKind,
    JointModule,
    Pose,
    RobotDesign,
    ValidationError,
    chain_reach,
    forward_kinematics,
    jacobian,
    pose_error,
)
from morphoforge.rotations import matrix_to_quat, quat_to_matrix

from support import finite_difference_jacobian, random_admissible_q, random_design, random_pose

K = JointKind
IDENTITY = Pose.identity()


def chain(*pairs) -> RobotDesign:
    return RobotDesign(tuple(JointModule(K(letter), length) for letter, length in pairs))


class TestPose:
    def test_orientation_renormalized(self):
        pose = Pose(np.zeros(3), np.array([2.0, 0.0, 0.0, 0.0]))
        assert np.linalg.norm(pose.orientation) == pytest.approx(1.0, abs=1e-15)

    def test_zero_quaternion_rejected(self):
        with pytest.raises(ValidationError):
            Pose(np.zeros(3), np.zeros(4))

    def test_from_rpy_identity(self):
        pose = Pose.from_rpy([0, 0, 0], [0, 0, 0])
        assert np.allclose(pose.orientation, [1, 0, 0, 0])

    def test_arrays_read_only(self):
        pose = Pose.from_rpy([1, 2, 3], [0.1, 0.2, 0.3])
        with pytest.raises(ValueError):
            pose.position[0] = 9.0

    def test_rpy_matches_scipy(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            rpy = rng.uniform(-math.pi, math.pi, size=3)
            ours = Pose.from_rpy([0, 0, 0], rpy).rotation_matrix()
            theirs = Rotation.from_euler("xyz", rpy).as_matrix()
            assert np.allclose(ours, theirs, atol=1e-12)


class TestQuaternionHelpers:
    def test_matrix_round_trip_vs_scipy(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            quat = rng.normal(size=4)
            quat /= np.linalg.norm(quat)
            ours = quat_to_matrix(quat)
            theirs = Rotation.from_quat([quat[1], quat[2], quat[3], quat[0]]).as_matrix()
            assert np.allclose(ours, theirs, atol=1e-12)
            back = matrix_to_quat(ours)
            assert min(np.linalg.norm(back - quat), np.linalg.norm(back + quat)) < 1e-12


class TestForwardKinematics:
    def test_fixed_chain_goes_straight(self):
        pose = forward_kinematics(chain(("F", 0.2), ("F", 0.3)), IDENTITY, [])
        assert np.allclose(pose.position, [0, 0, 0.5])
        assert np.allclose(pose.orientation, IDENTITY.orientation)

    def test_pitch_quarter_turn(self):
        pose = forward_kinematics(chain(("P", 0.4)), IDENTITY, [math.pi / 2])
        assert np.allclose(pose.position, [0.2, 0, 0.2], atol=1e-12)
        expected = Rotation.from_euler("y", math.pi / 2).as_matrix()
        assert np.allclose(pose.rotation_matrix(), expected, atol=1e-12)

    def test_prismatic_full_extension(self):
        pose = forward_kinematics(chain(("S", 0.3)), IDENTITY, [0.3])
        assert np.allclose(pose.position, [0, 0, 0.6], atol=1e-15)

    def test_orthogonal_is_roll_then_pitch(self):
        design = chain(("O", 0.2))
        q = [0.3, -0.7]
        pose = forward_kinematics(design, IDENTITY, q)
        rot = Rotation.from_euler("x", 0.3) * Rotation.from_euler("y", -0.7)
        expected = np.array([0, 0, 0.1]) + rot.apply([0, 0, 0.1])
        assert np.allclose(pose.position, expected, atol=1e-12)
        assert np.allclose(pose.rotation_matrix(), rot.as_matrix(), atol=1e-12)

    def test_dimension_mismatch_names_both_counts(self):
        with pytest.raises(ValidationError, match="3 degrees of freedom but got 2"):
            forward_kinematics(chain(("Y", 0.1), ("P", 0.2), ("S", 0.2)), IDENTITY, [0.0, 0.0])

    def test_straight_line_zero_pose(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            design = random_design(rng)
            root = random_pose(rng)
            pose = forward_kinematics(design, root, np.zeros(design.dof))
            z_axis = root.rotation_matrix()[:, 2]
            expected = root.position + design.total_length * z_axis
            assert np.max(np.abs(pose.position - expected)) < 1e-12
            root_quat = matrix_to_quat(root.rotation_matrix())
            assert min(
                np.linalg.norm(pose.orientation - root_quat),
                np.linalg.norm(pose.orientation + root_quat),
            ) < 1e-12

    def test_orientation_norm_after_long_chains(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            design = random_design(rng)
            q = random_admissible_q(design, rng)
            pose = forward_kinematics(design, random_pose(rng), q)
            assert abs(np.linalg.norm(pose.orientation) - 1.0) < 1e-9

    def test_root_offset_composes(self):
        root = Pose.from_rpy([1.0, -2.0, 0.5], [0.0, math.pi / 2, 0.0])
        pose = forward_kinematics(chain(("F", 0.2)), root, [])
        # root +z now points along world +x
        assert np.allclose(pose.position, [1.2, -2.0, 0.5], atol=1e-12)


class TestJacobian:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            design = random_design(rng)
            q = random_admissible_q(design, rng)
            analytic = jacobian(design, IDENTITY, q)
            numeric = finite_difference_jacobian(design, IDENTITY, q)
            assert np.max(np.abs(analytic - numeric)) < 1e-5

    def test_matches_finite_differences_with_root(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            design = random_design(rng)
            q = random_admissible_q(design, rng)
            root = random_pose(rng)
            analytic = jacobian(design, root, q)
            numeric = finite_difference_jacobian(design, root, q)
            assert np.max(np.abs(analytic - numeric)) < 1e-5

    def test_prismatic_column(self):
        jac = jacobian(chain(("S", 0.3)), IDENTITY, [0.0])
        assert np.allclose(jac[:, 0], [0, 0, 1, 0, 0, 0])

    def test_zero_dof_is_empty(self):
        jac = jacobian(chain(("F", 0.2), ("F", 0.2)), IDENTITY, [])
        assert jac.shape == (6, 0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            jacobian(chain(("P", 0.3)), IDENTITY, [0.0, 0.0])


class TestPoseError:
    def test_identity_case_is_exactly_zero(self):
        pose = random_pose(np.random.default_rng(3))
        assert np.all(pose_error(pose, pose) == 0.0)

    def test_pure_translation(self):
        a = Pose(np.array([0.1, 0.0, 0.0]), np.array([1.0, 0, 0, 0]))
        b = Pose(np.zeros(3), np.array([1.0, 0, 0, 0]))
        assert np.allclose(pose_error(a, b), [0.1, 0, 0, 0, 0, 0])

    def test_pure_yaw_rotation(self):
        target = Pose.from_rpy([0, 0, 0], [0, 0, math.pi / 2])
        err = pose_error(target, IDENTITY)
        assert np.allclose(err, [0, 0, 0, 0, 0, math.pi / 2], atol=1e-12)

    def test_angle_in_zero_pi(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            err = pose_error(random_pose(rng), random_pose(rng))
            assert np.linalg.norm(err[3:]) <= math.pi + 1e-9

    def test_norm_invariant_under_common_left_transform(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            a, b = random_pose(rng), random_pose(rng)
            base = np.linalg.norm(pose_error(a, b))
            world = random_pose(rng)
            rot = world.rotation_matrix()

            def moved(p: Pose) -> Pose:
                return Pose(world.position + rot @ p.position, matrix_to_quat(rot @ p.rotation_matrix()))

            shifted = np.linalg.norm(pose_error(moved(a), moved(b)))
            assert shifted == pytest.approx(base, abs=1e-9)


class TestChainReach:
    def test_fixed_modules(self):
        assert chain_reach(chain(("F", 0.2), ("F", 0.3))) == pytest.approx(0.5)

    def test_prismatic_counts_double(self):
        assert chain_reach(chain(("S", 0.3))) == pytest.approx(0.6)

    def test_bounds_forward_kinematics(self):
        rng = np.random.default_rng(29)
        for _ in range(1000):
            design = random_design(rng)
            q = random_admissible_q(design, rng)
            pose = forward_kinematics(design, IDENTITY, q)
            assert np.linalg.norm(pose.position) <= chain_reach(design) + 1e-9
