"""Scenario definition, YAML loading/saving, and the builtin target sets.

A scenario pins down one experiment: the root pose of the chain, the list
of target poses the end effector should reach, the module count of the
genome, and optional IK solver overrides.  Files are plain YAML with
explicit field names; orientations may be written either as `rpy`
(fixed-axis XYZ, radians) or as `quat` (w, x, y, z).
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from .ik import IkConfig
from .kinematics import Pose
from .modules import DEFAULT_MODULE_COUNT, ValidationError

BUILTIN_NAMES = ("target-arm", "target-leg", "target-wide")

# IkConfig fields a scenario file may override; seed stays caller-owned.
_IK_OVERRIDE_FIELDS = ("damping", "max_iterations", "step_tolerance", "residual_tolerance", "restarts")


@dataclass(frozen=True)
class Scenario:
    """One experiment: root pose, reference targets, and solver overrides."""

    name: str
    root: Pose
    targets: tuple[Pose, ...]
    n_modules: int = DEFAULT_MODULE_COUNT
    ik_overrides: Mapping[str, Any] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not self.targets:
            raise ValidationError("targets must be non-empty")
        if self.n_modules < 1:
            raise ValidationError(f"n_modules must be >= 1, got {self.n_modules}")
        overrides = dict(self.ik_overrides or {})
        for key in overrides:
            if key not in _IK_OVERRIDE_FIELDS:
                raise ValidationError(
                    f"unknown ik override {key!r}; expected one of {_IK_OVERRIDE_FIELDS}"
                )
        object.__setattr__(self, "ik_overrides", overrides)

    def resolve_ik(self, base: IkConfig | None = None, seed: int | None = None) -> IkConfig:
        """Solver defaults, with this scenario's overrides applied on top."""
        cfg = base if base is not None else IkConfig()
        if self.ik_overrides:
            cfg = replace(cfg, **self.ik_overrides)
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        return cfg


def _parse_pose(node: Any, where: str) -> Pose:
    if not isinstance(node, Mapping):
        raise ValidationError(f"{where} must be a mapping with xyz and rpy/quat fields")
    extra = set(node) - {"xyz", "rpy", "quat"}
    if extra:
        raise ValidationError(f"{where} has unknown fields {sorted(extra)}")
    xyz = node.get("xyz")
    if xyz is None or len(xyz) != 3:
        raise ValidationError(f"{where}.xyz must be a 3-element list")
    has_rpy = "rpy" in node
    has_quat = "quat" in node
    if has_rpy == has_quat:
        raise ValidationError(f"{where} must give exactly one of rpy or quat")
    try:
        if has_rpy:
            rpy = node["rpy"]
            if len(rpy) != 3:
                raise ValidationError(f"{where}.rpy must be a 3-element list")
            return Pose.from_rpy([float(v) for v in xyz], [float(v) for v in rpy])
        quat = node["quat"]
        if len(quat) != 4:
            raise ValidationError(f"{where}.quat must be a 4-element (w, x, y, z) list")
        return Pose(np.array([float(v) for v in xyz]), np.array([float(v) for v in quat]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{where}: {exc}") from None


def scenario_from_dict(data: Mapping[str, Any], source: str = "<scenario>") -> Scenario:
    if not isinstance(data, Mapping):
        raise ValidationError(f"{source}: scenario document must be a mapping")
    known = {"name", "root", "targets", "n_modules", "ik"}
    extra = set(data) - known
    if extra:
        raise ValidationError(f"{source}: unknown fields {sorted(extra)}")
    name = data.get("name")
    if not name or not isinstance(name, str):
        raise ValidationError(f"{source}: name must be a non-empty string")
    if "root" not in data:
        raise ValidationError(f"{source}: root pose is required")
    root = _parse_pose(data["root"], f"{source}: root")
    targets_node = data.get("targets")
    if not targets_node:
        raise ValidationError(f"{source}: targets must be non-empty")
    targets = tuple(
        _parse_pose(node, f"{source}: targets[{i}]") for i, node in enumerate(targets_node)
    )
    n_modules = data.get("n_modules", DEFAULT_MODULE_COUNT)
    if not isinstance(n_modules, int) or isinstance(n_modules, bool):
        raise ValidationError(f"{source}: n_modules must be an integer")
    ik_node = data.get("ik") or {}
    if not isinstance(ik_node, Mapping):
        raise ValidationError(f"{source}: ik must be a mapping of solver overrides")
    return Scenario(name=name, root=root, targets=targets, n_modules=n_modules, ik_overrides=dict(ik_node))


def _pose_to_dict(pose: Pose) -> dict:
    return {
        "xyz": [float(v) for v in pose.position],
        "quat": [float(v) for v in pose.orientation],
    }


def scenario_to_dict(scenario: Scenario) -> dict:
    data: dict[str, Any] = {
        "name": scenario.name,
        "n_modules": scenario.n_modules,
        "root": _pose_to_dict(scenario.root),
        "targets": [_pose_to_dict(t) for t in scenario.targets],
    }
    if scenario.ik_overrides:
        data["ik"] = dict(scenario.ik_overrides)
    return data


def load_scenario(path) -> Scenario:
    """Load and validate a scenario file.

    Parse errors carry the YAML parser's line/column context; validation
    errors name the offending field.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"{path}: not valid YAML: {exc}") from None
    return scenario_from_dict(data, source=str(path))


def save_scenario(scenario: Scenario, path) -> None:
    """Write a scenario as YAML that loads back to an equal scenario."""
    try:
        Path(path).write_text(
            yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False), encoding="utf-8"
        )
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc


def builtin_scenario(name: str) -> Scenario:
    """Load one of the shipped scenarios: target-arm, target-leg, target-wide.

    The shipped pose sets are documented approximations of arm-, leg-, and
    wide-workspace reach tasks; they are versioned data files meant to be
    inspected and edited, not measured ground truth.
    """
    if name not in BUILTIN_NAMES:
        raise ValidationError(f"unknown builtin scenario {name!r}; expected one of {BUILTIN_NAMES}")
    ref = resources.files("morphoforge.data").joinpath(name.replace("-", "_") + ".yaml")
    data = yaml.safe_load(ref.read_text(encoding="utf-8"))
    return scenario_from_dict(data, source=f"builtin:{name}")


def builtin_scenarios() -> list[Scenario]:
    return [builtin_scenario(name) for name in BUILTIN_NAMES]
