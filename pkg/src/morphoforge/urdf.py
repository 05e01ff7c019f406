"""URDF emission for a decoded design.

The exported chain realizes the straight-line zero pose along +z: every
joint origin is a pure z-offset from its parent link, revolute axes are the
module's local x/y/z, and the prismatic axis slides along z with limits
[0, length].  Inertial tags carry small placeholder values (URDF consumers
require them) and visuals are primitive cylinders; neither implies dynamics
fidelity.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET

from .modules import JointKind, RobotDesign

_PLACEHOLDER_MASS = "0.1"
_PLACEHOLDER_INERTIA = "1e-4"
_LINK_RADIUS = 0.02

_AXIS_XYZ = {"x": "1 0 0", "y": "0 1 0", "z": "0 0 1"}


def _add_link(robot: ET.Element, name: str) -> ET.Element:
    link = ET.SubElement(robot, "link", name=name)
    inertial = ET.SubElement(link, "inertial")
    ET.SubElement(inertial, "origin", xyz="0 0 0", rpy="0 0 0")
    ET.SubElement(inertial, "mass", value=_PLACEHOLDER_MASS)
    ET.SubElement(
        inertial,
        "inertia",
        ixx=_PLACEHOLDER_INERTIA,
        iyy=_PLACEHOLDER_INERTIA,
        izz=_PLACEHOLDER_INERTIA,
        ixy="0",
        ixz="0",
        iyz="0",
    )
    return link


def _add_segment_visual(link: ET.Element, span: float) -> None:
    """Cylinder covering the rigid run from this link's origin to the next joint."""
    if span <= 1e-9:
        return
    visual = ET.SubElement(link, "visual")
    ET.SubElement(visual, "origin", xyz=f"0 0 {span / 2!r}", rpy="0 0 0")
    geometry = ET.SubElement(visual, "geometry")
    ET.SubElement(geometry, "cylinder", radius=f"{_LINK_RADIUS!r}", length=f"{span!r}")


def _add_joint(
    robot: ET.Element,
    name: str,
    joint_type: str,
    parent: str,
    child: str,
    z_offset: float,
    axis: str | None = None,
    limits: tuple[float, float] | None = None,
) -> None:
    joint = ET.SubElement(robot, "joint", name=name, type=joint_type)
    ET.SubElement(joint, "origin", xyz=f"0 0 {z_offset!r}", rpy="0 0 0")
    ET.SubElement(joint, "parent", link=parent)
    ET.SubElement(joint, "child", link=child)
    if axis is not None:
        ET.SubElement(joint, "axis", xyz=_AXIS_XYZ[axis])
    if limits is not None:
        ET.SubElement(
            joint,
            "limit",
            lower=f"{limits[0]!r}",
            upper=f"{limits[1]!r}",
            effort="100",
            velocity="1",
        )


def export_urdf(design: RobotDesign, name: str = "robot") -> str:
    """Render `design` as a URDF document string (XML 1.0, UTF-8)."""
    robot = ET.Element("robot", name=name)
    current_link = _add_link(robot, "base_link")
    current_name = "base_link"
    pending = 0.0  # rigid z-run accumulated since the current link's origin

    for index, module in enumerate(design.modules, start=1):
        kind = module.kind
        if kind is JointKind.FIXED:
            span = pending + module.length
            _add_segment_visual(current_link, span)
            child = f"m{index}_link"
            link = _add_link(robot, child)
            _add_joint(robot, f"m{index}_fixed", "fixed", current_name, child, span)
            current_link, current_name, pending = link, child, 0.0
        elif kind is JointKind.PRISMATIC:
            span = pending + module.length
            _add_segment_visual(current_link, span)
            child = f"m{index}_link"
            link = _add_link(robot, child)
            _add_joint(
                robot,
                f"m{index}_slide",
                "prismatic",
                current_name,
                child,
                span,
                axis="z",
                limits=module.axis_limits[0],
            )
            current_link, current_name, pending = link, child, 0.0
        else:
            span = pending + 0.5 * module.length
            _add_segment_visual(current_link, span)
            axes = kind.rotation_axes
            axis_names = ("roll", "pitch") if len(axes) > 1 else (_SINGLE_AXIS_NAME[kind],)
            for axis_pos, (axis, limits) in enumerate(zip(axes, module.axis_limits)):
                child = f"m{index}_link" if axis_pos == len(axes) - 1 else f"m{index}_cross"
                link = _add_link(robot, child)
                _add_joint(
                    robot,
                    f"m{index}_{axis_names[axis_pos]}",
                    "revolute",
                    current_name,
                    child,
                    span if axis_pos == 0 else 0.0,
                    axis=axis,
                    limits=limits,
                )
                current_link, current_name = link, child
            pending = 0.5 * module.length

    if pending > 0.0:
        _add_segment_visual(current_link, pending)
        _add_link(robot, "ee_link")
        _add_joint(robot, "ee_fixed", "fixed", current_name, "ee_link", pending)

    ET.indent(robot, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(robot, encoding="unicode") + "\n"


_SINGLE_AXIS_NAME = {
    JointKind.ROLL: "roll",
    JointKind.PITCH: "pitch",
    JointKind.YAW: "yaw",
}
