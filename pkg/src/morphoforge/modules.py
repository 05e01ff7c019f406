"""Joint module catalog, design genome, and genome-to-design decoding.

A robot is a serial chain of six (by default) joint modules drawn from a
fixed catalog: roll, pitch, and yaw single-axis rotational modules, a
two-axis orthogonal module (roll then pitch at a shared midpoint), a
prismatic module, and a fixed spacer module.  The search genome pairs one
categorical gene (the module kind) with one continuous gene in [0, 1] (the
normalized module length) per slot.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

DEFAULT_MODULE_COUNT = 6

ROLL_PITCH_LIMIT = 0.75 * math.pi
YAW_LIMIT = 2.0 * math.pi


class ValidationError(ValueError):
    """Raised when a user-supplied value violates a model constraint."""


class JointKind(Enum):
    """The six module kinds, keyed by their one-letter codes."""

    ROLL = "R"
    PITCH = "P"
    YAW = "Y"
    ORTHOGONAL = "O"
    PRISMATIC = "S"
    FIXED = "F"

    @property
    def letter(self) -> str:
        return self.value

    @property
    def length_range(self) -> tuple[float, float]:
        """Admissible module length in meters.

        Roll, pitch, orthogonal, and prismatic modules need room for an
        actuator, so their minimum is 0.1 m; yaw and fixed modules can be
        nearly flat (0.01 m).
        """
        if self in (JointKind.YAW, JointKind.FIXED):
            return (0.01, 0.5)
        return (0.1, 0.5)

    @property
    def rotation_axes(self) -> tuple[str, ...]:
        """Local rotation axes in actuation order ('x' roll, 'y' pitch, 'z' yaw)."""
        return _ROTATION_AXES[self]

    @property
    def is_prismatic(self) -> bool:
        return self is JointKind.PRISMATIC

    @property
    def dof(self) -> int:
        return 1 if self is JointKind.PRISMATIC else len(_ROTATION_AXES[self])

    @classmethod
    def from_letter(cls, letter: str) -> "JointKind":
        try:
            return cls(letter.upper())
        except ValueError:
            valid = "".join(k.value for k in cls)
            raise ValidationError(f"unknown joint kind {letter!r}; expected one of {valid}") from None


ALL_KINDS = tuple(JointKind)

_ROTATION_AXES = {
    JointKind.ROLL: ("x",),
    JointKind.PITCH: ("y",),
    JointKind.YAW: ("z",),
    JointKind.ORTHOGONAL: ("x", "y"),
    JointKind.PRISMATIC: (),
    JointKind.FIXED: (),
}

_AXIS_LIMITS = {
    "x": (-ROLL_PITCH_LIMIT, ROLL_PITCH_LIMIT),
    "y": (-ROLL_PITCH_LIMIT, ROLL_PITCH_LIMIT),
    "z": (-YAW_LIMIT, YAW_LIMIT),
}


@dataclass(frozen=True)
class JointModule:
    """One instantiated module: a kind plus its concrete length in meters.

    Rotational kinds sit between proximal and distal links of length/2 each;
    the prismatic kind has rest length `length` and extends up to twice that;
    the fixed kind is a rigid spacer of the full length.
    """

    kind: JointKind
    length: float

    def __post_init__(self) -> None:
        lo, hi = self.kind.length_range
        if not (lo <= self.length <= hi):
            raise ValidationError(
                f"{self.kind.letter} module length {self.length} outside [{lo}, {hi}]"
            )

    @property
    def dof(self) -> int:
        return self.kind.dof

    @property
    def axis_limits(self) -> tuple[tuple[float, float], ...]:
        """Per-axis (lower, upper) bounds, one pair per degree of freedom."""
        if self.kind.is_prismatic:
            return ((0.0, self.length),)
        return tuple(_AXIS_LIMITS[axis] for axis in self.kind.rotation_axes)


@dataclass(frozen=True)
class RobotDesign:
    """An ordered, proximal-to-distal chain of joint modules."""

    modules: tuple[JointModule, ...]

    @property
    def dof(self) -> int:
        return sum(m.dof for m in self.modules)

    @property
    def total_length(self) -> float:
        return sum(m.length for m in self.modules)

    @property
    def letters(self) -> str:
        return "".join(m.kind.letter for m in self.modules)

    def axis_limits(self) -> tuple[tuple[float, float], ...]:
        return tuple(pair for m in self.modules for pair in m.axis_limits)


@dataclass(frozen=True)
class Genome:
    """Search representation: per-slot module kind plus normalized length.

    `fractions` holds the continuous genes; each maps affinely onto the
    matching kind's length range when decoded.
    """

    kinds: tuple[JointKind, ...]
    fractions: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.kinds) != len(self.fractions):
            raise ValidationError(
                f"genome has {len(self.kinds)} kind genes but {len(self.fractions)} length genes"
            )
        for i, c in enumerate(self.fractions):
            if not (0.0 <= c <= 1.0):
                raise ValidationError(f"length gene {i} is {c}, outside [0, 1]")

    def __len__(self) -> int:
        return len(self.kinds)

    @property
    def letters(self) -> str:
        return "".join(k.letter for k in self.kinds)

    def canonical_bytes(self) -> bytes:
        """Stable byte encoding used for hashing and seed derivation."""
        return self.letters.encode("ascii") + struct.pack(f"<{len(self.fractions)}d", *self.fractions)


def decode_genome(genome: Genome) -> RobotDesign:
    """Map a genome onto a concrete design.

    Each length gene is mapped through its kind's admissible range:
    length = low + (high - low) * gene.
    """
    modules = []
    for kind, fraction in zip(genome.kinds, genome.fractions):
        lo, hi = kind.length_range
        modules.append(JointModule(kind, lo + (hi - lo) * fraction))
    return RobotDesign(tuple(modules))


def design_dof(design: RobotDesign) -> int:
    """Actuated axis count; orthogonal modules contribute two, fixed none."""
    return design.dof


def random_genome(
    rng: np.random.Generator | int | None = None,
    n_modules: int = DEFAULT_MODULE_COUNT,
) -> Genome:
    """Draw a genome with uniform kinds and uniform length genes."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    kinds = tuple(ALL_KINDS[i] for i in rng.integers(0, len(ALL_KINDS), size=n_modules))
    fractions = tuple(float(c) for c in rng.uniform(0.0, 1.0, size=n_modules))
    return Genome(kinds, fractions)


def parse_design(text: str) -> RobotDesign:
    """Parse a `KIND:LENGTH,...` design string, e.g. ``Y:0.3,P:0.25,F:0.01``."""
    entries = [e.strip() for e in text.split(",")]
    modules = []
    for pos, entry in enumerate(entries):
        if not entry:
            raise ValidationError(f"design entry {pos} is empty")
        kind_part, sep, length_part = entry.partition(":")
        if not sep:
            raise ValidationError(f"design entry {pos} ({entry!r}) is missing ':LENGTH'")
        try:
            kind = JointKind.from_letter(kind_part.strip())
            length = float(length_part)
            modules.append(JointModule(kind, length))
        except ValidationError as exc:
            raise ValidationError(f"design entry {pos} ({entry!r}): {exc}") from None
        except ValueError:
            raise ValidationError(
                f"design entry {pos} ({entry!r}) has non-numeric length {length_part!r}"
            ) from None
    return RobotDesign(tuple(modules))
