"""Joint model for the 16-DOF companion robot body.

Eight structures, two axes each. The first axis of every structure belongs to
the F parameter family (pitch / lift / wag), the second to the R family
(rotate / flex / curl). Joint indices interleave accordingly:
index = 2 * structure_index + (0 for the F axis, 1 for the R axis).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class StructureId(Enum):
    EAR_LEFT = "ear_left"
    EAR_RIGHT = "ear_right"
    HEAD = "head"
    LIMB_FRONT_LEFT = "limb_front_left"
    LIMB_FRONT_RIGHT = "limb_front_right"
    LIMB_REAR_LEFT = "limb_rear_left"
    LIMB_REAR_RIGHT = "limb_rear_right"
    TAIL = "tail"


class AxisId(Enum):
    PITCH = "pitch"
    ROTATE = "rotate"
    LIFT = "lift"
    FLEX = "flex"
    WAG = "wag"
    CURL = "curl"


STRUCTURES: tuple[StructureId, ...] = tuple(StructureId)

# (F axis, R axis) per structure.
STRUCTURE_AXES: dict[StructureId, tuple[AxisId, AxisId]] = {
    StructureId.EAR_LEFT: (AxisId.PITCH, AxisId.ROTATE),
    StructureId.EAR_RIGHT: (AxisId.PITCH, AxisId.ROTATE),
    StructureId.HEAD: (AxisId.PITCH, AxisId.ROTATE),
    StructureId.LIMB_FRONT_LEFT: (AxisId.LIFT, AxisId.FLEX),
    StructureId.LIMB_FRONT_RIGHT: (AxisId.LIFT, AxisId.FLEX),
    StructureId.LIMB_REAR_LEFT: (AxisId.LIFT, AxisId.FLEX),
    StructureId.LIMB_REAR_RIGHT: (AxisId.LIFT, AxisId.FLEX),
    StructureId.TAIL: (AxisId.WAG, AxisId.CURL),
}

_EAR_HEAD_RANGE = (-40.0, 40.0)
_AXIS_RANGES: dict[AxisId, tuple[float, float]] = {
    AxisId.PITCH: _EAR_HEAD_RANGE,
    AxisId.ROTATE: _EAR_HEAD_RANGE,
    AxisId.LIFT: (-90.0, 90.0),
    AxisId.FLEX: (0.0, 90.0),
    AxisId.WAG: (-90.0, 90.0),
    AxisId.CURL: (0.0, 90.0),
}

JOINT_COUNT = 16

# joint_index -> (structure, axis), in enumeration order.
JOINT_TABLE: tuple[tuple[StructureId, AxisId], ...] = tuple(
    (structure, axis)
    for structure in STRUCTURES
    for axis in STRUCTURE_AXES[structure]
)

_JOINT_INDEX: dict[tuple[StructureId, AxisId], int] = {
    pair: i for i, pair in enumerate(JOINT_TABLE)
}


def f_axis(structure: StructureId) -> AxisId:
    return STRUCTURE_AXES[structure][0]


def r_axis(structure: StructureId) -> AxisId:
    return STRUCTURE_AXES[structure][1]


def axis_range(structure: StructureId, axis: AxisId) -> tuple[float, float]:
    """Mechanical limits in degrees for one joint.

    Raises KeyError if the axis does not belong to the structure.
    """
    if axis not in STRUCTURE_AXES[structure]:
        raise KeyError(f"{structure.value} has no {axis.value} axis")
    return _AXIS_RANGES[axis]


def joint_index(structure: StructureId, axis: AxisId) -> int:
    return _JOINT_INDEX[(structure, axis)]


def joint_from_index(index: int) -> tuple[StructureId, AxisId]:
    if not 0 <= index < JOINT_COUNT:
        raise IndexError(f"joint index out of range: {index}")
    return JOINT_TABLE[index]


def clamp_angle(structure: StructureId, axis: AxisId, angle_deg: float) -> float:
    lo, hi = axis_range(structure, axis)
    if angle_deg < lo:
        return lo
    if angle_deg > hi:
        return hi
    return angle_deg


def in_range(structure: StructureId, axis: AxisId, angle_deg: float) -> bool:
    lo, hi = axis_range(structure, axis)
    return lo <= angle_deg <= hi


@dataclass
class JointState:
    """A full body pose: one angle per joint, degrees."""

    angles: dict[tuple[StructureId, AxisId], float] = field(
        default_factory=lambda: {pair: 0.0 for pair in JOINT_TABLE}
    )

    @classmethod
    def neutral(cls) -> "JointState":
        return cls()

    def get(self, structure: StructureId, axis: AxisId) -> float:
        return self.angles[(structure, axis)]

    def set(self, structure: StructureId, axis: AxisId, angle_deg: float) -> None:
        if (structure, axis) not in self.angles:
            raise KeyError(f"{structure.value} has no {axis.value} axis")
        self.angles[(structure, axis)] = angle_deg

    def vector(self) -> list[float]:
        """Angles in joint-index order, length 16."""
        return [self.angles[pair] for pair in JOINT_TABLE]

    def copy(self) -> "JointState":
        return JointState(dict(self.angles))

    @classmethod
    def from_vector(cls, values: list[float]) -> "JointState":
        if len(values) != JOINT_COUNT:
            raise ValueError(f"expected {JOINT_COUNT} angles, got {len(values)}")
        return cls({pair: float(v) for pair, v in zip(JOINT_TABLE, values)})
