"""Triangle-mesh and skeleton containers shared by the generator, the
measurement extractor, and the renderer.

Conventions: units are centimeters, Y is vertical (up), Z points toward the
camera, bodies stand in T-pose with arms along +/-X.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownJointError, ValidationError

REQUIRED_JOINTS = (
    "neck",
    "mid_spine",
    "pelvis",
    "hip_left",
    "hip_right",
    "shoulder_left",
    "shoulder_right",
    "wrist_left",
    "wrist_right",
    "ankle_left",
    "ankle_right",
)


@dataclass(frozen=True)
class Skeleton:
    """Named joint positions, each a float64 (3,) point in cm."""

    joints: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {name: np.asarray(p, dtype=np.float64).reshape(3)
                 for name, p in self.joints.items()}
        object.__setattr__(self, "joints", clean)

    def joint(self, name: str) -> np.ndarray:
        try:
            return self.joints[name]
        except KeyError:
            raise UnknownJointError(f"unknown joint name: {name!r}") from None

    def validate(self) -> None:
        missing = [n for n in REQUIRED_JOINTS if n not in self.joints]
        if missing:
            raise ValidationError(f"skeleton is missing joints: {missing}")
        if not self.joints["pelvis"][1] < self.joints["neck"][1]:
            raise ValidationError("skeleton is not Y-up: pelvis should sit below neck")
        if not self.joints["ankle_left"][1] < self.joints["pelvis"][1]:
            raise ValidationError("skeleton is not Y-up: ankle should sit below pelvis")

    def translated(self, offset) -> "Skeleton":
        off = np.asarray(offset, dtype=np.float64)
        return Skeleton({n: p + off for n, p in self.joints.items()})

    def scaled(self, factor: float) -> "Skeleton":
        return Skeleton({n: p * factor for n, p in self.joints.items()})


@dataclass
class BodyMesh:
    """Triangle soup plus its skeleton. vertices: (V, 3) float64 cm;
    faces: (T, 3) int32 vertex indices."""

    vertices: np.ndarray
    faces: np.ndarray
    skeleton: Skeleton

    def __post_init__(self):
        self.vertices = np.ascontiguousarray(self.vertices, dtype=np.float64)
        self.faces = np.ascontiguousarray(self.faces, dtype=np.int32)

    @property
    def is_empty(self) -> bool:
        return self.vertices.shape[0] == 0 or self.faces.shape[0] == 0

    def bounds(self):
        """(min, max) corners of the axis-aligned bounding box."""
        if self.vertices.shape[0] == 0:
            raise ValidationError("empty mesh has no bounds")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def validate(self) -> None:
        if self.is_empty:
            raise ValidationError("mesh has no vertices or no faces")
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise ValidationError("vertices must be (V, 3)")
        if self.faces.ndim != 2 or self.faces.shape[1] != 3:
            raise ValidationError("faces must be (T, 3)")
        if self.faces.min() < 0 or self.faces.max() >= self.vertices.shape[0]:
            raise ValidationError("face indices out of vertex range")

    def translated(self, offset) -> "BodyMesh":
        off = np.asarray(offset, dtype=np.float64)
        return BodyMesh(self.vertices + off, self.faces.copy(),
                        self.skeleton.translated(off))

    def scaled(self, factor: float) -> "BodyMesh":
        return BodyMesh(self.vertices * factor, self.faces.copy(),
                        self.skeleton.scaled(factor))


def save_obj(mesh: BodyMesh, path) -> None:
    """Debug export as Wavefront OBJ (Y-up, cm)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# bodymetry mesh, units cm, Y up\n")
        for vx, vy, vz in mesh.vertices:
            fh.write(f"v {vx:.6f} {vy:.6f} {vz:.6f}\n")
        for a, b, c in mesh.faces:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")
