"""Anthropometric measurement extraction from body meshes.

Girths are tape-measure girths: the perimeter of the 2D convex hull of a
plane cross-section of the mesh. Waist is the minimal girth inside a band
around the mid-spine joint scaled by stature; pelvis is the maximal girth
between the hip and pelvis joint levels. Lengths are straight-line joint
distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyRegionError, EmptySectionError, ValidationError
from .geometry import BodyMesh, Skeleton
from .landmarks import body_landmarks

CANONICAL_NAMES = (
    "waist_circumference",
    "pelvis_circumference",
    "shoulder_to_wrist",
    "torso_length",
    "leg_length",
)

AUXILIARY_NAMES = (
    "stature",
    "head_circumference",
    "neck_circumference",
    "chest_circumference",
    "thigh_circumference",
    "calf_circumference",
    "bicep_circumference",
    "forearm_circumference",
    "wrist_circumference",
    "ankle_circumference",
    "shoulder_width",
)

#: Canonical ordering of the 16 measurements; also the regression target order.
MEASUREMENT_NAMES = CANONICAL_NAMES + AUXILIARY_NAMES

# Waist search band half-height as a fraction of stature.
DEFAULT_WAIST_REGION_FRACTION = 0.05
# Grid size for extremal girth searches.
DEFAULT_LEVELS = 64

# Relative (to mesh diagonal) tolerance for merging cross-section points that
# came from the same mesh edge via two adjacent faces.
_CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class MeasurementSet:
    """The 16 named measurements in cm."""

    values: dict

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    def validate(self) -> None:
        keys = set(self.values)
        expected = set(MEASUREMENT_NAMES)
        if keys != expected:
            missing = sorted(expected - keys)
            extra = sorted(keys - expected)
            raise ValidationError(
                f"measurement set must have exactly the 16 canonical keys; "
                f"missing={missing} extra={extra}")
        for name, value in self.values.items():
            v = float(value)
            if not np.isfinite(v) or v <= 0.0:
                raise ValidationError(f"measurement {name!r} must be finite and positive, got {v}")

    def __getitem__(self, name: str) -> float:
        return float(self.values[name])

    def as_vector(self) -> np.ndarray:
        """Values in MEASUREMENT_NAMES order."""
        return np.array([self.values[n] for n in MEASUREMENT_NAMES], dtype=np.float64)

    @classmethod
    def from_vector(cls, vec) -> "MeasurementSet":
        vec = np.asarray(vec, dtype=np.float64).reshape(len(MEASUREMENT_NAMES))
        return cls({n: float(v) for n, v in zip(MEASUREMENT_NAMES, vec)})


@dataclass(frozen=True)
class CrossSection:
    """A planar slice of the mesh: deduplicated intersection points projected
    to the cutting plane, plus the number of connected intersection loops."""

    y_level: float
    points: np.ndarray        # (P, 2), plane coordinates
    component_count: int


def polygon_perimeter(points) -> float:
    """Perimeter of the closed polygon through ``points`` in the given order."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.shape[0] < 2:
        return 0.0
    diff = np.diff(np.vstack([pts, pts[:1]]), axis=0)
    return float(np.sum(np.hypot(diff[:, 0], diff[:, 1])))


def hull_perimeter(points) -> float:
    """Perimeter of the 2D convex hull of a point set."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    idx = kernels.hull_indices(pts)
    return polygon_perimeter(pts[idx])


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _cluster_points(points: np.ndarray, tol: float):
    """Merge points closer than ``tol`` (grid + neighborhood single linkage).

    Returns (labels, representatives): one label per input point and the
    first-seen representative point of each cluster, in first-seen order.
    """
    n = points.shape[0]
    dsu = _DisjointSet(n)
    cells: dict = {}
    keys = np.floor(points / tol).astype(np.int64)
    for i in range(n):
        kx, ky = int(keys[i, 0]), int(keys[i, 1])
        for nx in (kx - 1, kx, kx + 1):
            for ny in (ky - 1, ky, ky + 1):
                j = cells.get((nx, ny))
                if j is not None and abs(points[j, 0] - points[i, 0]) <= tol \
                        and abs(points[j, 1] - points[i, 1]) <= tol:
                    dsu.union(j, i)
        cells.setdefault((kx, ky), i)

    labels = np.empty(n, dtype=np.int64)
    reps: list = []
    root_to_label: dict = {}
    for i in range(n):
        root = dsu.find(i)
        label = root_to_label.get(root)
        if label is None:
            label = len(reps)
            root_to_label[root] = label
            reps.append(points[i])
        labels[i] = label
    return labels, np.asarray(reps).reshape(len(reps), 2)


class _Slicer:
    """Cross-sections of one mesh along one axis, with a per-face interval
    prefilter so repeated slices stay cheap."""

    def __init__(self, mesh: BodyMesh, axis: int = 1):
        if mesh.is_empty:
            raise ValidationError("cannot slice an empty mesh")
        verts = mesh.vertices
        keep = [0, 1, 2]
        keep.remove(axis)
        self.axis_vals = np.ascontiguousarray(verts[:, axis])
        self.u = np.ascontiguousarray(verts[:, keep[0]])
        self.v = np.ascontiguousarray(verts[:, keep[1]])
        self.faces = mesh.faces
        face_axis = self.axis_vals[self.faces]
        self.face_min = face_axis.min(axis=1)
        self.face_max = face_axis.max(axis=1)
        lo, hi = mesh.bounds()
        self.level_min = float(lo[axis])
        self.level_max = float(hi[axis])
        diag = float(np.linalg.norm(hi - lo))
        self.tol = _CLUSTER_TOL * max(diag, 1e-12)

    def section(self, level: float):
        """Returns (points, component_count, segments) or None when the plane
        misses every face."""
        cand = (self.face_min < level) & (self.face_max >= level)
        if not cand.any():
            return None
        segments, loose = kernels.slice_faces(
            self.axis_vals, self.u, self.v, self.faces[cand], level)
        nseg = segments.shape[0]
        if nseg == 0 and loose.shape[0] == 0:
            return None

        endpoints = segments.reshape(-1, 2)
        all_points = np.vstack([endpoints, loose]) if loose.shape[0] else endpoints
        labels, reps = _cluster_points(all_points, self.tol)

        dsu = _DisjointSet(reps.shape[0])
        for s in range(nseg):
            dsu.union(int(labels[2 * s]), int(labels[2 * s + 1]))
        components = len({dsu.find(int(lbl)) for lbl in labels[:2 * nseg]})
        rep_components = np.array([dsu.find(i) for i in range(reps.shape[0])],
                                  dtype=np.int64)
        return reps, components, rep_components


def cross_section(mesh: BodyMesh, y: float) -> CrossSection:
    """All points where the plane Y=y cuts the mesh, projected to XZ."""
    slicer = _Slicer(mesh, axis=1)
    result = slicer.section(float(y))
    if result is None:
        raise EmptySectionError(f"plane y={y} does not intersect the mesh "
                                f"(mesh spans [{slicer.level_min}, {slicer.level_max}])")
    reps, components, _ = result
    return CrossSection(y_level=float(y), points=reps, component_count=components)


def circumference_at(mesh: BodyMesh, y: float) -> float:
    """Convex-hull perimeter ("tape measure") of the cross-section at Y=y."""
    return hull_perimeter(cross_section(mesh, y).points)


def extremal_circumference(mesh: BodyMesh, y_min: float, y_max: float,
                           mode: str = "minimal",
                           levels: int = DEFAULT_LEVELS):
    """Extremal circumference over a uniform grid of ``levels`` Y values
    spanning [y_min, y_max] inclusive. Returns ``(y_star, circumference)``;
    ties break toward the lower level."""
    if not y_min < y_max:
        raise ValidationError(f"need y_min < y_max, got [{y_min}, {y_max}]")
    if levels < 2:
        raise ValidationError("levels must be at least 2")
    if mode not in ("minimal", "maximal"):
        raise ValidationError(f"mode must be 'minimal' or 'maximal', got {mode!r}")

    slicer = _Slicer(mesh, axis=1)
    grid = np.linspace(y_min, y_max, levels)
    values = np.full(levels, np.nan)
    for i, level in enumerate(grid):
        result = slicer.section(float(level))
        if result is not None:
            values[i] = hull_perimeter(result[0])
    if np.isnan(values).all():
        raise EmptyRegionError(
            f"region [{y_min}, {y_max}] lies outside the mesh "
            f"(mesh spans [{slicer.level_min}, {slicer.level_max}])")

    if mode == "minimal":
        best = int(np.nanargmin(values))
    else:
        best = int(np.nanargmax(values))
    return float(grid[best]), float(values[best])


def joint_distance(skeleton: Skeleton, a: str, b: str) -> float:
    """Euclidean distance between two named joints."""
    return float(np.linalg.norm(skeleton.joint(a) - skeleton.joint(b)))


def _component_girth(slicer: _Slicer, level: float, side: str) -> float:
    """Hull perimeter of a single connected component (paired limbs); the
    component is chosen by centroid sign on the first plane axis."""
    result = slicer.section(level)
    if result is None:
        raise EmptySectionError(f"no section at level {level}")
    reps, _, rep_components = result
    best_pts = None
    best_centroid = None
    for comp in np.unique(rep_components):
        pts = reps[rep_components == comp]
        centroid = float(pts[:, 0].mean())
        if best_centroid is None or \
                (centroid < best_centroid if side == "left" else centroid > best_centroid):
            best_centroid = centroid
            best_pts = pts
    return hull_perimeter(best_pts)


def measure_all(mesh: BodyMesh,
                waist_region_fraction: float = DEFAULT_WAIST_REGION_FRACTION,
                levels: int = DEFAULT_LEVELS) -> MeasurementSet:
    """Extract all 16 measurements from a body mesh."""
    mesh.validate()
    skel = mesh.skeleton
    skel.validate()
    lo, hi = mesh.bounds()
    stature = float(hi[1] - lo[1])
    marks = body_landmarks(skel, y_top=float(hi[1]))

    half = waist_region_fraction * stature
    _, waist = extremal_circumference(
        mesh, marks.mid_spine_y - half, marks.mid_spine_y + half,
        mode="minimal", levels=levels)
    _, pelvis = extremal_circumference(
        mesh, marks.hip_y, marks.pelvis_y, mode="maximal", levels=levels)

    y_slicer = _Slicer(mesh, axis=1)

    def girth(level: float) -> float:
        result = y_slicer.section(level)
        if result is None:
            raise EmptySectionError(f"no section at y={level}")
        return hull_perimeter(result[0])

    # Arm girths are slices normal to the arm axis (X); the left arm is the
    # canonical side and lies beyond the torso, so the section is arm-only.
    x_slicer = _Slicer(mesh, axis=0)
    shoulder_x = float(skel.joint("shoulder_left")[0])

    def arm_girth(offset: float) -> float:
        result = x_slicer.section(shoulder_x - offset)
        if result is None:
            raise EmptySectionError(f"no arm section at offset {offset}")
        return hull_perimeter(result[0])

    values = {
        "waist_circumference": waist,
        "pelvis_circumference": pelvis,
        "shoulder_to_wrist": joint_distance(skel, "shoulder_left", "wrist_left"),
        "torso_length": joint_distance(skel, "neck", "pelvis"),
        "leg_length": joint_distance(skel, "pelvis", "ankle_left"),
        "stature": stature,
        "head_circumference": girth(marks.head_girth_y),
        "neck_circumference": girth(marks.neck_girth_y),
        "chest_circumference": girth(marks.chest_y),
        "thigh_circumference": _component_girth(y_slicer, marks.thigh_y, "left"),
        "calf_circumference": _component_girth(y_slicer, marks.calf_y, "left"),
        "bicep_circumference": arm_girth(marks.bicep_x),
        "forearm_circumference": arm_girth(marks.forearm_x),
        "wrist_circumference": arm_girth(marks.wrist_x),
        "ankle_circumference": _component_girth(y_slicer, marks.ankle_girth_y, "left"),
        "shoulder_width": joint_distance(skel, "shoulder_left", "shoulder_right"),
    }
    ms = MeasurementSet(values)
    ms.validate()
    return ms
