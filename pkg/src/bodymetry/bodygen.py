"""Procedural parametric body generator.

Bodies are unions of capped generalized cylinders: superellipse cross
sections lofted along Y for the torso and head, along -Y for the legs and
along +/-X for the arms. Ring perimeters interpolate linearly between control
rings, and every ring of a part is a scaled copy of the same convex shape, so
the cross-section girth at any level is exactly the linear interpolation of
the control-ring girths. Girth parameters therefore survive the round trip
through ``measure.measure_all`` by construction:

* the waist band has a flat minimum equal to ``waist_circ`` centered on the
  mid-spine joint, with strictly larger girths on both sides of the band;
* the seat band between the hip and pelvis joints has a flat maximum equal to
  ``pelvis_circ``;
* each auxiliary girth level (see ``landmarks``) sits inside a constant-girth
  band of its part.

Joints are placed analytically from the segment lengths, which makes the
three reported joint distances exact. The guarantees hold for waist-region
fractions up to ~0.07 of stature (the default is 0.05) given the torso/leg
proportion clamps applied during sampling.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ConfigurationError, ValidationError
from .geometry import BodyMesh, Skeleton
from .landmarks import (
    BICEP_FRACTION,
    CALF_FRACTION,
    CHEST_FRACTION,
    FLAT_BAND_FRACTION,
    FOREARM_FRACTION,
    NECK_GIRTH_FRACTION,
    HEAD_GIRTH_FRACTION,
    THIGH_FRACTION,
    WRIST_FRACTION,
)

SEXES = ("male", "female")

AUX_GIRTH_NAMES = ("head", "neck", "chest", "thigh", "calf",
                   "bicep", "forearm", "wrist", "ankle")

RANGE_PARAM_NAMES = ("stature", "torso_len", "leg_len", "arm_len",
                     "waist_circ", "pelvis_circ", "shoulder_width") + AUX_GIRTH_NAMES

# Sampled torso and leg lengths are clamped to these fractions of the sampled
# stature; this keeps bodies proportionate and is what guarantees the waist
# search band fits between the pelvis and the chest.
TORSO_STATURE_FRACTION = (0.28, 0.40)
LEG_STATURE_FRACTION = (0.42, 0.54)

# Vertical layout fractions (of stature).
HIP_DROP_FRACTION = 0.05        # hip joints sit this far below the pelvis
CROTCH_DROP_FRACTION = 0.045    # torso extends this far below the hip level
LEG_TOP_GAP_FRACTION = 0.01     # legs stop this far below the hip level
SHOULDER_DROP_FRACTION = 0.02   # arm axis sits this far below the neck

# How far the girth profile's V-slopes extend from the waist minimum toward
# the pelvis (below) and the chest (above), as a fraction of each gap.
WAIST_V_SPAN = 0.75

# Lateral offset of each leg axis relative to the thigh radius.
LEG_SPACING_FACTOR = 1.10

# Cross-section shapes (superellipse exponent, depth/width aspect).
TORSO_SHAPE = (2.4, 0.65)
HEAD_SHAPE = (2.0, 0.85)
LIMB_SHAPE = (2.0, 1.0)

MIN_RESOLUTION = 16


@dataclass(frozen=True)
class BodySpec:
    """Generative parameters of one synthetic person (cm)."""

    sex: str
    stature: float
    torso_len: float
    leg_len: float
    arm_len: float
    waist_circ: float
    pelvis_circ: float
    shoulder_width: float
    aux_girths: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "aux_girths",
                           {k: float(v) for k, v in self.aux_girths.items()})

    def validate(self) -> None:
        if self.sex not in SEXES:
            raise ValidationError(f"sex must be one of {SEXES}, got {self.sex!r}")
        scalars = {
            "stature": self.stature, "torso_len": self.torso_len,
            "leg_len": self.leg_len, "arm_len": self.arm_len,
            "waist_circ": self.waist_circ, "pelvis_circ": self.pelvis_circ,
            "shoulder_width": self.shoulder_width,
        }
        for name, value in scalars.items():
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be strictly positive, got {value}")
        missing = [n for n in AUX_GIRTH_NAMES if n not in self.aux_girths]
        if missing:
            raise ValidationError(f"aux_girths is missing {missing}")
        for name, value in self.aux_girths.items():
            if name not in AUX_GIRTH_NAMES:
                raise ValidationError(f"unknown aux girth {name!r}")
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"aux girth {name} must be strictly positive, got {value}")
        if not self.torso_len + self.leg_len < self.stature:
            raise ValidationError(
                f"torso_len + leg_len must be below stature "
                f"({self.torso_len} + {self.leg_len} vs {self.stature})")

    def to_dict(self) -> dict:
        return {
            "sex": self.sex, "stature": self.stature, "torso_len": self.torso_len,
            "leg_len": self.leg_len, "arm_len": self.arm_len,
            "waist_circ": self.waist_circ, "pelvis_circ": self.pelvis_circ,
            "shoulder_width": self.shoulder_width,
            "aux_girths": dict(self.aux_girths), "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BodySpec":
        return cls(**data)


class GenerationRanges:
    """Per-sex [min, max] sampling ranges for every BodySpec parameter."""

    def __init__(self, tables: dict):
        self.tables = {
            sex: {name: (float(lo), float(hi)) for name, (lo, hi) in params.items()}
            for sex, params in tables.items()
        }
        self.validate()

    def validate(self) -> None:
        for sex in SEXES:
            if sex not in self.tables:
                raise ConfigurationError(f"ranges must define a {sex!r} table")
            params = self.tables[sex]
            for name in RANGE_PARAM_NAMES:
                if name not in params:
                    raise ConfigurationError(f"{sex} ranges missing parameter {name!r}")
                lo, hi = params[name]
                if not (np.isfinite(lo) and np.isfinite(hi)):
                    raise ConfigurationError(f"{sex}.{name} range must be finite")
                if lo <= 0:
                    raise ConfigurationError(f"{sex}.{name} range must be positive, got min {lo}")
                if lo > hi:
                    raise ConfigurationError(f"{sex}.{name} range is inverted: [{lo}, {hi}]")
            st_lo, st_hi = params["stature"]
            for seg, (f_lo, f_hi) in (("torso_len", TORSO_STATURE_FRACTION),
                                      ("leg_len", LEG_STATURE_FRACTION)):
                lo, hi = params[seg]
                if f_lo * st_hi > hi:
                    raise ConfigurationError(
                        f"{sex}.{seg} max {hi} cannot reach {f_lo} x stature for "
                        f"stature {st_hi}; widen the {seg} range")
                if lo > f_hi * st_lo:
                    raise ConfigurationError(
                        f"{sex}.{seg} min {lo} exceeds {f_hi} x stature for "
                        f"stature {st_lo}; widen the stature range")

    def span(self, sex: str, name: str):
        return self.tables[sex][name]

    def to_dict(self) -> dict:
        return {sex: {k: list(v) for k, v in params.items()}
                for sex, params in self.tables.items()}

    @classmethod
    def from_file(cls, path) -> "GenerationRanges":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read ranges file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"ranges file {path} is not valid JSON: {exc}") from exc
        return cls(data)

    @classmethod
    def default(cls) -> "GenerationRanges":
        text = resources.files("bodymetry.configs").joinpath(
            "default_ranges.json").read_text(encoding="utf-8")
        return cls(json.loads(text))


def _derive_seed(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def sample_body_spec(sex: str, seed: int, ranges: GenerationRanges) -> BodySpec:
    """Deterministically sample a BodySpec from per-sex ranges.

    Torso and leg lengths are additionally clamped to fixed fractions of the
    sampled stature (see TORSO_STATURE_FRACTION / LEG_STATURE_FRACTION), which
    keeps every sampled value inside its configured range while guaranteeing
    the geometric margins the builder relies on.
    """
    if sex not in SEXES:
        raise ConfigurationError(f"sex must be one of {SEXES}, got {sex!r}")
    rng = np.random.default_rng(_derive_seed(f"bodymetry-spec:{sex}:{seed}"))

    def draw(lo: float, hi: float) -> float:
        return float(lo + rng.random() * (hi - lo))

    st_lo, st_hi = ranges.span(sex, "stature")
    stature = draw(st_lo, st_hi)

    def draw_clamped(name: str, fractions) -> float:
        lo, hi = ranges.span(sex, name)
        lo = max(lo, fractions[0] * stature)
        hi = min(hi, fractions[1] * stature)
        if lo > hi:
            raise ConfigurationError(
                f"{sex}.{name} range is incompatible with stature {stature:.1f}")
        return draw(lo, hi)

    torso_len = draw_clamped("torso_len", TORSO_STATURE_FRACTION)
    leg_len = draw_clamped("leg_len", LEG_STATURE_FRACTION)
    arm_len = draw(*ranges.span(sex, "arm_len"))
    waist_circ = draw(*ranges.span(sex, "waist_circ"))
    pelvis_circ = draw(*ranges.span(sex, "pelvis_circ"))
    shoulder_width = draw(*ranges.span(sex, "shoulder_width"))
    aux = {name: draw(*ranges.span(sex, name)) for name in AUX_GIRTH_NAMES}

    spec = BodySpec(sex=sex, stature=stature, torso_len=torso_len,
                    leg_len=leg_len, arm_len=arm_len, waist_circ=waist_circ,
                    pelvis_circ=pelvis_circ, shoulder_width=shoulder_width,
                    aux_girths=aux, seed=seed)
    spec.validate()
    return spec


def _superellipse(exponent: float, aspect: float, resolution: int) -> np.ndarray:
    """Unit superellipse polygon (half-width 1, half-depth ``aspect``)."""
    theta = np.linspace(0.0, 2.0 * np.pi, resolution, endpoint=False)
    c, s = np.cos(theta), np.sin(theta)
    power = 2.0 / exponent
    us = np.sign(c) * np.abs(c) ** power
    vs = aspect * np.sign(s) * np.abs(s) ** power
    return np.column_stack((us, vs))


def _polygon_perimeter(pts: np.ndarray) -> float:
    diff = np.diff(np.vstack([pts, pts[:1]]), axis=0)
    return float(np.sum(np.hypot(diff[:, 0], diff[:, 1])))


class _PartBuilder:
    def __init__(self):
        self.vertex_blocks = []
        self.face_blocks = []
        self.offset = 0

    def add_loft(self, rings, shape: np.ndarray, axis: int, center) -> None:
        """Capped loft. rings: ascending (level, perimeter) control points;
        shape: unit polygon; axis: 0 (X) or 1 (Y); center: the two in-plane
        center coordinates (the coordinates other than ``axis`` in x,y,z
        order)."""
        res = shape.shape[0]
        unit_perimeter = _polygon_perimeter(shape)
        levels = [lvl for lvl, _ in rings]
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValidationError(f"loft ring levels must be ascending, got {levels}")

        verts = []
        for level, perimeter in rings:
            scale = perimeter / unit_perimeter
            ring = np.empty((res, 3))
            plane = [i for i in range(3) if i != axis]
            ring[:, axis] = level
            ring[:, plane[0]] = center[0] + scale * shape[:, 0]
            ring[:, plane[1]] = center[1] + scale * shape[:, 1]
            verts.append(ring)
        nrings = len(rings)
        vertices = np.vstack(verts)

        k = np.arange(res, dtype=np.int32)
        kn = np.roll(k, -1)
        faces = []
        for r in range(nrings - 1):
            a = r * res + k
            b = r * res + kn
            c = (r + 1) * res + kn
            d = (r + 1) * res + k
            faces.append(np.column_stack((a, b, c)))
            faces.append(np.column_stack((a, c, d)))

        # End caps: triangle fans around in-plane apex vertices.
        lo_apex = np.zeros(3)
        lo_apex[axis] = rings[0][0]
        lo_apex[[i for i in range(3) if i != axis]] = center
        hi_apex = lo_apex.copy()
        hi_apex[axis] = rings[-1][0]
        apex_lo = nrings * res
        apex_hi = apex_lo + 1
        vertices = np.vstack([vertices, lo_apex[None, :], hi_apex[None, :]])
        faces.append(np.column_stack((np.full(res, apex_lo, dtype=np.int32), kn, k)))
        top = (nrings - 1) * res
        faces.append(np.column_stack((np.full(res, apex_hi, dtype=np.int32),
                                      top + k, top + kn)))

        self.vertex_blocks.append(vertices)
        self.face_blocks.append(np.vstack(faces).astype(np.int32) + self.offset)
        self.offset += vertices.shape[0]

    def build(self, skeleton: Skeleton) -> BodyMesh:
        return BodyMesh(np.vstack(self.vertex_blocks),
                        np.vstack(self.face_blocks), skeleton)


def _mirror_x(builder: _PartBuilder, n_blocks: int) -> None:
    """Duplicate the last ``n_blocks`` part blocks mirrored across x=0."""
    for vb, fb in list(zip(builder.vertex_blocks[-n_blocks:],
                           builder.face_blocks[-n_blocks:])):
        mirrored = vb.copy()
        mirrored[:, 0] = -mirrored[:, 0]
        builder.vertex_blocks.append(mirrored)
        builder.face_blocks.append(fb - fb.min() + builder.offset)
        builder.offset += mirrored.shape[0]


def build_body(spec: BodySpec, resolution: int = 64) -> BodyMesh:
    """Build the T-pose mesh and skeleton for a BodySpec.

    resolution is the number of segments per cross-section ring. Joint
    distances (neck-pelvis, pelvis-ankle, shoulder-wrist) are exact; the
    waist/pelvis girths and the banded auxiliary girths are exact up to the
    extremal-search grid of the measuring side.
    """
    if not isinstance(resolution, int) or resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be an integer >= {MIN_RESOLUTION}, "
                         f"got {resolution}")
    spec.validate()

    st = spec.stature
    torso = spec.torso_len
    aux = spec.aux_girths
    waist = spec.waist_circ
    hips = spec.pelvis_circ

    thigh_r = aux["thigh"] / (2.0 * np.pi)
    leg_x = LEG_SPACING_FACTOR * thigh_r
    if leg_x >= 0.5 * spec.leg_len:
        raise ValidationError(
            f"thigh girth {aux['thigh']} is too large for leg length {spec.leg_len}")
    pelvis_y = float(np.sqrt(spec.leg_len ** 2 - leg_x ** 2))
    neck_y = pelvis_y + torso
    if neck_y >= st:
        raise ValidationError(
            "torso and legs leave no room for the head; reduce torso_len/leg_len")
    hip_y = pelvis_y - HIP_DROP_FRACTION * st
    mid_spine_y = (pelvis_y + neck_y) / 2.0
    shoulder_y = neck_y - SHOULDER_DROP_FRACTION * st
    sw2 = spec.shoulder_width / 2.0

    skeleton = Skeleton({
        "pelvis": (0.0, pelvis_y, 0.0),
        "neck": (0.0, neck_y, 0.0),
        "mid_spine": (0.0, mid_spine_y, 0.0),
        "hip_left": (-leg_x, hip_y, 0.0),
        "hip_right": (leg_x, hip_y, 0.0),
        "shoulder_left": (-sw2, shoulder_y, 0.0),
        "shoulder_right": (sw2, shoulder_y, 0.0),
        "wrist_left": (-(sw2 + spec.arm_len), shoulder_y, 0.0),
        "wrist_right": (sw2 + spec.arm_len, shoulder_y, 0.0),
        "ankle_left": (-leg_x, 0.0, 0.0),
        "ankle_right": (leg_x, 0.0, 0.0),
    })
    skeleton.validate()

    band = FLAT_BAND_FRACTION * st
    seat_y = (hip_y + pelvis_y) / 2.0
    chest_y = pelvis_y + CHEST_FRACTION * torso
    # Effective girths: the chest control ring must stay above the waist V so
    # the waist stays the band minimum even for waist-heavy specs.
    chest_eff = max(aux["chest"], 1.035 * waist)
    v_below = max(1.05 * waist, 0.965 * hips)
    v_above = max(1.05 * waist, chest_eff)

    torso_rings = [
        (hip_y - CROTCH_DROP_FRACTION * st, 0.90 * hips),
        (seat_y - band, hips),
        (seat_y + band, hips),
        (pelvis_y, 0.965 * hips),
        (mid_spine_y - WAIST_V_SPAN * (mid_spine_y - pelvis_y), v_below),
        (mid_spine_y - band, waist),
        (mid_spine_y + band, waist),
        (mid_spine_y + WAIST_V_SPAN * (chest_y - mid_spine_y), v_above),
        (chest_y, chest_eff),
        (neck_y, aux["neck"]),
    ]

    crown = st - neck_y
    head_rings = [
        (neck_y, aux["neck"]),
        (neck_y + 0.30 * crown, aux["neck"]),
        (neck_y + 0.50 * crown, aux["head"]),
        (neck_y + 0.78 * crown, aux["head"]),
        (neck_y + 0.95 * crown, 0.45 * aux["head"]),
        (st, 0.10 * aux["head"]),
    ]

    leg_span = hip_y
    leg_band = 1.5 * FLAT_BAND_FRACTION * leg_span
    leg_rings = [
        (0.0, aux["ankle"]),
        (3.0 * ANKLE_ZONE := None, None),
    ]
    del leg_rings
    ankle_zone_top = 3.0 * FLAT_BAND_FRACTION * leg_span * 2.0
    leg_rings = [
        (0.0, aux["ankle"]),
        (ankle_zone_top, aux["ankle"]),
        (CALF_FRACTION * leg_span - leg_band, aux["calf"]),
        (CALF_FRACTION * leg_span + leg_band, aux["calf"]),
        (THIGH_FRACTION * leg_span - leg_band, aux["thigh"]),
        (THIGH_FRACTION * leg_span + leg_band, aux["thigh"]),
        (hip_y - LEG_TOP_GAP_FRACTION * st, 1.04 * aux["thigh"]),
    ]

    torso_unit = _superellipse(*TORSO_SHAPE, resolution)
    head_unit = _superellipse(*HEAD_SHAPE, resolution)
    limb_unit = _superellipse(*LIMB_SHAPE, resolution)

    # Torso half-width at the arm axis, to root the arms inside the surface.
    torso_perims = np.array([p for _, p in torso_rings])
    torso_levels = np.array([lvl for lvl, _ in torso_rings])
    p_shoulder = float(np.interp(shoulder_y, torso_levels, torso_perims))
    half_width = p_shoulder / _polygon_perimeter(torso_unit)

    arm_len = spec.arm_len
    arm_band = 2.0 * FLAT_BAND_FRACTION * arm_len
    x_root = min(0.85 * half_width, sw2 + 0.08 * arm_len)
    arm_rings = [
        (x_root, 1.06 * aux["bicep"]),
        (sw2 + (BICEP_FRACTION - 0.02) * arm_len, aux["bicep"]),
        (sw2 + (BICEP_FRACTION + 0.02) * arm_len, aux["bicep"]),
        (sw2 + (FOREARM_FRACTION - 0.02) * arm_len, aux["forearm"]),
        (sw2 + (FOREARM_FRACTION + 0.02) * arm_len, aux["forearm"]),
        (sw2 + (WRIST_FRACTION - 0.02) * arm_len, aux["wrist"]),
        (sw2 + arm_len, aux["wrist"]),
    ]
    del arm_band

    builder = _PartBuilder()
    builder.add_loft(torso_rings, torso_unit, axis=1, center=(0.0, 0.0))
    builder.add_loft(head_rings, head_unit, axis=1, center=(0.0, 0.0))
    builder.add_loft(leg_rings, limb_unit, axis=1, center=(leg_x, 0.0))
    _mirror_x(builder, 1)
    builder.add_loft(arm_rings, limb_unit, axis=0, center=(shoulder_y, 0.0))
    _mirror_x(builder, 1)

    mesh = builder.build(skeleton)
    mesh.validate()
    return mesh
