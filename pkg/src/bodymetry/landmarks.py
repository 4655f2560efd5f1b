"""Body landmark conventions.

Every measurement level is derived from skeleton joints and the mesh bounding
box with the fixed fractions below. The generator places its constant-girth
ring bands around the same levels, which is what makes construction and
extraction agree on the auxiliary girths. All formulas are affine in the
joint coordinates, so measurements inherit translation invariance and scale
equivariance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Skeleton

# Fraction of the pelvis->neck span at which the chest girth is taken.
CHEST_FRACTION = 0.74
# Fractions of the ankle->hip span for the leg girths.
THIGH_FRACTION = 0.80
CALF_FRACTION = 0.32
ANKLE_FRACTION = 0.02
# Fractions of the neck->crown span for neck and head girths.
NECK_GIRTH_FRACTION = 0.10
HEAD_GIRTH_FRACTION = 0.64
# Positions along the arm (shoulder->wrist) for the arm girths.
BICEP_FRACTION = 0.13
FOREARM_FRACTION = 0.55
WRIST_FRACTION = 0.98
# Half-width of the constant-girth bands the generator builds around each
# girth level, as a fraction of the relevant span (stature for the torso,
# limb length for limbs). Keeps single-plane girth slices exact.
FLAT_BAND_FRACTION = 0.01


@dataclass(frozen=True)
class BodyLandmarks:
    """Named Y levels (cm) and arm X offsets used by measure_all."""

    mid_spine_y: float
    seat_y: float
    hip_y: float
    pelvis_y: float
    chest_y: float
    neck_y: float
    thigh_y: float
    calf_y: float
    ankle_girth_y: float
    neck_girth_y: float
    head_girth_y: float
    bicep_x: float      # distance outward from the shoulder joint
    forearm_x: float
    wrist_x: float


def body_landmarks(skeleton: Skeleton, y_top: float) -> BodyLandmarks:
    pelvis_y = float(skeleton.joint("pelvis")[1])
    neck_y = float(skeleton.joint("neck")[1])
    hip_y = float(skeleton.joint("hip_left")[1])
    ankle_y = float(skeleton.joint("ankle_left")[1])
    shoulder = skeleton.joint("shoulder_left")
    wrist = skeleton.joint("wrist_left")
    arm_len = float(abs(wrist[0] - shoulder[0]))

    leg_span = hip_y - ankle_y
    crown_span = y_top - neck_y
    return BodyLandmarks(
        mid_spine_y=(pelvis_y + neck_y) / 2.0,
        seat_y=(hip_y + pelvis_y) / 2.0,
        hip_y=hip_y,
        pelvis_y=pelvis_y,
        chest_y=pelvis_y + CHEST_FRACTION * (neck_y - pelvis_y),
        neck_y=neck_y,
        thigh_y=ankle_y + THIGH_FRACTION * leg_span,
        calf_y=ankle_y + CALF_FRACTION * leg_span,
        ankle_girth_y=ankle_y + ANKLE_FRACTION * leg_span,
        neck_girth_y=neck_y + NECK_GIRTH_FRACTION * crown_span,
        head_girth_y=neck_y + HEAD_GIRTH_FRACTION * crown_span,
        bicep_x=BICEP_FRACTION * arm_len,
        forearm_x=FOREARM_FRACTION * arm_len,
        wrist_x=WRIST_FRACTION * arm_len,
    )
