"""Parametric figure pose: joint angles, shape multipliers and a 2D camera.

The 19-parameter vector is the conditioning analogue of a full parametric
body model: 12 scalar joint rotations, 4 shape multipliers and 3 camera
parameters (horizontal/vertical translation plus zoom).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

JOINT_NAMES = (
    "neck",
    "head",
    "shoulder_l",
    "shoulder_r",
    "elbow_l",
    "elbow_r",
    "hip_l",
    "hip_r",
    "knee_l",
    "knee_r",
    "torso_lean",
    "global_rot",
)

SHAPE_NAMES = ("limb_len", "limb_width", "torso_len", "head_size")

# Per-joint limits (radians). Chosen so the full figure stays inside the
# frame at zoom <= 1.3 with centred camera; checked by a stress test.
JOINT_RANGES = {
    "neck": (-0.25, 0.25),
    "head": (-0.35, 0.35),
    "shoulder_l": (-0.40, 0.65),
    "shoulder_r": (-0.40, 0.65),
    "elbow_l": (-1.60, 0.00),
    "elbow_r": (-1.60, 0.00),
    "hip_l": (-0.45, 0.60),
    "hip_r": (-0.45, 0.60),
    "knee_l": (-0.90, 0.20),
    "knee_r": (-0.90, 0.20),
    "torso_lean": (-0.30, 0.30),
    "global_rot": (-0.22, 0.22),
}

SHAPE_RANGE = (0.8, 1.2)
TRANSLATION_RANGE = (-0.2, 0.2)
ZOOM_RANGE = (0.7, 1.3)

POSE_DIM = 19


class PoseRangeError(ValueError):
    """A pose field lies outside its documented range."""


@dataclass
class ToyPose:
    """12 joint angles, 4 shape multipliers, camera (tx, ty, zoom)."""

    joint_angles: np.ndarray = field(default_factory=lambda: np.zeros(12))
    shape: np.ndarray = field(default_factory=lambda: np.ones(4))
    camera: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        self.joint_angles = np.asarray(self.joint_angles, dtype=np.float64)
        self.shape = np.asarray(self.shape, dtype=np.float64)
        self.camera = np.asarray(self.camera, dtype=np.float64)
        if self.joint_angles.shape != (12,):
            raise PoseRangeError(f"expected 12 joint angles, got {self.joint_angles.shape}")
        if self.shape.shape != (4,):
            raise PoseRangeError(f"expected 4 shape multipliers, got {self.shape.shape}")
        if self.camera.shape != (3,):
            raise PoseRangeError(f"expected camera (tx, ty, zoom), got {self.camera.shape}")

    def as_vector(self) -> np.ndarray:
        """Flatten to the canonical 19-vector (joints, shape, camera)."""
        return np.concatenate([self.joint_angles, self.shape, self.camera])

    @classmethod
    def from_vector(cls, vec) -> "ToyPose":
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (POSE_DIM,):
            raise PoseRangeError(f"expected a {POSE_DIM}-vector, got shape {vec.shape}")
        return cls(joint_angles=vec[:12], shape=vec[12:16], camera=vec[16:19])

    def angle(self, name: str) -> float:
        return float(self.joint_angles[JOINT_NAMES.index(name)])

    @property
    def tx(self) -> float:
        return float(self.camera[0])

    @property
    def ty(self) -> float:
        return float(self.camera[1])

    @property
    def zoom(self) -> float:
        return float(self.camera[2])

    def validate(self) -> "ToyPose":
        """Raise PoseRangeError unless every field is finite and in range."""
        vec = self.as_vector()
        if not np.all(np.isfinite(vec)):
            raise PoseRangeError("pose contains non-finite values")
        for i, name in enumerate(JOINT_NAMES):
            lo, hi = JOINT_RANGES[name]
            a = self.joint_angles[i]
            if not (lo - 1e-9 <= a <= hi + 1e-9):
                raise PoseRangeError(f"joint {name}={a:.4f} outside [{lo}, {hi}]")
        lo, hi = SHAPE_RANGE
        if np.any(self.shape < lo - 1e-9) or np.any(self.shape > hi + 1e-9):
            raise PoseRangeError(f"shape multipliers {self.shape} outside [{lo}, {hi}]")
        lo, hi = TRANSLATION_RANGE
        if not (lo - 1e-9 <= self.tx <= hi + 1e-9) or not (lo - 1e-9 <= self.ty <= hi + 1e-9):
            raise PoseRangeError(f"translation ({self.tx}, {self.ty}) outside [{lo}, {hi}]")
        lo, hi = ZOOM_RANGE
        if not (lo - 1e-9 <= self.zoom <= hi + 1e-9):
            raise PoseRangeError(f"zoom {self.zoom} outside [{lo}, {hi}]")
        return self

    def clamped(self) -> "ToyPose":
        """Return a copy with every field clamped into its documented range."""
        joints = self.joint_angles.copy()
        for i, name in enumerate(JOINT_NAMES):
            lo, hi = JOINT_RANGES[name]
            joints[i] = min(max(joints[i], lo), hi)
        shape = np.clip(self.shape, *SHAPE_RANGE)
        cam = self.camera.copy()
        cam[0] = min(max(cam[0], TRANSLATION_RANGE[0]), TRANSLATION_RANGE[1])
        cam[1] = min(max(cam[1], TRANSLATION_RANGE[0]), TRANSLATION_RANGE[1])
        cam[2] = min(max(cam[2], ZOOM_RANGE[0]), ZOOM_RANGE[1])
        return ToyPose(joints, shape, cam)


def lerp_pose(a: ToyPose, b: ToyPose, alpha: float) -> ToyPose:
    """Element-wise linear interpolation over all 19 parameters."""
    vec = (1.0 - alpha) * a.as_vector() + alpha * b.as_vector()
    return ToyPose.from_vector(vec)


def sample_pose(rng: np.random.Generator) -> ToyPose:
    """Draw a pose uniformly inside the documented ranges."""
    joints = np.empty(12)
    for i, name in enumerate(JOINT_NAMES):
        lo, hi = JOINT_RANGES[name]
        joints[i] = rng.uniform(lo, hi)
    shape = rng.uniform(*SHAPE_RANGE, size=4)
    camera = np.array([
        rng.uniform(*TRANSLATION_RANGE),
        rng.uniform(*TRANSLATION_RANGE),
        rng.uniform(*ZOOM_RANGE),
    ])
    return ToyPose(joints, shape, camera)
