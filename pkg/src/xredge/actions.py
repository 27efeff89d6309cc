"""Discrete execution-configuration space of the XR client.

Three knobs: camera image quality (3 levels), IMU sampling rate (3 levels),
execution mode (local or offloaded VIO). Their cross product gives 18
configurations. Action ids iterate IMU rate outermost (HIGH, MEDIUM, LOW),
image quality next (LOW, MEDIUM, HIGH) and execution mode innermost
(LOCAL, OFFLOAD), so id 0 is (HIGH imu, LOW quality, LOCAL) and id 17 is
(LOW imu, HIGH quality, OFFLOAD).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum


class QualityLevel(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class ImuRate(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class ExecutionMode(IntEnum):
    LOCAL = 0
    OFFLOAD = 1


# camera resolution per quality level (width, height)
RESOLUTION = {
    QualityLevel.LOW: (376, 240),
    QualityLevel.MEDIUM: (564, 360),
    QualityLevel.HIGH: (752, 480),
}

# IMU sampling frequency per rate level
IMU_RATE_HZ = {
    ImuRate.LOW: 100,
    ImuRate.MEDIUM: 150,
    ImuRate.HIGH: 200,
}

N_ACTIONS = 18

# id layout: imu outermost (HIGH, MEDIUM, LOW), quality next (LOW, MEDIUM,
# HIGH), mode innermost (LOCAL, OFFLOAD)
_IMU_ORDER = (ImuRate.HIGH, ImuRate.MEDIUM, ImuRate.LOW)
_QUALITY_ORDER = (QualityLevel.LOW, QualityLevel.MEDIUM, QualityLevel.HIGH)


@dataclass(frozen=True)
class ExecutionConfig:
    """One point of the action space."""

    quality: QualityLevel
    imu: ImuRate
    mode: ExecutionMode


def quality_scale(quality: QualityLevel) -> float:
    """Pixel-count ratio of `quality` relative to the HIGH resolution.

    Scales everything that is proportional to image size: frame payload,
    processing time, server-side inference time.
    """
    w, h = RESOLUTION[quality]
    w_hi, h_hi = RESOLUTION[QualityLevel.HIGH]
    return (w * h) / (w_hi * h_hi)


def decode_action(action_id: int) -> ExecutionConfig:
    """Map an integer action id (0..17) to its execution configuration."""
    if not isinstance(action_id, (int,)) or isinstance(action_id, bool):
        raise ValueError(f"action id must be an int, got {action_id!r}")
    if not 0 <= action_id < N_ACTIONS:
        raise ValueError(f"action id out of range [0, {N_ACTIONS}): {action_id}")
    imu = _IMU_ORDER[action_id // 6]
    quality = _QUALITY_ORDER[(action_id % 6) // 2]
    mode = ExecutionMode(action_id % 2)
    return ExecutionConfig(quality=quality, imu=imu, mode=mode)


def encode_action(cfg: ExecutionConfig) -> int:
    """Inverse of decode_action."""
    return (
        _IMU_ORDER.index(cfg.imu) * 6
        + _QUALITY_ORDER.index(cfg.quality) * 2
        + int(cfg.mode)
    )


def all_configs() -> list[ExecutionConfig]:
    """All 18 configurations in action-id order."""
    return [decode_action(i) for i in range(N_ACTIONS)]
