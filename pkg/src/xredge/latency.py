"""Motion-to-photon latency model.

Local execution: MTP is the on-device VIO processing time (scaled by image
size and IMU-rate pressure) plus a fixed capture/render overhead.

Offloaded execution: captured frames enter a bounded FIFO uplink queue and
are serialized at the current bandwidth; a delivered frame's MTP is its
queueing+transmission time plus RTT, server inference, decode, and the
client-side encode cost. The pose return path rides on the RTT term (pose
payloads are negligible next to image payloads).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import ExecutionConfig, ExecutionMode, ImuRate, QualityLevel, quality_scale

# VIO pipeline pressure multiplier per IMU rate: higher inertial rates mean
# more filter updates per frame
DEFAULT_RHO = {
    ImuRate.HIGH: 1.0,
    ImuRate.MEDIUM: 0.85,
    ImuRate.LOW: 0.7,
}


@dataclass(frozen=True)
class ProcTimeTable:
    """Processing-time constants, all in milliseconds at HIGH quality.

    t0_local_ms: full on-device VIO time per frame.
    t0_encode_ms: client-side encode/stream cost per frame when offloading.
    t_server_ms: server-side inference time per frame.
    t_decode_ms: server-side decode time per frame.
    overhead_ms: camera capture plus render/display overhead.
    rho: per-IMU-rate multiplier on local processing time.
    """

    t0_local_ms: float = 29.0
    t0_encode_ms: float = 10.0
    t_server_ms: float = 8.0
    t_decode_ms: float = 1.0
    overhead_ms: float = 1.0
    rho: dict[ImuRate, float] = field(default_factory=lambda: dict(DEFAULT_RHO))


@dataclass(frozen=True)
class FrameSizeModel:
    """Uplink payload per frame: d_base_mbit at HIGH quality, pixel-scaled below."""

    d_base_mbit: float = 5.8

    def payload_mbit(self, quality: QualityLevel) -> float:
        return self.d_base_mbit * quality_scale(quality)


def proc_time(cfg: ExecutionConfig, table: ProcTimeTable) -> float:
    """Client-side processing time per frame in ms.

    LOCAL: full VIO, scaled by pixel count and IMU-rate pressure.
    OFFLOAD: encode/stream only, scaled by pixel count.
    """
    phi = quality_scale(cfg.quality)
    if cfg.mode is ExecutionMode.LOCAL:
        return table.t0_local_ms * phi * table.rho[cfg.imu]
    return table.t0_encode_ms * phi


def mtp_local(cfg: ExecutionConfig, table: ProcTimeTable) -> float:
    """Motion-to-photon latency of a locally processed frame in ms."""
    if cfg.mode is not ExecutionMode.LOCAL:
        raise ValueError("mtp_local is defined for LOCAL configurations")
    return proc_time(cfg, table) + table.overhead_ms


def net_delay(
    quality: QualityLevel,
    bandwidth_mbps: float,
    rtt_ms: float,
    frame: FrameSizeModel,
) -> float:
    """Uplink serialization plus RTT for one frame, in ms.

    The downlink pose return is not separately modeled; it is covered by the
    round-trip term.
    """
    if bandwidth_mbps <= 0:
        raise ValueError(f"bandwidth must be positive: {bandwidth_mbps}")
    serialization_ms = frame.payload_mbit(quality) / bandwidth_mbps * 1000.0
    return serialization_ms + rtt_ms


def violation(mtp_ms: float, tau_ms: float) -> float:
    """Relative threshold excess: max(0, (MTP - tau) / tau)."""
    if tau_ms <= 0:
        raise ValueError(f"threshold must be positive: {tau_ms}")
    return max(0.0, (mtp_ms - tau_ms) / tau_ms)


@dataclass
class QueuedFrame:
    t_capture: float
    quality: QualityLevel
    remaining_mbit: float


@dataclass(frozen=True)
class DeliveredFrame:
    t_capture: float
    t_deliver: float
    quality: QualityLevel
    mtp_ms: float


class UplinkQueue:
    """Bounded FIFO of frames awaiting uplink transmission.

    When a frame arrives at a full queue the oldest queued frame is dropped
    (newest data is the most valuable for pose estimation). Partial
    transmissions carry over between drain calls, which is what produces
    stale, high-MTP deliveries right after a congested period.
    """

    def __init__(self, max_depth: int = 20):
        if max_depth < 1:
            raise ValueError(f"max_depth must be >= 1: {max_depth}")
        self.max_depth = max_depth
        self.frames: list[QueuedFrame] = []
        self.enqueued = 0
        self.delivered = 0
        self.dropped = 0

    @property
    def depth(self) -> int:
        return len(self.frames)

    @property
    def backlog_mbit(self) -> float:
        return sum(f.remaining_mbit for f in self.frames)

    def enqueue(self, t_capture: float, quality: QualityLevel, payload_mbit: float) -> int:
        """Add a frame; returns the number of frames dropped to make room."""
        if payload_mbit <= 0:
            raise ValueError(f"payload must be positive: {payload_mbit}")
        self.frames.append(QueuedFrame(t_capture, quality, payload_mbit))
        self.enqueued += 1
        drops = 0
        while len(self.frames) > self.max_depth:
            self.frames.pop(0)
            drops += 1
        self.dropped += drops
        return drops

    def flush(self) -> int:
        """Drop everything pending; returns the number of frames dropped."""
        n = len(self.frames)
        self.frames.clear()
        self.dropped += n
        return n

    def drain(
        self,
        bandwidth_mbps: float,
        rtt_ms: float,
        dt_s: float,
        t_start: float,
        table: ProcTimeTable,
    ) -> list[DeliveredFrame]:
        """Transmit at bandwidth_mbps for dt_s seconds starting at t_start.

        Frames that finish serializing are delivered; a delivered frame's MTP
        is queueing+transmission age plus RTT, server inference, decode, and
        the client encode cost (the last three scale with the frame's pixel
        count). The head frame's partial progress is kept if the budget runs
        out mid-frame.
        """
        if bandwidth_mbps <= 0:
            raise ValueError(f"bandwidth must be positive: {bandwidth_mbps}")
        if dt_s < 0:
            raise ValueError(f"dt must be non-negative: {dt_s}")
        budget_mbit = bandwidth_mbps * dt_s
        elapsed_s = 0.0
        out: list[DeliveredFrame] = []
        while self.frames and budget_mbit > 0.0:
            head = self.frames[0]
            if head.remaining_mbit <= budget_mbit:
                elapsed_s += head.remaining_mbit / bandwidth_mbps
                budget_mbit -= head.remaining_mbit
                t_deliver = t_start + elapsed_s
                phi = quality_scale(head.quality)
                mtp = (
                    (t_deliver - head.t_capture) * 1000.0
                    + rtt_ms
                    + table.t_server_ms * phi
                    + table.t_decode_ms
                    + table.t0_encode_ms * phi
                )
                out.append(DeliveredFrame(head.t_capture, t_deliver, head.quality, mtp))
                self.frames.pop(0)
                self.delivered += 1
            else:
                head.remaining_mbit -= budget_mbit
                budget_mbit = 0.0
        return out
