"""Client power draw and battery state.

Power is a baseline plus a processing term: the fraction of the frame period
spent processing, times the processor's thermal design power. CPU/GPU
utilization proxies exist as weighted hooks but default to zero weight (the
processing term subsumes them at this fidelity).

Battery drain applies a drain-acceleration factor k to the electrical load.
It reconciles nameplate capacity with observed endurance: real headsets lose
wall-clock battery several times faster than capacity/power predicts
(regulator losses, displays, radios, thermal derating). k multiplies drain
everywhere, including lifetime projections.
"""

from __future__ import annotations

from dataclasses import dataclass

from .actions import ExecutionConfig
from .latency import ProcTimeTable, proc_time


@dataclass(frozen=True)
class PowerParams:
    p_base_w: float = 0.5          # idle baseline: sensors, display path
    tdp_proc_w: float = 35.0       # processor thermal design power
    w_proc: float = 1.0            # weight of the processing-duty term
    w_cpu: float = 0.0             # CPU utilization proxy weight (unused default)
    w_gpu: float = 0.0             # GPU utilization proxy weight (unused default)
    p_cpu_w: float = 0.0
    p_gpu_w: float = 0.0
    tau_frame_ms: float = 50.0     # frame period at 20 Hz


def proc_power(cfg: ExecutionConfig, table: ProcTimeTable, params: PowerParams) -> float:
    """Processing power: duty cycle over the frame period times TDP."""
    if params.tau_frame_ms <= 0:
        raise ValueError(f"frame period must be positive: {params.tau_frame_ms}")
    return proc_time(cfg, table) / params.tau_frame_ms * params.tdp_proc_w


def client_power(cfg: ExecutionConfig, table: ProcTimeTable, params: PowerParams) -> float:
    """Total client power draw in watts for a configuration."""
    return (
        params.p_base_w
        + params.w_proc * proc_power(cfg, table, params)
        + params.w_cpu * params.p_cpu_w
        + params.w_gpu * params.p_gpu_w
    )


def soc_step(
    soc: float,
    power_w: float,
    dt_s: float,
    capacity_wh: float,
    drain_factor: float = 1.0,
) -> float:
    """State of charge after drawing power_w for dt_s, clamped at zero.

    drain_factor is the acceleration factor k applied to the electrical load.
    """
    if capacity_wh <= 0:
        raise ValueError(f"capacity must be positive: {capacity_wh}")
    if dt_s < 0:
        raise ValueError(f"dt must be non-negative: {dt_s}")
    if power_w < 0:
        raise ValueError(f"power must be non-negative: {power_w}")
    drop_pct = drain_factor * power_w * dt_s / (capacity_wh * 3600.0) * 100.0
    return max(0.0, soc - drop_pct)


def lifetime_projection(
    soc: float,
    capacity_wh: float,
    power_w: float,
    drain_factor: float = 1.0,
) -> float:
    """Remaining runtime in hours at constant power from the given SoC."""
    if power_w <= 0:
        raise ValueError(f"power must be positive: {power_w}")
    if capacity_wh <= 0:
        raise ValueError(f"capacity must be positive: {capacity_wh}")
    return (soc / 100.0) * capacity_wh / (drain_factor * power_w)


class Battery:
    """Mutable battery state with an energy ledger.

    energy_j accumulates the raw electrical energy actually drawn (before the
    drain-acceleration factor); the conservation identity is
    k * energy_j == (soc0 - soc) / 100 * capacity_j.
    """

    def __init__(self, capacity_wh: float = 16.6, soc: float = 100.0, drain_factor: float = 3.0):
        if capacity_wh <= 0:
            raise ValueError(f"capacity must be positive: {capacity_wh}")
        if not 0.0 <= soc <= 100.0:
            raise ValueError(f"SoC must be within [0, 100]: {soc}")
        if drain_factor <= 0:
            raise ValueError(f"drain factor must be positive: {drain_factor}")
        self.capacity_wh = capacity_wh
        self.drain_factor = drain_factor
        self.soc = float(soc)
        self.energy_j = 0.0

    @property
    def capacity_j(self) -> float:
        return self.capacity_wh * 3600.0

    @property
    def depleted(self) -> bool:
        return self.soc <= 0.0

    def step(self, power_w: float, dt_s: float) -> float:
        """Drain for dt_s at power_w; returns the raw energy consumed in J.

        If the charge runs out mid-step the draw is truncated at the instant
        of depletion, so the returned energy covers only the powered fraction
        of dt_s.
        """
        if power_w < 0:
            raise ValueError(f"power must be non-negative: {power_w}")
        if dt_s < 0:
            raise ValueError(f"dt must be non-negative: {dt_s}")
        if self.depleted or power_w == 0.0 or dt_s == 0.0:
            return 0.0
        drop_pct = self.drain_factor * power_w * dt_s / self.capacity_j * 100.0
        if drop_pct >= self.soc:
            fraction = self.soc / drop_pct
            consumed = power_w * dt_s * fraction
            self.soc = 0.0
        else:
            consumed = power_w * dt_s
            self.soc -= drop_pct
        self.energy_j += consumed
        return consumed
