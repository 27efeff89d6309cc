"""Network emulation: cyclic bandwidth schedules and round-trip time.

Bandwidth follows a deterministic step profile (a fixed list of levels, each
held for a fixed dwell, repeating forever), so every run sees the exact same
schedule regardless of seed. RTT is base latency plus an optional lognormal
jitter draw; the jitter is the only stochastic part of the network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

# default variable schedule: five levels, 60 s each, 300 s cycle
DEFAULT_LEVELS_MBPS = (1000.0, 500.0, 100.0, 10.0, 1.0)
DEFAULT_DWELL_S = 60.0


@dataclass(frozen=True)
class BandwidthProfile:
    """Cyclic step schedule of uplink bandwidth.

    levels_mbps: bandwidth level per phase, visited in order and repeated.
    dwell_s: seconds spent on each level.
    """

    levels_mbps: tuple[float, ...] = DEFAULT_LEVELS_MBPS
    dwell_s: float = DEFAULT_DWELL_S

    def __post_init__(self):
        if not isinstance(self.levels_mbps, (tuple, list)):
            raise ValueError(
                f"levels_mbps must be a sequence of bandwidths: {self.levels_mbps!r}"
            )
        if not self.levels_mbps:
            raise ValueError("profile needs at least one bandwidth level")
        if any(b <= 0 for b in self.levels_mbps):
            raise ValueError(f"bandwidth levels must be positive: {self.levels_mbps}")
        if self.dwell_s <= 0:
            raise ValueError(f"dwell must be positive: {self.dwell_s}")

    @property
    def cycle_s(self) -> float:
        return len(self.levels_mbps) * self.dwell_s

    def describe(self) -> str:
        if len(self.levels_mbps) == 1:
            return f"stable({self.levels_mbps[0]:g}Mbps)"
        levels = ",".join(f"{b:g}" for b in self.levels_mbps)
        return f"cycle([{levels}]Mbps,dwell={self.dwell_s:g}s)"


def stable_profile(mbps: float = 1000.0) -> BandwidthProfile:
    """Constant-bandwidth profile."""
    return BandwidthProfile(levels_mbps=(float(mbps),), dwell_s=DEFAULT_DWELL_S)


def cycle_profile() -> BandwidthProfile:
    """The default five-level variable profile."""
    return BandwidthProfile()


def bandwidth_at(profile: BandwidthProfile, t_s: float) -> float:
    """Bandwidth in Mbps at absolute time t_s (seconds).

    Dwell boundaries belong to the next phase: t == dwell is level index 1.
    """
    if t_s < 0:
        raise ValueError(f"time must be non-negative: {t_s}")
    idx = int(t_s // profile.dwell_s) % len(profile.levels_mbps)
    return profile.levels_mbps[idx]


class RttDistribution(Enum):
    NONE = "none"
    LOGNORMAL = "lognormal"


@dataclass(frozen=True)
class RttModel:
    """Round-trip time: base plus non-negative lognormal jitter.

    jitter = jitter_scale_ms * exp(sigma * Z), Z ~ N(0, 1), so jitter_scale_ms
    is the jitter median and sigma sets the tail weight. Defaults are
    calibrated so that an offloaded full-quality frame at high stable
    bandwidth sits right at the motion-to-photon threshold and goes over it
    on roughly a quarter of draws, while the tail stays light enough that
    reduced-quality offloading is effectively always compliant.
    """

    base_ms: float = 5.0
    jitter_scale_ms: float = 0.065
    sigma: float = 1.6
    distribution: RttDistribution = RttDistribution.LOGNORMAL

    def __post_init__(self):
        if self.base_ms < 0:
            raise ValueError(f"base RTT must be non-negative: {self.base_ms}")
        if self.jitter_scale_ms < 0 or self.sigma < 0:
            raise ValueError("jitter parameters must be non-negative")

    def jitter_mean_ms(self) -> float:
        """Analytic mean of the jitter distribution."""
        if self.distribution is RttDistribution.NONE:
            return 0.0
        return self.jitter_scale_ms * math.exp(self.sigma**2 / 2.0)

    def mean_ms(self) -> float:
        """Analytic mean RTT."""
        return self.base_ms + self.jitter_mean_ms()

    def jitter_excess_mean_ms(self, threshold_ms: float) -> float:
        """E[(jitter - threshold)+], the expected exceedance above a threshold.

        Closed form for the lognormal; used by model-based policies to price
        the violation risk of an action without sampling.
        """
        if self.distribution is RttDistribution.NONE:
            return max(0.0, -threshold_ms)
        if threshold_ms <= 0.0:
            return self.jitter_mean_ms() - threshold_ms
        s, sig = self.jitter_scale_ms, self.sigma
        if s == 0.0 or sig == 0.0:
            return max(0.0, s - threshold_ms)
        z = math.log(threshold_ms / s) / sig
        return self.jitter_mean_ms() * _phi(sig - z) - threshold_ms * _phi(-z)


def _phi(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def rtt_sample(model: RttModel, rng: np.random.Generator) -> float:
    """Draw one RTT in ms."""
    if model.distribution is RttDistribution.NONE:
        return model.base_ms
    jitter = model.jitter_scale_ms * math.exp(model.sigma * rng.standard_normal())
    return model.base_ms + jitter


def load_profile(path: str | Path) -> BandwidthProfile:
    """Read a bandwidth profile from a plain-text file.

    Format: one "<mbps> <dwell_s>" pair per line; blank lines and lines
    starting with '#' are ignored. All dwells must be equal because the
    schedule holds every level for the same duration.
    """
    levels: list[float] = []
    dwells: list[float] = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected '<mbps> <dwell_s>', got {raw!r}")
        try:
            levels.append(float(parts[0]))
            dwells.append(float(parts[1]))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-numeric entry in {raw!r}") from exc
    if not levels:
        raise ValueError(f"{path}: no bandwidth levels found")
    if any(d != dwells[0] for d in dwells):
        raise ValueError(f"{path}: all dwell values must be equal, got {dwells}")
    return BandwidthProfile(levels_mbps=tuple(levels), dwell_s=dwells[0])
