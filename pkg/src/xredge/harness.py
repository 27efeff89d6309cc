"""Experiment harness: seeded runs, metrics, aggregation, sweeps, traces.

A scenario bundles an environment configuration, a policy name, learner
hyperparameters and a seed list. Each (scenario, seed) run is fully
deterministic and produces a MetricsRecord plus decision/frame traces.
Wall-clock controller latency is recorded separately from the metrics so
that metric files are byte-reproducible.
"""

from __future__ import annotations

import copy
import csv
import json
import time
from dataclasses import asdict, dataclass, field, fields, is_dataclass, replace
from pathlib import Path

import numpy as np

from .actions import ExecutionMode, ImuRate, N_ACTIONS
from .dqn import DqnConfig
from .energy import lifetime_projection
from .environment import EnvConfig, XrEnvironment
from .latency import FrameSizeModel, ProcTimeTable
from .network import (
    BandwidthProfile,
    RttDistribution,
    RttModel,
    bandwidth_at,
    cycle_profile,
    stable_profile,
)
from .policies import RlPolicy, make_policy

METRICS_SCHEMA_VERSION = 1

# fixed trace column orders (documented interface)
DECISION_COLUMNS = [
    "t", "action", "quality", "imu", "mode", "bandwidth_mbps", "rtt_ms",
    "mtp_mean_ms", "v_mean", "power_w", "soc_pct", "reward", "epsilon", "loss",
]
FRAME_COLUMNS = ["t_capture", "mtp_ms", "compliant", "mode"]

# keeps the learner's stream distinct from the environment's for equal seeds
_AGENT_SEED_OFFSET = 7919


@dataclass(frozen=True)
class ScenarioSpec:
    name: str = "scenario"
    policy: str = "rl"
    env: EnvConfig = field(default_factory=EnvConfig)
    dqn: DqnConfig = field(default_factory=DqnConfig)
    seeds: tuple[int, ...] = (1, 2, 3)


@dataclass
class MetricsRecord:
    schema_version: int
    scenario: str
    policy: str
    profile: str
    seed: int
    horizon_s: float
    survived_s: float
    decisions: int
    compliance_pct: float
    avg_power_w: float
    projected_lifetime_min: float
    local_fraction_pct: float
    offload_fraction_pct: float
    compliance_per_watt: float
    objective: float
    violation_sum: float
    frames_captured: int
    frames_delivered: int
    frames_dropped: int
    energy_j: float
    soc_end_pct: float
    per_level_compliance_pct: dict[str, float]
    per_level_frames: dict[str, int]
    action_histogram: list[int]
    # wall-clock controller cost; excluded from the deterministic metrics file
    latency_median_us: float = 0.0
    latency_p95_us: float = 0.0

    def to_metrics_dict(self) -> dict:
        d = asdict(self)
        d.pop("latency_median_us")
        d.pop("latency_p95_us")
        return d

    def to_timing_dict(self) -> dict:
        return {
            "latency_median_us": self.latency_median_us,
            "latency_p95_us": self.latency_p95_us,
        }


@dataclass
class RunResult:
    metrics: MetricsRecord
    decisions: list[dict]
    frames: list[dict]


def run_experiment(spec: ScenarioSpec, seed: int, out_dir: str | Path | None = None) -> RunResult:
    """Execute one seeded run of a scenario; optionally write its artifacts."""
    env = XrEnvironment(spec.env, seed=seed)
    policy = make_policy(spec.policy, spec.dqn, seed=seed + _AGENT_SEED_OFFSET)

    decision_rows: list[dict] = []
    frame_rows: list[dict] = []
    latencies_s: list[float] = []

    env.reset()
    while not env.done:
        t0 = env.t
        tic = time.perf_counter()
        action = policy.select(env)
        toc_select = time.perf_counter()
        outcome = env.step(action)
        tic_learn = time.perf_counter()
        policy.observe_outcome(outcome, env)
        toc_learn = time.perf_counter()
        latencies_s.append((toc_select - tic) + (toc_learn - tic_learn))

        exec_cfg = _decoded(action)
        is_rl = isinstance(policy, RlPolicy)
        decision_rows.append({
            "t": t0,
            "action": action,
            "quality": exec_cfg.quality.value,
            "imu": exec_cfg.imu.value,
            "mode": exec_cfg.mode.name,
            "bandwidth_mbps": bandwidth_at(spec.env.profile, t0),
            "rtt_ms": outcome.info["rtt_ms"],
            "mtp_mean_ms": outcome.info["mtp_mean_ms"],
            "v_mean": outcome.info["mean_v"],
            "power_w": outcome.info["power_w"],
            "soc_pct": outcome.state.soc,
            "reward": outcome.reward,
            "epsilon": policy.epsilon if is_rl else "",
            "loss": (policy.last_loss if policy.last_loss is not None else "") if is_rl else "",
        })
        for f in outcome.frames:
            frame_rows.append({
                "t_capture": f.t_capture,
                "mtp_ms": f.mtp_ms,
                "compliant": int(f.compliant),
                "mode": f.mode.name,
            })

    metrics = _compute_metrics(spec, seed, env, decision_rows, frame_rows, latencies_s)
    result = RunResult(metrics=metrics, decisions=decision_rows, frames=frame_rows)
    if out_dir is not None:
        write_run(Path(out_dir), result)
    return result


def _decoded(action: int):
    from .actions import decode_action

    return decode_action(action)


def _compute_metrics(spec, seed, env, decision_rows, frame_rows, latencies_s) -> MetricsRecord:
    cfg = spec.env
    survived = env.survived_s
    delivered = len(frame_rows)
    compliant = sum(r["compliant"] for r in frame_rows)
    compliance_pct = 100.0 * compliant / delivered if delivered else 0.0
    avg_power = env.battery.energy_j / survived if survived > 0 else 0.0
    lifetime_min = (
        60.0 * lifetime_projection(100.0, cfg.capacity_wh, avg_power, cfg.drain_factor)
        if avg_power > 0
        else float("inf")
    )
    n_dec = len(decision_rows)
    local_dec = sum(1 for r in decision_rows if r["mode"] == "LOCAL")
    local_pct = 100.0 * local_dec / n_dec if n_dec else 0.0
    per_level, per_level_n = per_bandwidth_compliance(frame_rows, cfg.profile)
    histogram = [0] * N_ACTIONS
    for r in decision_rows:
        histogram[r["action"]] += 1
    lat_us = sorted(x * 1e6 for x in latencies_s)
    lat_median = float(np.median(lat_us)) if lat_us else 0.0
    lat_p95 = float(np.percentile(lat_us, 95)) if lat_us else 0.0

    return MetricsRecord(
        schema_version=METRICS_SCHEMA_VERSION,
        scenario=spec.name,
        policy=spec.policy,
        profile=cfg.profile.describe(),
        seed=seed,
        horizon_s=cfg.horizon_s,
        survived_s=survived,
        decisions=n_dec,
        compliance_pct=compliance_pct,
        avg_power_w=avg_power,
        projected_lifetime_min=lifetime_min,
        local_fraction_pct=local_pct,
        offload_fraction_pct=100.0 - local_pct,
        compliance_per_watt=compliance_pct / avg_power if avg_power > 0 else 0.0,
        objective=env.objective(),
        violation_sum=float(sum(env.v_per_epoch)),
        frames_captured=env.frames_captured,
        frames_delivered=delivered,
        frames_dropped=env.queue.dropped,
        energy_j=env.battery.energy_j,
        soc_end_pct=env.battery.soc,
        per_level_compliance_pct=per_level,
        per_level_frames=per_level_n,
        action_histogram=histogram,
        latency_median_us=lat_median,
        latency_p95_us=lat_p95,
    )


def per_bandwidth_compliance(
    frame_rows: list[dict], profile: BandwidthProfile
) -> tuple[dict[str, float], dict[str, int]]:
    """Compliance per bandwidth level, frames bucketed by capture-time level.

    Returns ({level: compliance_pct}, {level: frame_count}); the counts
    partition the delivered frames.
    """
    totals: dict[str, int] = {}
    good: dict[str, int] = {}
    for r in frame_rows:
        level = f"{bandwidth_at(profile, r['t_capture']):g}"
        totals[level] = totals.get(level, 0) + 1
        good[level] = good.get(level, 0) + r["compliant"]
    pct = {k: 100.0 * good[k] / totals[k] for k in totals}
    return pct, totals


def mode_fraction_series(modes: list[str], window: int = 30) -> np.ndarray:
    """Rolling fraction of LOCAL decisions over a trailing window."""
    if window < 1:
        raise ValueError(f"window must be >= 1: {window}")
    is_local = np.array([1.0 if m == "LOCAL" else 0.0 for m in modes])
    out = np.empty(len(is_local))
    csum = np.concatenate([[0.0], np.cumsum(is_local)])
    for i in range(len(is_local)):
        lo = max(0, i - window + 1)
        out[i] = (csum[i + 1] - csum[lo]) / (i + 1 - lo)
    return out


def aggregate_seeds(records: list[MetricsRecord]) -> dict:
    """Median/min/max across seeds for every scalar metric; medians for maps."""
    if not records:
        raise ValueError("no records to aggregate")
    scalars = [
        "survived_s", "decisions", "compliance_pct", "avg_power_w",
        "projected_lifetime_min", "local_fraction_pct", "offload_fraction_pct",
        "compliance_per_watt", "objective", "violation_sum", "frames_captured",
        "frames_delivered", "frames_dropped", "energy_j", "soc_end_pct",
    ]
    out: dict = {
        "schema_version": METRICS_SCHEMA_VERSION,
        "scenario": records[0].scenario,
        "policy": records[0].policy,
        "profile": records[0].profile,
        "seeds": [r.seed for r in records],
    }
    for name in scalars:
        values = [getattr(r, name) for r in records]
        out[name] = {
            "median": float(np.median(values)),
            "min": float(min(values)),
            "max": float(max(values)),
        }
    levels = sorted({k for r in records for k in r.per_level_compliance_pct})
    out["per_level_compliance_pct"] = {
        k: float(np.median([
            r.per_level_compliance_pct[k] for r in records if k in r.per_level_compliance_pct
        ]))
        for k in levels
    }
    return out


def run_scenario(spec: ScenarioSpec, out_dir: str | Path | None = None) -> tuple[list[RunResult], dict]:
    """Run every seed of a scenario; returns per-seed results and the aggregate."""
    results = []
    for seed in spec.seeds:
        seed_dir = Path(out_dir) / spec.name / f"seed_{seed}" if out_dir is not None else None
        results.append(run_experiment(spec, seed, seed_dir))
    agg = aggregate_seeds([r.metrics for r in results])
    if out_dir is not None:
        agg_path = Path(out_dir) / spec.name / "aggregate.json"
        agg_path.parent.mkdir(parents=True, exist_ok=True)
        agg_path.write_text(json.dumps(agg, sort_keys=True, indent=2) + "\n")
    return results, agg


def replace_path(obj, path: str, value):
    """Functional deep-override of a dotted dataclass field path."""
    head, _, rest = path.partition(".")
    if not hasattr(obj, head):
        raise ValueError(f"{type(obj).__name__} has no field {head!r}")
    if rest:
        return replace(obj, **{head: replace_path(getattr(obj, head), rest, value)})
    return replace(obj, **{head: value})


def sweep(
    base: ScenarioSpec,
    param_path: str,
    values: list,
    out_dir: str | Path | None = None,
) -> list[tuple[object, dict]]:
    """One-factor-at-a-time sweep: vary one dotted parameter, rerun all seeds."""
    rows = []
    for v in values:
        spec = replace_path(base, param_path, v)
        spec = replace(spec, name=f"{base.name}__{param_path.replace('.', '_')}_{v}")
        _, agg = run_scenario(spec, out_dir)
        agg["swept_param"] = param_path
        agg["swept_value"] = v
        rows.append((v, agg))
    return rows


# -- artifact writers ------------------------------------------------------


def write_run(out_dir: Path, result: RunResult) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_decision_csv(out_dir / "decisions.csv", result.decisions)
    write_frame_csv(out_dir / "frames.csv", result.frames)
    (out_dir / "metrics.json").write_text(
        json.dumps(result.metrics.to_metrics_dict(), sort_keys=True, indent=2) + "\n"
    )
    (out_dir / "timing.json").write_text(
        json.dumps(result.metrics.to_timing_dict(), sort_keys=True, indent=2) + "\n"
    )


def write_decision_csv(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=DECISION_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def write_frame_csv(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FRAME_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


# -- scenario (de)serialization --------------------------------------------


def spec_to_dict(spec: ScenarioSpec) -> dict:
    """JSON-safe dict form of a scenario."""

    def convert(obj):
        if isinstance(obj, BandwidthProfile):
            return {"levels_mbps": list(obj.levels_mbps), "dwell_s": obj.dwell_s}
        if isinstance(obj, RttModel):
            return {
                "base_ms": obj.base_ms,
                "jitter_scale_ms": obj.jitter_scale_ms,
                "sigma": obj.sigma,
                "distribution": obj.distribution.value,
            }
        if isinstance(obj, ProcTimeTable):
            d = asdict(obj)
            d["rho"] = {k.value: v for k, v in obj.rho.items()}
            return d
        if is_dataclass(obj):
            return {f.name: convert(getattr(obj, f.name)) for f in fields(obj)}
        if isinstance(obj, tuple):
            return list(obj)
        return obj

    return convert(spec)


def spec_from_dict(data: dict) -> ScenarioSpec:
    data = copy.deepcopy(data)
    env_d = data.get("env", {})
    if "profile" in env_d:
        env_d["profile"] = BandwidthProfile(
            levels_mbps=tuple(env_d["profile"]["levels_mbps"]),
            dwell_s=env_d["profile"]["dwell_s"],
        )
    if "rtt" in env_d:
        rtt_d = env_d["rtt"]
        rtt_d["distribution"] = RttDistribution(rtt_d.get("distribution", "lognormal"))
        env_d["rtt"] = RttModel(**rtt_d)
    if "table" in env_d:
        table_d = env_d["table"]
        if "rho" in table_d:
            table_d["rho"] = {ImuRate(k): v for k, v in table_d["rho"].items()}
        env_d["table"] = ProcTimeTable(**table_d)
    if "frame" in env_d:
        env_d["frame"] = FrameSizeModel(**env_d["frame"])
    if "power" in env_d:
        from .energy import PowerParams

        env_d["power"] = PowerParams(**env_d["power"])
    if "reward" in env_d:
        from .environment import RewardParams

        env_d["reward"] = RewardParams(**env_d["reward"])
    env = EnvConfig(**env_d)
    dqn_d = data.get("dqn", {})
    if "hidden" in dqn_d:
        dqn_d["hidden"] = tuple(dqn_d["hidden"])
    dqn = DqnConfig(**dqn_d)
    return ScenarioSpec(
        name=data.get("name", "scenario"),
        policy=data.get("policy", "rl"),
        env=env,
        dqn=dqn,
        seeds=tuple(data.get("seeds", (1, 2, 3))),
    )


def save_spec(spec: ScenarioSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), sort_keys=True, indent=2) + "\n")


def load_spec(path: str | Path) -> ScenarioSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def default_scenario(
    policy: str = "rl",
    profile: str = "cycle",
    horizon_s: float = 1200.0,
    seeds: tuple[int, ...] = (1, 2, 3),
    stable_mbps: float = 1000.0,
    name: str | None = None,
) -> ScenarioSpec:
    """Convenience scenario builder used by the CLI and tests."""
    if profile == "cycle":
        prof = cycle_profile()
        label = "cycle"
    elif profile == "stable":
        prof = stable_profile(stable_mbps)
        label = f"stable{stable_mbps:g}"
    else:
        from .network import load_profile

        prof = load_profile(profile)
        label = Path(profile).stem
    env = replace(EnvConfig(), profile=prof, horizon_s=horizon_s)
    return ScenarioSpec(
        name=name or f"{policy}-{label}",
        policy=policy,
        env=env,
        seeds=seeds,
    )
