"""Command-line interface: run, sweep, aggregate, report.

Output directory resolution: --out flag, else the XREDGE_OUT environment
variable, else ./runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .harness import (
    MetricsRecord,
    ScenarioSpec,
    aggregate_seeds,
    default_scenario,
    load_spec,
    run_scenario,
    save_spec,
    sweep,
)

_POLICIES = ("local", "offload", "greedy", "greedy-noqueue", "threshold", "rl")


def _out_dir(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get("XREDGE_OUT", "runs"))


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise ValueError(f"seeds must be comma-separated integers: {text!r}") from exc


def _build_spec(args) -> ScenarioSpec:
    if args.scenario:
        return load_spec(args.scenario)
    return default_scenario(
        policy=args.policy,
        profile=args.profile,
        horizon_s=args.horizon,
        seeds=_parse_seeds(args.seeds),
        stable_mbps=args.stable_mbps,
        name=args.name,
    )


def _cmd_run(args) -> int:
    spec = _build_spec(args)
    out = _out_dir(args)
    results, agg = run_scenario(spec, out)
    save_spec(spec, out / spec.name / "scenario.json")
    print(f"scenario {spec.name} ({spec.policy}, {spec.env.profile.describe()})")
    for r in results:
        m = r.metrics
        print(
            f"  seed {m.seed}: compliance {m.compliance_pct:6.2f}%  "
            f"power {m.avg_power_w:5.2f} W  survived {m.survived_s:7.1f} s  "
            f"local {m.local_fraction_pct:5.1f}%"
        )
    c = agg["compliance_pct"]
    p = agg["avg_power_w"]
    print(
        f"  median: compliance {c['median']:.2f}% "
        f"(min {c['min']:.2f} max {c['max']:.2f}), power {p['median']:.2f} W"
    )
    print(f"  wrote {out / spec.name}")
    return 0


def _cmd_sweep(args) -> int:
    spec = _build_spec(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ValueError(f"no sweep values parsed from {args.values!r}")
    out = _out_dir(args)
    rows = sweep(spec, args.param, values, out)
    print(f"sweep {args.param} over {values} ({spec.policy})")
    for v, agg in rows:
        c = agg["compliance_pct"]["median"]
        p = agg["avg_power_w"]["median"]
        lf = agg["local_fraction_pct"]["median"]
        print(f"  {args.param}={v:g}: compliance {c:6.2f}%  power {p:5.2f} W  local {lf:5.1f}%")
    summary = [
        {"param": args.param, "value": v, **{k: agg[k] for k in ("compliance_pct", "avg_power_w", "local_fraction_pct")}}
        for v, agg in rows
    ]
    summary_path = out / f"sweep_{args.param.replace('.', '_')}.json"
    summary_path.parent.mkdir(parents=True, exist_ok=True)
    summary_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(f"  wrote {summary_path}")
    return 0


def _load_metrics_under(root: Path) -> list[MetricsRecord]:
    records = []
    for path in sorted(root.rglob("metrics.json")):
        data = json.loads(path.read_text())
        records.append(MetricsRecord(**data))
    return records


def _cmd_aggregate(args) -> int:
    root = Path(args.runs)
    if not root.exists():
        raise ValueError(f"run directory not found: {root}")
    records = _load_metrics_under(root)
    if not records:
        raise ValueError(f"no metrics.json files under {root}")
    agg = aggregate_seeds(records)
    out_path = root / "aggregate.json"
    out_path.write_text(json.dumps(agg, sort_keys=True, indent=2) + "\n")
    c = agg["compliance_pct"]
    print(
        f"{agg['scenario']}: {len(records)} runs, compliance median "
        f"{c['median']:.2f}% (min {c['min']:.2f}, max {c['max']:.2f})"
    )
    print(f"wrote {out_path}")
    return 0


def _cmd_report(args) -> int:
    root = _out_dir(args)
    if not root.exists():
        raise ValueError(f"output directory not found: {root}")
    records = _load_metrics_under(root)
    if not records:
        raise ValueError(f"no metrics.json files under {root}")
    records.sort(key=lambda m: (m.scenario, m.seed))
    header = (
        f"{'scenario':28s} {'policy':10s} {'seed':>4s} {'compl%':>7s} "
        f"{'power_W':>8s} {'cpw':>7s} {'life_min':>9s} {'local%':>7s} {'survived_s':>10s}"
    )
    print(header)
    print("-" * len(header))
    lines = []
    for m in records:
        print(
            f"{m.scenario:28s} {m.policy:10s} {m.seed:4d} {m.compliance_pct:7.2f} "
            f"{m.avg_power_w:8.2f} {m.compliance_per_watt:7.2f} "
            f"{m.projected_lifetime_min:9.2f} {m.local_fraction_pct:7.1f} {m.survived_s:10.1f}"
        )
        lines.append({
            "scenario": m.scenario,
            "policy": m.policy,
            "seed": m.seed,
            "compliance_pct": m.compliance_pct,
            "avg_power_w": m.avg_power_w,
            "compliance_per_watt": m.compliance_per_watt,
            "projected_lifetime_min": m.projected_lifetime_min,
            "local_fraction_pct": m.local_fraction_pct,
            "survived_s": m.survived_s,
        })
    report_path = root / "report.csv"
    import csv as _csv

    with open(report_path, "w", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=list(lines[0].keys()))
        writer.writeheader()
        writer.writerows(lines)
    print(f"wrote {report_path}")
    return 0


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="scenario JSON file (overrides the flags below)")
    p.add_argument("--policy", default="rl", choices=_POLICIES)
    p.add_argument("--profile", default="cycle",
                   help="'cycle', 'stable', or a profile text file path")
    p.add_argument("--stable-mbps", type=float, default=1000.0,
                   help="bandwidth for --profile stable")
    p.add_argument("--horizon", type=float, default=1200.0, help="episode length in seconds")
    p.add_argument("--seeds", default="1,2,3", help="comma-separated seed list")
    p.add_argument("--name", default=None, help="scenario name (defaults to policy-profile)")
    p.add_argument("--out", default=None, help="output directory (default $XREDGE_OUT or ./runs)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xredge",
        description="Battery-aware execution management simulator for edge-assisted XR",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario across its seeds")
    _add_scenario_args(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="one-factor-at-a-time parameter sweep")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--param", required=True,
                         help="dotted parameter path, e.g. dqn.eps_decay or env.reward.lam")
    p_sweep.add_argument("--values", required=True, help="comma-separated numeric values")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_agg = sub.add_parser("aggregate", help="aggregate metrics.json files under a directory")
    p_agg.add_argument("--runs", required=True, help="directory containing per-seed runs")
    p_agg.set_defaults(func=_cmd_aggregate)

    p_rep = sub.add_parser("report", help="tabulate all runs under the output directory")
    p_rep.add_argument("--out", default=None, help="output directory (default $XREDGE_OUT or ./runs)")
    p_rep.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
