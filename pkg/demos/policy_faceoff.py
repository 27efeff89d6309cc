"""
Head-to-head: every controller on the stable link and on the bandwidth cycle.

Static local never misses the deadline but burns the battery fastest; static
offload is cheap but collapses whenever the link degrades. The threshold
baseline reacts to bandwidth but at full fidelity, so it still drains fast.
The greedy one-step optimizer locks onto the cheapest compliant action and
stays there. The learned controller lands in between: near-local compliance
at a fraction of the power.

Three seeds per cell; medians reported. Takes about half a minute.
"""

from xredge.harness import default_scenario, run_scenario

POLICIES = ("local", "offload", "greedy", "threshold", "rl")

for profile in ("stable", "cycle"):
    print(f"=== {profile} profile ===")
    header = (f"{'policy':10} {'compl%':>7} {'power_W':>8} {'c/W':>6} "
              f"{'life_min':>9} {'local%':>7} {'survived_s':>10}")
    print(header)
    print("-" * len(header))
    for policy in POLICIES:
        spec = default_scenario(policy, profile, horizon_s=1200.0, seeds=(1, 2, 3))
        _, agg = run_scenario(spec)
        print(f"{policy:10} {agg['compliance_pct']['median']:7.2f} "
              f"{agg['avg_power_w']['median']:8.2f} "
              f"{agg['compliance_per_watt']['median']:6.2f} "
              f"{agg['projected_lifetime_min']['median']:9.1f} "
              f"{agg['local_fraction_pct']['median']:7.1f} "
              f"{agg['survived_s']['median']:10.1f}")
    print()
