"""Small arrival-rate sweep across both schemes, persisted to CSV and
rendered as the two throughput-vs-load charts.

A fuller sweep (more seeds, 60 s runs, the whole rate grid) is what the
acceptance suite and the `picotdd sweep` command run; this keeps the
demo to about a minute.
"""

from picotdd import cli
from picotdd.engine import SimConfig
from picotdd.traffic import TrafficParams

spec = cli.ExperimentSpec(
    base=SimConfig(n_sites=1, picos_per_sector=4, ues_per_pico=10,
                   duration_ms=15_000, traffic=TrafficParams(1.0)),
    lambda_dl_list=(0.5, 1.0, 1.5),
    seeds=(1, 2, 3),
    schemes=("baseline", "proposed"),
    workers=2)

csv_path = cli.run_experiment(spec, "demo_results")
print(f"wrote {csv_path}")

rows = cli.read_results_csv(csv_path)
for lam in (0.25, 0.5, 0.75):
    for direction in ("dl", "ul"):
        vals = {}
        for scheme in ("baseline", "proposed"):
            sel = [r["avg_tput_mbps"] for r in rows
                   if r["lambda_ul"] == lam and r["direction"] == direction
                   and r["scheme"] == scheme]
            vals[scheme] = sum(sel) / len(sel)
        print(f"lambda_ul {lam:5.3f} {direction}: baseline "
              f"{vals['baseline']:6.2f} Mbps, proposed {vals['proposed']:6.2f} Mbps")

for path in cli.emit_plots(csv_path, "demo_results"):
    print(f"wrote {path}")
