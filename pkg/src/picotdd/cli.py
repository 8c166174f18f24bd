"""Experiment runner: config-file parsing, arrival-rate sweeps across
schemes and seeds, CSV persistence, and throughput-vs-load plots.

Config files are plain key = value text; every key has a documented
default so an empty file runs the stock parameter set. See README.md
for the full key table.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .channel import PathlossModel, SlopeModel, default_pathloss_model
from .engine import RunMetrics, SimConfig, TraceRecorder
from .mac import ReconfigPolicy
from .phy import LinkBudgetParams
from .powerctl import PowerControlParams
from .traffic import DIRECTION_NAMES, TrafficParams

LAMBDA_DL_SWEEP_DEFAULT = tuple(0.25 * k for k in range(1, 9))
SEEDS_DEFAULT = (1, 2, 3, 4, 5)

CSV_HEADER = ("lambda_ul", "scheme", "seed", "direction", "avg_tput_mbps",
              "p5_tput_mbps", "completion_ratio", "mean_delta_db")


class ConfigError(ValueError):
    """Malformed or out-of-range experiment configuration."""


@dataclass
class ExperimentSpec:
    base: SimConfig = field(default_factory=SimConfig)
    lambda_dl_list: tuple = LAMBDA_DL_SWEEP_DEFAULT
    seeds: tuple = SEEDS_DEFAULT
    schemes: tuple = ("baseline", "proposed")
    workers: int = 1
    out_dir: str = "results"

    def validate(self) -> None:
        if not self.lambda_dl_list:
            raise ConfigError("lambda_dl sweep must not be empty")
        if not self.seeds:
            raise ConfigError("seeds must not be empty")
        if not self.schemes:
            raise ConfigError("schemes must not be empty")
        for s in self.schemes:
            if s not in engine.SCHEMES:
                raise ConfigError(f"unknown scheme {s!r}")
        if any(l < 0 for l in self.lambda_dl_list):
            raise ConfigError("lambda_dl values must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.base.validate()


def _parse_float_list(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _parse_int_list(text):
    return tuple(int(v) for v in text.replace(",", " ").split())


def _parse_str_list(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_delta_table(text):
    rows = []
    for part in text.split(","):
        fraction, _, delta = part.partition(":")
        rows.append((float(fraction), float(delta)))
    return tuple(rows)


def _parse_slope(text):
    vals = _parse_float_list(text)
    if len(vals) == 2:
        return {"a_db": vals[0], "b_db": vals[1]}
    if len(vals) == 5:
        return {"a_db": vals[0], "b_db": vals[1], "breakpoint_km": vals[2],
                "a2_db": vals[3], "b2_db": vals[4]}
    raise ValueError("pathloss needs 2 (A B) or 5 (A B break_km A2 B2) numbers")


# key -> (target section, field, parser)
_KEYS = {
    "n_sites": ("base", "n_sites", int),
    "picos_per_sector": ("base", "picos_per_sector", int),
    "ues_per_pico": ("base", "ues_per_pico", int),
    "isd_m": ("base", "isd_m", float),
    "pico_radius_m": ("base", "pico_radius_m", float),
    "min_pico_pico_m": ("base", "min_pico_pico_m", float),
    "min_pico_ue_m": ("base", "min_pico_ue_m", float),
    "min_ue_ue_m": ("base", "min_ue_ue_m", float),
    "duration_ms": ("base", "duration_ms", int),
    "warmup_ms": ("base", "warmup_ms", int),
    "pico_power_dbm": ("base", "pico_power_dbm", float),
    "initial_config": ("base", "initial_config", int),
    "enb_gain_dbi": ("base", "enb_gain_dbi", float),
    "ue_gain_dbi": ("base", "ue_gain_dbi", float),
    "pf_window": ("base", "pf_window", int),
    "pf_epsilon_bps": ("base", "pf_epsilon_bps", float),
    "packet_bits": ("traffic", "packet_bits", int),
    "p0_dbm": ("power", "p0_dbm", float),
    "pc_alpha": ("power", "alpha", float),
    "p_threshold_db": ("power", "p_threshold_db", float),
    "ue_pmax_dbm": ("power", "ue_pmax_dbm", float),
    "delta_table": ("power", "delta_table", _parse_delta_table),
    "indicator_bandwidth_hz": ("power", "indicator_bandwidth_hz", float),
    "indicator_antenna_gains": ("power", "include_antenna_gains", _parse_bool),
    "noise_dbm_per_hz": ("link", "noise_dbm_per_hz", float),
    "bandwidth_hz": ("link", "bandwidth_hz", float),
    "se_cap": ("link", "se_cap_bps_per_hz", float),
    "ul_cochannel": ("link", "include_ul_cochannel", _parse_bool),
    "reconfig_period_ms": ("policy", "period_ms", int),
    "pathloss_enb_ue": ("pathloss", "enb_ue", _parse_slope),
    "pathloss_enb_enb": ("pathloss", "enb_enb", _parse_slope),
    "pathloss_ue_ue": ("pathloss", "ue_ue", _parse_slope),
    "lambda_dl": ("sweep", "lambda_dl_list", _parse_float_list),
    "seeds": ("sweep", "seeds", _parse_int_list),
    "schemes": ("sweep", "schemes", _parse_str_list),
    "workers": ("sweep", "workers", int),
    "out_dir": ("sweep", "out_dir", str),
}


def parse_experiment(path) -> ExperimentSpec:
    """Read a key = value experiment file, applying defaults for absent keys."""
    sections = {"base": {}, "traffic": {}, "power": {}, "link": {},
                "policy": {}, "pathloss": {}, "sweep": {}}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', "
                                  f"got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            section, fname, parser = _KEYS[key]
            try:
                sections[section][fname] = parser(value)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {exc}")

    try:
        defaults = default_pathloss_model()
        pl_kwargs = {}
        for name in ("enb_ue", "enb_enb", "ue_ue"):
            base_slope = getattr(defaults, name)
            if name in sections["pathloss"]:
                overrides = dict(sections["pathloss"][name])
                overrides.setdefault("min_distance_m", base_slope.min_distance_m)
                pl_kwargs[name] = SlopeModel(**overrides)
            else:
                pl_kwargs[name] = base_slope
        base = SimConfig(
            pathloss=PathlossModel(**pl_kwargs),
            traffic=TrafficParams(lambda_dl=1.0, **sections["traffic"]),
            power=PowerControlParams(**sections["power"]),
            link=LinkBudgetParams(**sections["link"]),
            policy=ReconfigPolicy(**sections["policy"]),
            **sections["base"],
        )
        spec = ExperimentSpec(base=base, **sections["sweep"])
        spec.validate()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}")
    return spec


def _run_single(task):
    """Worker entry: one (lambda, scheme, seed) replication to CSV rows."""
    spec_base, lam, scheme, seed = task
    cfg = dataclasses.replace(
        spec_base, scheme=scheme, seed=seed,
        traffic=dataclasses.replace(spec_base.traffic, lambda_dl=lam))
    metrics = engine.run(cfg)
    rows = []
    for direction, m in ((DIRECTION_NAMES[0], metrics.dl),
                         (DIRECTION_NAMES[1], metrics.ul)):
        rows.append((
            f"{lam / 2.0:g}", scheme, str(seed), direction,
            f"{m.avg_tput_bps / 1e6:.6f}", f"{m.p5_tput_bps / 1e6:.6f}",
            f"{m.completion_ratio:.6f}", f"{metrics.mean_delta_db:.6f}"))
    return rows


def run_experiment(spec: ExperimentSpec, out_dir: str | None = None) -> str:
    """Run the full sweep and persist one CSV row per (run, direction).

    Row order is deterministic: lambda, scheme, seed, direction. Reruns of
    an identical spec produce byte-identical files.
    """
    spec.validate()
    out_dir = spec.out_dir if out_dir is None else out_dir
    os.makedirs(out_dir, exist_ok=True)
    tasks = [(spec.base, lam, scheme, seed)
             for lam in spec.lambda_dl_list
             for scheme in sorted(spec.schemes)
             for seed in spec.seeds]
    if spec.workers == 1:
        results = [_run_single(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(spec.workers) as pool:
            results = list(pool.map(_run_single, tasks))

    csv_path = os.path.join(out_dir, "results.csv")
    tmp_path = csv_path + ".tmp"
    try:
        with open(tmp_path, "w") as f:
            f.write(",".join(CSV_HEADER) + "\n")
            for rows in results:
                for row in rows:
                    f.write(",".join(row) + "\n")
        os.replace(tmp_path, csv_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return csv_path


def read_results_csv(csv_path):
    """Load a results CSV back into a list of dict rows, validating schema."""
    with open(csv_path) as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != CSV_HEADER:
        raise ConfigError(f"{csv_path}: missing or wrong header, "
                          f"expected {','.join(CSV_HEADER)}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(CSV_HEADER):
            raise ConfigError(f"{csv_path}: malformed row {ln!r}")
        row = dict(zip(CSV_HEADER, parts))
        for key in ("lambda_ul", "avg_tput_mbps", "p5_tput_mbps",
                    "completion_ratio", "mean_delta_db"):
            row[key] = float(row[key])
        row["seed"] = int(row["seed"])
        rows.append(row)
    if not rows:
        raise ConfigError(f"{csv_path}: no data rows")
    return rows


def emit_plots(csv_path, out_dir) -> list:
    """Render average and 5%-ile throughput vs UL arrival rate as SVG.

    One series per (scheme, direction), seed-averaged with min-max
    whiskers.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = read_results_csv(csv_path)
    os.makedirs(out_dir, exist_ok=True)
    lambdas = sorted({r["lambda_ul"] for r in rows})
    series_keys = sorted({(r["scheme"], r["direction"]) for r in rows})

    paths = []
    for metric, label, fname in (
            ("avg_tput_mbps", "Average packet throughput [Mbps]", "avg_tput.svg"),
            ("p5_tput_mbps", "5%-ile packet throughput [Mbps]", "p5_tput.svg")):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for scheme, direction in series_keys:
            means, los, his = [], [], []
            for lam in lambdas:
                vals = [r[metric] for r in rows
                        if r["scheme"] == scheme and r["direction"] == direction
                        and r["lambda_ul"] == lam and not np.isnan(r[metric])]
                if not vals:
                    means.append(np.nan), los.append(0.0), his.append(0.0)
                    continue
                m = float(np.mean(vals))
                means.append(m)
                los.append(m - min(vals))
                his.append(max(vals) - m)
            ax.errorbar(lambdas, means, yerr=[los, his], capsize=3,
                        marker="o", label=f"{scheme} {direction.upper()}")
        ax.set_xlabel("UL packet arrival rate [packets/s per cell]")
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.4)
        ax.legend()
        fig.tight_layout()
        out = os.path.join(out_dir, fname)
        fig.savefig(out)
        plt.close(fig)
        paths.append(out)
    return paths


def _cmd_run(args) -> int:
    if args.config:
        spec = parse_experiment(args.config)
    else:
        spec = ExperimentSpec()
    cfg = spec.base
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.scheme is not None:
        cfg = dataclasses.replace(cfg, scheme=args.scheme)
    if args.lambda_dl is not None:
        cfg = dataclasses.replace(
            cfg, traffic=dataclasses.replace(cfg.traffic, lambda_dl=args.lambda_dl))
    trace = None
    if args.trace > 0:
        trace = TraceRecorder(record_subframes=args.trace >= 2)
    metrics = engine.run(cfg, trace=trace)
    _print_metrics(cfg, metrics)
    if trace is not None:
        os.makedirs(args.out, exist_ok=True)
        trace.save_period_csv(os.path.join(args.out, "trace_periods.csv"))
        if args.trace >= 2:
            trace.save_subframe_csv(os.path.join(args.out, "trace_subframes.csv"))
        print(f"traces written to {args.out}")
    return 0


def _print_metrics(cfg: SimConfig, metrics: RunMetrics) -> None:
    print(f"scheme={cfg.scheme} seed={cfg.seed} "
          f"lambda_dl={cfg.traffic.lambda_dl:g} lambda_ul={cfg.traffic.lambda_ul:g}")
    for name, m in (("dl", metrics.dl), ("ul", metrics.ul)):
        print(f"{name}.avg_tput_mbps={m.avg_tput_bps / 1e6:.6f} "
              f"{name}.p5_tput_mbps={m.p5_tput_bps / 1e6:.6f} "
              f"{name}.packets={m.packet_count} "
              f"{name}.completion_ratio={m.completion_ratio:.6f}")
    print(f"mean_delta_db={metrics.mean_delta_db:.6f}")


def _cmd_sweep(args) -> int:
    spec = parse_experiment(args.config) if args.config else ExperimentSpec()
    if args.workers is not None:
        spec.workers = args.workers
    csv_path = run_experiment(spec, args.out)   # --out overrides the spec
    print(f"results written to {csv_path}")
    return 0


def _cmd_plot(args) -> int:
    paths = emit_plots(args.csv, args.out)
    for p in paths:
        print(f"wrote {p}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="picotdd",
        description="Dynamic-TDD pico-cell simulator with closed-loop "
                    "UL power control")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a single replication")
    p_run.add_argument("--config", metavar="PATH", help="experiment file")
    p_run.add_argument("--seed", type=int, metavar="N")
    p_run.add_argument("--scheme", choices=engine.SCHEMES)
    p_run.add_argument("--lambda-dl", type=float, dest="lambda_dl")
    p_run.add_argument("--out", metavar="DIR", default="results")
    p_run.add_argument("--trace", type=int, default=0, metavar="LEVEL",
                       help="0 none, 1 per-period boosts, 2 plus per-subframe SINR")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the full experiment sweep")
    p_sweep.add_argument("--config", metavar="PATH")
    p_sweep.add_argument("--out", metavar="DIR", default="results")
    p_sweep.add_argument("--workers", type=int, metavar="N")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_plot = sub.add_parser("plot", help="render charts from a results CSV")
    p_plot.add_argument("--csv", required=True, metavar="PATH")
    p_plot.add_argument("--out", metavar="DIR", default="results")
    p_plot.set_defaults(func=_cmd_plot)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
