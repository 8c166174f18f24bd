import os

import pytest

from picotdd import cli
from picotdd.cli import ConfigError, ExperimentSpec, parse_experiment


def _write(tmp_path, text, name="exp.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _tiny_spec(**overrides):
    import dataclasses
    from picotdd.engine import SimConfig
    from picotdd.traffic import TrafficParams
    base = SimConfig(n_sites=1, picos_per_sector=1, ues_per_pico=2,
                     duration_ms=1500, warmup_ms=200,
                     traffic=TrafficParams(2.0))
    spec = ExperimentSpec(base=base, lambda_dl_list=(1.0, 2.0),
                          seeds=(1, 2, 3), schemes=("baseline", "proposed"))
    return dataclasses.replace(spec, **overrides)


def test_empty_file_gives_defaults(tmp_path):
    spec = parse_experiment(_write(tmp_path, ""))
    assert spec.lambda_dl_list == tuple(0.25 * k for k in range(1, 9))
    assert spec.seeds == (1, 2, 3, 4, 5)
    assert spec.schemes == ("baseline", "proposed")
    assert spec.base.power.p0_dbm == -76.0
    assert spec.base.power.alpha == 0.8
    assert spec.base.power.p_threshold_db == 130.0
    assert spec.base.power.ue_pmax_dbm == 23.0
    assert spec.base.pico_power_dbm == 24.0
    assert spec.base.isd_m == 500.0
    assert spec.base.pico_radius_m == 40.0
    assert spec.base.link.noise_dbm_per_hz == -174.0
    assert spec.base.traffic.packet_bits == 4_194_304
    assert spec.base.policy.period_ms == 10


def test_out_of_range_alpha_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_experiment(_write(tmp_path, "pc_alpha = 1.5\n"))


def test_single_scheme_spec(tmp_path):
    spec = parse_experiment(_write(tmp_path, "schemes = baseline\n"))
    assert spec.schemes == ("baseline",)


def test_unknown_key_reports_line(tmp_path):
    path = _write(tmp_path, "# comment\nn_sites = 1\nbogus_key = 3\n")
    with pytest.raises(ConfigError) as err:
        parse_experiment(path)
    assert ":3:" in str(err.value)
    assert "bogus_key" in str(err.value)


def test_malformed_line_rejected(tmp_path):
    with pytest.raises(ConfigError) as err:
        parse_experiment(_write(tmp_path, "just some words\n"))
    assert ":1:" in str(err.value)


def test_bad_value_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_experiment(_write(tmp_path, "n_sites = many\n"))
    with pytest.raises(ConfigError):
        parse_experiment(_write(tmp_path, "schemes = baseline, wild\n"))
    with pytest.raises(ConfigError):
        parse_experiment(_write(tmp_path, "pathloss_enb_ue = 140.7\n"))


def test_parse_full_file(tmp_path):
    text = """
# desk-scale setup
n_sites = 1
picos_per_sector = 2
ues_per_pico = 4
duration_ms = 2000
lambda_dl = 0.5, 1.0
seeds = 1, 2
schemes = proposed
p_threshold_db = 120
delta_table = 0.3333:0, 0.5:1, 0.6667:3, 1:5
pathloss_enb_enb = 98.45 20 0.04 169.36 40
se_cap = 5.0
ul_cochannel = false
workers = 2
"""
    spec = parse_experiment(_write(tmp_path, text))
    assert spec.base.picos_per_sector == 2
    assert spec.base.power.p_threshold_db == 120.0
    assert spec.base.link.se_cap_bps_per_hz == 5.0
    assert spec.base.link.include_ul_cochannel is False
    assert spec.base.pathloss.enb_enb.a2_db == 169.36
    assert spec.base.pathloss.enb_enb.min_distance_m == 40.0
    assert spec.schemes == ("proposed",)
    assert spec.workers == 2


def test_run_experiment_row_grid(tmp_path):
    out = str(tmp_path / "res")
    csv_path = cli.run_experiment(_tiny_spec(), out)
    lines = open(csv_path).read().strip().split("\n")
    assert lines[0] == ",".join(cli.CSV_HEADER)
    assert len(lines) == 1 + 2 * 2 * 3 * 2   # lambda x scheme x seed x direction
    first = lines[1].split(",")
    assert first[0] == "0.5" and first[1] == "baseline" and first[3] == "dl"
    # deterministic ordering: lambda, scheme, seed, direction
    keys = [tuple(l.split(",")[:4]) for l in lines[1:]]
    assert keys == sorted(keys, key=lambda k: (float(k[0]), k[1], int(k[2]), k[3]))


def test_run_experiment_byte_identical_rerun(tmp_path):
    spec = _tiny_spec()
    a = open(cli.run_experiment(spec, str(tmp_path / "a"))).read()
    b = open(cli.run_experiment(spec, str(tmp_path / "b"))).read()
    assert a == b


def test_baseline_rows_have_zero_delta(tmp_path):
    csv_path = cli.run_experiment(_tiny_spec(), str(tmp_path / "res"))
    for row in cli.read_results_csv(csv_path):
        if row["scheme"] == "baseline":
            assert row["mean_delta_db"] == 0.0


def test_emit_plots(tmp_path):
    csv_path = cli.run_experiment(_tiny_spec(), str(tmp_path / "res"))
    paths = cli.emit_plots(csv_path, str(tmp_path / "plots"))
    assert [os.path.basename(p) for p in paths] == ["avg_tput.svg", "p5_tput.svg"]
    for p in paths:
        body = open(p).read()
        assert "<svg" in body
        for label in ("baseline DL", "baseline UL", "proposed DL", "proposed UL"):
            assert label in body


def test_emit_plots_rejects_empty_and_malformed(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ConfigError):
        cli.emit_plots(str(empty), str(tmp_path / "p"))
    assert not (tmp_path / "p" / "avg_tput.svg").exists()
    headers_only = tmp_path / "h.csv"
    headers_only.write_text(",".join(cli.CSV_HEADER) + "\n")
    with pytest.raises(ConfigError):
        cli.emit_plots(str(headers_only), str(tmp_path / "p"))
    wrong = tmp_path / "w.csv"
    wrong.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ConfigError):
        cli.emit_plots(str(wrong), str(tmp_path / "p"))


def test_cli_run_and_plot_commands(tmp_path, capsys):
    cfg = _write(tmp_path, "\n".join([
        "n_sites = 1", "picos_per_sector = 1", "ues_per_pico = 2",
        "duration_ms = 1200", "warmup_ms = 200", "lambda_dl = 1.0",
        "seeds = 1, 2", "schemes = baseline, proposed", ""]))
    rc = cli.main(["run", "--config", cfg, "--seed", "3", "--scheme", "proposed",
                   "--trace", "1", "--out", str(tmp_path / "tr")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "ul.avg_tput_mbps=" in out
    assert (tmp_path / "tr" / "trace_periods.csv").exists()

    rc = cli.main(["sweep", "--config", cfg, "--out", str(tmp_path / "sw")])
    assert rc == 0
    rc = cli.main(["plot", "--csv", str(tmp_path / "sw" / "results.csv"),
                   "--out", str(tmp_path / "sw")])
    assert rc == 0
    assert (tmp_path / "sw" / "avg_tput.svg").exists()


def test_cli_error_exit_code(tmp_path):
    bad = _write(tmp_path, "pc_alpha = 2.0\n")
    assert cli.main(["sweep", "--config", bad, "--out", str(tmp_path / "x")]) == 2
    assert cli.main(["plot", "--csv", str(tmp_path / "missing.csv"),
                     "--out", str(tmp_path / "x")]) == 2
