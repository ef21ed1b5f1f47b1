import csv
import io
import math

import pytest

from grassfeed import grassmann
from grassfeed.cli import HEADERS, RATE_COLUMNS, ExperimentConfig, load_config, main, run_experiment
from grassfeed.errors import ConfigError


def _write(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_antenna_csv_is_reproducible(tmp_path):
    cfg = _write(tmp_path, "snr_grid_db: [0]\nparams: {trials: 10000, seed: 5}\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["antenna", "--config", cfg, "--out", str(a)]) == 0
    assert main(["antenna", "--config", cfg, "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = _rows(a)
    assert list(rows[0]) == RATE_COLUMNS
    assert [r["l"] for r in rows] == ["1", "2", "4"]
    assert [r["K"] for r in rows] == ["2", "4", "16"]
    assert all(r["perfect_rate"] == "" and r["gamma_sup"] == "" for r in rows)


def test_bits_is_nats_over_ln2(tmp_path):
    cfg = _write(tmp_path, "snr_grid_db: [0, 10]\nparams: {l: [2], trials: 2000}\n")
    nat, bits = tmp_path / "n.csv", tmp_path / "b.csv"
    assert main(["beamforming", "--config", cfg, "--out", str(nat)]) == 0
    assert main(["beamforming", "--config", cfg, "--out", str(bits), "--log-base", "bits"]) == 0
    for rn, rb in zip(_rows(nat), _rows(bits)):
        for col in ("mc_rate", "ub_mc", "ub_lower_theory", "ub_upper_theory", "perfect_rate"):
            assert abs(float(rb[col]) - float(rn[col]) / math.log(2)) <= 1e-12
        assert rb["e_norm_sum"] == rn["e_norm_sum"]


def test_bigger_codebook_raises_rate(tmp_path):
    cfg = _write(tmp_path, "snr_grid_db: [0, 10, 20]\nparams: {l: [2], K: [1, 1024], trials: 4000}\n")
    out = tmp_path / "o.csv"
    assert main(["beamforming", "--config", cfg, "--out", str(out)]) == 0
    rows = _rows(out)
    small = [r for r in rows if r["K"] == "1"]
    big = [r for r in rows if r["K"] == "1024"]
    for s, b in zip(small, big):
        sig = math.hypot(float(s["mc_rate_stderr"]), float(b["mc_rate_stderr"]))
        assert float(b["mc_rate"]) - float(s["mc_rate"]) > 3 * sig
        for v in b.values():
            assert v == "" or math.isfinite(float(v))


def test_codebook_file_is_used(tmp_path):
    cb = grassmann.generate_random_codebook(2, 1, 2, 8, 1)
    cb_path = tmp_path / "cb.npz"
    cb.save(cb_path)
    cfg = _write(tmp_path, f"snr_grid_db: [5]\nparams: {{l: [2], codebook_path: '{cb_path}', trials: 500}}\n")
    out = tmp_path / "o.csv"
    assert main(["beamforming", "--config", cfg, "--out", str(out)]) == 0
    assert _rows(out)[0]["K"] == "8"


@pytest.mark.parametrize("experiment,params", [
    ("drf", "{n: 2, m: 1, k: 1, K: [1, 7], trials: 2000}"),
    ("logdet", "{n: [4], k: [1, 2], c: [1.0], trials: 2000}"),
    ("extreme", "{n: [20], l: [1, 2], L: [2], trials: 2000}"),
    ("zeta", "{shapes: [[2, 2]], trials: 2000}"),
])
def test_module_experiments(tmp_path, experiment, params):
    cfg = _write(tmp_path, f"params: {params}\n")
    out = tmp_path / "o.csv"
    assert main([experiment, "--config", cfg, "--out", str(out)]) == 0
    rows = _rows(out)
    assert rows and list(rows[0]) == HEADERS[experiment]


def test_defaults_without_config(capsys):
    assert main(["zeta", "--trials", "200"]) == 0
    assert capsys.readouterr().out.startswith(",".join(HEADERS["zeta"]))


@pytest.mark.parametrize("text,field", [
    ("params: {trials: 50}\n", "params.trials"),
    ("snr_grid_db: []\n", "snr_grid_db"),
    ("log_base: dB\n", "log_base"),
    ("params: {bogus: 1}\n", "params.bogus"),
    ("colour: red\n", "colour"),
    ("params: {l: [9]}\n", "params.l"),
    ("experiment: drf\n", "experiment"),
    ("params: {L_R: 1.5}\n", "params.L_R"),
    ("- 1\n", "config"),
])
def test_config_errors_name_the_field(tmp_path, capsys, text, field):
    cfg = _write(tmp_path, text)
    assert main(["beamforming", "--config", cfg]) == 1
    assert field in capsys.readouterr().err
    with pytest.raises(ConfigError) as info:
        load_config("beamforming", cfg)
    assert info.value.field == field


def test_trials_flag_is_validated(capsys):
    assert main(["antenna", "--trials", "10"]) == 1
    assert "params.trials" in capsys.readouterr().err


def test_io_errors(tmp_path):
    assert main(["antenna", "--config", str(tmp_path / "missing.yaml")]) == 3
    cfg = _write(tmp_path, "snr_grid_db: [0]\nparams: {l: [1], trials: 200}\n")
    assert main(["antenna", "--config", cfg, "--out", str(tmp_path / "no" / "dir.csv")]) == 3


def test_validate_exit_status(tmp_path, monkeypatch):
    from grassfeed import acceptance

    monkeypatch.setitem(acceptance.CRITERIA, 1, ("always passes", lambda workers=1: (True, "ok")))
    monkeypatch.setitem(acceptance.CRITERIA, 2, ("always fails", lambda workers=1: (False, "no")))
    ok = _write(tmp_path, "params: {criteria: [1]}\n", "ok.yaml")
    bad = _write(tmp_path, "params: {criteria: [1, 2]}\n", "bad.yaml")
    out = tmp_path / "v.csv"
    assert main(["validate", "--config", ok, "--out", str(out)]) == 0
    assert [r["result"] for r in _rows(out)] == ["PASS"]
    assert main(["validate", "--config", bad, "--out", str(out)]) == 2
    assert [r["result"] for r in _rows(out)] == ["PASS", "FAIL"]


def test_run_experiment_in_memory():
    cfg = ExperimentConfig.from_mapping("antenna", {"snr_grid_db": [0], "params": {"l": [1], "trials": 300}})
    buf = io.StringIO()
    assert run_experiment(cfg, buf) is True
    assert buf.getvalue().count("\n") == 2
