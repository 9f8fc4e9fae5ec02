import csv
import json
import math
from pathlib import Path

import pytest

from jjphotond import cli


def write_config(tmp_path, name="config.json", **overrides):
    raw = {
        "omega_eg_ghz": 4.8,
        "omega_rabi_mhz": 200.0,
        "kappa_per_s": 1e6,
        "t1_ns": 10.0,
        "bias_x": 2.0,
        "rate_mode": "anchored",
        "n_init": 1,
        "t_end_ns": 30.0,
        "stride_ns": 0.5,
    }
    raw.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def read_csv(path):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        rows = list(reader)
    return rows[0], rows[1:]


class TestRates:
    def test_anchored_quoted_value(self, capsys):
        rc = cli.main(["rates", "--bias-x", "2", "--mode", "anchored"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "7.300000e+07" in out
        assert "anchored" in out

    def test_raw_mode_value(self, capsys):
        rc = cli.main(["rates", "--bias-x", "2", "--mode", "raw",
                       "--omega-p-ghz", "4.8"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "3.8" in out and "e+07" in out

    def test_missing_spec_exit_2(self, capsys):
        rc = cli.main(["rates"])
        assert rc == 2
        err = capsys.readouterr().err
        assert "--bias-x" in err or "bias" in err

    def test_csv_output(self, tmp_path, capsys):
        rc = cli.main(["rates", "--bias-x", "2", "--mode", "anchored",
                       "--out", str(tmp_path)])
        assert rc == 0
        header, rows = read_csv(tmp_path / "rates.csv")
        assert header == ["quantity", "si_value", "internal_value"]
        values = {r[0]: float(r[1]) for r in rows}
        assert values["gamma_e"] == 7.3e7
        assert (tmp_path / "rates.manifest.json").exists()


class TestEfficiency:
    def test_schema_and_manifest(self, tmp_path):
        cfg = write_config(tmp_path)
        rc = cli.main(["efficiency", "--config", cfg, "--out", str(tmp_path)])
        assert rc == 0
        header, rows = read_csv(tmp_path / "efficiency.csv")
        assert header == ["t_ns", "P_n", "P_0", "eta"]
        assert len(rows) == 61
        t0 = [float(v) for v in rows[0]]
        assert t0 == [0.0, 0.0, 0.0, 0.0]
        manifest = json.loads((tmp_path / "efficiency.manifest.json").read_text())
        assert manifest["command"] == "efficiency"
        assert manifest["rate_mode"] == "anchored"
        assert manifest["checks"]["max_hermiticity_drift"] <= 1e-10
        assert "plateau_estimate" in manifest

    def test_zero_photon_eta_is_zero(self, tmp_path):
        cfg = write_config(tmp_path, n_init=0)
        rc = cli.main(["efficiency", "--config", cfg, "--out", str(tmp_path)])
        assert rc == 0
        _, rows = read_csv(tmp_path / "efficiency.csv")
        assert all(abs(float(r[3])) < 1e-12 for r in rows)

    def test_deterministic_output(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert cli.main(["efficiency", "--config", cfg, "--out", str(out1)]) == 0
        assert cli.main(["efficiency", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "efficiency.csv").read_bytes() == \
            (out2 / "efficiency.csv").read_bytes()

    def test_config_error_exit_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, bias_x=2.0, gamma_g_per_s=1e5,
                           gamma_e_per_s=7e7)
        rc = cli.main(["efficiency", "--config", cfg, "--out", str(tmp_path)])
        assert rc == 2
        assert "conflicting" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = cli.main(["efficiency", "--config", str(tmp_path / "nope.json")])
        assert rc == 2

    def test_lf_line_endings_and_17_digits(self, tmp_path):
        cfg = write_config(tmp_path)
        assert cli.main(["efficiency", "--config", cfg, "--out", str(tmp_path)]) == 0
        blob = (tmp_path / "efficiency.csv").read_bytes()
        assert b"\r" not in blob
        # representative value round-trips float64 exactly
        _, rows = read_csv(tmp_path / "efficiency.csv")
        val = rows[30][1]
        assert float(format(float(val), ".17g")) == float(val)


class TestSweepCommand:
    def test_rows_and_exit(self, tmp_path):
        cfg = write_config(tmp_path)
        rc = cli.main(["sweep", "--config", cfg, "--out", str(tmp_path),
                       "--param", "t1_ns", "--values", "10,20"])
        assert rc == 0
        header, rows = read_csv(tmp_path / "sweep.csv")
        assert header == ["t1_ns", "t_d_ns", "eta_max"]
        assert [float(r[0]) for r in rows] == [10.0, 20.0]
        assert float(rows[1][2]) > float(rows[0][2])

    def test_partial_failure_exit_5(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        rc = cli.main(["sweep", "--config", cfg, "--out", str(tmp_path),
                       "--param", "bias_x", "--values", "2.0,99.0"])
        assert rc == 5
        _, rows = read_csv(tmp_path / "sweep.csv")
        assert math.isnan(float(rows[1][1])) and math.isnan(float(rows[1][2]))
        manifest = json.loads((tmp_path / "sweep.manifest.json").read_text())
        assert len(manifest["failures"]) == 1

    def test_empty_values_exit_2(self, tmp_path):
        cfg = write_config(tmp_path)
        rc = cli.main(["sweep", "--config", cfg, "--out", str(tmp_path),
                       "--param", "t1_ns", "--values", ""])
        assert rc == 2

    def test_worker_count_invariance_bytes(self, tmp_path):
        cfg = write_config(tmp_path)
        outs = []
        for workers, sub in (("1", "w1"), ("3", "w3")):
            out = tmp_path / sub
            rc = cli.main(["sweep", "--config", cfg, "--out", str(out),
                           "--param", "n_init", "--values", "1,2",
                           "--workers", workers])
            assert rc == 0
            outs.append((out / "sweep.csv").read_bytes())
        assert outs[0] == outs[1]


class TestFigureCommand:
    def test_unknown_id_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["figure", "7"])
        assert exc.value.code == 2

    def test_figure_2_files(self, tmp_path):
        rc = cli.main(["figure", "2", "--out", str(tmp_path),
                       "--t-end-ns", "20", "--stride-ns", "0.5"])
        assert rc == 0
        for stem, column in (("fig2_p1", "P_n"), ("fig2_p0", "P_0"),
                             ("fig2_eta", "eta")):
            header, rows = read_csv(tmp_path / f"{stem}.csv")
            assert header == ["t_ns", column]
            assert len(rows) == 41
            assert (tmp_path / f"{stem}.manifest.json").exists()

    def test_figure_5_files(self, tmp_path):
        rc = cli.main(["figure", "5", "--out", str(tmp_path),
                       "--t-end-ns", "10", "--stride-ns", "0.5"])
        assert rc == 0
        names = sorted(p.name for p in tmp_path.glob("fig5_n*.csv"))
        assert names == ["fig5_n1.csv", "fig5_n2.csv", "fig5_n3.csv"]


class TestRfc4180:
    def test_strict_reader_round_trip(self, tmp_path):
        cfg = write_config(tmp_path)
        assert cli.main(["efficiency", "--config", cfg, "--out", str(tmp_path)]) == 0
        with open(tmp_path / "efficiency.csv", newline="") as f:
            reader = csv.DictReader(f)
            rows = list(reader)
        assert set(rows[0]) == {"t_ns", "P_n", "P_0", "eta"}
        for row in rows:
            for v in row.values():
                float(v)
