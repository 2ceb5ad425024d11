import json
import subprocess
import sys

import numpy as np
import pytest

from wgqed.cli import main


def run_cli(args):
    return main(args)


def read_csv(path):
    meta, columns, rows = {}, None, []
    for line in path.read_text().splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition(" = ")
            meta[key] = val
            continue
        if columns is None:
            columns = line.split(",")
            continue
        rows.append(line.split(","))
    return meta, columns, rows


class TestSpectrumCommand:
    def test_fig1_table(self, tmp_path):
        out = tmp_path / "modes.csv"
        code = run_cli(["spectrum", "--n-qubits", "30", "--k1d-d-over-pi", "0.2",
                        "-o", str(out)])
        assert code == 0
        meta, columns, rows = read_csv(out)
        assert columns == ["xi", "J", "Gamma", "k_dom_over_pi"]
        assert len(rows) == 30
        assert meta["n_qubits"] == "30"
        assert meta["version"]
        gammas = np.array([float(r[2]) for r in rows])
        assert gammas.sum() == pytest.approx(30.0, abs=1e-9)

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            run_cli(["spectrum", "--n-qubits", "12", "--k1d-d-over-pi", "0.35",
                     "-o", str(out)])
        assert a.read_bytes() == b.read_bytes()

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "modes.json"
        run_cli(["spectrum", "--n-qubits", "6", "--k1d-d-over-pi", "0.4",
                 "--format", "json", "-o", str(out)])
        doc = json.loads(out.read_text())
        assert doc["columns"] == ["xi", "J", "Gamma", "k_dom_over_pi"]
        assert len(doc["rows"]) == 6


class TestScalingCommand:
    def test_synthetic_cubic(self, tmp_path):
        out = tmp_path / "fit.csv"
        code = run_cli(["scaling", "--quantity", "synthetic",
                        "--n-list", "10,20,40", "-o", str(out)])
        assert code == 0
        meta, _, _ = read_csv(out)
        assert float(meta["slope"]) == pytest.approx(-3.0, abs=1e-12)

    def test_gamma1_slope_metadata(self, tmp_path):
        out = tmp_path / "fit.csv"
        run_cli(["scaling", "--quantity", "gamma1", "--n-list", "10,20,40",
                 "--xi-list", "1", "--k1d-d-over-pi", "0.2", "-o", str(out)])
        meta, _, rows = read_csv(out)
        assert float(meta["slope_xi1"]) == pytest.approx(-3.0, abs=0.25)
        assert len(rows) == 3


class TestErrorPaths:
    def test_unknown_argument_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main(["spectrum", "--bogus", "1", "-o", "x.csv"])
        assert err.value.code == 2

    def test_missing_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_numerical_failure_exits_3(self, tmp_path):
        # scaling with nonpositive sizes triggers the fit guard
        code = run_cli(["scaling", "--quantity", "synthetic",
                        "--n-list", "1,2", "-o", str(tmp_path / "x.csv")])
        assert code == 3

    def test_module_entry_point(self, tmp_path):
        out = tmp_path / "m.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "wgqed", "spectrum", "--n-qubits", "4",
             "--k1d-d-over-pi", "0.5", "-o", str(out)],
            capture_output=True,
        )
        assert proc.returncode == 0
        assert out.exists()


class TestPrepareCommand:
    def test_report_fields(self, tmp_path):
        out = tmp_path / "prep.json"
        code = run_cli(["prepare", "--n-qubits", "6", "--m-ex", "1",
                        "-o", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert 0 <= doc["p_transfer"] <= 1
        assert doc["fidelity_mirror"] == pytest.approx(1.0, abs=1e-6)
        assert len(doc["wait_times"]) == 1


class TestEvolveCommand:
    def test_trajectory_and_snapshots(self, tmp_path):
        out = tmp_path / "traj.csv"
        code = run_cli(["evolve", "--n-qubits", "6", "--k1d-d-over-pi", "0.7",
                        "--t-max", "5", "--n-t", "11",
                        "--snapshot-times", "0,5", "-o", str(out)])
        assert code == 0
        meta, columns, rows = read_csv(out)
        assert columns == ["t", "p0", "p1", "p2", "F_target"]
        assert len(rows) == 11
        total0 = sum(float(v) for v in rows[0][1:4])
        assert total0 == pytest.approx(1.0, abs=1e-8)
        assert (tmp_path / "traj_snapshot_t0.csv").exists()
        assert (tmp_path / "traj_snapshot_t5.csv").exists()


class TestFiguresCommand:
    def test_fig3_set(self, tmp_path):
        code = run_cli(["figures", "--which", "fig3", "--out-dir", str(tmp_path)])
        assert code == 0
        manifest = json.loads((tmp_path / "figures_manifest.json").read_text())
        assert manifest["figures"] == ["fig3"]
        for name in manifest["files"]:
            assert (tmp_path / name).exists()


class TestG2Command:
    def test_surface_and_maxima_report(self, tmp_path):
        out = tmp_path / "t2.csv"
        code = run_cli(["g2", "--n-qubits", "4", "--k1d-d-over-pi", "0.7",
                        "--t-list", "0,2", "--tau-periods", "1",
                        "--points-per-period", "10", "-o", str(out)])
        assert code == 0
        meta, columns, rows = read_csv(out)
        assert columns == ["t", "tau", "T2"]
        maxima = json.loads((tmp_path / "t2_maxima.json").read_text())
        assert "predicted_tau_maxima_odd_n" in maxima
