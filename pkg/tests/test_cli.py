"""CLI: subcommands, exit codes, file round trips, config precedence."""

import csv
import json

import numpy as np
import pytest

from robustreg.cli import main


def run_cli(args):
    return main([str(a) for a in args])


class TestGen:
    def test_round_trip_reserialization(self, tmp_path):
        path = tmp_path / "a.inst"
        assert run_cli(["gen", "sparse", "--d", 50, "--s", 3, "--n", 300,
                        "--noise", "t2", "--snr", 40, "--seed", 1,
                        "-o", path]) == 0
        assert path.exists()
        from robustreg.instancefile import load_instance, save_instance
        problem, meta = load_instance(path)
        again = tmp_path / "b.inst"
        save_instance(again, problem, meta)
        assert again.read_bytes() == path.read_bytes()

    def test_lowrank_instance_size(self, tmp_path):
        path = tmp_path / "b.inst"
        assert run_cli(["gen", "lowrank", "--d1", 8, "--d2", 6, "--r", 2,
                        "--n", 40, "--noise", "gaussian", "--snr", 30,
                        "--seed", 2, "-o", path]) == 0
        from robustreg.instancefile import load_instance
        problem, meta = load_instance(path)
        assert problem.n == 40 and problem.shape == (8, 6)
        assert meta["r"] == "2"

    def test_default_seed_is_documented_and_deterministic(self, tmp_path, capsys):
        with pytest.raises(SystemExit):
            run_cli(["gen", "sparse", "--help"])
        help_text = capsys.readouterr().out
        assert "default 0" in help_text
        p1, p2 = tmp_path / "s1.inst", tmp_path / "s2.inst"
        run_cli(["gen", "sparse", "--d", 10, "--s", 2, "--n", 20, "-o", p1])
        run_cli(["gen", "sparse", "--d", 10, "--s", 2, "--n", 20, "-o", p2])
        assert p1.read_bytes() == p2.read_bytes()

    def test_explicit_beta(self, tmp_path):
        path = tmp_path / "c.inst"
        run_cli(["gen", "sparse", "--d", 6, "--beta", "16,4,1", "--n", 15,
                 "-o", path])
        from robustreg.instancefile import load_instance
        problem, _ = load_instance(path)
        np.testing.assert_array_equal(problem.truth,
                                      [16.0, 4.0, 1.0, 0.0, 0.0, 0.0])


@pytest.fixture
def noiseless_instance(tmp_path):
    path = tmp_path / "noiseless.inst"
    run_cli(["gen", "sparse", "--d", 30, "--s", 3, "--n", 150,
             "--noise", "none", "--seed", 4, "-o", path])
    return path


@pytest.fixture
def lowrank_instance(tmp_path):
    path = tmp_path / "lr.inst"
    run_cli(["gen", "lowrank", "--d1", 12, "--d2", 12, "--r", 2, "--n", 240,
             "--noise", "none", "--seed", 5, "-o", path])
    return path


def _stdout_value(capsys, key):
    out = capsys.readouterr().out
    for line in out.splitlines():
        if line.startswith(key + "="):
            return line.split("=", 1)[1]
    raise AssertionError(f"{key} not in output:\n{out}")


class TestSolve:
    def test_sparse_noiseless_recovery(self, noiseless_instance, tmp_path,
                                       capsys):
        est = tmp_path / "est.txt"
        assert run_cli(["solve-sparse", noiseless_instance, "-o", est]) == 0
        rel = float(_stdout_value(capsys, "rel_error"))
        assert rel <= 1e-6
        assert est.exists()

    def test_lowrank_noiseless_recovery(self, lowrank_instance, capsys):
        assert run_cli(["solve-lowrank", lowrank_instance]) == 0
        assert float(_stdout_value(capsys, "rel_error")) <= 1e-6

    def test_decay_only_differs_but_shares_prefix(self, tmp_path, capsys):
        inst = tmp_path / "noisy.inst"
        run_cli(["gen", "sparse", "--d", 30, "--s", 3, "--n", 150,
                 "--noise", "gaussian", "--snr", 30, "--seed", 6, "-o", inst])
        t1, t2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
        run_cli(["solve-sparse", inst, "--trace", t1])
        err1 = float(_stdout_value(capsys, "rel_error"))
        run_cli(["solve-sparse", inst, "--mode", "decay-only", "--trace", t2])
        err2 = float(_stdout_value(capsys, "rel_error"))
        assert err1 != err2
        with open(t1) as f1, open(t2) as f2:
            rows1 = list(csv.reader(f1))
            rows2 = list(csv.reader(f2))
        switch = next(i for i, r in enumerate(rows1[1:], 1) if r[1] == "2")
        assert rows1[1:switch] == rows2[1:switch]

    def test_huber_delta_flag_accepted(self, noiseless_instance):
        assert run_cli(["solve-sparse", noiseless_instance,
                        "--loss", "huber", "--delta", "0.5"]) == 0

    def test_bad_quantile_delta_is_usage_error(self, noiseless_instance,
                                               capsys):
        code = run_cli(["solve-sparse", noiseless_instance,
                        "--loss", "quantile", "--delta", "1.5"])
        assert code == 2

    def test_solver_kind_mismatch(self, lowrank_instance):
        assert run_cli(["solve-sparse", lowrank_instance]) == 1

    def test_missing_instance_is_runtime_error(self, tmp_path):
        assert run_cli(["solve-sparse", tmp_path / "nope.inst"]) == 1


class TestBenchAndDemo:
    def test_conv_scenario_writes_traces(self, tmp_path):
        out = tmp_path / "bench"
        assert run_cli(["bench", "--scenario", "conv-sparse", "--d", 25,
                        "--s", 3, "--n", 120, "--out-dir", out]) == 0
        csvs = sorted(p.name for p in out.glob("trace_*.csv"))
        assert csvs == ["trace_iht-l1-decay.csv", "trace_iht-l1.csv"]

    def test_demo_smoothing_table_shape(self, tmp_path):
        out = tmp_path / "demo.csv"
        assert run_cli(["demo-smoothing", "--tau", "0.1,1,10", "--n", 1000,
                        "--grid-points", 41, "-o", out]) == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["tau", "t", "g", "dg"]
        assert len(rows) == 1 + 3 * 41

    def test_eval_csv_command(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        x = rng.normal(size=(60, 8))
        beta = np.zeros(8)
        beta[[2, 5]] = [4.0, -2.0]
        y = x @ beta
        for name, sl in (("train.csv", slice(0, 40)),
                         ("test.csv", slice(40, 60))):
            with open(tmp_path / name, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["y"] + [f"g{i}" for i in range(8)])
                writer.writerows(np.column_stack([y[sl], x[sl]]).tolist())
        report = tmp_path / "report.csv"
        assert run_cli(["eval-csv", "--train", tmp_path / "train.csv",
                        "--test", tmp_path / "test.csv",
                        "--sparsity-grid", "2,4", "-o", report]) == 0
        out = capsys.readouterr().out
        assert "sparsity=2" in out and "g2;g5" in out
        with open(report) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["sparsity", "mae", "support"]
        assert len(rows) == 3


class TestUsageAndConfig:
    def test_unknown_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as info:
            run_cli(["frobnicate"])
        assert info.value.code == 2

    def test_config_supplies_defaults_flags_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"seed": 9, "n": 25}))
        p_cfg = tmp_path / "a.inst"
        p_flag = tmp_path / "b.inst"
        p_plain = tmp_path / "c.inst"
        run_cli(["--config", cfg, "gen", "sparse", "--d", 10, "--s", 2,
                 "-o", p_cfg])
        run_cli(["--config", cfg, "gen", "sparse", "--d", 10, "--s", 2,
                 "--seed", 9, "--n", 30, "-o", p_flag])
        run_cli(["gen", "sparse", "--d", 10, "--s", 2, "--seed", 9,
                 "--n", 25, "-o", p_plain])
        assert p_cfg.read_bytes() == p_plain.read_bytes()
        assert p_cfg.read_bytes() != p_flag.read_bytes()

    def test_bad_config_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert run_cli(["--config", bad, "gen", "sparse", "--d", 5,
                        "--s", 1, "-o", tmp_path / "x.inst"]) == 1
