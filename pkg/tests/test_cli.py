import math
import os

import numpy as np
import pytest

from platelab.cli import main, parse_config, UsageError
from platelab.lattice import Field, Lattice, write_field


def test_flags_map_to_config():
    cfg = parse_config(["--dim", "1", "--grid", "512", "--length", "32", "norm", "--p", "2", "--q", "2",
                        "--s", "0", "--input", "f.vpf"])
    assert cfg.command == "norm"
    assert (cfg.values["dim"], cfg.values["grid"], cfg.values["length"]) == (1, 512, 32.0)
    assert cfg.values["input"] == "f.vpf"


def test_cli_overrides_config_file(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# norm settings\np = inf\nq = 1   # outer\nwindow-width = 2\n")
    cfg = parse_config(["--config", str(conf), "norm", "--p", "2", "--input", "f.vpf"])
    assert cfg.values["p"] == 2.0
    assert cfg.values["q"] == 1.0
    assert cfg.values["window_width"] == 2.0
    cfg = parse_config(["--config", str(conf), "norm", "--input", "f.vpf"])
    assert cfg.values["p"] == math.inf


def test_unknown_key_rejected(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("p = 2\ncolour = blue\n")
    with pytest.raises(UsageError, match=":2: unknown key 'colour'"):
        parse_config(["--config", str(conf), "norm", "--input", "f.vpf"])


def test_bad_values_rejected(capsys):
    assert main(["--grid", "500", "norm", "--input", "f.vpf"]) == 1
    assert "power of two" in capsys.readouterr().err
    assert main(["norm", "--p", "0.5", "--input", "f.vpf"]) == 1
    assert main(["norm", "--unknown", "1"]) == 1
    assert main(["experiment", "product", "--q", "2"]) == 1


def test_missing_input_names_path(tmp_path, capsys):
    missing = tmp_path / "nope.vpf"
    assert main(["--out", str(tmp_path / "o"), "norm", "--input", str(missing)]) == 1
    assert str(missing) in capsys.readouterr().err


def test_norm_and_stft(tmp_path, capsys):
    lat = Lattice(1, 64, 8.0)
    f = Field.gaussian(lat)
    write_field(f, tmp_path / "f.vpf")
    out = tmp_path / "o"
    assert main(["--out", str(out), "norm", "--input", str(tmp_path / "f.vpf")]) == 0
    value = float(capsys.readouterr().out.split("=")[1])
    assert value == pytest.approx(f.l2_norm() ** 2, rel=1e-12)  # window = f
    assert (out / "manifest.txt").exists()
    assert main(["--out", str(out), "stft", "--input", str(tmp_path / "f.vpf")]) == 0
    assert len((out / "stft.csv").read_text().splitlines()) == 1 + 64 * 64
    assert main(["--grid", "32", "--out", str(out), "stft", "--input", str(tmp_path / "f.vpf")]) == 1


def test_solve_with_zero_nonlinearity_equals_propagate(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    common = ["--grid", "64", "--length", "8"]
    assert main(common + ["--out", str(a), "propagate", "--time", "0.3", "--nodes", "4"]) == 0
    assert main(common + ["--out", str(b), "solve", "--time", "0.3", "--nodes", "4"]) == 0
    for name in ["trajectory.csv", "convergence.csv"] + [f"node_{m:04d}.vpf" for m in range(4)]:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_solve_power_law(tmp_path, capsys):
    out = tmp_path / "o"
    code = main(["--grid", "64", "--length", "8", "--out", str(out), "solve", "--nonlinearity", "power",
                 "--lam", "1e-3", "--k", "1", "--time", "0.1", "--nodes", "9"])
    assert code == 0
    assert "converged = true" in capsys.readouterr().out
    manifest = (out / "manifest.txt").read_text()
    assert "lam = 0.001+0j" in manifest and "picard_tol = 1e-10" in manifest


def test_experiment_exit_codes(tmp_path):
    out = tmp_path / "o"
    ok = main(["--grid", "64", "--length", "16", "--out", str(out), "experiment", "multiplier",
               "--members", "2"])
    assert ok == 0
    assert (out / "multiplier.csv").exists() and (out / "multiplier.verdict.txt").exists()
    # a growth threshold of 1 cannot be met by a curve with any variation
    bad = main(["--grid", "128", "--length", "32", "--out", str(out), "experiment", "growth",
                "--members", "2", "--times", "0.1,1,10", "--threshold", "1"])
    assert bad == 2


def test_experiment_csv_byte_identical(tmp_path):
    args = ["--grid", "64", "--length", "16", "--seed", "7", "experiment", "product", "--members", "3",
            "--tuples", "3"]
    assert main(["--out", str(tmp_path / "a")] + args) == 0
    assert main(["--out", str(tmp_path / "b")] + args) == 0
    assert (tmp_path / "a" / "product.csv").read_bytes() == (tmp_path / "b" / "product.csv").read_bytes()


def test_thread_cap_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PLATELAB_THREADS", "0")
    assert main(["--grid", "64", "--length", "16", "--out", str(tmp_path), "experiment", "multiplier",
                 "--members", "2"]) == 1
    monkeypatch.setenv("PLATELAB_THREADS", "2")
    assert main(["--grid", "64", "--length", "16", "--out", str(tmp_path), "experiment", "multiplier",
                 "--members", "2"]) == 0
