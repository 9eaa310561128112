import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from secant_sketch import bench
from secant_sketch.cli import main
from secant_sketch.datasets import read_points
from secant_sketch.errors import ParameterError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO("".join(l + "\n" for l in text.splitlines() if not l.startswith("#")))))


def test_bench_row_counts(capsys):
    code, out, _ = run(capsys, "bench", "--N", "1024", "--methods", "sors,block", "--reps", "3", "--n", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# secant-sketch v1" and lines[1] == "# threads=1"
    rows = _rows(out)
    assert len(rows) == 8
    assert [r["rep"] for r in rows].count("agg") == 2
    detail = [r for r in rows if r["rep"] != "agg"]
    assert all(int(r["time_ns"]) > 0 for r in detail)
    assert {r["m"] for r in rows} == {"256"} and {r["m1"] for r in rows if r["method"] == "block"} == {"32"}


def test_bench_no_timing_deterministic(capsys, tmp_path):
    args = ["bench", "--N", "256,1024", "--methods", "sors,block,subgaussian", "--reps", "2", "--n", "8",
            "--threads", "1", "--seed", "7", "--no-timing"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and "time_ns" not in a


def test_bench_threads_match_single_thread(capsys):
    base = ["bench", "--N", "256", "--reps", "4", "--n", "8", "--seed", "3", "--no-timing"]
    _, one, _ = run(capsys, *base, "--threads", "1")
    _, two, _ = run(capsys, *base, "--threads", "2")
    assert one.splitlines()[2:] == two.splitlines()[2:]


def test_bench_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"N": [256], "reps": 2, "n": 5, "methods": ["sors"], "m": 10}))
    _, out, _ = run(capsys, "bench", "--config", str(cfg), "--m", "20", "--no-timing")
    rows = _rows(out)
    assert {r["m"] for r in rows} == {"20"} and len(rows) == 3


def test_bench_bad_config(capsys):
    code, _, err = run(capsys, "bench", "--N", "1024", "--methods", "fastfood")
    assert code == 2 and "unknown methods" in err
    with pytest.raises(ParameterError):
        bench.BenchConfig.from_dict({"bogus": 1})


def test_bounds_subgaussian(capsys):
    code, out, _ = run(capsys, "bounds", "--thm", "1.3", "--beta", "45272692", "--eps", "0.1", "--p", "0.01")
    data = json.loads(out)
    assert code == 0 and data["m"] == 4226 and data["theorem_id"] == "subgaussian"


def test_bounds_infeasible_exit(capsys):
    args = ["bounds", "--thm", "1.5", "--beta", "45272692", "--eps", "0.5", "--p", "0.01", "--N", "1000000"]
    code, out, _ = run(capsys, *args)
    assert code == 4 and json.loads(out)["feasible"] is False
    code, _, _ = run(capsys, *args, "--warn-infeasible")
    assert code == 0


def test_bounds_manifold_and_overrides(capsys):
    code, out, _ = run(capsys, "bounds", "--thm", "sors", "--manifold", "sphere2", "--eps", "0.1", "--p", "0.01",
                       "--N", "16384", "--set", "sors_c0=0.5")
    data = json.loads(out)
    assert code == 0 and data["inputs"]["beta"] == pytest.approx(45272692) and data["constants"]["sors_c0"] == 0.5


def test_bounds_profile_and_other_ids(capsys):
    _, out, _ = run(capsys, "bounds", "--thm", "finite-subgaussian", "--card", "100", "--eps", "0.3", "--p", "0.1",
                    "--constants-profile", "empirical")
    assert json.loads(out)["profile"] == "empirical"
    for argv in (["--thm", "mrip", "--s", "2", "--eps", "0.3", "--p", "0.1", "--N", "256"],
                 ["--thm", "3.5", "--d", "1", "--eps", "0.3", "--p", "0.1", "--N", "4096", "--warn-infeasible"],
                 ["--thm", "3.10", "--width", "2", "--eps", "0.3", "--p", "0.1", "--N", "4096", "--warn-infeasible"]):
        code, out, _ = run(capsys, "bounds", *argv)
        assert code == 0 and "m_required" in json.loads(out)


def test_bounds_bad_id_and_missing(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bounds", "--thm", "9.9"])
    assert info.value.code == 2
    code, _, err = run(capsys, "bounds", "--thm", "1.4", "--beta", "10")
    assert code == 2 and "--eps" in err


def test_distort_identity_and_oracle(capsys, tmp_path):
    ds = json.dumps({"geometry": "sphere", "N": 64, "n": 30, "seed": 1, "d": 2})
    code, out, _ = run(capsys, "distort", "--operator", '{"family": "identity", "N": 64}', "--dataset", ds,
                       "--eps", "0.2")
    data = json.loads(out)
    assert code == 0 and data["max_sq_err"] == 0 and data["jl_verdict"] is True
    op = json.dumps({"family": "sors", "N": 64, "m": 16, "transform": "dct2", "seed": 3})
    code, out, _ = run(capsys, "distort", "--operator", op, "--dataset", ds, "--oracle")
    assert json.loads(out)["oracle_max_abs_diff"] <= 1e-12


def test_rip_commands(capsys):
    code, out, _ = run(capsys, "rip", "--operator", '{"family": "identity", "N": 10}', "--s", "3")
    assert code == 0 and json.loads(out)["ric"] == 0
    op = json.dumps({"family": "block", "N": 32, "m": {"m1": 16, "m2": 16}, "transform": "dct2"})
    code, out, _ = run(capsys, "rip", "--operator", op, "--s", "2", "--trials", "50", "--eps", "0.6")
    data = json.loads(out)
    assert code == 0 and data["wilson_low"] <= data["rate"] <= data["wilson_high"]
    code, _, err = run(capsys, "rip", "--operator", '{"family": "identity", "N": 60}', "--s", "10")
    assert code == 3 and "guard" in err


def test_cover_sphere(capsys):
    code, out, _ = run(capsys, "cover", "sphere2", "--eps", "0.5")
    r = json.loads(out)["results"][0]
    assert code == 0
    assert r["cover"] == pytest.approx(64.67, abs=0.01)
    assert r["secant_cover"] == pytest.approx(1.159e10, rel=1e-3)
    assert r["alpha"] == pytest.approx(6724) and r["beta"] == pytest.approx(45272692)
    assert r["width_bound"] == pytest.approx(57.27, abs=0.01)


def test_cover_disk_empirical(capsys):
    code, out, _ = run(capsys, "cover", "disk2", "--eps", "0.5", "0.8", "--empirical", "--samples", "2000")
    results = json.loads(out)["results"]
    assert code == 0
    assert set(results[0]["cover_terms"]) == {"interior", "boundary"}
    assert all(r["dominated"] for r in results)


def test_cover_unknown(capsys):
    code, _, _ = run(capsys, "cover", "torus", "--eps", "0.5")
    assert code == 2


def test_sample_command(capsys, tmp_path):
    path = tmp_path / "s.bin"
    code, _, _ = run(capsys, "sample", "--geometry", "sphere", "--N", "5", "--n", "12", "--d", "2",
                     "--out", str(path), "--seed", "4")
    pts = read_points(path)
    assert code == 0 and pts.shape == (12, 5)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0)
    code, _, _ = run(capsys, "sample", "--geometry", "sphere", "--N", "5", "--n", "12", "--d", "2")
    assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "secant_sketch", "bounds", "--thm", "1.3", "--beta", "10",
                          "--eps", "0.5", "--p", "0.1"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["theorem_id"] == "subgaussian"


def test_bench_module_helpers():
    cfg = bench.BenchConfig(N=[1024], transform="hadamard")
    assert bench.block_m1_for(cfg, 1024) == 32 and bench.block_m1_for(cfg, 2048) == 32
    assert bench.rows_for(cfg, 1024) == 256
    rows = bench.run(bench.BenchConfig(N=[64], reps=2, n=4, methods=["sors"], timing=False))
    summary = bench.summarize(rows)
    assert list(summary) == [(64, "sors")]
