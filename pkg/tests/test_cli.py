import csv
import io
import json
import math

import jsonschema
import pytest

from rdctools import cli
from rdctools.io import load_schema
from rdctools.records import RdcPoint
from rdctools.sweep import (AxisSpec, SweepConfig, build_config, closed_form, read_config_file,
                            run_curve, run_surface, run_verify)

HEADER = "theta_d,theta_p,theta_c,rate_bits,branch"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_curve_gaussian_non_increasing_ending_in_zero(capsys):
    code, out, _ = run(["curve", "--gamma", "1", "--theta-p", "0", "--theta-c", "1.12",
                        "--axis", "theta_d:0.2:3:40"], capsys)
    assert code == 0
    assert out.splitlines()[0] == HEADER
    r = rows(out)
    assert len(r) == 40
    rates = [float(x["rate_bits"]) for x in r if x["branch"] != "infeasible"]
    assert all(b <= a for a, b in zip(rates, rates[1:]))
    assert rates[-1] == 0.0
    assert r[-1]["branch"] == "ZeroRate"


def test_curve_marks_infeasible_rows(capsys):
    code, out, _ = run(["curve", "--gamma", "0.8", "--theta-p", "0.2", "--theta-c", "1",
                        "--axis", "theta_d:0.05:2:5"], capsys)
    assert code == 0
    first = rows(out)[0]
    assert first["branch"] == "infeasible"
    assert first["rate_bits"] == ""


def test_curve_binary_rate_complexity(capsys):
    code, out, _ = run(["curve", "--source", "binary", "--q-sx", "0.1", "--theta-p", "0.5",
                        "--axis", "theta_c:0:1:11"], capsys)
    assert code == 0
    r = rows(out)
    assert r[0]["theta_d"] == ""
    rates = [float(x["rate_bits"]) for x in r if x["branch"] == "feasible"]
    assert all(b <= a + 1e-12 for a, b in zip(rates, rates[1:]))


def test_two_step_curve_and_two_by_two_surface(capsys):
    _, out, _ = run(["curve", "--theta-p", "0", "--theta-c", "1", "--axis", "theta_d:1:2:2"],
                    capsys)
    assert len(rows(out)) == 2
    _, out, _ = run(["surface", "--theta-p", "0", "--axis", "theta_d:1:2:2",
                     "--axis", "theta_c:0.5:2:2"], capsys)
    assert len(rows(out)) == 4


def test_surface_row_major_and_monotone(capsys):
    code, out, _ = run(["surface", "--theta-p", "0", "--axis", "theta_d:0.5:2.5:6",
                        "--axis", "theta_c:0.25:4:5"], capsys)
    assert code == 0
    r = rows(out)
    assert [float(x["theta_c"]) for x in r[:5]] == pytest.approx([0.25, 1.1875, 2.125,
                                                                  3.0625, 4.0])
    grid = [[math.inf if x["rate_bits"] == "" else float(x["rate_bits"]) for x in r[i:i + 5]]
            for i in range(0, 30, 5)]
    for i in range(6):
        assert all(b <= a for a, b in zip(grid[i], grid[i][1:]))
    for j in range(5):
        col = [grid[i][j] for i in range(6)]
        assert all(b <= a for a, b in zip(col, col[1:]))


def test_json_output_validates_against_schema(capsys, tmp_path):
    out_path = tmp_path / "s.json"
    code, _, _ = run(["surface", "--source", "binary", "--format", "json", "--out",
                      str(out_path), "--axis", "theta_p:0.05:0.6:4",
                      "--axis", "theta_c:0.1:1:3"], capsys)
    assert code == 0
    doc = json.loads(out_path.read_text())
    jsonschema.validate(doc, load_schema())
    assert doc["source"] == "binary"
    assert len(doc["points"]) == 12
    assert [a["name"] for a in doc["axes"]] == ["theta_p", "theta_c"]


def test_json_with_oracle_validates(capsys):
    code, out, _ = run(["curve", "--format", "json", "--verify", "--theta-p", "1",
                        "--theta-c", "inf", "--axis", "theta_d:0.2:1.2:3"], capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert all("oracle_gap" in p for p in doc["points"])


def test_csv_oracle_columns(capsys):
    _, out, _ = run(["curve", "--verify", "--theta-p", "1", "--theta-c", "inf",
                     "--axis", "theta_d:0.2:1.2:3"], capsys)
    assert out.splitlines()[0] == HEADER + ",oracle_rate_bits,oracle_gap_bits"


def test_config_file_and_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nsource = gaussian\ngamma = 0.9\ntheta_p = 0.25\n"
                   "theta_c = 2   # bits\naxes = theta_d:0.5:2:4\n")
    raw = read_config_file(cfg)
    assert raw["gamma"] == "0.9"
    _, a, _ = run(["curve", "--config", str(cfg)], capsys)
    _, b, _ = run(["curve", "--config", str(cfg), "--gamma", "0.5"], capsys)
    assert len(rows(a)) == 4 and a != b


def test_threads_do_not_change_output(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("theta_p = 0\ntheta_c = 1\naxes = theta_d:0.1:3:200\n")
    one, eight = tmp_path / "one.csv", tmp_path / "eight.csv"
    assert cli.main(["curve", "--config", str(cfg), "--threads", "1", "--out", str(one)]) == 0
    assert cli.main(["curve", "--config", str(cfg), "--threads", "8", "--out", str(eight)]) == 0
    assert one.read_bytes() == eight.read_bytes()


@pytest.mark.parametrize("argv", [
    ["curve"],
    ["curve", "--theta-p", "0", "--theta-c", "1"],
    ["curve", "--theta-p", "0", "--theta-c", "1", "--axis", "theta_d:1:2"],
    ["curve", "--theta-p", "0", "--theta-c", "1", "--axis", "theta_d:2:1:5"],
    ["curve", "--theta-p", "0", "--theta-c", "1", "--axis", "theta_d:1:2:1"],
    ["curve", "--theta-p", "2", "--theta-c", "1", "--axis", "theta_d:1:2:3"],
    ["curve", "--source", "binary", "--theta-p", "0.1", "--axis", "theta_c:0:2:3"],
    ["curve", "--theta-c", "1", "--axis", "theta_d:1:2:3", "--axis", "theta_p:0:1:3"],
    ["surface", "--theta-p", "0", "--theta-c", "1", "--axis", "theta_d:1:2:3"],
    ["curve", "--config", "/nonexistent.cfg"],
    ["bogus"],
    ["simulate", "gaussian", "--kappa", "0.9", "--sigma", "0.5", "-n", "10000"],
])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(cli.main(argv))
    assert info.value.code == 1


def test_internal_error_exit_3(monkeypatch, capsys):
    def boom(config):
        raise RuntimeError("boom")
    monkeypatch.setattr(cli, "run_curve", boom)
    code, _, _ = run(["curve", "--theta-p", "0", "--theta-c", "1",
                      "--axis", "theta_d:1:2:3"], capsys)
    assert code == 3


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        cli.main(["curve", "--help"])
    out = capsys.readouterr().out
    for key in ("source = gaussian", "format = csv", "seed = 0", "tolerance = 0.005",
                "constraint_mode = proof", "threads = 1"):
        assert key in out


def test_verify_gaussian_passes(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, err = run(["verify", "--gamma", "1", "--theta-p", "0.25",
                          "--axis", "theta_d:0.3:2:6", "--axis", "theta_c:0.5:4:4",
                          "--report", str(report)], capsys)
    assert code == 0, err
    doc = json.loads(report.read_text())
    assert doc["passed"] and doc["n_points"] == 24
    assert len(doc["worst"]) == 10


def test_verify_fault_injection_fails_with_location(capsys):
    config = SweepConfig(gamma=1.0, theta_p=0.25, theta_c=math.inf,
                         axes=(AxisSpec("theta_d", 0.3, 1.5, 4),))

    def corrupted(cfg, theta_d, theta_p, theta_c):
        pt = closed_form(cfg, theta_d, theta_p, theta_c)
        if theta_d == 0.7 and pt.rate is not None:
            return RdcPoint(pt.theta_d, pt.theta_p, pt.theta_c, pt.rate + 0.05, pt.branch)
        return pt

    report = run_verify(config, closed_form_fn=corrupted)
    assert not report.passed
    assert [p.theta_d for p, _ in report.discrepancies] == [pytest.approx(0.7)]
    assert "exceeds tolerance" in report.discrepancies[0][1]
    assert report.worst(1)[0].theta_d == pytest.approx(0.7)


def test_verify_exit_2_on_discrepancy(monkeypatch, capsys):
    import rdctools.sweep as sweep

    real = sweep.closed_form

    def corrupted(cfg, theta_d, theta_p, theta_c):
        pt = real(cfg, theta_d, theta_p, theta_c)
        return pt if pt.rate is None else RdcPoint(pt.theta_d, pt.theta_p, pt.theta_c,
                                                   pt.rate + 0.1, pt.branch)
    monkeypatch.setattr(sweep, "closed_form", corrupted)
    code, _, err = run(["verify", "--theta-p", "1", "--theta-c", "inf",
                        "--axis", "theta_d:0.2:0.9:3"], capsys)
    assert code == 2
    assert "FAIL" in err


def test_verify_reports_ambiguous_points_separately():
    config = SweepConfig(gamma=1.0, theta_p=1.0, theta_c=0.5,
                         axes=(AxisSpec("theta_d", 0.5, 0.9, 3),))
    report = run_verify(config)
    assert report.passed
    assert len(report.ambiguous) == 3


def test_verify_binary_symmetric_region(capsys):
    code, _, err = run(["verify", "--source", "binary", "--q-sx", "0.1", "--theta-c", "1",
                        "--axis", "theta_p:0.1:0.5:3"], capsys)
    assert code == 0, err


def test_simulate_outputs(capsys):
    code, out, _ = run(["simulate", "binary", "-n", "100000", "--seed", "3"], capsys)
    assert code == 0
    doc = json.loads(out)
    est = doc["crossover"]
    assert abs(est["mean"] - doc["expected_crossover"]) <= 4 * est["stderr"]
    assert doc["rng"].startswith("numpy.random.PCG64")
    code, out, _ = run(["simulate", "gaussian", "-n", "200000", "--threads", "4"], capsys)
    doc = json.loads(out)
    assert abs(doc["mse"]["mean"] - doc["expected_mse"]) <= 4 * doc["mse"]["stderr"]


def test_bounds_command(tmp_path, capsys):
    path = tmp_path / "samples.json"
    path.write_text(json.dumps({"log_q_s_given_shat": [math.log(0.5)] * 4,
                                "log_p_u_given_x": [0.0] * 4, "log_t_u": [0.0] * 4}))
    code, out, _ = run(["bounds", str(path), "--entropy-s", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["distortion_lower"]["mean"] == pytest.approx(0.0)
    assert doc["complexity_upper"]["mean"] == 0.0
    assert "rate_upper" not in doc
    path.write_text("{not json")
    assert run(["bounds", str(path)], capsys)[0] == 1


def test_build_config_programmatic():
    cfg = build_config({"axes": "theta_d:0.1:1:3, theta_c:0.5:1:2", "theta_p": "0.5"})
    assert len(cfg.axes) == 2
    assert len(run_surface(cfg)) == 6
    with pytest.raises(Exception):
        run_curve(cfg)
