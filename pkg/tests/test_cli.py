import json
import math

import pytest

from modeguide.cli import main
from modeguide.records import RunRecord


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [l for l in text.strip().splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, row.split(","))) for row in lines[1:]]


def notes(text):
    return [l[2:] for l in text.strip().splitlines() if l.startswith("# ")]


def test_single_reports_bound_states(capsys):
    code, out, _ = run(capsys, "single", "--a", "2", "--modes", "24")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) >= 1
    for row in rows:
        assert 0.25 < float(row["lambda"]) < 1.0


def test_single_rejects_bad_width(capsys):
    code, _, err = run(capsys, "single", "--a", "-1")
    assert code == 2
    assert "a > 0" in err


def test_single_json_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "single", "--a", "1", "--modes", "16",
                       "--format", "json", "--out", str(tmp_path))
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"][0]["parity"] == "even"
    record = RunRecord.from_json((tmp_path / "single.record.json").read_text())
    assert record.command == "single"
    assert record.config["a"] == 1.0
    clone = RunRecord.from_json(record.to_json())
    assert clone == record
    assert "--a" in clone.replay_argv()


def test_physical_units_reported_when_rescaled(capsys):
    code, out, _ = run(capsys, "single", "--a", "2", "--d", str(2 * math.pi), "--modes", "16")
    assert code == 0
    rows = parse_csv(out)
    assert "lambda_phys" in rows[0]
    for row in rows:
        assert float(row["lambda_phys"]) == pytest.approx(float(row["lambda"]) / 4.0, rel=1e-15)


def test_split_sweep_and_fit(capsys):
    code, out, _ = run(capsys, "split", "--a", "1", "--l", "4:6:1", "--modes", "20")
    assert code == 0
    rows = parse_csv(out)
    assert [float(r["l"]) for r in rows] == [4.0, 5.0, 6.0]
    for row in rows:
        assert float(row["delta_plus"]) > 0.0 and float(row["delta_minus"]) > 0.0
        assert float(row["lambda_plus"]) < float(row["lambda_minus"])
    assert any(n.startswith("fitted rate") for n in notes(out))


def test_split_requires_sane_range(capsys):
    code, _, err = run(capsys, "split", "--a", "1", "--l", "6:4:1")
    assert code == 2
    code, _, err = run(capsys, "split", "--a", "3", "--l", "2:4:1")
    assert code == 2


def test_single_refine_column(capsys):
    code, out, _ = run(capsys, "single", "--a", "1", "--modes", "20", "--refine")
    assert code == 0
    row = parse_csv(out)[0]
    # the ladder value is pinned against the finite-difference oracle
    assert abs(float(row["lambda_refined"]) - 0.858857) < 1e-3
    assert float(row["refine_error"]) > 0.0


def test_split_jobs_deterministic(capsys):
    argv = ("split", "--a", "1", "--l", "4:6:1", "--modes", "12")
    _, seq, _ = run(capsys, *argv)
    _, par, _ = run(capsys, *argv, "--jobs", "2")
    assert seq == par


def test_split_outputs_are_deterministic(capsys, tmp_path):
    argv = ("split", "--a", "1", "--l", "4:5:1", "--modes", "16")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    code3, _, _ = run(capsys, *argv, "--out", str(tmp_path))
    assert code3 == 0
    assert (tmp_path / "split.csv").read_text() == out1
    assert (tmp_path / "split_plot.py").exists()
    assert (tmp_path / "split.record.json").exists()


def test_critical_reports_resonance(capsys):
    code, out, _ = run(capsys, "critical", "--n", "1", "--modes", "24")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["a"]) > 0.0
    assert float(rows[0]["beta"]) != 0.0
    mu_b, mu_i = float(rows[0]["mu_beta"]), float(rows[0]["mu_integral"])
    # raw base-truncation agreement; the extrapolated comparison in the
    # acceptance suite reaches 1e-3
    assert abs(mu_b - mu_i) / mu_b < 2e-2
    assert "sqrt(3)" in rows[0]["kappa_formula"]


def test_critical_validates_count(capsys):
    code, _, _ = run(capsys, "critical", "--n", "0")
    assert code == 2


def test_threshold_requires_critical_width(capsys):
    code, _, err = run(capsys, "threshold", "--a", "1.0", "--l", "4:5:1", "--modes", "16")
    assert code == 4
    assert "critical" in err


def test_threshold_sweep(capsys):
    code, out, _ = run(capsys, "threshold", "--n", "1", "--l", "4:5:0.5", "--modes", "24")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 3
    for row in rows:
        assert 0.0 < float(row["kappa"]) < 1e-3
        assert float(row["gap"]) == pytest.approx(float(row["kappa"]) ** 2, rel=1e-12)
    assert any(n.startswith("fitted rate") for n in notes(out))


def test_threshold_exhausted_scan_is_non_convergence(capsys):
    code, _, err = run(capsys, "threshold", "--n", "9", "--l", "4:5:1", "--modes", "16")
    assert code == 3
    assert "critical widths" in err


def test_threshold_deterministic(capsys):
    argv = ("threshold", "--n", "1", "--l", "4:4.5:0.5", "--modes", "16")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--a", "1", "--h", "0.125", "--L", "8", "--k", "2")
    assert code == 0
    rows = parse_csv(out)
    assert len(rows) == 4  # two parities, two eigenvalues each
    even_rows = [r for r in rows if r["parity"] == "even"]
    assert float(even_rows[0]["lambda_extrapolated"]) < 1.0
    assert float(even_rows[0]["error_bound"]) > 0.0


def test_oracle_grid_alignment_error(capsys):
    code, _, err = run(capsys, "oracle", "--a", "0.33", "--h", "0.125", "--L", "8")
    assert code == 2
    assert "grid step" in err


def test_unknown_subcommand_usage(capsys):
    code = main(["bogus"])
    assert code == 2
    code, _, err = run(capsys)
    assert code == 2


def test_record_replay_regenerates_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "single", "--a", "1", "--modes", "16", "--out", str(tmp_path))
    assert code == 0
    record = RunRecord.from_json((tmp_path / "single.record.json").read_text())
    code2, out2, _ = run(capsys, *record.replay_argv())
    assert code2 == 0
    assert out2 == out


def test_config_file_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("modes = 16\na = 2\n")
    code, out, _ = run(capsys, "single", "--config", str(cfg))
    assert code == 0
    assert parse_csv(out)
    # explicit flag beats the config file
    code, out2, _ = run(capsys, "single", "--config", str(cfg), "--a", "1", "--modes", "12")
    assert code == 0
    assert out2 != out
