import json

import numpy as np

import xorcomm as xc
from xorcomm.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_omega_family(capsys):
    code, out, _ = run(["solve", "--family", "n=1", "--quantity", "omega"],
                       capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["value"] == 1.0
    assert rec["exact"] is True
    assert rec["quantity"] == "omega"


def test_solve_from_game_file(tmp_path, capsys):
    path = tmp_path / "chsh.json"
    path.write_text(json.dumps(xc.chsh().to_json()))
    code, out, _ = run(["solve", "--game", str(path), "--quantity", "omega"],
                       capsys)
    assert code == 0
    assert json.loads(out)["value"] == 0.5


def test_solve_writes_record_file(tmp_path, capsys):
    out_path = tmp_path / "rec.json"
    code, _, _ = run(["solve", "--family", "n=1", "--quantity", "omega_star",
                      "--restarts", "4", "--out", str(out_path)], capsys)
    assert code == 0
    rec = json.loads(out_path.read_text())
    assert abs(rec["value"] - 1.0) < 1e-6
    assert rec["certificate"]["dim"] >= 1


def test_missing_source_is_usage_error(capsys):
    code, _, err = run(["solve", "--quantity", "omega"], capsys)
    assert code == 3
    assert "game source" in err


def test_guard_exit_code(capsys):
    code, _, _ = run(["solve", "--family", "n=3", "--quantity",
                      "omega_ow_classical", "--k", "4", "--guard", "1000"],
                     capsys)
    assert code == 2


def test_heuristic_flag_downgrades_guard(capsys):
    code, out, _ = run(["solve", "--family", "n=2", "--quantity",
                        "omega_ow_classical", "--k", "2", "--guard", "1000",
                        "--restarts", "16", "--heuristic"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["exact"] is False
    assert 0.0 < rec["value"] <= 1.0


def test_lift_reports_residual_and_quotients(capsys):
    code, out, _ = run(["lift", "--family", "n=1", "--d", "2",
                        "--restarts", "8"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert rec["teleportation_residual"] < 1e-10
    assert rec["bell_classical"] <= rec["omega_ow_classical_2logd"] + 1e-9
    assert rec["quotient_game"] >= 1.0 - 1e-9


def test_reduce_emits_distortion(capsys):
    code, out, _ = run(["reduce", "--n", "2", "--m", "128", "--trials", "30",
                        "--restarts", "4"], capsys)
    assert code == 0
    rec = json.loads(out)
    assert 0.0 <= rec["distortion_rows"]["pass_fraction"] <= 1.0
    assert rec["reduced"]["ow_quantum"] <= 1.0 + 1e-9


def test_report_aggregates_and_summarizes(tmp_path, capsys):
    recdir = tmp_path / "recs"
    recdir.mkdir()
    main(["solve", "--family", "n=1", "--quantity", "omega_ow_quantum",
          "--d", "1", "--restarts", "4",
          "--out", str(recdir / "q.json")])
    main(["solve", "--family", "n=1", "--quantity", "omega_ow_classical",
          "--k", "1", "--out", str(recdir / "c.json")])
    capsys.readouterr()
    out_csv = tmp_path / "report.csv"
    code = main(["report", "--records", str(recdir), "--out", str(out_csv)])
    assert code == 0
    text = out_csv.read_text()
    assert "quantity" in text.splitlines()[0]
    assert "ratio" in text  # trend summary appended
    assert ",True" in text or "1," in text


def test_report_flags_malformed_records(tmp_path, capsys):
    recdir = tmp_path / "recs"
    recdir.mkdir()
    (recdir / "good.json").write_text(json.dumps(
        {"quantity": "omega", "value": 0.5, "exact": True, "seed": 0,
         "parameters": {}, "elapsed_seconds": 0.0}))
    (recdir / "bad.json").write_text("{not json")
    code, _, err = run(["report", "--records", str(recdir)], capsys)
    assert code == 4
    assert "malformed" in err


def test_cli_determinism(capsys):
    args = ["solve", "--family", "n=2", "--quantity", "omega_ow_quantum",
            "--d", "2", "--restarts", "8", "--seed", "7"]
    _, out1, _ = run(args, capsys)
    _, out2, _ = run(args, capsys)
    r1, r2 = json.loads(out1), json.loads(out2)
    r1.pop("elapsed_seconds"), r2.pop("elapsed_seconds")
    assert r1 == r2
