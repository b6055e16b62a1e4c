import io
import json

import pytest

from ffgap.cli import main, parse_ell, parse_lambda, UsageError
from ffgap.scalars import qf_make
from ffgap.tuner import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_compare_ok(capsys):
    code, out, err = run(capsys, "tables", "--lattice", "hypercubic", "--dim", "2", "--ell", "2..4",
                         "--compare", "paper", "--jobs", "1")
    assert code == 0
    recs = read_csv(io.StringIO(out))
    assert [r["ell"] for r in recs] == [2, 3, 4]
    assert "MISMATCH" not in err


def test_tables_mismatch_exit_1(capsys):
    # the exact honeycomb adjacent constant moves the published table
    code, _, err = run(capsys, "tables", "--lattice", "honeycomb", "--ell", "3", "--compare", "paper",
                       "--honeycomb-k1", "exact", "--jobs", "1")
    assert code == 1 and "MISMATCH" in err


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "tables", "--ell", "1")[0] == 2
    assert run(capsys, "tables", "--ell", "x")[0] == 2
    assert run(capsys, "tables", "--lattice", "kagome")[0] == 2
    assert run(capsys, "tables", "--lattice", "honeycomb", "--ell", "2", "--compare", "paper")[0] == 2
    assert run(capsys, "bound", "--ell", "5")[0] == 2
    assert run(capsys, "census", "--ell", "2", "--L", "4")[0] == 2
    assert run(capsys, "gap", "--L", "5")[0] == 2  # 25 sites exceed the cap
    assert run(capsys, "nope")[0] == 2


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "--lattice", "triangular", "--ell", "2", "--uniform", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["identified"] == {"K1": 7.0, "K2": 12.0, "K3": 8.0}
    assert obj["comparison"]["ok"]


def test_census_honeycomb_published_is_flagged(capsys):
    assert run(capsys, "census", "--lattice", "honeycomb", "--ell", "2", "--uniform")[0] == 1
    assert run(capsys, "census", "--lattice", "honeycomb", "--ell", "2", "--uniform",
               "--honeycomb-k1", "exact")[0] == 0


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "--lattice", "triangular", "--ell", "10..12", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert all(r["t_le_bound"] for r in rows) and len(rows) == 3


def test_lambda_override(capsys):
    code, out, _ = run(capsys, "tables", "--ell", "2", "--lambda", "1")
    rec = read_csv(io.StringIO(out))[0]
    assert rec["lambda_star"] == 1.0 and rec["feasible"]
    assert code == 0


def test_gap_and_spinwave(capsys):
    code, out, _ = run(capsys, "gap", "--chain", "4", "--bc", "open")
    assert code == 0 and abs(json.loads(out)["gamma"] - 0.2928932188) < 1e-9
    code, out, _ = run(capsys, "spinwave", "--lattice", "honeycomb", "--L", "20")
    obj = json.loads(out)
    assert code == 0 and obj["bc"] == "open" and obj["reference"] == 0.9


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--ell", "2", "--L", "3", "--uniform")
    obj = json.loads(out)
    assert code == 0 and obj["verdict"]["holds"]


def test_out_dir_and_determinism(tmp_path, capsys):
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        assert run(capsys, "tables", "--ell", "2..3", "--seedless", "--out", str(d), "--jobs", "1")[0] == 0
    a, b = (d / "tables.csv" for d in dirs)
    assert a.read_bytes() == b.read_bytes()
    ma, mb = (json.loads((d / "manifest.json").read_text()) for d in dirs)
    for m in (ma, mb):
        m.pop("timestamp")
        m.pop("outputs")
    assert ma == mb and ma["seedless"] and ma["command"] == "tables"


def test_parsers():
    assert parse_ell("3..5") == [3, 4, 5]
    assert parse_ell("7") == [7]
    with pytest.raises(UsageError):
        parse_ell("5..3")
    assert parse_lambda("1/2") == qf_make("1/2")
    assert parse_lambda("2,5") == qf_make(0, 2, 5)
    assert parse_lambda("-2,2,2") == qf_make(-2, 2, 2)
    with pytest.raises(UsageError):
        parse_lambda("1,1,3")
