import csv
import json

import pytest

from symmid import __version__
from symmid.cli import build_parser, main, parse_grid, parse_n_list
from symmid.invariants import expected_hilbert_function


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["# csv_version", "1"]
    return rows[1], rows[2:]


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["gen", "--d", "2", "--r", "1", "--n", "4", "--seed", "7", "--out", str(a)], capsys)[0] == 0
    assert run(["gen", "--d", "2", "--r", "1", "--n", "4", "--seed", "7", "--out", str(b)], capsys)[0] == 0
    assert (a / "gen.json").read_bytes() == (b / "gen.json").read_bytes()
    data = json.loads((a / "gen.json").read_text())
    assert data["version"] == __version__ and data["seed"] == 7 and data["mode"] == "exact"
    assert data["tau"] and data["generators"][0]["allocation"]


def test_gen_too_few_variables(capsys):
    code, _, err = run(["gen", "--d", "3", "--r", "1", "--n", "3"], capsys)
    assert code == 2
    assert "requires n ≥ 15" in err


def test_verify_pass(capsys):
    code, out, _ = run(["verify", "--n", "5", "--d", "3", "--r", "1", "--seed", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and data["certified"]
    assert data["hf"] == [1, 5, 15, 2]


def test_verify_fast_mode_is_not_certified(capsys):
    code, out, _ = run(["verify", "--n", "4", "--d", "2", "--r", "1", "--mode", "fast"], capsys)
    data = json.loads(out)
    assert code == 0 and data["passed"] and not data["certified"]


def test_verify_adversarial(capsys):
    code, out, err = run(["verify", "--n", "5", "--d", "3", "--r", "1", "--adversarial"], capsys)
    assert code == 1
    data = json.loads(out)
    assert not data["certificate"]["checks"]["dim_Id"]["passed"]
    assert data["certificate"]["checks"]["dim_Id"]["computed"] == 5
    assert "dim_Id" in err


def test_verify_grid(tmp_path, capsys):
    code, _, _ = run(["verify", "--grid", "3,2,1;4,2,1", "--out", str(tmp_path)], capsys)
    assert code == 0
    header, rows = read_csv(tmp_path / "verify_grid.csv")
    assert header[:5] == ["n", "d", "r", "seed", "passed"]
    assert [r[0] for r in rows] == ["3", "4"]


def test_betti(tmp_path, capsys):
    code, _, err = run(["betti", "--n", "3", "--d", "2", "--r", "1", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "formula == oracle" in err
    data = json.loads((tmp_path / "betti.json").read_text())
    assert data["oracle"]["totals"] == [1, 5, 5, 1]
    assert (tmp_path / "betti.png").stat().st_size > 0


def test_betti_cost_guard(capsys):
    code, _, err = run(["betti", "--n", "7", "--d", "2", "--r", "1"], capsys)
    assert code == 2 and "limited" in err


def test_series(tmp_path, capsys):
    code, _, _ = run(["series", "--d", "2", "--r", "1", "--orders", "8", "--out", str(tmp_path)], capsys)
    assert code == 0
    header, rows = read_csv(tmp_path / "series.csv")
    assert header == ["n", "hf", "betti_totals", "e_over_n_pow_d_minus_1"]
    for row in rows:
        n = int(row[0])
        if n >= 3:
            want = [x for x in expected_hilbert_function(n, 2, 1) if x]
            assert row[1] == " ".join(map(str, want))
    data = json.loads((tmp_path / "series.json").read_text())
    assert data["variants"] == {"reduced": True, "alt": False}
    assert (tmp_path / "series_multiplicity.png").exists()


def test_chain(tmp_path, capsys):
    code, _, err = run(["chain", "--d", "2", "--r", "1", "--n-list", "3,4,5,6", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert err.count("PASS") == 4
    header, rows = read_csv(tmp_path / "chain.csv")
    assert [r[2] for r in rows] == ["1 5 5 1", "1 9 16 9 1", "1 14 35 35 14 1", "1 20 64 90 64 20 1"]
    assert (tmp_path / "chain_hf.png").exists() and (tmp_path / "chain_betti.png").exists()


def test_usage_errors(capsys):
    assert run(["verify", "--n", "3", "--d", "2", "--r", "5"], capsys)[0] == 2
    assert run(["verify", "--d", "2", "--r", "1"], capsys)[0] == 2
    assert run(["gen", "--n", "4", "--d", "2", "--r", "1", "--coeff-bound", "0"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["verify", "--mode", "sloppy"])
    assert exc.value.code == 2


def test_parsers():
    assert parse_grid("default")[0] == (3, 2, 1)
    assert parse_grid("5,3,1;6,3,1") == [(5, 3, 1), (6, 3, 1)]
    assert parse_n_list("3, 4,5") == [3, 4, 5]


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SYMMID_THREADS", "2")
    code, out, _ = run(["verify", "--grid", "3,2,1;3,2,2"], capsys)
    assert code == 0 and json.loads(out)["passed"]
