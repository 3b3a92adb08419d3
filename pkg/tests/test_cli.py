import csv
import io
import json
import math

import numpy as np
import pytest

from dickestat.cli import main

FIG4_DELTA0 = {
    -4: -0.9999943203978198, -3: -0.9944585606978238, -2: -0.9875166244479912,
    -1: -0.9784121449883194, 0: -0.9657580364094529, 1: -0.9468244213323752,
    2: -0.9155909388125139, 3: -0.8563373572991307, 4: -0.7163658383240403,
    5: -0.21743115395358095,
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_stats_row_count_and_vacuum_start(capsys):
    code, out, _ = run(["stats", "--n-atoms", "1000", "--excited", "500", "--delta", "0",
                        "--tau-max", "1", "--tau-steps", "1000"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 1000
    assert float(rows[0]["mean"]) == 0.0 and rows[0]["mandel_q"] == ""
    assert list(rows[0]) == ["tau", "mean", "variance", "std", "mandel_q",
                             "fock_peak_n", "fock_peak_p", "tv_to_poisson"]


def test_stats_doubled_quantum_numbers(capsys):
    code, out, _ = run(["stats", "--two-j", "10", "--two-m", "0", "--tau-max", "1", "--tau-steps", "2"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 2
    assert 0 < float(rows[1]["mean"]) <= 5


def test_stats_rabi_period(capsys):
    code, out, _ = run(["stats", "--n-atoms", "1", "--excited", "1", "--delta", "0",
                        "--tau-max", "3.14159265", "--tau-steps", "3"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 3
    assert abs(float(rows[-1]["mean"]) - math.sin(math.pi) ** 2) < 1e-6
    assert float(rows[1]["mean"]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["stats", "--n-atoms", "4", "--excited", "2", "--tau-min", "1", "--tau-max", "1"],
        ["stats", "--n-atoms", "4", "--excited", "2", "--tau-steps", "0"],
        ["stats", "--n-atoms", "4", "--excited", "9"],
        ["stats", "--two-j", "3", "--two-m", "0"],
        ["stats", "--n-atoms", "4"],
        ["stats", "--n-atoms", "4", "--excited", "1", "--two-j", "4", "--two-m", "0"],
        ["qmin-sweep", "--n-atoms", "10", "--m-min", "0.5"],
        ["qmin-sweep", "--n-atoms", "10", "--grid-points", "50"],
    ],
)
def test_bad_config_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["stats", "--format", "xml"])
    assert exc.value.code == 2


def test_io_error_exit_3(tmp_path, capsys):
    code, _, err = run(["stats", "--n-atoms", "2", "--excited", "1", "--output",
                        str(tmp_path / "missing" / "x.csv")], capsys)
    assert code == 3 and "cannot write" in err


def test_qmin_single_cell(capsys):
    code, out, _ = run(["qmin-sweep", "--n-atoms", "10", "--m-min", "0", "--m-max", "0", "--deltas", "0"], capsys)
    (row,) = rows_of(out)
    assert code == 0
    assert float(row["q_min"]) == pytest.approx(-0.965758, abs=1e-3)
    assert list(row) == ["two_m", "delta", "q_min", "tau_at_min"]


def test_qmin_sweep_full_grid(capsys):
    code, out, _ = run(["qmin-sweep", "--n-atoms", "10"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 50
    for r in rows:
        if float(r["delta"]) == 0.0:
            m = int(r["two_m"]) // 2
            tol = 1e-4 if m == -4 else 1e-3
            assert float(r["q_min"]) == pytest.approx(FIG4_DELTA0[m], abs=tol)


def test_qmin_all_ground_exit_2(capsys):
    code, out, err = run(["qmin-sweep", "--n-atoms", "10", "--m-min", "-5", "--m-max", "-5", "--deltas", "0"], capsys)
    assert code == 2 and "no excitations" in err


def test_qmin_half_integer_m(capsys):
    code, out, _ = run(["qmin-sweep", "--two-j", "5", "--m-min", "0.5", "--m-max", "1.5", "--deltas", "0,10"], capsys)
    rows = rows_of(out)
    assert code == 0 and [r["two_m"] for r in rows] == ["1", "3", "1", "3"]


def test_figure_1a_birula(capsys):
    code, out, _ = run(["figure", "1a"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert {int(r["n_atoms"]) for r in rows} == {1000, 3000, 5000, 7500, 10000}
    checked = 0
    for r in rows:
        n, tau = int(r["n_atoms"]), float(r["tau"])
        if 0 < tau <= 0.1 / math.sqrt(n / 2):
            alpha = tau * n / 2
            assert float(r["birula_alpha"]) == pytest.approx(alpha, rel=1e-15)
            assert abs(float(r["std"]) - alpha) / alpha < 0.05
            checked += 1
    assert checked > 50


def test_figure_1b_meta_flags(capsys):
    code, out, _ = run(["figure", "1b", "--n-atoms", "100", "--tau-steps", "200", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 200
    assert doc["meta"]["paper_unspecified"] is True
    assert set(doc["meta"]["unspecified_parameters"]) == {"n_atoms", "delta"}
    assert min(r["mandel_q"] for r in doc["rows"]) < -0.9


def test_figure_1b_snapshots(capsys):
    code, out, _ = run(["figure", "1b", "--n-atoms", "100", "--snapshots"], capsys)
    rows = rows_of(out)
    assert code == 0 and list(rows[0]) == ["tau", "n", "probability"]
    taus = sorted({float(r["tau"]) for r in rows})
    assert len(taus) == 6
    for t in taus:
        assert sum(float(r["probability"]) for r in rows if float(r["tau"]) == t) == pytest.approx(1.0, abs=1e-12)


def test_figure_1c_defaults_flagged(capsys):
    code, out, _ = run(["figure", "1c", "--n-atoms", "50", "--tau-steps", "100", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["meta"]["parameters"]["delta"] == 10.0 and doc["meta"]["parameters"]["tau_max"] == 20.0
    assert doc["rows"][-1]["tau"] == pytest.approx(20.0)


def test_figure_2(capsys):
    code, out, _ = run(["figure", "2", "--n-atoms", "50,100", "--tau-max", "2", "--tau-steps", "21",
                        "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 42
    assert doc["meta"]["paper_unspecified"] is True


def test_figure_3_panel_a(capsys):
    code, out, _ = run(["figure", "3", "--panel", "a", "--tau-steps", "50"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 100
    assert {r["two_m"] for r in rows} == {"-980"}
    assert {r["window"] for r in rows} == {"early", "late"}


def test_figure_3_all_panels(capsys):
    code, out, _ = run(["figure", "3", "--tau-steps", "5"], capsys)
    rows = rows_of(out)
    assert code == 0
    assert sorted({int(r["two_m"]) for r in rows}) == [-980, 800, 1000]


def test_figure_4_n10(capsys):
    code, out, _ = run(["figure", "4", "--n-atoms", "10"], capsys)
    rows = rows_of(out)
    assert code == 0 and len(rows) == 50
    cell = next(r for r in rows if r["two_m"] == "0" and float(r["delta"]) == 0)
    assert float(cell["q_min"]) == pytest.approx(-0.965758, abs=1e-3)


def test_validate_default(capsys):
    code, out, err = run(["validate"], capsys)
    assert code == 0 and "PASS" in err
    assert len(rows_of(out)) == 14 * 3 * 25


def test_validate_one_atom(capsys):
    code, _, _ = run(["validate", "--max-atoms", "1"], capsys)
    assert code == 0


def test_validate_corrupted_build(monkeypatch, tmp_path, capsys):
    import dickestat.hamiltonian as ham

    real = ham.offdiagonal_couplings
    monkeypatch.setattr(ham, "offdiagonal_couplings", lambda s: real(s) + (np.arange(real(s).size) == 0))
    out_path = tmp_path / "report.json"
    code, _, err = run(["validate", "--format", "json", "--output", str(out_path)], capsys)
    assert code == 1 and "FAIL" in err
    assert json.loads(out_path.read_text())["meta"]["passed"] is False


def test_validate_too_many_atoms(capsys):
    code, _, _ = run(["validate", "--max-atoms", "5"], capsys)
    assert code == 2


STATS = ["stats", "--n-atoms", "40", "--excited", "25", "--delta", "3", "--tau-max", "2", "--tau-steps", "57"]


def test_csv_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(STATS + ["--output", str(a)]) == 0
    assert main(STATS + ["--output", str(b), "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_mirrors_csv(tmp_path):
    c, j = tmp_path / "a.csv", tmp_path / "a.json"
    assert main(STATS + ["--output", str(c)]) == 0
    assert main(STATS + ["--output", str(j), "--format", "json"]) == 0
    doc = json.loads(j.read_text())
    rows = rows_of(c.read_text())
    assert doc["meta"]["columns"] == list(rows[0])
    assert len(doc["rows"]) == len(rows)
    for jr, cr in zip(doc["rows"], rows):
        for k, v in cr.items():
            if v == "":
                assert jr[k] is None
            else:
                assert float(v) == jr[k]


def test_json_deterministic_apart_from_timestamp(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(STATS + ["--output", str(a), "--format", "json"])
    main(STATS + ["--output", str(b), "--format", "json"])
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    da["meta"].pop("timestamp")
    db["meta"].pop("timestamp")
    assert da == db


def test_float_formatting_17_digits(capsys):
    _, out, _ = run(["stats", "--n-atoms", "2", "--excited", "1", "--tau-min", "0.1", "--tau-max", "0.2",
                     "--tau-steps", "2"], capsys)
    row = rows_of(out)[0]
    assert row["mean"] == format(float(row["mean"]), ".17g")
    assert row["fock_peak_n"].isdigit()


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "dickestat", "stats", "--n-atoms", "1", "--excited", "1",
                          "--tau-steps", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.count("\n") == 3
