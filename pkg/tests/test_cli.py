import csv
import io
import json

import pytest

from Main import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSumCommand:
    def test_classic_sum_to_ten(self, capsys):
        code, out, _ = _run(capsys, "sum", "--x-max", "10")
        assert code == 0
        assert out.splitlines()[0] == "x,S,prime_count,S_over_pi"
        row = _rows(out)[0]
        assert row["x"] == "10"
        assert row["S"] == "9.06666666667"
        assert float(row["S"]) == pytest.approx(9.066667, abs=1e-6)

    def test_thousand(self, capsys):
        code, out, _ = _run(capsys, "sum", "--x-max", "1000", "--alpha", "1", "--lambda", "1")
        assert code == 0
        assert _rows(out)[0]["x"] == "1000"
        assert _rows(out)[0]["prime_count"] == "168"

    def test_invalid_alpha(self, capsys):
        code, out, err = _run(capsys, "sum", "--x-max", "1000", "--alpha", "0")
        assert code == 2
        assert out == ""
        assert "alpha must be a finite positive real" in err

    def test_invalid_lambda(self, capsys):
        code, _, err = _run(capsys, "sum", "--x-max", "1000", "--lambda", "1;tail")
        assert code == 2
        assert "--lambda" in err

    def test_series(self, capsys):
        code, out, _ = _run(capsys, "sum", "--x-max", "10", "--series", "1,1")
        assert code == 0
        expected = 136 / 15 + 8 + 4 / 9 + 4 / 25
        assert float(_rows(out)[0]["S"]) == pytest.approx(expected, rel=1e-11)

    def test_reports_are_byte_stable(self, capsys):
        argv = ["sum", "--x-max", "100000", "--checkpoints", "decades", "--segment-size", "9000"]
        _, first, _ = _run(capsys, *argv, "--threads", "1")
        _, second, _ = _run(capsys, *argv, "--threads", "2")
        assert first == second
        assert [row["x"] for row in _rows(first)] == ["1000", "10000", "100000"]

    def test_json_and_file_output(self, capsys, tmp_path):
        path = tmp_path / "sum.json"
        code, _, _ = _run(capsys, "sum", "--x-max", "100", "--format", "json", "--out", str(path))
        assert code == 0
        document = json.loads(path.read_text())
        assert document["columns"] == ["x", "S", "prime_count", "S_over_pi"]
        assert document["rows"][0]["prime_count"] == 25
        assert document["meta"]["command"] == "sum"


class TestDecomposeCommand:
    def test_classes_to_ten(self, capsys):
        code, out, _ = _run(capsys, "decompose", "--x-max", "10")
        assert code == 0
        header = out.splitlines()[0].split(",")
        assert header[:3] == ["x", "S", "sigma_1"]
        assert header[-3:] == ["sigma_tail", "nonsquarefree", "prime_count"]
        row = _rows(out)[0]
        assert row["sigma_1"] == "4"
        assert float(row["sigma_2"]) == pytest.approx(16 / 15)
        assert row["sigma_3"] == "0"

    def test_rows_reproduce_the_total(self, capsys):
        code, out, _ = _run(capsys, "decompose", "--x-max", "20000", "--lambda", "1,2,3")
        assert code == 0
        row = _rows(out)[0]
        weights = [1.0, 2.0, 3.0] + [3.0] * 13
        rebuilt = sum(w * float(row[f"sigma_{i}"]) for i, w in enumerate(weights, start=1))
        rebuilt += float(row["sigma_tail"]) + float(row["nonsquarefree"])
        assert rebuilt == pytest.approx(float(row["S"]), rel=1e-9)


class TestPredictCommand:
    def test_classic_coefficients(self, capsys):
        code, out, _ = _run(capsys, "predict", "--x-max", "1000000", "--checkpoints", "1000000")
        assert code == 0
        row = _rows(out)[0]
        assert (row["c1"], row["c2"], row["c3"]) == ("1", "3", "15")
        assert float(row["pred3"]) == pytest.approx(93_788.4, rel=1e-4)

    def test_series_coefficients(self, capsys):
        code, out, _ = _run(capsys, "predict", "--x-max", "1e4", "--series", "1,1")
        assert code == 0
        rows = _rows(out)
        assert [row["x"] for row in rows] == ["1000", "10000"]
        assert (rows[0]["c1"], rows[0]["c2"], rows[0]["c3"]) == ("2", "5", "21.25")

    def test_warning_outside_theorem_range(self, capsys):
        code, _, err = _run(capsys, "predict", "--x-max", "1e4", "--alpha", "0.5")
        assert code == 0
        assert "not above 4/5" in err


class TestVerifyCommand:
    def test_synthetic_table_passes(self, capsys):
        code, out, _ = _run(
            capsys, "verify", "--x-max", "1e7", "--synthetic", "1,3,15", "--format", "json"
        )
        assert code == 0
        document = json.loads(out)
        assert document["meta"]["passed"] is True
        assert all(check["passed"] for check in document["checks"])
        assert [row["x"] for row in document["rows"]] == [10**3, 10**4, 10**5, 10**6, 10**7]

    def test_too_few_points_for_the_fit(self, capsys):
        code, out, err = _run(capsys, "verify", "--x-max", "1e5")
        assert code == 2
        assert out == ""
        assert "fit of order 4" in err

    def test_failed_bands_still_write_the_report(self, capsys):
        code, out, _ = _run(capsys, "verify", "--x-max", "1e4", "--fit-order", "2")
        assert code == 4
        assert out.splitlines()[0].startswith("x,S,pred1,pred2,pred3,c1hat,c2hat,c3hat")
        assert [row["x"] for row in _rows(out)] == ["1000", "10000"]


class TestDiagnosticCommands:
    def test_prime_counting(self, capsys):
        code, out, _ = _run(capsys, "lemma", "--which", "pi", "--x-max", "1e5")
        assert code == 0
        assert [row["pi"] for row in _rows(out)] == ["168", "1229", "9592"]

    def test_prime_sum(self, capsys):
        code, out, _ = _run(
            capsys, "lemma", "--which", "prime-sum", "--x-max", "1e7", "--checkpoints", "1e7", "--y", "1000"
        )
        assert code == 0
        row = _rows(out)[0]
        assert abs(float(row["rel_gap"])) < 1e-2
        assert row["branch"] == "c>-1"

    def test_prime_sum_default_checkpoints(self, capsys):
        code, out, _ = _run(capsys, "lemma", "--which", "prime-sum", "--x-max", "1e5")
        assert code == 0
        rows = _rows(out)
        assert [row["x"] for row in rows] == ["10000", "100000"]
        assert all(abs(float(row["rel_gap"])) < 0.05 for row in rows)

    def test_smooth_counts(self, capsys):
        code, out, _ = _run(capsys, "lemma", "--which", "smooth", "--x-max", "1e5")
        assert code == 0
        densities = [float(row["psi_density"]) for row in _rows(out)]
        assert densities == sorted(densities, reverse=True)

    def test_subsums(self, capsys):
        code, out, _ = _run(capsys, "subsums", "--x-max", "1000000", "--alpha", "1")
        assert code == 0
        row = _rows(out)[0]
        assert (row["I3_leading"], row["I4_leading"], row["I5_leading"]) == ("1.5", "3", "4.5")
        assert (row["I1_leading"], row["I2_leading"]) == ("1", "1")

    def test_subsums_domain(self, capsys):
        code, _, _ = _run(capsys, "subsums", "--x-max", "5000", "--classes", "3")
        assert code == 2

    def test_tails(self, capsys):
        code, out, _ = _run(capsys, "tails", "--x-max", "1e5", "--checkpoints", "decades")
        assert code == 0
        rows = _rows(out)
        assert [row["x"] for row in rows] == ["1000", "10000", "100000"]
        assert float(rows[0]["sigma_ge6"]) == 0.0
