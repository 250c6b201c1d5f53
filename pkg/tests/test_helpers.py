import argparse
import json

import pytest

from models.run_model import RunConfig
from services.errors import AcceptanceError, ConfigError, DomainError, NumericalError
from utils.decorators import combine_decorators, handle_errors
from utils.helpers import (
    ReportBuilder,
    decades,
    format_value,
    parse_checkpoints,
    parse_int,
    parse_lambda,
    parse_series,
)


class TestParseLambda:
    def test_constant(self):
        weight = parse_lambda("1")
        assert weight.is_constant_one
        assert weight(1) == weight(40) == 1.0

    def test_head_defaults_tail_to_last_value(self):
        weight = parse_lambda("1,2,3")
        assert [weight(i) for i in range(1, 6)] == [1.0, 2.0, 3.0, 3.0, 3.0]

    def test_explicit_tail(self):
        weight = parse_lambda("1,2,3;tail=0")
        assert [weight(i) for i in range(1, 6)] == [1.0, 2.0, 3.0, 0.0, 0.0]
        assert str(weight) == "1,2,3;tail=0"

    def test_indicator(self):
        weight = parse_lambda("indicator:2")
        assert [weight(i) for i in range(1, 5)] == [0.0, 1.0, 0.0, 0.0]

    @pytest.mark.parametrize("text", ["", "a,b", "1;tail=x", "1;2", "nan"])
    def test_malformed(self, text):
        with pytest.raises(DomainError):
            parse_lambda(text)

    def test_lambda_is_defined_from_one(self):
        with pytest.raises(DomainError):
            parse_lambda("1")(0)


class TestParseNumbers:
    def test_integers(self):
        assert parse_int("1000") == 1000
        assert parse_int("1e7") == 10**7

    @pytest.mark.parametrize("text", ["1.5", "abc", "inf"])
    def test_not_integers(self, text):
        with pytest.raises(DomainError):
            parse_int(text)

    def test_series(self):
        assert parse_series("1, 0.5").coeffs == (1.0, 0.5)


class TestCheckpoints:
    def test_decades(self):
        assert decades(10**7) == [10**3, 10**4, 10**5, 10**6, 10**7]
        assert decades(5 * 10**5) == [10**3, 10**4, 10**5, 5 * 10**5]
        assert decades(500) == [500]

    def test_parse(self):
        assert parse_checkpoints(None, 100) == [100]
        assert parse_checkpoints("decades", 10**4) == [10**3, 10**4]
        assert parse_checkpoints("10,1e2", 100) == [10, 100]


class TestFormatValue:
    def test_twelve_significant_digits(self):
        assert format_value(136 / 15) == "9.06666666667"

    def test_integral_values(self):
        assert format_value(4.0) == "4"
        assert format_value(25) == "25"

    def test_other_cells(self):
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value("c>-1") == "c>-1"


class TestReportBuilder:
    def _report(self):
        report = ReportBuilder(["x", "S"])
        report.add_row({"x": 10, "S": 136 / 15}).add_row({"x": 100, "S": 50.5})
        return report.add_meta(alpha=1.0)

    def test_csv(self):
        assert self._report().build_csv() == "x,S\n10,9.06666666667\n100,50.5\n"

    def test_json_has_same_keys(self):
        document = json.loads(self._report().build_json())
        assert document["columns"] == ["x", "S"]
        assert document["rows"][0] == {"x": 10, "S": 9.06666666667}
        assert document["meta"] == {"alpha": 1.0}

    def test_new_keys_extend_columns(self):
        report = ReportBuilder(["x"]).add_row({"x": 1, "extra": 2.5})
        assert report.columns == ["x", "extra"]

    def test_write_to_file(self, tmp_path):
        path = tmp_path / "report.csv"
        self._report().write("csv", str(path))
        assert path.read_text().splitlines()[0] == "x,S"

    def test_unknown_format(self):
        with pytest.raises(DomainError):
            self._report().build("xml")


def _namespace(**overrides):
    values = dict(
        x_max="1000",
        checkpoints=None,
        alpha=1.0,
        weight="1",
        series=None,
        segment_size=None,
        threads=None,
        format=None,
        out=None,
    )
    values.update(overrides)
    return argparse.Namespace(**values)


class TestRunConfig:
    def test_defaults(self):
        run = RunConfig.from_args(_namespace())
        assert run.x_max == 1000
        assert run.checkpoints == [1000]
        assert run.weight.is_constant_one
        assert run.format == "csv"

    def test_default_checkpoints(self):
        run = RunConfig.from_args(_namespace(x_max="1e5"), "decades")
        assert run.checkpoints == [10**3, 10**4, 10**5]

    def test_collects_every_error(self):
        with pytest.raises(ConfigError) as error:
            RunConfig.from_args(_namespace(alpha=0.0, threads=-1, checkpoints="50,20"))
        messages = " ".join(error.value.errors)
        assert "alpha must be a finite positive real" in messages
        assert "threads" in messages
        assert "ascending" in messages

    def test_parse_errors_are_config_errors(self):
        with pytest.raises(ConfigError, match="--lambda"):
            RunConfig.from_args(_namespace(weight="one"))


class TestHandleErrors:
    @pytest.mark.parametrize(
        "error, code",
        [
            (DomainError("bad input"), 2),
            (ConfigError("bad option"), 2),
            (NumericalError("no convergence"), 3),
            (AcceptanceError("bands", failures=["c1hat"]), 4),
            (RuntimeError("boom"), 1),
        ],
    )
    def test_exit_codes(self, error, code):
        @handle_errors
        def failing():
            raise error

        assert failing() == code

    def test_success(self):
        @combine_decorators(handle_errors)
        def succeeding():
            return "ignored"

        assert succeeding() == 0
