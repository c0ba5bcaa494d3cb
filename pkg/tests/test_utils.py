import logging

import pytest

from focusfuse.utils.errors import ConfigError, FocusFuseError, PnmFormatError
from focusfuse.utils.formatting import format_dims, format_metric, parse_block, parse_depths, parse_dims
from focusfuse.utils.output import rows_to_csv, write_atomic, write_csv
from focusfuse.utils.settings import DEFAULT_MAX_WORKERS, get_log_level, get_max_workers


class TestFormatting:

    def test_format_dims(self):
        assert format_dims((256, 128)) == "256x128"

    def test_format_metric(self):
        assert format_metric(7.905123456) == "7.90512"
        assert format_metric(None) == "N/A"

    @pytest.mark.parametrize("text, expected", [("256x256", (256, 256)), (" 64X32 ", (64, 32))])
    def test_parse_dims(self, text, expected):
        assert parse_dims(text) == expected

    @pytest.mark.parametrize("text", ["256", "ax4", "4x", ""])
    def test_parse_dims_rejects(self, text):
        with pytest.raises(ConfigError):
            parse_dims(text)

    def test_parse_block(self):
        assert parse_block("8") == (8, 8)
        assert parse_block("8x16") == (8, 16)
        with pytest.raises(ConfigError):
            parse_block("eight")

    def test_parse_depths(self):
        assert parse_depths("3") == [3]
        assert parse_depths("2, 3") == [2, 3]
        with pytest.raises(ConfigError):
            parse_depths("2,,3")


class TestSettings:

    def test_max_workers_default(self, monkeypatch):
        monkeypatch.delenv("FOCUSFUSE_MAX_WORKERS", raising=False)
        assert get_max_workers() == DEFAULT_MAX_WORKERS

    def test_max_workers_from_env(self, monkeypatch):
        monkeypatch.setenv("FOCUSFUSE_MAX_WORKERS", "3")
        assert get_max_workers() == 3

    @pytest.mark.parametrize("value", ["0", "-2", "many"])
    def test_max_workers_invalid(self, monkeypatch, value):
        monkeypatch.setenv("FOCUSFUSE_MAX_WORKERS", value)
        with pytest.raises(ConfigError):
            get_max_workers()

    def test_log_level(self, monkeypatch):
        monkeypatch.setenv("FOCUSFUSE_LOG_LEVEL", "error")

        assert get_log_level() == logging.ERROR
        assert get_log_level(1) == logging.INFO
        assert get_log_level(3) == logging.DEBUG

    def test_log_level_invalid(self, monkeypatch):
        monkeypatch.setenv("FOCUSFUSE_LOG_LEVEL", "LOUD")
        with pytest.raises(ConfigError):
            get_log_level()


class TestOutput:

    def test_csv_format(self):
        text = rows_to_csv([{"method": "sf", "rmse": 1 / 3, "rmse_gt": None}], ["method", "rmse", "rmse_gt"])
        assert text == "method,rmse,rmse_gt\nsf,0.333333,\n"

    def test_write_atomic_replaces(self, tmp_path):
        path = tmp_path / "out.bin"
        write_atomic(path, b"old")
        write_atomic(path, b"new")

        assert path.read_bytes() == b"new"
        assert [p.name for p in tmp_path.iterdir()] == ["out.bin"]

    def test_write_csv(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, [{"a": 1.5, "b": 2.0}], ["a", "b"])

        assert path.read_bytes() == b"a,b\n1.5,2\n"


def test_error_hierarchy():
    error = PnmFormatError("bad magic", 0)

    assert isinstance(error, FocusFuseError)
    assert isinstance(error, ValueError)
    assert error.offset == 0
    assert "byte offset 0" in str(error)
