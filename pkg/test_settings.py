"""
Tests for settings, logging setup and result export.
"""

import io
import json
import logging
import math

import pytest
from pydantic import ValidationError

from seesaw.config.settings import Settings
from seesaw.config.setup_logging import setup_logging
from seesaw.utils.exporter import ResultExporter
from seesaw.utils.report_generator import ReportGenerator


# ---------------------------------------------------------------------------
# Settings
# ---------------------------------------------------------------------------

def test_defaults():
    config = Settings(_env_file=None)
    assert config.default_seed == 20240607
    assert config.t_sampler_scaling == "scale"
    assert config.figure2_deltas == [2.5, 3.0, 5.0, 10.0, 30.0]


def test_environment_override(monkeypatch):
    monkeypatch.setenv("SEESAW_DEFAULT_SEED", "7")
    monkeypatch.setenv("SEESAW_T_SAMPLER_SCALING", "covariance")
    config = Settings(_env_file=None)
    assert config.default_seed == 7
    assert config.t_sampler_scaling == "covariance"


@pytest.mark.parametrize("raw", ["3, 5,10", "[3, 5, 10]"])
def test_delta_list_parsing(raw):
    assert Settings(_env_file=None, figure2_deltas=raw).figure2_deltas == [3.0, 5.0, 10.0]


def test_delta_list_needs_finite_variance():
    with pytest.raises(ValidationError):
        Settings(_env_file=None, figure2_deltas="2, 5")


def test_log_level_validation():
    assert Settings(_env_file=None, log_level="debug").log_level == "DEBUG"
    with pytest.raises(ValidationError):
        Settings(_env_file=None, log_level="LOUD")


def test_default_alpha_grid():
    alphas = Settings(_env_file=None).figure2_alphas()
    assert len(alphas) == 60
    assert alphas[0] == 0.05
    assert alphas[19] == 1.0
    assert alphas[-1] == 3.0


def test_alpha_grid_override():
    grid = Settings(_env_file=None).with_alpha_grid(figure2_alpha_start=0.5, figure2_alpha_stop=1.5,
                                                     figure2_alpha_step=None)
    assert grid.figure2_alpha_step == 0.05
    assert grid.figure2_alphas()[0] == 0.5
    assert grid.figure2_alphas()[-1] == 1.5


@pytest.mark.parametrize("overrides", [
    {"figure2_alpha_step": 0.0},
    {"figure2_alpha_step": -0.1},
    {"figure2_alpha_start": 0.0},
    {"figure2_alpha_start": 2.0, "figure2_alpha_stop": 1.0},
])
def test_alpha_grid_override_is_validated(overrides):
    with pytest.raises(ValidationError):
        Settings(_env_file=None).with_alpha_grid(**overrides)


# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------

@pytest.fixture
def restore_logging():
    yield
    setup_logging(level="INFO", log_to_file=False)


def test_file_handlers_write_plain_and_json(tmp_path, restore_logging):
    setup_logging(level="WARNING", log_dir=str(tmp_path), log_to_file=True)
    logging.getLogger("seesaw.checks").info("file handlers attached")
    for handler in logging.getLogger("seesaw").handlers:
        handler.flush()

    assert "file handlers attached" in (tmp_path / "seesaw.log").read_text()
    lines = (tmp_path / "seesaw.json.log").read_text().splitlines()
    record = json.loads(lines[-1])
    assert record["message"] == "file handlers attached"
    assert record["name"] == "seesaw.checks"


def test_console_only_by_default(restore_logging):
    setup_logging(level="ERROR", log_to_file=False)
    handlers = logging.getLogger("seesaw").handlers
    assert [type(h).__name__ for h in handlers] == ["StreamHandler"]
    assert handlers[0].level == logging.ERROR


def test_missing_config_falls_back(restore_logging):
    setup_logging(config_path="no/such/logging.yaml", level="INFO")
    assert logging.getLogger().handlers


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def test_json_export_keeps_non_finite_values_valid(capsys):
    ResultExporter("json").export("t", {"delta": math.inf}, {"value": 1.5}, rows=[{"delta": math.inf}])
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == 1.5
    assert payload["rows"] == [{"delta": "inf"}]
    assert payload["parameters"] == {"delta": "inf"}


def test_csv_export_keeps_full_precision():
    buffer = io.StringIO()
    ResultExporter.write_csv(buffer, [{"x": 0.1 + 0.2, "flag": True, "pair": (1.0, 2.0), "none": None}])
    header, row = buffer.getvalue().splitlines()
    assert header == "x,flag,pair,none"
    assert row == "0.30000000000000004,true,1.0;2.0,"


def test_export_to_file_creates_directories(tmp_path):
    target = tmp_path / "a" / "b" / "out.json"
    assert ResultExporter("json", str(target)).export("t", {}, {"value": 2.0}) == target
    assert json.loads(target.read_text())["value"] == 2.0


def test_unknown_format():
    with pytest.raises(ValueError):
        ResultExporter("xml", "-").export("t", {}, {"value": 1.0})


def test_text_report_layout():
    text = ReportGenerator(precision=4).generate_text_report(
        "Title", {"mu": -1.0, "regime": "sym"}, {"value": 0.0084946}, notes=["check tails"])
    lines = text.splitlines()
    assert lines[0] == "Title"
    assert "  mu      -1" in text
    assert "0.008495" in text
    assert lines[-1] == "  - check tails"
