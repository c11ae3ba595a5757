import logging
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

import config  # noqa: E402
from errors import EXIT_INTERNAL, EXIT_USAGE, DomainError, InternalAssertionError, ensure  # noqa: E402
from utils.run_monitor import analysis_run  # noqa: E402


def test_analysis_run_records_success(caplog):
    caplog.set_level(logging.INFO, logger="utils.run_monitor")
    with analysis_run("polygon_report", n=4, p=2) as run:
        run.cells_processed = 32
    assert run.status == "success"
    record = run.as_dict()
    assert record["n"] == 4
    assert record["cells_processed"] == 32
    assert record["error"] is None
    assert "polygon_report finished" in caplog.text


def test_analysis_run_records_failure_and_reraises():
    with pytest.raises(DomainError):
        with analysis_run("polygon_report", n=4, p=3) as run:
            raise DomainError("p=3 does not divide n=4")
    assert run.status == "failed"
    assert run.error == "DomainError: p=3 does not divide n=4"


def test_error_exit_codes():
    assert DomainError("x").exit_code == EXIT_USAGE
    with pytest.raises(InternalAssertionError) as exc:
        ensure(False, "broken identity")
    assert exc.value.exit_code == EXIT_INTERNAL
    ensure(True, "never raised")


def test_env_int(monkeypatch):
    monkeypatch.setenv("EQCOHO_TEST_VALUE", "17")
    assert config._env_int("EQCOHO_TEST_VALUE", 5) == 17
    monkeypatch.setenv("EQCOHO_TEST_VALUE", "seventeen")
    assert config._env_int("EQCOHO_TEST_VALUE", 5) == 5
    monkeypatch.setenv("EQCOHO_TEST_VALUE", "1")
    assert config._env_int("EQCOHO_TEST_VALUE", 5, minimum=3) == 5
    monkeypatch.delenv("EQCOHO_TEST_VALUE")
    assert config._env_int("EQCOHO_TEST_VALUE", 5) == 5
