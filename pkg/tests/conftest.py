import os

import pytest

os.environ.setdefault("HOLOQUOT_LOG_LEVEL", "WARNING")

from holoquot.config import Settings  # noqa: E402
from holoquot.residuals import Checker  # noqa: E402
from holoquot.verifier import VerificationService  # noqa: E402


@pytest.fixture
def run_settings():
    """Settings with a small point budget, independent of the process environment."""
    return Settings(tol=1e-9, points=6, seed=0, mode="auto", workers=1, report_path=None)


@pytest.fixture
def checker():
    """Checker in auto mode with a handful of sample points."""
    return Checker(mode="auto", tol=1e-9, points=5, seed=0)


@pytest.fixture
def exact_checker():
    """Checker that only accepts exact zeros."""
    return Checker(mode="exact", tol=1e-9, points=5, seed=0)


@pytest.fixture
def service(run_settings):
    """A verification service bound to the test settings."""
    return VerificationService(run_settings)


@pytest.fixture
def report_path(tmp_path):
    """Location for a JSON report written by the CLI."""
    return tmp_path / "report.json"


@pytest.fixture
def load_entry():
    """Loader for cached catalog entries."""
    from holoquot import catalog

    return catalog.load
