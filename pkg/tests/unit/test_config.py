import pytest
from pydantic import ValidationError

from holoquot.config import Settings


@pytest.mark.unit
class TestSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("HOLOQUOT_LOG_LEVEL", raising=False)
        run = Settings(_env_file=None)
        assert (run.tol, run.points, run.seed, run.mode, run.workers) == (1e-9, 20, 0, "auto", 1)
        assert run.rank_thresholds == (1e-6, 1e-8, 1e-10)

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("HOLOQUOT_POINTS", "7")
        monkeypatch.setenv("HOLOQUOT_MODE", "exact")
        run = Settings(_env_file=None)
        assert run.points == 7
        assert run.mode == "exact"

    @pytest.mark.parametrize(
        "overrides, message",
        [
            ({"tol": 0}, "tol must be positive"),
            ({"points": 0}, "at least 1"),
            ({"mode": "sometimes"}, "mode must be one of"),
            ({"log_level": "LOUD"}, "unknown log level"),
            ({"rank_thresholds": ()}, "must not be empty"),
            ({"workers": 0}, "workers must be at least 1"),
        ],
    )
    def test_rejected_values(self, overrides, message):
        with pytest.raises(ValidationError, match=message):
            Settings(_env_file=None, **overrides)
