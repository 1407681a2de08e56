import logging

import pytest
from pydantic import ValidationError

from brauerlab.basefield import BaseFieldDesc
from brauerlab.config import Config, parse_window, setup_logging
from brauerlab.models import OutputFormat, Provenance, Report, RunConfig


class TestParseWindow:
    """Test window string parsing."""

    @pytest.mark.parametrize("text, expected", [("-2..2", (-2, 2)), ("0..0", (0, 0)), ("-5..-1", (-5, -1))])
    def test_valid(self, text, expected):
        """Test well-formed windows."""
        assert parse_window(text) == expected

    @pytest.mark.parametrize("text", ["2..-2", "1-2", "a..b", "1..2..3", ""])
    def test_invalid(self, text):
        """Test malformed or empty windows."""
        with pytest.raises(ValueError):
            parse_window(text)


class TestConfig:
    """Test runtime configuration overrides."""

    def setup_method(self):
        """Create a fresh configuration."""
        self.config = Config()

    def test_update_search(self):
        """Test search budgets are replaced only when given."""
        trials = self.config.common_factor_trials
        self.config.update_search(search_budget=50, random_seed=1)
        search = self.config.get_search_config()
        assert search["search_budget"] == 50
        assert search["random_seed"] == 1
        assert search["common_factor_trials"] == trials

    def test_update_defaults(self):
        """Test run defaults feed a valid RunConfig."""
        self.config.update_defaults(base_descriptor="F3(t)", characteristic=3, variable_count=2, window="-1..3")
        defaults = self.config.get_run_defaults()
        assert defaults["window_lo"] == -1 and defaults["window_hi"] == 3
        run = RunConfig(**defaults)
        assert run.p == 3
        assert run.window_text == "-1..3"

    def test_setup_logging_level(self):
        """Test an explicit level overrides the configured one."""
        setup_logging("DEBUG")
        assert logging.getLogger().level == logging.DEBUG
        setup_logging("WARNING")
        assert logging.getLogger().level == logging.WARNING


class TestRunConfig:
    """Test run configuration validation."""

    def test_defaults(self):
        """Test the default run is F2 with three variables."""
        run = RunConfig()
        assert run.base == "F2" and run.p == 2 and run.n == 3
        assert run.output_format is OutputFormat.TEXT
        assert run.window().size() == 125

    @pytest.mark.parametrize("overrides", [
        {"p": 4},
        {"p": 1},
        {"n": -1},
        {"budget": 0},
        {"base": "F6"},
        {"window_lo": 3, "window_hi": 1},
        {"base": "F3"},
    ])
    def test_invalid(self, overrides):
        """Test invalid settings raise ValidationError."""
        with pytest.raises(ValidationError):
            RunConfig(**overrides)

    def test_algebraically_closed_stand_in(self):
        """Test an algebraically closed base computes over F_p."""
        run = RunConfig(base="algebraically-closed", p=3)
        assert run.concrete_base() == BaseFieldDesc.prime(3)
        assert run.tower(2).n == 2


class TestReport:
    """Test report helpers."""

    def test_infinite_claim(self):
        """Test an infinite value is recorded as text."""
        report = Report(command="symlen")
        report.claim("cokernel_dim", float("inf"), Provenance.COMPUTED)
        assert report.claims[0].value == "infinite"

    def test_fail(self):
        """Test failing adds a note."""
        report = Report(command="symlen")
        report.fail("mismatch")
        assert not report.passed
        assert report.notes == ["mismatch"]
