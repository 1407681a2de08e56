import os
import logging
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from the config file (same keys as the CLI flags)
CONFIG_PATH = os.getenv("BRAUERLAB_CONFIG", ".env")
load_dotenv(CONFIG_PATH)

# Default run configuration
BASE_DESCRIPTOR = os.getenv("BRAUERLAB_BASE", "F2")
CHARACTERISTIC = int(os.getenv("BRAUERLAB_P", "2"))
VARIABLE_COUNT = int(os.getenv("BRAUERLAB_N", "3"))
WINDOW = os.getenv("BRAUERLAB_WINDOW", "-2..2")
OUTPUT_FORMAT = os.getenv("BRAUERLAB_FORMAT", "text").lower()

# Search budgets
SEARCH_BUDGET = int(os.getenv("BRAUERLAB_BUDGET", "100000"))
AS_INDEPENDENCE_MAX_RANK = int(os.getenv("AS_INDEPENDENCE_MAX_RANK", "6"))
COMMON_FACTOR_TRIALS = int(os.getenv("COMMON_FACTOR_TRIALS", "200"))
RANDOM_SEED = int(os.getenv("RANDOM_SEED", "20240601"))

# Finite fields up to this order get precomputed add/mul tables
FIELD_TABLE_MAX_ORDER = int(os.getenv("FIELD_TABLE_MAX_ORDER", "256"))

# Logging configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = os.getenv("LOG_FORMAT", "%(asctime)s - %(name)s - %(levelname)s - %(message)s")
LOG_FILE = os.getenv("LOG_FILE", "")


def parse_window(text: str) -> tuple[int, int]:
    """Parse a `lo..hi` window string into integer bounds."""
    try:
        lo_text, hi_text = text.split("..")
        lo, hi = int(lo_text), int(hi_text)
    except ValueError as e:
        raise ValueError(f"window must look like lo..hi, got {text!r}") from e
    if lo > hi:
        raise ValueError(f"window lower bound {lo} exceeds upper bound {hi}")
    return lo, hi


class Config:
    """Configuration class with runtime overrides."""

    def __init__(self):
        self.config_path = CONFIG_PATH

        # Run defaults
        self.base_descriptor = BASE_DESCRIPTOR
        self.characteristic = CHARACTERISTIC
        self.variable_count = VARIABLE_COUNT
        self.window = WINDOW
        self.output_format = OUTPUT_FORMAT

        # Search settings
        self.search_budget = SEARCH_BUDGET
        self.as_independence_max_rank = AS_INDEPENDENCE_MAX_RANK
        self.common_factor_trials = COMMON_FACTOR_TRIALS
        self.random_seed = RANDOM_SEED
        self.field_table_max_order = FIELD_TABLE_MAX_ORDER

        # Logging
        self.log_level = LOG_LEVEL
        self.log_format = LOG_FORMAT
        self.log_file = LOG_FILE

    def update_search(self,
                      search_budget: Optional[int] = None,
                      as_independence_max_rank: Optional[int] = None,
                      common_factor_trials: Optional[int] = None,
                      random_seed: Optional[int] = None):
        """Update search budgets at runtime."""
        if search_budget is not None:
            self.search_budget = search_budget
        if as_independence_max_rank is not None:
            self.as_independence_max_rank = as_independence_max_rank
        if common_factor_trials is not None:
            self.common_factor_trials = common_factor_trials
        if random_seed is not None:
            self.random_seed = random_seed

    def update_defaults(self,
                        base_descriptor: Optional[str] = None,
                        characteristic: Optional[int] = None,
                        variable_count: Optional[int] = None,
                        window: Optional[str] = None,
                        output_format: Optional[str] = None):
        """Update run defaults at runtime."""
        if base_descriptor is not None:
            self.base_descriptor = base_descriptor
        if characteristic is not None:
            self.characteristic = characteristic
        if variable_count is not None:
            self.variable_count = variable_count
        if window is not None:
            self.window = window
        if output_format is not None:
            self.output_format = output_format

    def get_search_config(self) -> dict:
        """Get search configuration as dictionary."""
        return {
            "search_budget": self.search_budget,
            "as_independence_max_rank": self.as_independence_max_rank,
            "common_factor_trials": self.common_factor_trials,
            "random_seed": self.random_seed,
        }

    def get_run_defaults(self) -> dict:
        """Get run defaults as dictionary (keys match RunConfig fields)."""
        lo, hi = parse_window(self.window)
        return {
            "base": self.base_descriptor,
            "p": self.characteristic,
            "n": self.variable_count,
            "window_lo": lo,
            "window_hi": hi,
            "budget": self.search_budget,
            "output_format": self.output_format,
        }


# Global configuration instance
config = Config()


def setup_logging(level: Optional[str] = None):
    """Setup logging configuration."""
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file))

    logging.basicConfig(
        level=getattr(logging, (level or config.log_level).upper()),
        format=config.log_format,
        handlers=handlers,
    )
    if level is not None:
        logging.getLogger().setLevel(getattr(logging, level.upper()))

    # Set specific logger levels
    logging.getLogger("numba").setLevel(logging.WARNING)
    logging.getLogger("galois").setLevel(logging.WARNING)

    return logging.getLogger(__name__)
