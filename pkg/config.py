"""Centralized configuration loaded from environment variables."""

import os
from dotenv import load_dotenv


def _as_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))

# Load environment variables from .env file
load_dotenv()

# === Numeric Settings ===
DECIMAL_EPS = float(os.getenv("DECIMAL_EPS", "1e-9"))  # equality tolerance of decimal mode
DEFAULT_NUMERIC_MODE = os.getenv("DEFAULT_NUMERIC_MODE", "rational")

# === Size Guards ===
SIMPLEX_BUDGET = _as_int("SIMPLEX_BUDGET", 10_000_000)
ORACLE_BUDGET = _as_int("ORACLE_BUDGET", 5000)
REDUCTION_BUDGET = _as_int("REDUCTION_BUDGET", 2_000_000)

# === Desk-Scale Limits (CLI) ===
FULL_COMPLEX_MAX_POINTS = _as_int("FULL_COMPLEX_MAX_POINTS", 12)
CAPPED_COMPLEX_MAX_POINTS = _as_int("CAPPED_COMPLEX_MAX_POINTS", 25)
DEFAULT_DIM_CAP = _as_int("DEFAULT_DIM_CAP", 3)

# === Dataset Generators ===
DEFAULT_SEED = _as_int("DEFAULT_SEED", 0)
DEFAULT_WEIGHT_LOW = _as_int("DEFAULT_WEIGHT_LOW", 1)
DEFAULT_WEIGHT_HIGH = _as_int("DEFAULT_WEIGHT_HIGH", 10)
# Random metrics use a narrower range so rejection sampling rarely retries
METRIC_WEIGHT_LOW = _as_int("METRIC_WEIGHT_LOW", 5)
METRIC_WEIGHT_HIGH = _as_int("METRIC_WEIGHT_HIGH", 10)
MAX_SAMPLING_ATTEMPTS = _as_int("MAX_SAMPLING_ATTEMPTS", 1000)

# === Logging Settings ===
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("LOG_FILE", None)  # Optional: set to enable file logging
