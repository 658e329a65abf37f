"""
Configuration Module
Environment-driven defaults for truncation orders, parallelism and output
"""

import os
import logging
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

DEFAULT_Q_ORDER = 20
DEFAULT_EPS_ORDER = 6
DEFAULT_JOBS = 1
DEFAULT_OUTPUT_DIR = "./results"


def _int_from_env(name: str, default: int, minimum: int = 0) -> int:
    """Read a non-negative integer environment variable, falling back on bad values."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < minimum:
        logger.warning(f"Ignoring {name}={value}: must be >= {minimum}, using {default}")
        return default
    return value


def get_q_order() -> int:
    """Default q-expansion truncation order."""
    return _int_from_env("VOA_MODULAR_Q_ORDER", DEFAULT_Q_ORDER)


def get_eps_order() -> int:
    """Default sewing-parameter truncation order."""
    return _int_from_env("VOA_MODULAR_EPS_ORDER", DEFAULT_EPS_ORDER)


def get_jobs() -> int:
    """Worker count for parallel verification."""
    return _int_from_env("VOA_MODULAR_JOBS", DEFAULT_JOBS, minimum=1)


def get_log_level() -> str:
    level = os.getenv("VOA_MODULAR_LOG_LEVEL", "INFO").upper()
    if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        logger.warning(f"Unknown log level {level!r}, using INFO")
        return "INFO"
    return level


def get_output_dir() -> Path:
    """Directory used by --save."""
    return Path(os.getenv("VOA_MODULAR_OUTPUT_DIR", DEFAULT_OUTPUT_DIR))
