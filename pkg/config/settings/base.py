# ruff: noqa: E501
"""Base settings to build other settings files upon."""

from pathlib import Path

import environ

BASE_DIR = Path(__file__).resolve(strict=True).parent.parent.parent
# dualep/
APPS_DIR = BASE_DIR / "dualep"
env = environ.Env()

READ_DOT_ENV_FILE = env.bool("DUALEP_READ_DOT_ENV_FILE", default=False)
if READ_DOT_ENV_FILE:
    # OS environment variables take precedence over variables from .env
    env.read_env(str(BASE_DIR / ".env"))

# GENERAL
# ------------------------------------------------------------------------------
DEBUG = env.bool("DUALEP_DEBUG", False)
# Where CLI artifacts land when --output is a bare file name.
OUTPUT_DIR = Path(env("DUALEP_OUTPUT_DIR", default="."))

# NUMERICAL TOLERANCES
# ------------------------------------------------------------------------------
# Absolute, max-norm. Inputs are built from exact Paulis and real angles.
HERMITIAN_TOL = env.float("DUALEP_HERMITIAN_TOL", 1e-12)
UNITARY_TOL = env.float("DUALEP_UNITARY_TOL", 1e-12)
DUAL_UNITARY_TOL = env.float("DUALEP_DUAL_UNITARY_TOL", 1e-10)
# Closed-form transfer matrix vs. the gate's numerical one.
SELF_CHECK_TOL = env.float("DUALEP_SELF_CHECK_TOL", 1e-10)
JORDAN_TOL = env.float("DUALEP_JORDAN_TOL", 1e-8)

# CIRCUITS
# ------------------------------------------------------------------------------
# Dense 2^(2L) matrices; L = 7 is 16384 x 16384.
MAX_HALF_SITES = env.int("DUALEP_MAX_HALF_SITES", 7)
# Largest analytic vs. circuit difference `dualep correlate` accepts.
CIRCUIT_ORACLE_TOL = env.float("DUALEP_CIRCUIT_ORACLE_TOL", 1e-9)

# SPECTRAL
# ------------------------------------------------------------------------------
FIT_MAX_ITERATIONS = env.int("DUALEP_FIT_MAX_ITERATIONS", 200)
Z_LOG_CAP = env.float("DUALEP_Z_LOG_CAP", 16.0)
DFT_POINTS = env.int("DUALEP_DFT_POINTS", 512)
POLE_DISTANCE = 1e-12

# LOGGING
# ------------------------------------------------------------------------------
LOG_LEVEL = env("DUALEP_LOG_LEVEL", default="INFO")
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "json": {
            "()": "pythonjsonlogger.json.JsonFormatter",
            "format": "%(asctime)s %(name)s %(levelname)s %(funcName)s %(lineno)d %(message)s",
            "json_ensure_ascii": False,
        },
    },
    "filters": {
        "run_context": {
            "()": "config.logging.RunContextFilter",
        },
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "json",
            "filters": ["run_context"],
        },
    },
    "root": {"level": LOG_LEVEL, "handlers": ["console"]},
}
