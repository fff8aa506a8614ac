"""Settings for unattended batch runs (cluster jobs, CI artifact builds)."""

import copy

from .base import *  # noqa: F403
from .base import LOGGING as BASE_LOGGING
from .base import env

# LOGGING
# ------------------------------------------------------------------------------
# JSON lines on stderr so a log shipper can parse them; circuit builders only
# report warnings.
LOGGING = copy.deepcopy(BASE_LOGGING)
LOGGING["root"]["level"] = env("DUALEP_LOG_LEVEL", default="INFO")  # type: ignore[index]
LOGGING["loggers"] = {
    "dualep.circuits": {"level": "WARNING", "handlers": ["console"], "propagate": False},
}
