"""
With these settings, tests run quietly.
"""

import copy

from .base import *  # noqa: F403
from .base import LOGGING as BASE_LOGGING

# LOGGING
# ------------------------------------------------------------------------------
LOGGING = copy.deepcopy(BASE_LOGGING)
LOGGING["root"]["level"] = "WARNING"  # type: ignore[index]

# CIRCUITS
# ------------------------------------------------------------------------------
MAX_HALF_SITES = 7
