import copy

from .base import *  # noqa: F403
from .base import LOGGING as BASE_LOGGING
from .base import env

# GENERAL
# ------------------------------------------------------------------------------
DEBUG = True

# LOGGING
# ------------------------------------------------------------------------------
# Rich console output while working at the desk.
LOGGING = copy.deepcopy(BASE_LOGGING)
LOGGING["handlers"]["console"] = {  # type: ignore[index]
    "level": "DEBUG",
    "class": "rich.logging.RichHandler",
    "formatter": "json",
    "filters": ["run_context"],
    "rich_tracebacks": True,
    "tracebacks_show_locals": env.bool("DUALEP_TRACEBACK_LOCALS", True),
    "markup": True,
    "show_path": True,
}
