"""Lazy access to the active settings module.

The module is named by ``DUALEP_SETTINGS_MODULE`` (default
``config.settings.base``) and imported on first attribute access, after which
its ``LOGGING`` dict is applied once.

This follows ``django.conf.settings``: a ``LazySettings`` object resolved from
an environment variable (there ``DJANGO_SETTINGS_MODULE``), with logging
configured from the ``LOGGING`` dict at setup. The ``config/settings`` modules
are read the same way ``manage.py`` reads them, without Django installed.
"""

import importlib
import logging.config
import os
from types import ModuleType
from typing import Any

ENVIRONMENT_VARIABLE = "DUALEP_SETTINGS_MODULE"
DEFAULT_SETTINGS_MODULE = "config.settings.base"


class LazySettings:
    """Proxy that resolves the settings module on first use."""

    def __init__(self) -> None:
        self._wrapped: ModuleType | None = None

    def _setup(self) -> ModuleType:
        name = os.environ.get(ENVIRONMENT_VARIABLE, DEFAULT_SETTINGS_MODULE)
        module = importlib.import_module(name)
        logging_config = getattr(module, "LOGGING", None)
        if logging_config:
            logging.config.dictConfig(logging_config)
        self._wrapped = module
        return module

    def __getattr__(self, name: str) -> Any:
        wrapped = self._wrapped if self._wrapped is not None else self._setup()
        return getattr(wrapped, name)

    def configure(self, module_name: str) -> None:
        """Switch to another settings module (used by the CLI ``--settings`` flag)."""
        os.environ[ENVIRONMENT_VARIABLE] = module_name
        self._wrapped = None
        self._setup()

    @property
    def configured(self) -> bool:
        return self._wrapped is not None


settings = LazySettings()
