#!/usr/bin/env python
"""Run the dualep CLI from a checkout with the local settings."""

import os
import sys


def main():
    """Run a dualep sub-command."""
    os.environ.setdefault("DUALEP_SETTINGS_MODULE", "config.settings.local")

    try:
        from dualep.cli import main as run  # noqa: PLC0415
    except ImportError as exc:
        raise ImportError(  # noqa: TRY003
            "Couldn't import dualep. Are you sure its dependencies are installed "  # noqa: EM101
            "and the repository root is on your PYTHONPATH? Did you forget to "
            "activate a virtual environment?",
        ) from exc

    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
