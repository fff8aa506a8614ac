"""Custom logging components for structured logging with run context."""

import logging
import uuid
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar

# Context variables for storing run-scoped data
run_id_var: ContextVar[str | None] = ContextVar("run_id", default=None)
command_var: ContextVar[str | None] = ContextVar("command", default=None)
family_var: ContextVar[str | None] = ContextVar("family", default=None)


class RunContextFilter(logging.Filter):
    """
    Logging filter that adds run context from contextvars to LogRecord.

    This filter reads values set by :func:`run_context` and adds them as extra
    fields to each log record, so they show up in JSON output and in the Rich
    console alike.
    """

    def filter(self, record: logging.LogRecord) -> bool:
        """Add context variables to the log record."""
        # Only add fields if they don't already exist (don't override explicit values)
        if not hasattr(record, "run_id"):
            record.run_id = run_id_var.get()
        if not hasattr(record, "command"):
            record.command = command_var.get()
        if not hasattr(record, "family"):
            record.family = family_var.get()

        return True


@contextmanager
def run_context(command: str, family: str | None = None) -> Iterator[str]:
    """
    Populate the run contextvars for the duration of one CLI command.

    Args:
        command: Sub-command name ("solve", "correlate", ...)
        family: EP family the command works on, if any

    Yields:
        The generated run id.
    """
    run_id = uuid.uuid4().hex[:12]
    tokens = (
        run_id_var.set(run_id),
        command_var.set(command),
        family_var.set(family),
    )
    try:
        yield run_id
    finally:
        # Reset in reverse order so nested contexts unwind cleanly
        family_var.reset(tokens[2])
        command_var.reset(tokens[1])
        run_id_var.reset(tokens[0])
