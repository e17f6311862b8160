"""Structured logging for library and CLI runs.

Events are dotted snake_case names with key/value context. A CLI run binds its
run_id and command through run_context; both then appear on every event the
library emits during that run. stdout is reserved for command output, so logs
go to stderr.
"""

import logging
import sys
from collections.abc import Iterator, MutableMapping
from contextlib import contextmanager
from contextvars import ContextVar
from typing import IO, Any

import numpy as np
import structlog

from proxyscat.core.config import get_settings

run_id_ctx: ContextVar[str | None] = ContextVar("run_id", default=None)
command_ctx: ContextVar[str | None] = ContextVar("command", default=None)


def add_run_id(
    _logger: structlog.types.WrappedLogger,
    _method_name: str,
    event_dict: MutableMapping[str, Any],
) -> MutableMapping[str, Any]:
    """Attach run_id and command of the active run, when there is one."""
    for key, var in (("run_id", run_id_ctx), ("command", command_ctx)):
        value = var.get()
        if value is not None:
            event_dict.setdefault(key, value)
    return event_dict


def numpy_to_builtin(
    _logger: structlog.types.WrappedLogger,
    _method_name: str,
    event_dict: MutableMapping[str, Any],
) -> MutableMapping[str, Any]:
    """Render numpy scalars as plain numbers and small arrays as lists."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray) and value.size <= 16:
            event_dict[key] = value.tolist()
    return event_dict


@contextmanager
def run_context(run_id: str, command: str | None = None) -> Iterator[None]:
    """Bind run_id (and the command name) for the duration of a run."""
    run_token = run_id_ctx.set(run_id)
    command_token = command_ctx.set(command)
    try:
        yield
    finally:
        command_ctx.reset(command_token)
        run_id_ctx.reset(run_token)


def configure_logging(stream: IO[str] | None = None) -> None:
    """Configure structlog from Settings.log_level and Settings.log_format.

    Args:
        stream: Destination, stderr by default.
    """
    settings = get_settings()

    renderer: structlog.types.Processor
    if settings.log_format == "json":
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            add_run_id,
            numpy_to_builtin,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelNamesMapping()[settings.log_level]
        ),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=stream if stream is not None else sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str | None = None) -> structlog.typing.FilteringBoundLogger:
    """Logger for a module; pass __name__."""
    logger: structlog.typing.FilteringBoundLogger = structlog.get_logger(name)
    return logger
