"""
Package logging helpers.

All loggers hang below the ``dafermos_dg`` root so one handler controls the
whole package. Library code never prints; the CLI decides the verbosity.
"""

from __future__ import annotations

import logging
import sys
from typing import Optional

ROOT = "dafermos_dg"
_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Return the package logger, or a child of it when `name` is given."""
    if not name or name == ROOT:
        return logging.getLogger(ROOT)
    if name.startswith(ROOT + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT}.{name}")


def set_verbosity(level: int = logging.WARNING) -> logging.Logger:
    """Install a single stderr handler on the package root at `level`."""
    root = logging.getLogger(ROOT)
    for handler in list(root.handlers):
        if getattr(handler, "_dafermos_handler", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    handler._dafermos_handler = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(level)
    return root


logging.getLogger(ROOT).addHandler(logging.NullHandler())

__all__ = ["get_logger", "set_verbosity"]
