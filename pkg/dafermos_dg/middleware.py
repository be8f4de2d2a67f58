"""
Middleware for experiment chains.

Middleware observe a chain run: they receive the link about to run (or that
just ran), a read-only view of the pipeline Context, and the shared
middleware context `mwctx`. They never change the pipeline Context and never
alter control flow.
"""

from __future__ import annotations

import time
from typing import Any, Optional, Protocol

from .context import Context
from .link import Link, link_name
from .logging import get_logger

logger = get_logger("chain")


class Middleware(Protocol):
    """
    Observer protocol: async before(link, ctx, mwctx) and after(link, ctx, result, mwctx).

    The chain sets `link`, `position` ('chain-before', 'link-before',
    'link-after', 'chain-after') and `index` before each call.
    """

    link: Optional[Link]
    position: Optional[str]
    index: Optional[int]

    async def before(self, link: Link, ctx: Context, mwctx: Context) -> None:
        ...

    async def after(self, link: Link, ctx: Context, result: Context, mwctx: Context) -> None:
        ...


def is_middleware(obj: Any) -> bool:
    """True when `obj` has both before and after hooks."""
    return hasattr(obj, "before") and hasattr(obj, "after")


class Logging:
    """
    Logs link entry and exit at INFO through the package logger.

    On exit it also reports a failed link (an exception stored in the
    result context).
    """

    link: Optional[Link] = None
    position: Optional[str] = None
    index: Optional[int] = None

    async def before(self, link: Link, ctx: Context, mwctx: Context) -> None:
        logger.info("enter %s (experiment=%s)", link_name(link), _experiment(ctx))

    async def after(self, link: Link, ctx: Context, result: Context, mwctx: Context) -> None:
        exc = result.get("exception") if isinstance(result, dict) else None
        if exc is not None and mwctx.get("_logged_exception") is not exc:
            mwctx["_logged_exception"] = exc
            logger.warning("%s raised %s: %s", link_name(link), type(exc).__name__, exc)
        logger.info("leave %s", link_name(link))


class Timing:
    """
    Measures wall time per link.

    Elapsed seconds are accumulated in mwctx["timings"] (link name ->
    seconds) and logged at INFO. Timings never reach the pipeline Context,
    so outputs stay deterministic.
    """

    link: Optional[Link] = None
    position: Optional[str] = None
    index: Optional[int] = None

    async def before(self, link: Link, ctx: Context, mwctx: Context) -> None:
        mwctx["_timing_start"] = time.perf_counter()

    async def after(self, link: Link, ctx: Context, result: Context, mwctx: Context) -> None:
        start = mwctx.pop("_timing_start", None)
        if start is None:
            return
        elapsed = time.perf_counter() - start
        timings = mwctx.setdefault("timings", {})
        name = link_name(link)
        timings[name] = timings.get(name, 0.0) + elapsed
        logger.info("%s took %.6fs", name, elapsed)


def _experiment(ctx: Context) -> str:
    config = ctx.get("config") if isinstance(ctx, dict) else None
    experiment = getattr(config, "experiment", None)
    return getattr(experiment, "value", str(experiment))


__all__ = ["Middleware", "is_middleware", "Logging", "Timing"]
