"""
Link protocol for experiment pipelines.

A Link is one unit of work in a Chain: a sync or async callable that takes
the pipeline Context and returns it (usually the same object, updated).
Numerical work stays in plain functions; links only move data between the
Context and those functions.
"""

from __future__ import annotations

from typing import Any, Awaitable, Callable, Protocol, Union

from .context import Context


class Link(Protocol):
    """Callable Context -> Context (or an awaitable of it), named after its function."""

    __name__: str

    def __call__(self, ctx: Context) -> Union[Context, Awaitable[Context]]:
        ...


def is_link(obj: Any) -> bool:
    """True when `obj` can be used as a chain step (callable with a docstring)."""
    return callable(obj) and bool(getattr(obj, "__doc__", None))


def link_name(link: Callable[..., Any]) -> str:
    """Readable name of a link for logs and inspection."""
    return getattr(link, "__name__", type(link).__name__)


__all__ = ["Link", "is_link", "link_name"]
