"""
Chain composition for experiment pipelines.

A Chain runs its links in order, passing one Context through them. Links
that raise can be routed to handlers with .connect(); middleware attached
with .use() observe every step. Each experiment of the CLI is one Chain
(see experiments.py).
"""

from __future__ import annotations

import inspect as _inspect
from typing import Any, Callable, Dict, List, Optional

from .context import Context
from .link import Link, link_name
from .logging import get_logger

logger = get_logger("chain")

Condition = Callable[[Context], bool]


class Chain:
    """
    Ordered pipeline of links.

    - Links may be sync or async callables Context -> Context.
    - .connect(source, target, condition) routes an exception raised by
      `source` to `target` when condition(ctx) holds; the run then goes on
      with the link after `source`.
    - .use(middleware) attaches chain-level middleware; on_link/position
      attach link-level middleware.
    - .run(ctx) executes the chain and returns the final Context.
    """

    def __init__(self, *links: Link, name: Optional[str] = None):
        self.__name__ = name or "chain"
        self._links: List[Link] = list(links)
        self._connections: List[Dict[str, Any]] = []
        self._middleware: List[Any] = []
        self._update_doc()

    def _update_doc(self) -> None:
        """Rewrite the instance docstring to list links, connections and middleware."""
        doc = (self.__class__.__doc__ or "") + "\n\n"
        doc += "Links:\n"
        for link in self._links:
            summary = (getattr(link, "__doc__", "") or "").strip().splitlines()
            doc += f"  - {link_name(link)}: {summary[0] if summary else ''}\n"
        doc += f"\nConnections: {[self._describe(c) for c in self._connections]}\n"
        doc += f"Middleware: {[type(m).__name__ for m in self._middleware]}"
        self.__doc__ = doc

    @staticmethod
    def _describe(conn: Dict[str, Any]) -> Dict[str, str]:
        return {
            "source": link_name(conn["source"]),
            "target": link_name(conn["target"]),
            "condition": link_name(conn["condition"]),
        }

    def add_link(self, link: Link) -> "Chain":
        """Append a link and return the chain."""
        self._links.append(link)
        self._update_doc()
        return self

    def use(self, middleware: Any, on_link: Optional[Link] = None, position: Optional[str] = None) -> "Chain":
        """
        Attach middleware to the whole chain, or to one link when on_link is given.

        position must be 'before' or 'after' for link-level middleware.
        """
        if on_link is None:
            self._middleware.append(middleware)
        else:
            if position not in ("before", "after"):
                raise ValueError("position must be 'before' or 'after' for link-level middleware")
            attr = "_before_middleware" if position == "before" else "_after_middleware"
            if not hasattr(on_link, attr):
                setattr(on_link, attr, [])
            getattr(on_link, attr).append(middleware)
        self._update_doc()
        return self

    def connect(self, source: Link, target: Link, condition: Condition) -> "Chain":
        """Route exceptions raised by `source` to `target` when condition(ctx) is true."""
        self._connections.append({"source": source, "target": target, "condition": condition})
        self._update_doc()
        return self

    async def _call(self, link: Link, ctx: Context) -> Context:
        result = link(ctx)
        if _inspect.isawaitable(result):
            result = await result
        return result  # type: ignore[return-value]

    async def _notify(self, hook: str, middleware: List[Any], position: str, link: Link, *args: Any) -> None:
        for index, m in enumerate(middleware):
            if not hasattr(m, hook):
                continue
            m.link = link
            m.position = position
            m.index = index
            await getattr(m, hook)(link, *args)

    async def run(self, ctx: Context) -> Context:
        """
        Execute the chain on `ctx`.

        A raised exception is stored in ctx["exception"]. If a connection
        handles it, the handler's result continues down the chain; otherwise
        the run stops and the context (with the exception) is returned.
        """
        current = ctx if isinstance(ctx, Context) else Context(ctx)
        mwctx = Context()
        for link in self._links:
            view = current.asImmutable()
            await self._notify("before", self._middleware, "chain-before", link, view, mwctx)
            await self._notify("before", getattr(link, "_before_middleware", []), "link-before", link, view, mwctx)
            stop = False
            try:
                result = await self._call(link, current)
            except Exception as exc:
                current["exception"] = exc
                result, routed = await self._route(link, current)
                if not routed:
                    logger.debug("unrouted %s in %s", type(exc).__name__, link_name(link))
                    result, stop = current, True
            out = result.asImmutable() if isinstance(result, Context) else result
            await self._notify("after", getattr(link, "_after_middleware", []), "link-after", link, view, out, mwctx)
            await self._notify("after", self._middleware, "chain-after", link, view, out, mwctx)
            current = result if isinstance(result, Context) else Context(result)
            if stop:
                break
        return current

    async def _route(self, link: Link, ctx: Context) -> Any:
        for conn in self._connections:
            if conn["source"] is not link or not callable(conn["condition"]):
                continue
            try:
                matched = conn["condition"](ctx)
            except Exception:
                continue
            if matched:
                return await self._call(conn["target"], ctx), True
        return ctx, False

    def inspect(self) -> Dict[str, Any]:
        """Structure of the chain: link names, connections and middleware types."""
        return {
            "name": self.__name__,
            "links": [link_name(link) for link in self._links],
            "connections": [self._describe(c) for c in self._connections],
            "middleware": [type(m).__name__ for m in self._middleware],
        }


__all__ = ["Chain"]
