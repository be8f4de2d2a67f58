"""
Context type for experiment pipelines.

A Context is the dict that travels through the links of a Chain: the
resolved RunConfig, the law, basis and mesh built from it, solver results,
CSV rows and the final status. Middleware only ever sees the read-only
ImmutableContext view.
"""

from __future__ import annotations

from typing import Any, NoReturn


class Context(dict):  # type: ignore[type-arg]
    """
    Mutable pipeline state (a plain dict with mutability helpers).

    - Use .asImmutable() to hand out a read-only snapshot.
    - Use .asMutable() to get a writable context back.
    """

    def isMutable(self) -> bool:
        return True

    def isImmutable(self) -> bool:
        return False

    def asImmutable(self) -> "ImmutableContext":
        """Return a read-only copy of this context."""
        return ImmutableContext(self)

    def asMutable(self) -> "Context":
        return self


class ImmutableContext(Context):
    """
    Read-only Context.

    Every mutator raises TypeError; .asMutable() returns a writable copy.
    """

    def _blocked(self, *args: Any, **kwargs: Any) -> NoReturn:
        raise TypeError("ImmutableContext does not support mutation")

    __setitem__ = _blocked
    __delitem__ = _blocked
    clear = _blocked
    pop = _blocked
    popitem = _blocked
    setdefault = _blocked
    update = _blocked

    def isMutable(self) -> bool:
        return False

    def isImmutable(self) -> bool:
        return True

    def asImmutable(self) -> "ImmutableContext":
        return self

    def asMutable(self) -> Context:
        return Context(self)


__all__ = ["Context", "ImmutableContext"]
