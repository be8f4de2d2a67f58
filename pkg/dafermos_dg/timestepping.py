"""
Three-stage, third-order strong-stability-preserving Runge-Kutta step.

    u1 = u0 + dt L(u0)
    u2 = u0 + dt/4 L(u0) + dt/4 L(u1)
    u3 = u0 + dt/6 L(u0) + dt/6 L(u1) + 2 dt/3 L(u2)

The stage states and right-hand sides are kept in a StageRecord so the
fully discrete corrector can reuse them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .errors import BlowUpError, InvalidArgumentError, NonFiniteStateError

Array = npt.NDArray[np.float64]
RhsResult = Union[Array, Tuple[Array, Any]]
RhsFn = Callable[[Array], RhsResult]

BLOWUP_THRESHOLD = 1.0e6


@dataclass(frozen=True, eq=False)
class StageRecord:
    """
    Stage data of one SSPRK33 step.

    `extras[k]` is whatever the right-hand side returned next to L(u_k)
    (per-cell error estimates for the discrete corrector, correction
    reports for DDG), or None.
    """

    u0: Array
    u1: Array
    u2: Array
    rhs: Tuple[Array, Array, Array]
    extras: Tuple[Any, Any, Any]
    dt: float
    t: float = 0.0

    @property
    def deltas(self) -> Tuple[Array, Array, Array]:
        """Per-cell error estimates at u0, u1, u2."""
        if any(e is None for e in self.extras):
            raise InvalidArgumentError("stage record carries no error estimates")
        return tuple(np.asarray(e, dtype=np.float64) for e in self.extras)  # type: ignore[return-value]


def check_admissible(u: npt.ArrayLike, t: float) -> None:
    """Raise BlowUpError(t) for non-finite values or max |u| above the blow-up threshold."""
    values = np.asarray(u)
    if not np.all(np.isfinite(values)):
        raise BlowUpError(t, "non-finite state")
    if values.size and np.max(np.abs(values)) > BLOWUP_THRESHOLD:
        raise BlowUpError(t, f"|u| exceeded {BLOWUP_THRESHOLD:g}")


def output_schedule(t_end: float, output_times: Optional[Sequence[float]] = None) -> List[float]:
    """
    Sorted output times in (0, t_end], always ending with t_end.

    Times outside (0, t_end] or not strictly increasing are rejected.
    """
    if not t_end > 0.0:
        raise InvalidArgumentError(f"end time must be positive, got {t_end}")
    times = [float(t) for t in (output_times or [])]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise InvalidArgumentError("output times must be strictly increasing")
    if times and (times[0] <= 0.0 or times[-1] > t_end):
        raise InvalidArgumentError(f"output times must lie in (0, {t_end}]")
    if not times or times[-1] < t_end:
        times.append(float(t_end))
    return times


def reached(t: float, target: float) -> bool:
    """True when t hits target up to accumulated round-off."""
    return abs(t - target) <= 1.0e-12 * max(1.0, abs(target))


def _evaluate(rhs_fn: RhsFn, u: Array, t: float) -> Tuple[Array, Any]:
    try:
        result = rhs_fn(u)
    except NonFiniteStateError as exc:
        raise BlowUpError(t, str(exc)) from exc
    if isinstance(result, tuple):
        rhs, extra = result
    else:
        rhs, extra = result, None
    rhs = np.asarray(rhs, dtype=np.float64)
    if not np.all(np.isfinite(rhs)):
        raise BlowUpError(t, "non-finite right-hand side")
    return rhs, extra


def ssprk33_step(u0: npt.ArrayLike, dt: float, rhs_fn: RhsFn, *, t: float = 0.0) -> Tuple[Array, StageRecord]:
    """
    Advance `u0` by one SSPRK33 step of size dt.

    `t` is the time of u0 and is what a BlowUpError reports when a stage
    leaves the admissible range.
    """
    if not dt > 0.0:
        raise InvalidArgumentError(f"time step must be positive, got {dt}")
    u0 = np.asarray(u0, dtype=np.float64)

    L0, e0 = _evaluate(rhs_fn, u0, t)
    u1 = u0 + dt * L0
    check_admissible(u1, t)

    L1, e1 = _evaluate(rhs_fn, u1, t)
    u2 = u0 + 0.25 * dt * L0 + 0.25 * dt * L1
    check_admissible(u2, t)

    L2, e2 = _evaluate(rhs_fn, u2, t)
    u3 = u0 + (dt / 6.0) * L0 + (dt / 6.0) * L1 + (2.0 * dt / 3.0) * L2
    check_admissible(u3, t)

    record = StageRecord(u0=u0, u1=u1, u2=u2, rhs=(L0, L1, L2), extras=(e0, e1, e2), dt=float(dt), t=float(t))
    return u3, record


__all__ = ["StageRecord", "BLOWUP_THRESHOLD", "check_admissible", "output_schedule", "reached", "ssprk33_step"]
