"""
Initial data of the numerical studies, defined on the periodic domain [0, 2)
and stretched onto other periods with `on_domain`.

Each InitialCondition carries the vectorized function, its slope (for
breaking-time checks and characteristic solves), bounds of its range, and
optionally a left-limit evaluator for data that jumps on a cell edge.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import numpy.typing as npt

from .errors import InvalidArgumentError, InvalidMeshError

Pointwise = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class InitialCondition:
    name: str
    fn: Pointwise
    slope: Pointwise
    lower: float
    upper: float
    left_limit: Optional[Pointwise] = None
    domain: Tuple[float, float] = (0.0, 2.0)

    def __call__(self, x: npt.ArrayLike) -> np.ndarray:
        return self.fn(np.asarray(x, dtype=np.float64))

    def breaking_time(self, samples: int = 4097) -> float:
        """-1 / min u0' over the domain (inf when the data never steepens)."""
        x = np.linspace(self.domain[0], self.domain[1], samples)
        steepest = float(np.min(self.slope(x)))
        return -1.0 / steepest if steepest < 0.0 else float("inf")


def _wrap(x: np.ndarray, domain: Tuple[float, float] = (0.0, 2.0)) -> np.ndarray:
    lo, hi = domain
    return lo + np.mod(np.asarray(x, dtype=np.float64) - lo, hi - lo)


def sine_shock() -> InitialCondition:
    """u(x) = sin(pi x) + 1/2; breaks at t = 1/pi."""
    return InitialCondition(
        name="sine-shock",
        fn=lambda x: np.sin(np.pi * x) + 0.5,
        slope=lambda x: np.pi * np.cos(np.pi * x),
        lower=-0.5,
        upper=1.5,
    )


def _rarefaction(x: np.ndarray) -> np.ndarray:
    y = _wrap(x)
    return np.where(y < 1.0, -y, 2.0 - y)


def _rarefaction_left(x: np.ndarray) -> np.ndarray:
    y = _wrap(x)
    y = np.where(y == 0.0, 2.0, y)
    return np.where(y <= 1.0, -y, 2.0 - y)


def rarefaction() -> InitialCondition:
    """
    u(x) = -x on [0, 1), 2 - x on [1, 2).

    The upward jump at x = 1 opens a rarefaction fan; the data is
    decreasing elsewhere, so both ramps steepen and break at t = 1.
    """
    return InitialCondition(
        name="rarefaction",
        fn=_rarefaction,
        slope=lambda x: -np.ones_like(np.asarray(x, dtype=np.float64)),
        lower=-1.0,
        upper=1.0,
        left_limit=_rarefaction_left,
    )


def smooth() -> InitialCondition:
    """u(x) = 1 + sin(pi x)/50, classical up to t = 50/pi."""
    return InitialCondition(
        name="smooth",
        fn=lambda x: 1.0 + np.sin(np.pi * x) / 50.0,
        slope=lambda x: np.pi * np.cos(np.pi * x) / 50.0,
        lower=0.98,
        upper=1.02,
    )


def constant(c: float = 1.0) -> InitialCondition:
    value = float(c)
    return InitialCondition(
        name="constant",
        fn=lambda x: np.full_like(np.asarray(x, dtype=np.float64), value),
        slope=lambda x: np.zeros_like(np.asarray(x, dtype=np.float64)),
        lower=value,
        upper=value,
    )


_REGISTRY: Dict[str, Callable[[], InitialCondition]] = {
    "sine-shock": sine_shock,
    "rarefaction": rarefaction,
    "smooth": smooth,
    "constant": constant,
}


def by_name(name: str) -> InitialCondition:
    try:
        return _REGISTRY[name.replace("_", "-")]()
    except KeyError as exc:
        raise InvalidArgumentError(f"unknown initial condition '{name}'") from exc


def on_domain(ic: InitialCondition, x_min: float, x_max: float) -> InitialCondition:
    """
    The same profile stretched affinely onto one period [x_min, x_max).

    Slopes scale with the stretch, so breaking times and characteristic
    solves stay consistent; the data stays periodic on the new domain.
    """
    if not x_max > x_min:
        raise InvalidMeshError(f"domain needs x_max > x_min, got [{x_min}, {x_max}]")
    lo, hi = ic.domain
    if (float(x_min), float(x_max)) == (lo, hi):
        return ic
    scale = (hi - lo) / (x_max - x_min)

    def to_reference(x: np.ndarray) -> np.ndarray:
        return lo + scale * (np.asarray(x, dtype=np.float64) - x_min)

    return replace(
        ic,
        fn=_pulled_back(ic.fn, to_reference),
        slope=_pulled_back(ic.slope, to_reference, scale),
        left_limit=None if ic.left_limit is None else _pulled_back(ic.left_limit, to_reference),
        domain=(float(x_min), float(x_max)),
    )


def _pulled_back(fn: Pointwise, to_reference: Pointwise, factor: float = 1.0) -> Pointwise:
    return lambda x: factor * fn(to_reference(x))


def rarefaction_exact(x: npt.ArrayLike, t: float) -> np.ndarray:
    """
    Exact entropy solution of Burgers' equation for the rarefaction data, t < 1.

    -x/(1-t) on [0, 1-t], (x-1)/t in the fan [1-t, 1+t], (2-x)/(1-t) on [1+t, 2).
    """
    if not 0.0 <= t < 1.0:
        raise InvalidArgumentError(f"closed form holds for 0 <= t < 1, got t={t}")
    y = _wrap(np.asarray(x, dtype=np.float64))
    if t == 0.0:
        return _rarefaction(y)
    return np.where(
        y <= 1.0 - t,
        -y / (1.0 - t),
        np.where(y < 1.0 + t, (y - 1.0) / t, (2.0 - y) / (1.0 - t)),
    )


__all__ = [
    "InitialCondition",
    "sine_shock",
    "rarefaction",
    "smooth",
    "constant",
    "by_name",
    "on_domain",
    "rarefaction_exact",
]
