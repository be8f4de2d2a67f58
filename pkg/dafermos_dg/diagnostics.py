"""
Measurements on DG solutions: total entropy, entropy-inequality violations,
error norms, convergence orders, exact smooth Burgers solutions and blow-up
scans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .dg import DGState, cell_means
from .errors import BlowUpError, InvalidArgumentError, NoClassicalSolutionError
from .initial_conditions import InitialCondition, sine_shock
from .laws import LOCAL_LAX_FRIEDRICHS, ScalarLaw, burgers
from .logging import get_logger
from .solver import integrate, prepare_state

logger = get_logger("diagnostics")

Array = npt.NDArray[np.float64]

LOG_FLOOR = 1.0e-18
NEWTON_TOL = 1.0e-14
NEWTON_MAXITER = 200


# {{{ entropy


def cell_entropies(state: DGState, law: ScalarLaw) -> Array:
    """E^T of every cell: sum_k w_k U(u_k) with physical Gauss-Lobatto weights."""
    return law.entropy(state.coeffs) @ state.operators.weights


def total_entropy_dg(state: DGState, law: ScalarLaw) -> float:
    return float(np.sum(cell_entropies(state, law)))


def mean_entropy_bound(state: DGState, law: ScalarLaw) -> Tuple[Array, Array]:
    """Per cell (dx U(mean), E^T); the first never exceeds the second for convex U."""
    return state.mesh.cell_length * law.entropy(cell_means(state)), cell_entropies(state, law)


@dataclass(eq=False)
class EntropyTrace:
    """Total entropy over time and the split, log-scaled per-cell violations."""

    times: List[float] = field(default_factory=list)
    total_entropy: List[float] = field(default_factory=list)
    violation_pos: List[Array] = field(default_factory=list)
    violation_neg: List[Array] = field(default_factory=list)

    def append(self, t: float, total: float, violation: npt.ArrayLike) -> None:
        pos, neg = split_violation(violation)
        self.times.append(float(t))
        self.total_entropy.append(float(total))
        self.violation_pos.append(pos)
        self.violation_neg.append(neg)

    def as_arrays(self) -> Tuple[Array, Array, Array, Array]:
        return (
            np.asarray(self.times),
            np.asarray(self.total_entropy),
            np.vstack(self.violation_pos) if self.violation_pos else np.zeros((0, 0)),
            np.vstack(self.violation_neg) if self.violation_neg else np.zeros((0, 0)),
        )


def split_violation(violation: npt.ArrayLike, floor: float = LOG_FLOOR) -> Tuple[Array, Array]:
    """log10 of the positive and negative parts of a signed violation, floored."""
    v = np.asarray(violation, dtype=np.float64)
    return np.log10(np.maximum(v, floor)), np.log10(np.maximum(-v, floor))


def entropy_trace(times: Sequence[float], totals: Sequence[float], violations: Sequence[npt.ArrayLike]) -> EntropyTrace:
    if not len(times) == len(totals) == len(violations):
        raise InvalidArgumentError("times, totals and violations must have equal length")
    trace = EntropyTrace()
    for t, total, violation in zip(times, totals, violations):
        trace.append(t, total, violation)
    return trace


def dafermos_comparison(times: Sequence[float], fv_times: Sequence[float], fv_entropy: Sequence[float]) -> Array:
    """Reference entropy linearly interpolated in time to the DG output times."""
    if len(fv_times) == 0:
        raise InvalidArgumentError("reference entropy curve is empty")
    return np.interp(np.asarray(times, dtype=np.float64), np.asarray(fv_times), np.asarray(fv_entropy))


# }}}


# {{{ errors and convergence


def error_norms(state: DGState, exact_fn: Callable[[np.ndarray], np.ndarray]) -> Tuple[float, float]:
    """L1 and L2 distance to `exact_fn` with the (p+2)-point Gauss-Legendre rule per cell."""
    ops = state.operators
    x = state.mesh.map_points(state.basis.err_quad.nodes)
    diff = state.coeffs @ ops.err_basis_vals.T - np.asarray(exact_fn(x), dtype=np.float64)
    l1 = float(np.sum(np.abs(diff) @ ops.err_weights))
    l2 = float(np.sqrt(np.sum(diff**2 @ ops.err_weights)))
    return l1, l2


@dataclass(frozen=True)
class ConvergenceTable:
    """Errors per grid; eoc entries are NaN where an error vanishes."""

    n_cells: Tuple[int, ...]
    errors_1norm: Tuple[float, ...]
    errors_2norm: Tuple[float, ...]
    eoc_1: Tuple[float, ...]
    eoc_2: Tuple[float, ...]

    def mean_eoc(self) -> Tuple[float, float]:
        return float(np.nanmean(self.eoc_1)), float(np.nanmean(self.eoc_2))


def _orders(n_cells: Sequence[int], errors: Sequence[float]) -> Tuple[float, ...]:
    orders = []
    for (n0, e0), (n1, e1) in zip(zip(n_cells, errors), zip(n_cells[1:], errors[1:])):
        if e0 > 0.0 and e1 > 0.0:
            orders.append(math.log(e0 / e1) / math.log(n1 / n0))
        else:
            orders.append(float("nan"))
    return tuple(orders)


def eoc(n_cells: Sequence[int], errors_1norm: Sequence[float], errors_2norm: Sequence[float]) -> ConvergenceTable:
    """Experimental orders log(e_i / e_{i+1}) / log(N_{i+1} / N_i)."""
    if len(n_cells) < 2:
        raise InvalidArgumentError("at least two grid levels are needed")
    if not len(n_cells) == len(errors_1norm) == len(errors_2norm):
        raise InvalidArgumentError("grid levels and error lists differ in length")
    return ConvergenceTable(
        n_cells=tuple(int(n) for n in n_cells),
        errors_1norm=tuple(float(e) for e in errors_1norm),
        errors_2norm=tuple(float(e) for e in errors_2norm),
        eoc_1=_orders(n_cells, errors_1norm),
        eoc_2=_orders(n_cells, errors_2norm),
    )


def burgers_smooth_exact(ic: InitialCondition, x: npt.ArrayLike, t: float) -> Array:
    """
    Classical Burgers solution u = u0(x - u t) by characteristics.

    Safeguarded Newton on g(u) = u - u0(x - u t), bracketed by the range of
    the data; the bracket is halved whenever a Newton step leaves it.
    """
    xs = np.asarray(x, dtype=np.float64)
    if t == 0.0:
        return np.asarray(ic(xs), dtype=np.float64) * np.ones_like(xs)
    if t < 0.0:
        raise InvalidArgumentError(f"time must be nonnegative, got {t}")
    if t >= ic.breaking_time():
        raise NoClassicalSolutionError(f"characteristics of '{ic.name}' cross before t={t}")

    lo = np.full_like(xs, ic.lower)
    hi = np.full_like(xs, ic.upper)
    u = np.asarray(ic(xs), dtype=np.float64) * np.ones_like(xs)
    for _ in range(NEWTON_MAXITER):
        foot = xs - u * t
        g = u - ic(foot)
        dg = 1.0 + t * ic.slope(foot)
        lo = np.where(g < 0.0, u, lo)
        hi = np.where(g > 0.0, u, hi)
        step = np.where(dg > 0.0, g / np.where(dg > 0.0, dg, 1.0), np.inf)
        newton = u - step
        inside = np.logical_and(newton > lo, newton < hi)
        u_new = np.where(inside, newton, 0.5 * (lo + hi))
        u_new = np.where(g == 0.0, u, u_new)
        change = float(np.max(np.abs(u_new - u), initial=0.0))
        u = u_new
        if change <= NEWTON_TOL * (1.0 + float(np.max(np.abs(u), initial=0.0))):
            return u
    raise NoClassicalSolutionError(f"characteristic solve did not converge at t={t}")


# }}}


# {{{ blow-up scan


@dataclass(frozen=True)
class ScanResult:
    scheme: str
    p: int
    n_cells: int
    cfl: float
    achieved_time: float


def blowup_scan(
    p_list: Sequence[int],
    cfl_list: Sequence[float],
    n_list: Sequence[int],
    t_max: float,
    scheme_variant: str,
    *,
    ic: Optional[InitialCondition] = None,
    law: Optional[ScalarLaw] = None,
) -> List[ScanResult]:
    """
    Run every (p, n_cells, cfl) configuration up to t_max.

    The achieved time is t_max for completed runs and the last valid time
    otherwise; blow-up is recorded, never raised.
    """
    if not t_max > 0.0:
        raise InvalidArgumentError(f"t_max must be positive, got {t_max}")
    ic = ic or sine_shock()
    law = law or burgers()
    results = []
    for p in p_list:
        for n in n_list:
            for cfl in cfl_list:
                state = prepare_state(ic, int(n), int(p))
                try:
                    integrate(state, law, LOCAL_LAX_FRIEDRICHS, scheme_variant, t_max, cfl=float(cfl))
                    achieved = float(t_max)
                except BlowUpError as exc:
                    achieved = min(float(t_max), float(exc.time))
                logger.info("scan %s p=%d n=%d cfl=%g reached t=%.6g", scheme_variant, p, n, cfl, achieved)
                results.append(ScanResult(str(scheme_variant), int(p), int(n), float(cfl), achieved))
    return results


def max_stable_cfl(results: Sequence[ScanResult], t_max: float, *, p: int, n_cells: int) -> float:
    """Largest scanned cfl that reached t_max for the given order and grid (0 if none)."""
    stable = [r.cfl for r in results if r.p == p and r.n_cells == n_cells and r.achieved_time >= t_max]
    return max(stable, default=0.0)


# }}}


__all__ = [
    "EntropyTrace",
    "ConvergenceTable",
    "ScanResult",
    "cell_entropies",
    "total_entropy_dg",
    "mean_entropy_bound",
    "split_violation",
    "entropy_trace",
    "dafermos_comparison",
    "error_norms",
    "eoc",
    "burgers_smooth_exact",
    "blowup_scan",
    "max_stable_cfl",
]
