"""
First-order finite-volume reference solver.

Piecewise-constant cell means on a fine periodic mesh, two-point fluxes
(Godunov by default) on the interfaces, SSPRK33 in time with
dt = cfl dx / c_max recomputed every step. Besides the means at the
requested output times it records the total entropy sum_k dx U(mean_k)
after every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import numpy.typing as npt

from .dg import Mesh1D
from .errors import BlowUpError, InvalidArgumentError, NonFiniteStateError
from .initial_conditions import InitialCondition
from .laws import GODUNOV, NumericalFlux, ScalarLaw, max_wave_speed
from .logging import get_logger
from .quadrature import gauss_legendre
from .timestepping import output_schedule, reached, ssprk33_step

logger = get_logger("fv")

Array = npt.NDArray[np.float64]

# Gauss points per cell for the initial averages
AVERAGE_POINTS = 4


@dataclass(frozen=True, eq=False)
class FVState:
    mesh: Mesh1D
    means: Array

    def __post_init__(self) -> None:
        means = np.asarray(self.means, dtype=np.float64)
        if means.shape != (self.mesh.n_cells,):
            raise InvalidArgumentError(f"expected {self.mesh.n_cells} cell means, got shape {means.shape}")
        bad = ~np.isfinite(means)
        if bad.any():
            raise NonFiniteStateError("non-finite cell means", cell=int(np.argmax(bad)))
        object.__setattr__(self, "means", means)


def cell_averages(ic: InitialCondition, mesh: Mesh1D, points: int = AVERAGE_POINTS) -> Array:
    """Cell averages of the initial data by Gauss-Legendre quadrature per cell."""
    rule = gauss_legendre(points)
    x = mesh.map_points(rule.nodes)
    return 0.5 * (np.asarray(ic(x)) @ rule.weights)


def _flux_difference(means: Array, dx: float, law: ScalarLaw, flux: NumericalFlux) -> Array:
    fstar = np.asarray(flux.value(means, np.roll(means, -1), law))
    return (np.roll(fstar, 1) - fstar) / dx


def fv_rhs(state: FVState, law: ScalarLaw, flux: NumericalFlux = GODUNOV) -> Array:
    """(f(u_{k-1}, u_k) - f(u_k, u_{k+1})) / dx with periodic wrap."""
    return _flux_difference(state.means, state.mesh.cell_length, law, flux)


def fv_time_step(means: npt.ArrayLike, mesh: Mesh1D, law: ScalarLaw, cfl: float) -> float:
    """cfl dx / c_max (infinite for a state at rest)."""
    c_max = max_wave_speed(means, law)
    return cfl * mesh.cell_length / c_max if c_max > 0.0 else float("inf")


def total_entropy_fv(means: npt.ArrayLike, mesh: Mesh1D, law: ScalarLaw) -> float:
    return float(mesh.cell_length * np.sum(law.entropy(np.asarray(means, dtype=np.float64))))


@dataclass(eq=False)
class FVSolution:
    """Snapshots at t = 0 and every output time, plus the per-step entropy history."""

    mesh: Mesh1D
    times: List[float] = field(default_factory=list)
    means: List[Array] = field(default_factory=list)
    entropy: List[float] = field(default_factory=list)
    step_times: List[float] = field(default_factory=list)
    step_entropy: List[float] = field(default_factory=list)
    steps: int = 0

    def record(self, t: float, means: Array, law: ScalarLaw) -> None:
        self.times.append(float(t))
        self.means.append(means.copy())
        self.entropy.append(total_entropy_fv(means, self.mesh, law))


def fv_solve(
    law: ScalarLaw,
    ic: InitialCondition,
    n_cells: int,
    cfl: float,
    t_end: float,
    output_times: Optional[Sequence[float]] = None,
    *,
    flux: NumericalFlux = GODUNOV,
) -> FVSolution:
    """
    Run the finite-volume scheme from the cell averages of `ic` to t_end.

    Raises BlowUpError (with the partial FVSolution) if the state leaves the
    admissible range.
    """
    if not 0.0 < cfl <= 1.0:
        raise InvalidArgumentError(f"finite-volume cfl must lie in (0, 1], got {cfl}")
    mesh = Mesh1D(ic.domain[0], ic.domain[1], n_cells)
    schedule = output_schedule(t_end, output_times)
    dx = mesh.cell_length

    u = cell_averages(ic, mesh)
    solution = FVSolution(mesh=mesh)
    solution.record(0.0, u, law)
    solution.step_times.append(0.0)
    solution.step_entropy.append(solution.entropy[0])

    def rhs(v: Array) -> Array:
        return _flux_difference(v, dx, law, flux)

    t = 0.0
    try:
        for target in schedule:
            while not reached(t, target) and t < target:
                dt = min(fv_time_step(u, mesh, law, cfl), target - t)
                u, _ = ssprk33_step(u, dt, rhs, t=t)
                t = target if reached(t + dt, target) else t + dt
                solution.steps += 1
                solution.step_times.append(t)
                solution.step_entropy.append(total_entropy_fv(u, mesh, law))
            t = target
            solution.record(t, u, law)
            logger.debug("fv output t=%.6g after %d steps", t, solution.steps)
    except BlowUpError as exc:
        exc.partial = solution
        raise
    logger.info("fv run n_cells=%d finished at t=%.6g in %d steps", n_cells, t, solution.steps)
    return solution


__all__ = [
    "FVState",
    "FVSolution",
    "cell_averages",
    "fv_rhs",
    "fv_time_step",
    "total_entropy_fv",
    "fv_solve",
]
