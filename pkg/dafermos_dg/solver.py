"""
Time loops shared by all experiments.

`integrate` advances a DGState with one of the DG schemes:

- ``vanilla-dg``: SSPRK33 on the uncorrected right-hand side
- ``ddg``: SSPRK33 on the entropy-corrected right-hand side
- ``drkdg``: vanilla SSPRK33 step followed by the discrete descent

Godunov reference runs go through fv.fv_solve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from .correction import CorrectionReport, DDGStepReport, ddg_rhs
from .dg import DGState, Mesh1D, dg_rhs, interpolate_ic
from .discrete import DescentParams, DiscreteReport, drkdg_step
from .errors import BlowUpError, InvalidArgumentError
from .fv import fv_time_step
from .initial_conditions import InitialCondition
from .laws import NumericalFlux, ScalarLaw, max_wave_speed
from .logging import get_logger
from .quadrature import build_basis
from .timestepping import output_schedule, reached, ssprk33_step

logger = get_logger("solver")

Array = npt.NDArray[np.float64]
StepRule = Callable[[Array], float]
# DDGStepReport for ddg, DiscreteReport for drkdg, None for vanilla-dg
StepReport = Optional[Union[DDGStepReport, DiscreteReport]]
Observer = Callable[[float, Array, StepReport], None]


class Scheme(str, enum.Enum):
    DDG = "ddg"
    DRKDG = "drkdg"
    GODUNOV = "godunov"
    VANILLA_DG = "vanilla-dg"


DG_SCHEMES = (Scheme.DDG, Scheme.DRKDG, Scheme.VANILLA_DG)


@dataclass(eq=False)
class Solution:
    """DG coefficients at t = 0 and at every output time."""

    scheme: Scheme
    mesh: Mesh1D
    times: List[float] = field(default_factory=list)
    states: List[Array] = field(default_factory=list)
    steps: int = 0

    def state_at(self, index: int, basis: Any) -> DGState:
        return DGState(self.mesh, basis, self.states[index])


def prepare_state(ic: InitialCondition, n_cells: int, p: int) -> DGState:
    """Interpolate `ic` on a uniform mesh of its domain with the order-p basis."""
    mesh = Mesh1D(ic.domain[0], ic.domain[1], n_cells)
    return interpolate_ic(ic.fn, mesh, build_basis(p), left_limit=ic.left_limit)


def dg_time_step(coeffs: npt.ArrayLike, mesh: Mesh1D, p: int, law: ScalarLaw, cfl: float) -> float:
    """cfl dx / ((p^2 + 1) c_max); infinite for a state at rest."""
    c_max = max_wave_speed(coeffs, law)
    if c_max == 0.0:
        return float("inf")
    return cfl * mesh.cell_length / ((p * p + 1) * c_max)


def _advance(
    scheme: Scheme,
    state: DGState,
    dt: float,
    law: ScalarLaw,
    flux: NumericalFlux,
    params: DescentParams,
    t: float,
) -> Tuple[DGState, StepReport]:
    """One step; returns the new state and the report of that step."""
    if scheme is Scheme.DRKDG:
        return drkdg_step(state, dt, law, flux, params, t=t)
    if scheme is Scheme.DDG:

        def corrected(u: Array) -> Tuple[Array, CorrectionReport]:
            return ddg_rhs(state.with_coeffs(u), law, flux)

        coeffs, record = ssprk33_step(state.coeffs, dt, corrected, t=t)
        return state.with_coeffs(coeffs), DDGStepReport(stages=record.extras)

    def vanilla(u: Array) -> Array:
        return dg_rhs(state.with_coeffs(u), law, flux).du

    coeffs, _ = ssprk33_step(state.coeffs, dt, vanilla, t=t)
    return state.with_coeffs(coeffs), None


def integrate(
    state: DGState,
    law: ScalarLaw,
    flux: NumericalFlux,
    scheme: Any,
    t_end: float,
    *,
    cfl: float = 0.5,
    output_times: Optional[Sequence[float]] = None,
    step_rule: Optional[StepRule] = None,
    observer: Optional[Observer] = None,
    params: Optional[DescentParams] = None,
) -> Solution:
    """
    Advance `state` to t_end, recording it at every output time.

    The step size comes from `step_rule(coeffs)` when given, else from the
    CFL rule; steps are shortened to hit output times exactly.
    `observer(t, coeffs, report)` sees every accepted step with the
    pre-step state: a DDGStepReport (all three stage evaluations) for ddg,
    a DiscreteReport for drkdg, None for vanilla-dg. A BlowUpError carries
    the partial Solution.
    """
    try:
        scheme = Scheme(scheme)
    except ValueError as exc:
        raise InvalidArgumentError(f"unknown scheme '{scheme}'") from exc
    if scheme not in DG_SCHEMES:
        raise InvalidArgumentError(f"scheme '{scheme.value}' is not a DG scheme")
    if not cfl > 0.0:
        raise InvalidArgumentError(f"cfl must be positive, got {cfl}")
    schedule = output_schedule(t_end, output_times)
    params = params or DescentParams()

    solution = Solution(scheme=scheme, mesh=state.mesh)
    solution.times.append(0.0)
    solution.states.append(state.coeffs.copy())

    t = 0.0
    try:
        for target in schedule:
            while not reached(t, target) and t < target:
                if step_rule is not None:
                    dt = float(step_rule(state.coeffs))
                else:
                    dt = dg_time_step(state.coeffs, state.mesh, state.order, law, cfl)
                dt = min(dt, target - t)
                new_state, report = _advance(scheme, state, dt, law, flux, params, t)
                if observer is not None:
                    observer(t, state.coeffs, report)
                state = new_state
                t = target if reached(t + dt, target) else t + dt
                solution.steps += 1
            t = target
            solution.times.append(t)
            solution.states.append(state.coeffs.copy())
            logger.debug("%s output t=%.6g after %d steps", scheme.value, t, solution.steps)
    except BlowUpError as exc:
        exc.partial = solution
        logger.info("%s blew up at t=%.6g", scheme.value, exc.time)
        raise
    logger.info("%s run n_cells=%d p=%d finished in %d steps", scheme.value, state.mesh.n_cells, state.order, solution.steps)
    return solution


__all__ = [
    "Scheme",
    "DG_SCHEMES",
    "Solution",
    "prepare_state",
    "dg_time_step",
    "fv_time_step",
    "integrate",
]
