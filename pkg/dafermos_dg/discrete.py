"""
Fully discrete entropy correction (DRKDG).

After a vanilla SSPRK33 step, every cell is moved by a few projected
gradient steps on the discrete entropy E^T(u) = sum_k w_k U(u_k)
(Gauss-Lobatto weights), restricted to mean-free moves of total size at
most eps. eps is the Simpson-weighted error estimate of the three stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np
import numpy.typing as npt

from .correction import h_tolerance, mean_free
from .dg import DGState, dg_rhs
from .errors import InvalidArgumentError
from .laws import NumericalFlux, ScalarLaw
from .logging import get_logger
from .quadrature import CellOperators
from .reference import Operators, as_operators, delta
from .timestepping import StageRecord, check_admissible, ssprk33_step

logger = get_logger("discrete")

Array = npt.NDArray[np.float64]


@dataclass(frozen=True)
class DescentParams:
    """
    r gradient steps per cell and time step (one per Runge-Kutta stage).

    `max_halvings` bounds the step-size backtracking that keeps E^T
    monotone for entropies whose curvature grows away from the iterate.
    """

    r: int = 3
    step_cap: float = 1.5
    max_halvings: int = 30

    def __post_init__(self) -> None:
        if int(self.r) != self.r or self.r < 1:
            raise InvalidArgumentError(f"number of gradient steps must be >= 1, got {self.r}")
        if not 0.0 < self.step_cap < 2.0:
            raise InvalidArgumentError(f"step cap must lie in (0, 2), got {self.step_cap}")


def simpson_delta(dt: float, delta_u0: npt.ArrayLike, delta_u1: npt.ArrayLike, delta_u2: npt.ArrayLike) -> Array:
    """dt (d(u0) + 4 d(u2) + d(u1)) / 6."""
    return dt * (np.asarray(delta_u0) + 4.0 * np.asarray(delta_u2) + np.asarray(delta_u1)) / 6.0


def discrete_delta(record: StageRecord) -> Array:
    """Per-cell error estimate of a whole SSPRK33 step from its stage estimates."""
    d0, d1, d2 = record.deltas
    return simpson_delta(record.dt, d0, d1, d2)


def discrete_entropy(values: npt.ArrayLike, ops: Operators, law: ScalarLaw) -> Array:
    """E^T(u) = sum_k w_k U(u_k) with physical Gauss-Lobatto weights."""
    cell = as_operators(ops)
    return law.entropy(np.asarray(values, dtype=np.float64)) @ cell.weights


def curvature_bound(values: npt.ArrayLike, h: npt.ArrayLike, ops: Operators, law: ScalarLaw) -> Array:
    """L = max_k U''(u_k) * sum_k w_k h_k^2."""
    cell = as_operators(ops)
    u = np.asarray(values, dtype=np.float64)
    hh = np.asarray(h, dtype=np.float64)
    return np.max(law.entropy_hess(u), axis=-1) * (hh**2 @ cell.weights)


@dataclass(frozen=True, eq=False)
class DescentOutcome:
    """Corrected coefficients, E^T after every iterate (first entry: input), and the move size."""

    coeffs: Array
    entropies: List[Array] = field(default_factory=list)
    displacement: Array = field(default_factory=lambda: np.zeros(0))
    steps_taken: Array = field(default_factory=lambda: np.zeros(0, dtype=int))


def entropy_descent_discrete(values: npt.ArrayLike, eps: npt.ArrayLike, params: DescentParams, ops: Operators, law: ScalarLaw) -> DescentOutcome:
    """
    r projected gradient steps on E^T inside the mean-free eps-ball.

    Each iterate recomputes h = mean-free part of -U'(u) and moves by
    lambda h with lambda = min(eps / (r ||h||_T), step_cap a / L), where
    a = -sum_k w_k U'(u_k) h_k is the directional decrease of E^T and L its
    curvature bound. Cells with ||h|| <= tol_h or eps = 0 stay put.

    `a` pairs U' and h with the diagonal Gauss-Lobatto weights w_k, not with
    the mass-matrix product <U', -h>_T: E^T is itself a Lobatto sum, so this
    is its exact derivative along h. The norms ||h||_T and the mean-free
    projection still use the exact mass matrix.
    """
    cell = as_operators(ops)
    u = np.array(values, dtype=np.float64)
    start = u.copy()
    eps = np.broadcast_to(np.asarray(eps, dtype=np.float64), u.shape[:-1])
    if np.any(eps < 0.0):
        raise InvalidArgumentError("correction size must be nonnegative")

    entropy = discrete_entropy(u, cell, law)
    entropies = [entropy.copy()]
    steps = np.zeros(u.shape[:-1], dtype=int)
    for _ in range(params.r):
        dUdu = law.entropy_var(u)
        h = mean_free(-dUdu, cell)
        h_norm = cell.norm(h)
        active = np.logical_and(h_norm > h_tolerance(u, cell, law), eps > 0.0)
        if not np.any(active):
            entropies.append(entropy.copy())
            continue

        decrease = -(dUdu * h) @ cell.weights
        L = curvature_bound(u, h, cell, law)
        safe_norm = np.where(active, h_norm, 1.0)
        safe_L = np.where(L > 0.0, L, 1.0)
        lam = np.minimum(eps / (params.r * safe_norm), params.step_cap * decrease / safe_L)
        lam = np.where(np.logical_and(active, decrease > 0.0), lam, 0.0)

        trial = u + lam[..., None] * h
        trial_entropy = discrete_entropy(trial, cell, law)
        for _ in range(params.max_halvings):
            worse = trial_entropy > entropy
            if not np.any(worse):
                break
            lam = np.where(worse, 0.5 * lam, lam)
            trial = u + lam[..., None] * h
            trial_entropy = discrete_entropy(trial, cell, law)
        else:
            lam = np.where(trial_entropy > entropy, 0.0, lam)
            trial = u + lam[..., None] * h
            trial_entropy = discrete_entropy(trial, cell, law)

        u, entropy = trial, trial_entropy
        steps += (lam > 0.0).astype(int)
        entropies.append(entropy.copy())

    return DescentOutcome(
        coeffs=u,
        entropies=entropies,
        displacement=cell.norm(u - start),
        steps_taken=steps,
    )


@dataclass(frozen=True, eq=False)
class DiscreteReport:
    """Per-step audit trail of the fully discrete corrector."""

    vanilla: Array
    delta_T: Array
    epsilon: Array
    outcome: DescentOutcome
    record: StageRecord

    @property
    def displacement(self) -> Array:
        return self.outcome.displacement


def _stage_rhs(state: DGState, law: ScalarLaw, flux: NumericalFlux, ops: CellOperators) -> Callable[[Array], Tuple[Array, Array]]:
    def rhs(u: Array) -> Tuple[Array, Array]:
        deriv = dg_rhs(state.with_coeffs(u), law, flux)
        return deriv.du, delta(u, deriv.du, ops, law, deriv.fstar_l, deriv.fstar_r)

    return rhs


def drkdg_step(
    state: DGState,
    dt: float,
    law: ScalarLaw,
    flux: NumericalFlux,
    params: DescentParams = DescentParams(),
    *,
    t: float = 0.0,
) -> Tuple[DGState, DiscreteReport]:
    """
    One DRKDG step: vanilla SSPRK33, Simpson error estimate, then per-cell descent with eps = delta^T.
    """
    ops = state.operators
    vanilla, record = ssprk33_step(state.coeffs, dt, _stage_rhs(state, law, flux, ops), t=t)
    delta_T = discrete_delta(record)
    epsilon = delta_T
    outcome = entropy_descent_discrete(vanilla, epsilon, params, ops, law)
    check_admissible(outcome.coeffs, t)
    logger.debug("drkdg step t=%.6g dt=%.3g max eps=%.3g", t, dt, float(np.max(epsilon)))
    report = DiscreteReport(vanilla=vanilla, delta_T=delta_T, epsilon=epsilon, outcome=outcome, record=record)
    return state.with_coeffs(outcome.coeffs), report


__all__ = [
    "DescentParams",
    "DescentOutcome",
    "DiscreteReport",
    "simpson_delta",
    "discrete_delta",
    "discrete_entropy",
    "curvature_bound",
    "entropy_descent_discrete",
    "drkdg_step",
]
