"""
Semidiscrete entropy correction (DDG).

Among all mean-free corrections of a given L2 size, the one that lowers the
entropy production <U'(u), du/dt>_T most is the negative mean-free part of
the entropy variables. Its size eps comes from the error estimate of
reference.py and is exactly large enough for the cell entropy inequality

    <U'(u), du/dt>_T <= F*_l - F*_r

to hold. The corrected derivative keeps every cell mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np
import numpy.typing as npt

from .dg import DGState, dg_rhs, interface_entropy_fluxes, left_right
from .errors import NonFiniteStateError
from .laws import NumericalFlux, ScalarLaw
from .logging import get_logger
from .quadrature import CellOperators
from .reference import ErrorEstimate, Operators, as_operators, estimate

logger = get_logger("correction")

Array = npt.NDArray[np.float64]

# relative floor below which a cell counts as constant
TOL_H_REL = 1.0e-13


@dataclass(frozen=True, eq=False)
class DescentDirection:
    """h = mean-free part of -U'(u), its norm, and the step s = eps h / ||h||."""

    h: Array
    h_norm: Array
    s: Array


@dataclass(frozen=True, eq=False)
class CorrectionReport:
    """Per-cell audit trail of one corrected right-hand side evaluation."""

    delta: Array
    delta_U: Array
    l1_ref: Array
    epsilon: Array
    h_norm: Array
    production_before: Array
    production_after: Array
    violation: Array

    def __len__(self) -> int:
        return int(np.size(self.epsilon))

    def cell(self, index: int) -> Dict[str, float]:
        return {
            "delta": float(self.delta[index]),
            "delta_U": float(self.delta_U[index]),
            "l1_ref": float(self.l1_ref[index]),
            "epsilon": float(self.epsilon[index]),
            "h_norm": float(self.h_norm[index]),
            "production_before": float(self.production_before[index]),
            "production_after": float(self.production_after[index]),
            "violation": float(self.violation[index]),
        }


@dataclass(frozen=True, eq=False)
class DDGStepReport:
    """
    Correction reports of the three SSPRK33 stage evaluations of one DDG step.

    `violation` is the per-cell maximum over the stages, so a nonpositive
    value means the cell entropy inequality held at every evaluated
    right-hand side of the step.
    """

    stages: Tuple[CorrectionReport, CorrectionReport, CorrectionReport]

    def __len__(self) -> int:
        return len(self.stages[0])

    @property
    def violation(self) -> Array:
        return np.max(np.stack([stage.violation for stage in self.stages]), axis=0)

    @property
    def epsilon(self) -> Array:
        return np.max(np.stack([stage.epsilon for stage in self.stages]), axis=0)


def mean_free(values: npt.ArrayLike, ops: CellOperators) -> Array:
    """v - <1, v>_T / <1, 1>_T along the last axis."""
    v = np.asarray(values, dtype=np.float64)
    mean = v @ ops.integral / ops.dx
    return v - np.asarray(mean)[..., None]


def h_tolerance(values: npt.ArrayLike, ops: CellOperators, law: ScalarLaw) -> Array:
    """tol_h = 1e-13 (1 + ||U'(u)||_T)."""
    return TOL_H_REL * (1.0 + ops.norm(law.entropy_var(np.asarray(values, dtype=np.float64))))


def descent_direction(values: npt.ArrayLike, ops: Operators, law: ScalarLaw, eps: npt.ArrayLike) -> DescentDirection:
    """
    Restricted steepest entropy descent of size eps.

    g = -U'(u) nodally, h = g minus its cell mean (exact mass matrix), and
    s = eps h / ||h||_T; s = 0 where ||h|| does not exceed tol_h.
    """
    cell = as_operators(ops)
    u = np.asarray(values, dtype=np.float64)
    h = mean_free(-law.entropy_var(u), cell)
    h_norm = cell.norm(h)
    active = h_norm > h_tolerance(u, cell, law)
    scale = np.where(active, np.asarray(eps, dtype=np.float64) / np.where(active, h_norm, 1.0), 0.0)
    s = np.asarray(scale)[..., None] * h
    return DescentDirection(h=h, h_norm=h_norm, s=s)


def epsilon_semidiscrete(
    est: ErrorEstimate,
    h_norm: npt.ArrayLike,
    tilde_dUdu_norm: npt.ArrayLike,
    tol: npt.ArrayLike = TOL_H_REL,
) -> Union[float, Array]:
    """
    Correction size enforcing the cell entropy inequality.

    eps = delta + delta_U l1_ref / ||U'~||, and 0 where ||U'~|| <= tol.
    For a mean-free h the prefactor ||h|| / |<h, U'>| collapses to
    1 / ||U'~||, so `h_norm` only selects the constant-cell branch.
    """
    tilde = np.asarray(tilde_dUdu_norm, dtype=np.float64)
    floor = np.asarray(tol, dtype=np.float64)
    active = np.logical_and(tilde > floor, np.asarray(h_norm) > floor)
    safe = np.where(active, tilde, 1.0)
    eps = np.where(active, est.delta + est.delta_U * est.l1_ref / safe, 0.0)
    return float(eps) if np.ndim(eps) == 0 else eps


def cell_entropy_violation(
    values: npt.ArrayLike,
    rhs: npt.ArrayLike,
    Fstar_l: npt.ArrayLike,
    Fstar_r: npt.ArrayLike,
    ops: Operators,
    law: ScalarLaw,
) -> Array:
    """<U'(u), du/dt>_T - (F*_l - F*_r); nonpositive where the inequality holds."""
    cell = as_operators(ops)
    u = np.asarray(values, dtype=np.float64)
    production = cell.inner(law.entropy_var(u), np.asarray(rhs, dtype=np.float64))
    return production - (np.asarray(Fstar_l) - np.asarray(Fstar_r))


def ddg_rhs(state: DGState, law: ScalarLaw, flux: NumericalFlux) -> Tuple[Array, CorrectionReport]:
    """
    Entropy-corrected time derivative of every cell.

    du^D/dt = du/dt - eps U'~ / ||U'~||, the entropy-dissipative
    orientation of the restricted descent step.
    """
    ops = state.operators
    u = state.coeffs
    deriv = dg_rhs(state, law, flux)
    est = estimate(u, deriv.du, ops, law, deriv.fstar_l, deriv.fstar_r)

    dUdu = law.entropy_var(u)
    tilde_norm = ops.norm(mean_free(dUdu, ops))
    eps = epsilon_semidiscrete(est, tilde_norm, tilde_norm, tol=h_tolerance(u, ops, law))
    direction = descent_direction(u, ops, law, eps)
    corrected = deriv.du + direction.s

    bad = ~np.isfinite(corrected).all(axis=1)
    if bad.any():
        raise NonFiniteStateError("non-finite corrected right-hand side", cell=int(np.argmax(bad)))

    Fstar_l, Fstar_r = left_right(interface_entropy_fluxes(u, law, flux))
    report = CorrectionReport(
        delta=est.delta,
        delta_U=est.delta_U,
        l1_ref=est.l1_ref,
        epsilon=np.asarray(eps, dtype=np.float64),
        h_norm=direction.h_norm,
        production_before=ops.inner(dUdu, deriv.du),
        production_after=ops.inner(dUdu, corrected),
        violation=cell_entropy_violation(u, corrected, Fstar_l, Fstar_r, ops, law),
    )
    return corrected, report


__all__ = [
    "DescentDirection",
    "CorrectionReport",
    "DDGStepReport",
    "TOL_H_REL",
    "mean_free",
    "h_tolerance",
    "descent_direction",
    "epsilon_semidiscrete",
    "cell_entropy_violation",
    "ddg_rhs",
]
