"""
Periodic 1-D mesh, nodal DG state and the uncorrected DG right-hand side.

Per cell the semidiscrete scheme reads

    M_T du/dt = S f(u) + phi(x_l) f*_l - phi(x_r) f*_r

with the interpolated flux f(u) in the volume term and two-point numerical
fluxes on the periodic interfaces. Interface i+1/2 sits between cell i and
cell i+1; `interface_fluxes` returns its values in cell order, so cell i
sees f*_l = fstar[i-1] and f*_r = fstar[i].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
import numpy.typing as npt

from .errors import InvalidArgumentError, InvalidMeshError, NonFiniteStateError
from .laws import NumericalFlux, ScalarLaw
from .quadrature import Basis, CellOperators, scale_to_cell

Array = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Mesh1D:
    """Uniform periodic mesh of [x_min, x_max) with n_cells cells."""

    x_min: float
    x_max: float
    n_cells: int
    periodic: bool = True

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)) or self.x_max <= self.x_min:
            raise InvalidMeshError(f"need x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise InvalidMeshError(f"n_cells must be a positive integer, got {self.n_cells}")
        if not self.periodic:
            raise InvalidMeshError("only periodic meshes are supported")

    @property
    def length(self) -> float:
        return float(self.x_max - self.x_min)

    @property
    def cell_length(self) -> float:
        return self.length / self.n_cells

    @property
    def edges(self) -> Array:
        return self.x_min + self.cell_length * np.arange(self.n_cells + 1)

    @property
    def centers(self) -> Array:
        return self.x_min + self.cell_length * (np.arange(self.n_cells) + 0.5)

    def nodes(self, basis: Basis) -> Array:
        """Physical collocation points, shape (n_cells, p+1)."""
        left = self.edges[:-1, None]
        return left + 0.5 * self.cell_length * (np.asarray(basis.nodes)[None, :] + 1.0)

    def map_points(self, basis_points: npt.ArrayLike) -> Array:
        """Map reference points in [-1, 1] to every cell, shape (n_cells, len(points))."""
        xi = np.asarray(basis_points, dtype=np.float64)
        return self.edges[:-1, None] + 0.5 * self.cell_length * (xi[None, :] + 1.0)


def _first_bad_cell(values: np.ndarray) -> Optional[int]:
    bad = ~np.isfinite(values)
    if not bad.any():
        return None
    rows = np.nonzero(bad.reshape(bad.shape[0], -1).any(axis=1))[0]
    return int(rows[0])


@dataclass(frozen=True, eq=False)
class DGState:
    """Nodal coefficients u^T_j of every cell, shape (n_cells, p+1)."""

    mesh: Mesh1D
    basis: Basis
    coeffs: Array

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        expected = (self.mesh.n_cells, self.basis.size)
        if coeffs.shape != expected:
            raise InvalidArgumentError(f"coefficient array has shape {coeffs.shape}, expected {expected}")
        cell = _first_bad_cell(coeffs)
        if cell is not None:
            raise NonFiniteStateError("non-finite DG coefficients", cell=cell)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return self.basis.order

    @property
    def operators(self) -> CellOperators:
        return scale_to_cell(self.basis, self.mesh.cell_length)

    def with_coeffs(self, coeffs: npt.ArrayLike) -> "DGState":
        return DGState(self.mesh, self.basis, np.array(coeffs, dtype=np.float64))


def interpolate_ic(
    fn: Callable[[np.ndarray], np.ndarray],
    mesh: Mesh1D,
    basis: Basis,
    left_limit: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> DGState:
    """
    Nodal interpolation of `fn` at the Gauss-Lobatto points of every cell.

    If `left_limit` is given it is used for the right node of each cell, so
    data with jumps on cell edges is sampled from inside the cell.
    """
    x = mesh.nodes(basis)
    values = np.asarray(fn(x), dtype=np.float64) * np.ones_like(x)
    if left_limit is not None:
        values[:, -1] = np.asarray(left_limit(x[:, -1]), dtype=np.float64)
    cell = _first_bad_cell(values)
    if cell is not None:
        raise NonFiniteStateError("initial condition is not finite", cell=cell)
    return DGState(mesh, basis, values)


# {{{ interfaces


def _interface_states(coeffs: Array) -> Tuple[Array, Array]:
    return coeffs[:, -1], np.roll(coeffs[:, 0], -1)


def interface_fluxes(coeffs: npt.ArrayLike, law: ScalarLaw, flux: NumericalFlux) -> Array:
    """f*(u_i(x_r), u_{i+1}(x_l)) at every interface i+1/2 (periodic)."""
    u_l, u_r = _interface_states(np.asarray(coeffs, dtype=np.float64))
    return np.asarray(flux.value(u_l, u_r, law), dtype=np.float64)


def interface_entropy_fluxes(coeffs: npt.ArrayLike, law: ScalarLaw, flux: NumericalFlux) -> Array:
    """Numerical entropy flux F* at every interface i+1/2 (periodic)."""
    u_l, u_r = _interface_states(np.asarray(coeffs, dtype=np.float64))
    return np.asarray(flux.entropy_value(u_l, u_r, law), dtype=np.float64)


def left_right(interface_values: Array) -> Tuple[Array, Array]:
    """Split per-interface values into per-cell (left, right) arrays."""
    return np.roll(interface_values, 1), interface_values


# }}}


class DGDerivative(NamedTuple):
    du: Array
    fstar: Array
    fstar_l: Array
    fstar_r: Array


def dg_rhs(state: DGState, law: ScalarLaw, flux: NumericalFlux) -> DGDerivative:
    """Vanilla DG time derivative of every cell plus the interface fluxes it used."""
    ops = state.operators
    u = state.coeffs
    fstar = interface_fluxes(u, law, flux)
    fstar_l, fstar_r = left_right(fstar)

    rhs = law.flux(u) @ ops.stiffness.T
    rhs[:, 0] += fstar_l
    rhs[:, -1] -= fstar_r
    du = ops.solve_mass(rhs)

    cell = _first_bad_cell(du)
    if cell is not None:
        raise NonFiniteStateError("non-finite DG right-hand side", cell=cell)
    return DGDerivative(du=du, fstar=fstar, fstar_l=fstar_l, fstar_r=fstar_r)


def cell_means(state: DGState) -> Array:
    """<1, u^T>_T / dx for every cell."""
    ops = state.operators
    return state.coeffs @ ops.integral / ops.dx


def cell_mean(state: DGState, cell_index: int) -> float:
    if not 0 <= cell_index < state.mesh.n_cells:
        raise InvalidArgumentError(f"cell index {cell_index} out of range 0..{state.mesh.n_cells - 1}")
    ops = state.operators
    return float(state.coeffs[cell_index] @ ops.integral / ops.dx)


def total_mass(state: DGState) -> float:
    """Sum over cells of <1, u^T>_T."""
    return float(np.sum(state.coeffs @ state.operators.integral))


__all__ = [
    "Mesh1D",
    "DGState",
    "DGDerivative",
    "interpolate_ic",
    "interface_fluxes",
    "interface_entropy_fluxes",
    "left_right",
    "dg_rhs",
    "cell_means",
    "cell_mean",
    "total_mass",
]
