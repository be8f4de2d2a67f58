"""
Reference derivative of a DG cell and the error estimators built on it.

Refining a cell into N finite-volume subcells driven by the same two-point
flux and projecting the subcell derivative back onto the polynomial space
gives, as N grows, a regular part -f'(u) u_x from the cell interior and a
singular part carried by the flux jumps at the two cell edges. Both are
available in closed form; nothing here time-steps subcells.

All functions take nodal values with cells on the leading axes and the
p+1 nodal coefficients on the last axis, so they work for a single cell
(shape (p+1,)) and for a whole state (shape (n_cells, p+1)) alike. The
`ops` argument is either the CellOperators of the physical cell or a bare
Basis, which stands for the reference cell [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
import numpy.typing as npt

from .laws import ScalarLaw
from .quadrature import Basis, CellOperators, scale_to_cell

Array = npt.NDArray[np.float64]
Operators = Union[Basis, CellOperators]


def as_operators(ops: Operators) -> CellOperators:
    """CellOperators unchanged; a Basis becomes the operators of the reference cell."""
    if isinstance(ops, Basis):
        return scale_to_cell(ops, 2.0)
    return ops


@dataclass(frozen=True, eq=False)
class RefDerivative:
    """Closed-form limit of the projected subcell derivative."""

    regular_at_errquad: Array
    singular_coeffs: Array
    f_bnd_l: Array
    f_bnd_r: Array
    fstar_l: Array
    fstar_r: Array

    def singular_at_errquad(self, ops: Operators) -> Array:
        return self.singular_coeffs @ as_operators(ops).err_basis_vals.T

    def mean_flux(self, ops: Operators) -> Array:
        """<1, regular> + <1, singular>, which equals f*_l - f*_r."""
        cell = as_operators(ops)
        return self.regular_at_errquad @ cell.err_weights + self.singular_coeffs @ cell.integral


@dataclass(frozen=True)
class ErrorEstimate:
    delta: Array
    delta_U: Array
    l1_ref: Array


def _values(u: npt.ArrayLike) -> Array:
    return np.asarray(u, dtype=np.float64)


def regular_part(values: npt.ArrayLike, ops: Operators, law: ScalarLaw) -> Array:
    """-f'(u) u_x at the (p+2) Gauss-Legendre nodes, from the exact polynomial."""
    cell = as_operators(ops)
    u = _values(values)
    uq = u @ cell.err_basis_vals.T
    uxq = u @ cell.err_basis_derivs.T
    return -law.flux_deriv(uq) * uxq


def boundary_jumps(values: npt.ArrayLike, law: ScalarLaw, fstar_l: npt.ArrayLike, fstar_r: npt.ArrayLike) -> Tuple[Array, Array]:
    """Flux jumps (f*_l - f(u(x_l)), f(u(x_r)) - f*_r) at the two cell edges."""
    u = _values(values)
    return (
        np.asarray(fstar_l) - law.flux(u[..., 0]),
        law.flux(u[..., -1]) - np.asarray(fstar_r),
    )


def singular_projection(values: npt.ArrayLike, ops: Operators, fstar_l: npt.ArrayLike, fstar_r: npt.ArrayLike, law: ScalarLaw) -> Array:
    """
    L2 projection of the two boundary point masses onto the cell polynomials.

    Solves M c = b with b = phi(x_l) (f*_l - f(u_l)) + phi(x_r) (f(u_r) - f*_r).
    """
    cell = as_operators(ops)
    u = _values(values)
    jump_l, jump_r = boundary_jumps(u, law, fstar_l, fstar_r)
    b = np.zeros_like(u)
    b[..., 0] = jump_l
    b[..., -1] = jump_r
    return cell.solve_mass(b)


def reference_derivative(values: npt.ArrayLike, ops: Operators, law: ScalarLaw, fstar_l: npt.ArrayLike, fstar_r: npt.ArrayLike) -> RefDerivative:
    u = _values(values)
    return RefDerivative(
        regular_at_errquad=regular_part(u, ops, law),
        singular_coeffs=singular_projection(u, ops, fstar_l, fstar_r, law),
        f_bnd_l=law.flux(u[..., 0]),
        f_bnd_r=law.flux(u[..., -1]),
        fstar_l=np.asarray(fstar_l, dtype=np.float64),
        fstar_r=np.asarray(fstar_r, dtype=np.float64),
    )


def delta(values: npt.ArrayLike, du: npt.ArrayLike, ops: Operators, law: ScalarLaw, fstar_l: npt.ArrayLike, fstar_r: npt.ArrayLike) -> Array:
    """
    Quadrature 2-norm of du/dt minus the reference derivative.

    The residual is sampled at the (p+2) Gauss-Legendre nodes with physical
    weights.
    """
    cell = as_operators(ops)
    u = _values(values)
    ref = reference_derivative(u, cell, law, fstar_l, fstar_r)
    residual = (
        _values(du) @ cell.err_basis_vals.T
        - ref.regular_at_errquad
        - ref.singular_at_errquad(cell)
    )
    return np.sqrt(residual**2 @ cell.err_weights)


def delta_U(values: npt.ArrayLike, ops: Operators, law: ScalarLaw) -> Array:
    """Sampled sup-norm of U'(u) minus the interpolant of the nodal U' values."""
    cell = as_operators(ops)
    u = _values(values)
    exact = law.entropy_var(u @ cell.err_basis_vals.T)
    interpolated = law.entropy_var(u) @ cell.err_basis_vals.T
    return np.max(np.abs(exact - interpolated), axis=-1)


def l1_ref(values: npt.ArrayLike, ops: Operators, law: ScalarLaw, fstar_l: npt.ArrayLike, fstar_r: npt.ArrayLike) -> Array:
    """Quadrature L1 norm of the regular part plus the two flux jump magnitudes."""
    cell = as_operators(ops)
    u = _values(values)
    jump_l, jump_r = boundary_jumps(u, law, fstar_l, fstar_r)
    return np.abs(regular_part(u, cell, law)) @ cell.err_weights + np.abs(jump_l) + np.abs(jump_r)


def estimate(values: npt.ArrayLike, du: npt.ArrayLike, ops: Operators, law: ScalarLaw, fstar_l: npt.ArrayLike, fstar_r: npt.ArrayLike) -> ErrorEstimate:
    """delta, delta_U and l1_ref of every cell in one pass."""
    cell = as_operators(ops)
    u = _values(values)
    ref = reference_derivative(u, cell, law, fstar_l, fstar_r)
    residual = _values(du) @ cell.err_basis_vals.T - ref.regular_at_errquad - ref.singular_at_errquad(cell)
    jump_l, jump_r = boundary_jumps(u, law, fstar_l, fstar_r)
    return ErrorEstimate(
        delta=np.sqrt(residual**2 @ cell.err_weights),
        delta_U=delta_U(u, cell, law),
        l1_ref=np.abs(ref.regular_at_errquad) @ cell.err_weights + np.abs(jump_l) + np.abs(jump_r),
    )


__all__ = [
    "RefDerivative",
    "ErrorEstimate",
    "as_operators",
    "regular_part",
    "boundary_jumps",
    "singular_projection",
    "reference_derivative",
    "delta",
    "delta_U",
    "l1_ref",
    "estimate",
]
