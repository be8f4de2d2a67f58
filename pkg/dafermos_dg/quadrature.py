"""
Quadrature rules and the nodal Lagrange basis on the reference cell [-1, 1].

The ansatz space of a cell is spanned by the Lagrange polynomials through
the p+1 Gauss-Lobatto points. Mass and stiffness matrices are the exact
Grammians (integrated with a Gauss-Legendre rule of sufficient degree),
not the Lobatto-lumped diagonal. A (p+2)-point Gauss-Legendre rule with
tabulated basis values serves the error estimators.

Nothing in this module depends on the cell size; `scale_to_cell` maps the
reference data to a physical cell of length dx.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Tuple

import numpy as np
import numpy.typing as npt
from numpy.polynomial import legendre as npleg
from scipy.linalg import cho_factor, cho_solve

from .errors import InvalidMeshError, InvalidOrderError

Array = npt.NDArray[np.float64]

NEWTON_TOL = 1.0e-15
NEWTON_MAXITER = 100


def _frozen(a: npt.ArrayLike) -> Array:
    out = np.array(a, dtype=np.float64)
    out.setflags(write=False)
    return out


# {{{ quadrature rules


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes in [-1, 1] (strictly increasing) and positive weights summing to 2."""

    nodes: Array
    weights: Array

    def __post_init__(self) -> None:
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise InvalidOrderError("nodes and weights must be 1-D arrays of equal length")
        if np.any(self.weights <= 0.0):
            raise InvalidOrderError("quadrature weights must be positive")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise InvalidOrderError("quadrature nodes must be strictly increasing")

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: npt.ArrayLike) -> np.ndarray:
        """Apply the rule along the last axis of `values` (tabulated at the nodes)."""
        return np.asarray(values) @ self.weights


def gauss_lobatto(n: int) -> QuadRule:
    """
    n-point Gauss-Lobatto rule, exact up to degree 2n-3.

    The interior nodes are the roots of P'_{n-1}; they are found by Newton
    iteration on (1 - x^2) P'_{n-1}(x) using the three-term recursion of the
    Legendre polynomials, started from the Chebyshev-Gauss-Lobatto points.
    """
    if n < 2:
        raise InvalidOrderError(f"Gauss-Lobatto rule needs at least 2 points, got {n}")
    N = n - 1
    x = -np.cos(np.pi * np.arange(n) / N)
    P = np.zeros((n, n))
    for _ in range(NEWTON_MAXITER):
        P[:, 0] = 1.0
        P[:, 1] = x
        for k in range(1, N):
            P[:, k + 1] = ((2 * k + 1) * x * P[:, k] - k * P[:, k - 1]) / (k + 1)
        update = (x * P[:, N] - P[:, N - 1]) / (n * P[:, N])
        x = x - update
        if np.max(np.abs(update)) <= NEWTON_TOL:
            break

    P[:, 0] = 1.0
    P[:, 1] = x
    for k in range(1, N):
        P[:, k + 1] = ((2 * k + 1) * x * P[:, k] - k * P[:, k - 1]) / (k + 1)

    x[0], x[-1] = -1.0, 1.0
    weights = 2.0 / (N * n * P[:, N] ** 2)
    return QuadRule(nodes=_frozen(x), weights=_frozen(weights))


def gauss_legendre(n: int) -> QuadRule:
    """n-point Gauss-Legendre rule (interior nodes), exact up to degree 2n-1."""
    if n < 1:
        raise InvalidOrderError(f"Gauss-Legendre rule needs at least 1 point, got {n}")
    nodes, weights = npleg.leggauss(n)
    return QuadRule(nodes=_frozen(nodes), weights=_frozen(weights))


# }}}


# {{{ lagrange basis


def _legendre_vander(x: Array, p: int) -> Tuple[Array, Array]:
    """Values and first derivatives of P_0..P_p at `x`, shape (len(x), p+1) each."""
    V = npleg.legvander(x, p)
    Vx = np.empty_like(V)
    for m in range(p + 1):
        c = np.zeros(p + 1)
        c[m] = 1.0
        Vx[:, m] = npleg.legval(x, npleg.legder(c)) if m > 0 else 0.0
    return V, Vx


@dataclass(frozen=True, eq=False)
class Basis:
    """
    Nodal Lagrange basis of order p on the Gauss-Lobatto points of [-1, 1].

    Matrices are reference-cell quantities:

    - mass[k, l] = int phi_k phi_l (exact Grammian, SPD)
    - stiffness[k, l] = int phi_k' phi_l, so that S + S^T = B with
      B = right right^T - left left^T (discrete integration by parts)
    - diff[i, j] = phi_j'(x_i), the nodal differentiation matrix

    err_basis_vals[q, j] = phi_j(xi_q) and err_basis_derivs[q, j] =
    phi_j'(xi_q) tabulate the basis at the (p+2)-point Gauss-Legendre
    nodes of `err_quad`.
    """

    order: int
    nodes: Array
    lobatto_weights: Array
    mass: Array
    stiffness: Array
    diff: Array
    left_vals: Array
    right_vals: Array
    err_quad: QuadRule
    err_basis_vals: Array
    err_basis_derivs: Array
    coefficients: Array

    @property
    def size(self) -> int:
        return self.order + 1

    @cached_property
    def mass_cholesky(self) -> Tuple[Array, bool]:
        """Cholesky factor of the reference mass matrix (computed once per basis)."""
        return cho_factor(self.mass)

    def evaluate(self, x: npt.ArrayLike) -> Array:
        """Basis values phi_j(x) at reference points, shape (len(x), p+1)."""
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        return npleg.legvander(xs, self.order) @ self.coefficients

    def evaluate_derivative(self, x: npt.ArrayLike) -> Array:
        """Basis derivatives phi_j'(x) at reference points, shape (len(x), p+1)."""
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        _, Vx = _legendre_vander(xs, self.order)
        return Vx @ self.coefficients


@lru_cache(maxsize=None)
def build_basis(p: int) -> Basis:
    """
    Build the order-p nodal basis.

    Lagrange cardinal functions are expressed in Legendre coefficients by
    inverting the Legendre Vandermonde matrix at the Gauss-Lobatto nodes;
    mass and stiffness use a (p+1)-point Gauss-Legendre rule (exact up to
    degree 2p+1). Results are cached per order and immutable.
    """
    if p < 1:
        raise InvalidOrderError(f"polynomial order must be >= 1, got {p}")

    lobatto = gauss_lobatto(p + 1)
    x = np.asarray(lobatto.nodes)

    V, Vx = _legendre_vander(x, p)
    coefficients = np.linalg.solve(V, np.eye(p + 1))
    diff = Vx @ coefficients

    quad = gauss_legendre(p + 1)
    Vq, Vxq = _legendre_vander(np.asarray(quad.nodes), p)
    phi = Vq @ coefficients
    dphi = Vxq @ coefficients
    w = np.asarray(quad.weights)
    mass = phi.T @ (w[:, None] * phi)
    mass = 0.5 * (mass + mass.T)
    stiffness = dphi.T @ (w[:, None] * phi)

    err_quad = gauss_legendre(p + 2)
    Ve, Vxe = _legendre_vander(np.asarray(err_quad.nodes), p)

    unit = np.eye(p + 1)
    return Basis(
        order=p,
        nodes=lobatto.nodes,
        lobatto_weights=lobatto.weights,
        mass=_frozen(mass),
        stiffness=_frozen(stiffness),
        diff=_frozen(diff),
        left_vals=_frozen(unit[0]),
        right_vals=_frozen(unit[-1]),
        err_quad=err_quad,
        err_basis_vals=_frozen(Ve @ coefficients),
        err_basis_derivs=_frozen(Vxe @ coefficients),
        coefficients=_frozen(coefficients),
    )


# }}}


# {{{ physical cells


@dataclass(frozen=True, eq=False)
class CellOperators:
    """
    Basis data mapped to a physical cell of length dx.

    mass = M dx/2, stiffness = S (scale invariant), diff = D 2/dx, weights
    = Gauss-Lobatto weights dx/2, err_weights = error-quadrature weights
    dx/2, err_basis_derivs = tabulated derivatives 2/dx. `integral`
    holds the row sums of the physical mass matrix, so <1, v>_T =
    integral @ v.
    """

    basis: Basis
    dx: float
    mass: Array
    stiffness: Array
    diff: Array
    weights: Array
    err_weights: Array
    err_basis_derivs: Array
    integral: Array

    @property
    def order(self) -> int:
        return self.basis.order

    @property
    def err_basis_vals(self) -> Array:
        return self.basis.err_basis_vals

    def solve_mass(self, rhs: npt.ArrayLike) -> Array:
        """Solve M_T c = rhs along the last axis, reusing the reference Cholesky factor."""
        b = np.asarray(rhs, dtype=np.float64)
        flat = b.reshape(-1, b.shape[-1])
        c = cho_solve(self.basis.mass_cholesky, flat.T).T * (2.0 / self.dx)
        return c.reshape(b.shape)

    def inner(self, a: npt.ArrayLike, b: npt.ArrayLike) -> np.ndarray:
        """Cell inner product <a, b>_T = a^T M_T b along the last axis."""
        return np.einsum("...i,ij,...j->...", np.asarray(a), self.mass, np.asarray(b))

    def norm(self, a: npt.ArrayLike) -> np.ndarray:
        """Cell L2 norm ||a||_{T,2} of nodal vectors."""
        return np.sqrt(np.maximum(self.inner(a, a), 0.0))


@lru_cache(maxsize=64)
def scale_to_cell(basis: Basis, cell_length: float) -> CellOperators:
    """Map reference basis data to a cell of length `cell_length` (affine map)."""
    if not cell_length > 0.0 or not np.isfinite(cell_length):
        raise InvalidMeshError(f"cell length must be positive, got {cell_length}")
    half = 0.5 * cell_length
    mass = _frozen(basis.mass * half)
    return CellOperators(
        basis=basis,
        dx=float(cell_length),
        mass=mass,
        stiffness=basis.stiffness,
        diff=_frozen(basis.diff / half),
        weights=_frozen(basis.lobatto_weights * half),
        err_weights=_frozen(basis.err_quad.weights * half),
        err_basis_derivs=_frozen(basis.err_basis_derivs / half),
        integral=_frozen(mass.sum(axis=0)),
    )


# }}}


__all__ = [
    "QuadRule",
    "Basis",
    "CellOperators",
    "gauss_lobatto",
    "gauss_legendre",
    "build_basis",
    "scale_to_cell",
]
