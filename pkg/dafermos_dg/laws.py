"""
Scalar conservation laws, entropy pairs and two-point numerical fluxes.

A ScalarLaw bundles the flux f, its derivative, a strictly convex entropy U
with derivatives, and the entropy flux F with F' = U' f'. All callables act
elementwise on numpy arrays. Burgers' equation with the square entropy
U(u) = u^2 is the law every experiment uses; linear advection is shipped for
exactness tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import numpy.typing as npt

from .errors import InvalidArgumentError, NonFiniteStateError

ArrayLike = npt.ArrayLike
Pointwise = Callable[[np.ndarray], np.ndarray]
# a float for scalar input, an array otherwise
FluxValue = Union[float, np.ndarray]


@dataclass(frozen=True)
class ScalarLaw:
    """Flux and entropy pair of a scalar conservation law u_t + f(u)_x = 0."""

    name: str
    flux: Pointwise
    flux_deriv: Pointwise
    entropy: Pointwise
    entropy_var: Pointwise
    entropy_hess: Pointwise
    entropy_flux: Pointwise
    # state where f' vanishes (minimum of a convex flux); None for monotone fluxes
    sonic_point: Optional[float] = None


def burgers() -> ScalarLaw:
    """Inviscid Burgers: f = u^2/2 with entropy U = u^2 and F = 2u^3/3."""
    return ScalarLaw(
        name="burgers",
        flux=lambda u: 0.5 * u * u,
        flux_deriv=lambda u: 1.0 * u,
        entropy=lambda u: u * u,
        entropy_var=lambda u: 2.0 * u,
        entropy_hess=lambda u: np.full_like(np.asarray(u, dtype=np.float64), 2.0),
        entropy_flux=lambda u: (2.0 / 3.0) * u * u * u,
        sonic_point=0.0,
    )


def linear_advection(velocity: float = 1.0) -> ScalarLaw:
    """Linear advection f = a u with U = u^2 and F = a u^2."""
    a = float(velocity)
    return ScalarLaw(
        name="linear-advection",
        flux=lambda u: a * u,
        flux_deriv=lambda u: np.full_like(np.asarray(u, dtype=np.float64), a),
        entropy=lambda u: u * u,
        entropy_var=lambda u: 2.0 * u,
        entropy_hess=lambda u: np.full_like(np.asarray(u, dtype=np.float64), 2.0),
        entropy_flux=lambda u: a * u * u,
    )


def _checked(*values: ArrayLike) -> tuple:
    arrays = tuple(np.asarray(v, dtype=np.float64) for v in values)
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NonFiniteStateError("non-finite state passed to a numerical flux")
    return arrays


def _scalar_or_array(x: np.ndarray) -> FluxValue:
    return float(x) if np.ndim(x) == 0 else x


# {{{ local lax-friedrichs


def _llf_speed(ul: np.ndarray, ur: np.ndarray, law: ScalarLaw) -> np.ndarray:
    return np.maximum(np.abs(law.flux_deriv(ul)), np.abs(law.flux_deriv(ur)))


def llf_flux(u_l: ArrayLike, u_r: ArrayLike, law: ScalarLaw) -> FluxValue:
    """Local Lax-Friedrichs flux (f(u_l)+f(u_r))/2 - c/2 (u_r - u_l), c = max |f'|."""
    ul, ur = _checked(u_l, u_r)
    c = _llf_speed(ul, ur, law)
    value = 0.5 * (law.flux(ul) + law.flux(ur)) - 0.5 * c * (ur - ul)
    return _scalar_or_array(value)


def llf_entropy_flux(u_l: ArrayLike, u_r: ArrayLike, law: ScalarLaw) -> FluxValue:
    """Entropy flux paired with llf_flux: (F(u_l)+F(u_r))/2 - c/2 (U(u_r) - U(u_l))."""
    ul, ur = _checked(u_l, u_r)
    c = _llf_speed(ul, ur, law)
    value = 0.5 * (law.entropy_flux(ul) + law.entropy_flux(ur)) - 0.5 * c * (
        law.entropy(ur) - law.entropy(ul)
    )
    return _scalar_or_array(value)


# }}}


# {{{ godunov


def _riemann_state(ul: np.ndarray, ur: np.ndarray, law: ScalarLaw) -> np.ndarray:
    """State on x/t = 0 of the exact Riemann solution for a convex (or linear) flux."""
    fl, fr = law.flux(ul), law.flux(ur)
    # shock: pick the upwind side by the Rankine-Hugoniot speed
    jump = ur - ul
    safe = np.where(jump == 0.0, 1.0, jump)
    sigma = np.where(jump == 0.0, law.flux_deriv(ul), (fr - fl) / safe)
    shock = np.where(sigma >= 0.0, ul, ur)
    # rarefaction: upwind unless the fan contains the sonic point
    cl, cr = law.flux_deriv(ul), law.flux_deriv(ur)
    rare = np.where(cl >= 0.0, ul, np.where(cr <= 0.0, ur, ul))
    if law.sonic_point is not None:
        transonic = np.logical_and(cl < 0.0, cr > 0.0)
        rare = np.where(transonic, law.sonic_point, rare)
    return np.where(ul > ur, shock, rare)


def godunov_flux(u_l: ArrayLike, u_r: ArrayLike, law: ScalarLaw) -> FluxValue:
    """
    Godunov flux for convex fluxes.

    u_l <= u_r: min of f over [u_l, u_r]; u_l > u_r: max(f(u_l), f(u_r)).
    """
    ul, ur = _checked(u_l, u_r)
    fl, fr = law.flux(ul), law.flux(ur)
    lower = np.minimum(fl, fr)
    if law.sonic_point is not None:
        s = law.sonic_point
        inside = np.logical_and(ul <= s, s <= ur)
        lower = np.where(inside, np.minimum(lower, law.flux(np.asarray(s, dtype=np.float64))), lower)
    value = np.where(ul <= ur, lower, np.maximum(fl, fr))
    return _scalar_or_array(value)


def godunov_entropy_flux(u_l: ArrayLike, u_r: ArrayLike, law: ScalarLaw) -> FluxValue:
    """Entropy flux F evaluated at the Riemann state selected by godunov_flux."""
    ul, ur = _checked(u_l, u_r)
    value = law.entropy_flux(_riemann_state(ul, ur, law))
    return _scalar_or_array(value)


# }}}


class FluxKind(str, enum.Enum):
    LOCAL_LAX_FRIEDRICHS = "llf"
    GODUNOV = "godunov"


@dataclass(frozen=True)
class NumericalFlux:
    """A two-point flux f*(u_l, u_r) together with its numerical entropy flux F*."""

    kind: FluxKind
    value_fn: Callable[..., FluxValue]
    entropy_fn: Callable[..., FluxValue]

    def value(self, u_l: ArrayLike, u_r: ArrayLike, law: ScalarLaw) -> FluxValue:
        return self.value_fn(u_l, u_r, law)

    def entropy_value(self, u_l: ArrayLike, u_r: ArrayLike, law: ScalarLaw) -> FluxValue:
        return self.entropy_fn(u_l, u_r, law)


LOCAL_LAX_FRIEDRICHS = NumericalFlux(FluxKind.LOCAL_LAX_FRIEDRICHS, llf_flux, llf_entropy_flux)
GODUNOV = NumericalFlux(FluxKind.GODUNOV, godunov_flux, godunov_entropy_flux)


def numerical_flux(kind: Union[FluxKind, str]) -> NumericalFlux:
    """Look up a numerical flux by FluxKind or its string value."""
    try:
        kind = FluxKind(kind)
    except ValueError as exc:
        raise InvalidArgumentError(f"unknown numerical flux '{kind}'") from exc
    return LOCAL_LAX_FRIEDRICHS if kind is FluxKind.LOCAL_LAX_FRIEDRICHS else GODUNOV


def max_wave_speed(states: ArrayLike, law: ScalarLaw) -> float:
    """max |f'(u)| over all given states."""
    u = np.asarray(states, dtype=np.float64).ravel()
    if u.size == 0:
        raise InvalidArgumentError("max_wave_speed needs at least one state")
    return float(np.max(np.abs(law.flux_deriv(u))))


__all__ = [
    "ScalarLaw",
    "burgers",
    "linear_advection",
    "llf_flux",
    "llf_entropy_flux",
    "godunov_flux",
    "godunov_entropy_flux",
    "FluxKind",
    "NumericalFlux",
    "LOCAL_LAX_FRIEDRICHS",
    "GODUNOV",
    "numerical_flux",
    "max_wave_speed",
]
