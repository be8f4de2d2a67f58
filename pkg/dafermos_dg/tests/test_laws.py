"""Burgers' law, entropy pairs and the two-point fluxes."""

import numpy as np
import pytest

from dafermos_dg.errors import InvalidArgumentError, NonFiniteStateError
from dafermos_dg.laws import (
    GODUNOV,
    LOCAL_LAX_FRIEDRICHS,
    FluxKind,
    burgers,
    godunov_entropy_flux,
    godunov_flux,
    linear_advection,
    llf_entropy_flux,
    llf_flux,
    max_wave_speed,
    numerical_flux,
)

BURGERS = burgers()


def test_burgers_pointwise_values():
    assert BURGERS.flux(2.0) == 2.0
    assert BURGERS.entropy(2.0) == 4.0
    assert BURGERS.entropy_var(2.0) == 4.0
    assert BURGERS.entropy_flux(0.0) == 0.0
    assert BURGERS.entropy_flux(1.0) == pytest.approx(2 / 3)


@pytest.mark.parametrize("law", [burgers(), linear_advection(0.7)])
def test_entropy_flux_compatibility(law):
    u = np.linspace(-2.0, 2.0, 41)
    h = 1e-6
    derivative = (law.entropy_flux(u + h) - law.entropy_flux(u - h)) / (2 * h)
    np.testing.assert_allclose(derivative, law.entropy_var(u) * law.flux_deriv(u), atol=1e-8)


# 1. Local Lax-Friedrichs
def test_llf_examples():
    assert llf_flux(1.0, 1.0, BURGERS) == pytest.approx(0.5)
    assert llf_flux(1.0, 0.0, BURGERS) == pytest.approx(0.75)
    assert llf_flux(-1.0, 1.0, BURGERS) == pytest.approx(-0.5)


def test_llf_entropy_examples():
    assert llf_entropy_flux(1.0, 0.0, BURGERS) == pytest.approx(5 / 6)
    assert llf_entropy_flux(-1.0, 1.0, BURGERS) == pytest.approx(0.0, abs=1e-15)


def test_scalar_in_scalar_out():
    assert isinstance(llf_flux(1.0, 0.0, BURGERS), float)
    values = llf_flux(np.array([1.0, -1.0]), np.array([0.0, 1.0]), BURGERS)
    np.testing.assert_allclose(values, [0.75, -0.5])


# 2. Godunov
def test_godunov_examples():
    assert godunov_flux(-1.0, 1.0, BURGERS) == pytest.approx(0.0, abs=0.0)
    assert godunov_flux(1.0, -1.0, BURGERS) == pytest.approx(0.5)
    assert godunov_flux(2.0, 2.0, BURGERS) == pytest.approx(2.0)
    assert godunov_flux(1.0, 0.0, BURGERS) == pytest.approx(0.5)
    assert godunov_flux(-2.0, -1.0, BURGERS) == pytest.approx(0.5)


def test_godunov_entropy_flux_at_riemann_state():
    # transonic rarefaction: the sonic state 0 sits on the interface
    assert godunov_entropy_flux(-1.0, 1.0, BURGERS) == pytest.approx(0.0, abs=0.0)
    # right-moving shock: upwind state
    assert godunov_entropy_flux(2.0, 1.0, BURGERS) == pytest.approx(16 / 3)
    # left-moving shock: downwind state
    assert godunov_entropy_flux(-1.0, -2.0, BURGERS) == pytest.approx(-16 / 3)


@pytest.mark.parametrize("flux", [LOCAL_LAX_FRIEDRICHS, GODUNOV])
def test_consistency(flux):
    u = np.linspace(-2.0, 2.0, 17)
    np.testing.assert_allclose(flux.value(u, u, BURGERS), BURGERS.flux(u), atol=1e-15)
    np.testing.assert_allclose(flux.entropy_value(u, u, BURGERS), BURGERS.entropy_flux(u), atol=1e-15)


@pytest.mark.parametrize("flux", [LOCAL_LAX_FRIEDRICHS, GODUNOV])
def test_monotonicity(flux):
    grid = np.linspace(-2.0, 2.0, 81)
    ul, ur = np.meshgrid(grid, grid, indexing="ij")
    step = 1e-7
    base = flux.value(ul, ur, BURGERS)
    assert np.all(flux.value(ul + step, ur, BURGERS) - base >= -1e-12)
    assert np.all(flux.value(ul, ur + step, BURGERS) - base <= 1e-12)


def test_llf_cell_entropy_stability():
    rng = np.random.default_rng(7)
    ul, um, ur = rng.uniform(-2.0, 2.0, size=(3, 10000))
    production = BURGERS.entropy_var(um) * (llf_flux(ul, um, BURGERS) - llf_flux(um, ur, BURGERS))
    budget = llf_entropy_flux(ul, um, BURGERS) - llf_entropy_flux(um, ur, BURGERS)
    assert np.all(production <= budget + 1e-12)


def test_non_finite_states_are_rejected():
    with pytest.raises(NonFiniteStateError):
        llf_flux(np.nan, 0.0, BURGERS)
    with pytest.raises(NonFiniteStateError):
        godunov_flux(0.0, np.inf, BURGERS)
    with pytest.raises(NonFiniteStateError):
        llf_entropy_flux(np.array([0.0, np.nan]), np.zeros(2), BURGERS)


# 3. Lookup and wave speed
def test_numerical_flux_lookup():
    assert numerical_flux("llf") is LOCAL_LAX_FRIEDRICHS
    assert numerical_flux(FluxKind.GODUNOV) is GODUNOV
    with pytest.raises(InvalidArgumentError):
        numerical_flux("roe")


def test_max_wave_speed():
    assert max_wave_speed([-3.0, 0.5, 2.0], BURGERS) == 3.0
    assert max_wave_speed(np.zeros((4, 3)), BURGERS) == 0.0
    assert max_wave_speed([1.0, -5.0], linear_advection(2.0)) == 2.0
    with pytest.raises(InvalidArgumentError):
        max_wave_speed([], BURGERS)
