"""Godunov finite-volume reference solver."""

import numpy as np
import pytest

from dafermos_dg.dg import Mesh1D
from dafermos_dg.errors import InvalidArgumentError, NonFiniteStateError
from dafermos_dg.fv import FVState, cell_averages, fv_rhs, fv_solve, fv_time_step
from dafermos_dg.initial_conditions import constant, rarefaction, rarefaction_exact, sine_shock
from dafermos_dg.laws import LOCAL_LAX_FRIEDRICHS, burgers

BURGERS = burgers()


def test_state_validation():
    mesh = Mesh1D(0.0, 2.0, 4)
    with pytest.raises(InvalidArgumentError):
        FVState(mesh, np.zeros(3))
    with pytest.raises(NonFiniteStateError):
        FVState(mesh, np.array([0.0, np.inf, 0.0, 0.0]))


def test_constant_state_is_stationary():
    state = FVState(Mesh1D(0.0, 2.0, 16), np.full(16, 0.7))
    np.testing.assert_allclose(fv_rhs(state, BURGERS), 0.0, atol=0.0)


def test_riemann_flux_bookkeeping():
    state = FVState(Mesh1D(0.0, 4.0, 4), np.array([1.0, 0.0, 0.0, 0.0]))
    # the cell behind the shock loses f(1) = 1/2 per unit length and time
    np.testing.assert_allclose(fv_rhs(state, BURGERS), [-0.5, 0.5, 0.0, 0.0])


def test_rhs_conserves_mass():
    rng = np.random.default_rng(4)
    mesh = Mesh1D(0.0, 2.0, 50)
    state = FVState(mesh, rng.uniform(-1.0, 1.0, 50))
    for flux in (None, LOCAL_LAX_FRIEDRICHS):
        rhs = fv_rhs(state, BURGERS) if flux is None else fv_rhs(state, BURGERS, flux)
        assert np.sum(rhs) * mesh.cell_length == pytest.approx(0.0, abs=1e-13)


def test_time_step():
    mesh = Mesh1D(0.0, 2.0, 20)
    assert fv_time_step(np.array([0.5, -2.0]), mesh, BURGERS, 0.5) == pytest.approx(0.025)
    assert fv_time_step(np.zeros(20), mesh, BURGERS, 0.5) == float("inf")


def test_initial_averages():
    mesh = Mesh1D(0.0, 2.0, 10)
    np.testing.assert_allclose(cell_averages(constant(2.5), mesh), 2.5)
    a, b = mesh.edges[:-1], mesh.edges[1:]
    np.testing.assert_allclose(cell_averages(rarefaction(), mesh), np.where(b <= 1.0, -(a + b) / 2, 2.0 - (a + b) / 2), atol=1e-14)


def test_solve_records_every_output_time():
    solution = fv_solve(BURGERS, sine_shock(), 50, 0.5, 0.5, [0.25])
    assert solution.times == [0.0, 0.25, 0.5]
    assert len(solution.means) == 3
    assert solution.step_times[-1] == 0.5
    assert len(solution.step_entropy) == solution.steps + 1


def test_constant_data_stays_constant():
    solution = fv_solve(BURGERS, constant(0.3), 20, 0.9, 0.4)
    np.testing.assert_allclose(solution.means[-1], 0.3, atol=1e-15)
    assert solution.entropy[-1] == pytest.approx(solution.entropy[0], rel=1e-14)


@pytest.mark.parametrize("cfl", [0.0, -0.5, 1.5])
def test_invalid_cfl(cfl):
    with pytest.raises(InvalidArgumentError):
        fv_solve(BURGERS, sine_shock(), 10, cfl, 0.1)


def test_mass_maximum_principle_and_entropy_decay():
    solution = fv_solve(BURGERS, sine_shock(), 400, 0.5, 0.5)
    dx = solution.mesh.cell_length
    masses = [np.sum(m) * dx for m in solution.means]
    assert masses[-1] == pytest.approx(masses[0], abs=1e-10)
    assert np.min(solution.means[-1]) >= -0.5 - 1e-12
    assert np.max(solution.means[-1]) <= 1.5 + 1e-12
    entropy = np.asarray(solution.step_entropy)
    assert np.all(np.diff(entropy) <= 1e-12 * (1.0 + np.abs(entropy[:-1])))
    # a shock has formed by t = 0.5, so entropy is strictly dissipated
    assert entropy[-1] < entropy[0] - 1e-3


def test_rarefaction_matches_the_exact_solution():
    t = 0.3
    solution = fv_solve(BURGERS, rarefaction(), 2000, 0.5, t)
    x = solution.mesh.centers
    error = np.sum(np.abs(solution.means[-1] - rarefaction_exact(x, t))) * solution.mesh.cell_length
    assert error <= 0.02
