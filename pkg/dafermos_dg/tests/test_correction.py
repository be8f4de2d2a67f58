"""Semidiscrete entropy correction: descent direction, size and the cell entropy inequality."""

import dataclasses

import numpy as np
import pytest

from dafermos_dg.correction import (
    cell_entropy_violation,
    ddg_rhs,
    descent_direction,
    epsilon_semidiscrete,
    mean_free,
)
from dafermos_dg.dg import DGState, Mesh1D, dg_rhs, interface_entropy_fluxes, interpolate_ic, left_right
from dafermos_dg.initial_conditions import sine_shock, smooth
from dafermos_dg.laws import LOCAL_LAX_FRIEDRICHS, burgers
from dafermos_dg.quadrature import build_basis, scale_to_cell
from dafermos_dg.reference import ErrorEstimate

BURGERS = burgers()


def sine_state(n_cells=20, p=6):
    return interpolate_ic(sine_shock(), Mesh1D(0.0, 2.0, n_cells), build_basis(p))


# 1. Descent direction
def test_constant_cell_has_no_direction():
    d = descent_direction(np.full(4, 0.7), build_basis(3), BURGERS, 1.0)
    np.testing.assert_allclose(d.h, 0.0, atol=1e-14)
    np.testing.assert_allclose(d.s, 0.0, atol=0.0)


def test_quadratic_cell_example():
    d = descent_direction([-1.0, 0.0, 1.0], build_basis(2), BURGERS, 1.0)
    np.testing.assert_allclose(d.h, [2.0, 0.0, -2.0], atol=1e-14)
    assert d.h_norm == pytest.approx(np.sqrt(8 / 3), rel=1e-13)
    np.testing.assert_allclose(d.s, np.array([2.0, 0.0, -2.0]) / np.sqrt(8 / 3), atol=1e-13)


def test_step_is_mean_free_with_norm_eps():
    rng = np.random.default_rng(1)
    ops = scale_to_cell(build_basis(4), 0.1)
    u = rng.uniform(-1.0, 1.0, size=(25, 5))
    eps = rng.uniform(0.0, 2.0, size=25)
    d = descent_direction(u, ops, BURGERS, eps)
    np.testing.assert_allclose(d.s @ ops.integral, 0.0, atol=1e-14)
    np.testing.assert_allclose(ops.norm(d.s), eps, rtol=1e-12)


def test_step_is_optimal_among_mean_free_moves():
    rng = np.random.default_rng(42)
    for _ in range(100):
        p = int(rng.integers(1, 4))
        ops = scale_to_cell(build_basis(p), 2.0)
        u = rng.uniform(-1.0, 1.0, size=p + 1)
        eps = float(rng.uniform(0.1, 1.0))
        s = descent_direction(u, ops, BURGERS, eps).s

        trials = mean_free(rng.standard_normal((10000, p + 1)), ops)
        trials *= (eps / ops.norm(trials))[:, None]
        dUdu = BURGERS.entropy_var(u)
        best = np.min(ops.inner(trials, dUdu))
        assert ops.inner(s, dUdu) <= best + 1e-10


def test_entropy_scaling_does_not_change_the_step():
    doubled = dataclasses.replace(
        BURGERS,
        entropy=lambda u: 2.0 * u * u,
        entropy_var=lambda u: 4.0 * u,
        entropy_hess=lambda u: np.full_like(np.asarray(u, dtype=np.float64), 4.0),
        entropy_flux=lambda u: (4.0 / 3.0) * u**3,
    )
    rng = np.random.default_rng(3)
    u = rng.uniform(-1.0, 1.0, size=(10, 4))
    ops = scale_to_cell(build_basis(3), 0.2)
    a = descent_direction(u, ops, BURGERS, 0.3)
    b = descent_direction(u, ops, doubled, 0.3)
    np.testing.assert_allclose(a.s, b.s, atol=1e-13)


# 2. Correction size
def test_epsilon_arithmetic():
    est = ErrorEstimate(delta=np.array(0.1), delta_U=np.array(0.0), l1_ref=np.array(5.0))
    assert epsilon_semidiscrete(est, 1.0, 1.0) == pytest.approx(0.1)
    est = ErrorEstimate(delta=np.array(0.1), delta_U=np.array(0.2), l1_ref=np.array(3.0))
    assert epsilon_semidiscrete(est, 2.0, 2.0) == pytest.approx(0.4)
    assert epsilon_semidiscrete(est, 0.0, 0.0) == 0.0


# 3. Corrected right-hand side
def test_constant_state_needs_no_correction():
    state = interpolate_ic(lambda x: 1.1, Mesh1D(0.0, 2.0, 6), build_basis(4))
    corrected, report = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    np.testing.assert_allclose(corrected, 0.0, atol=1e-12)
    np.testing.assert_allclose(report.epsilon, 0.0, atol=0.0)
    np.testing.assert_allclose(report.violation, 0.0, atol=1e-13)


def test_correction_keeps_the_cell_means():
    state = sine_state(n_cells=10, p=4)
    vanilla = dg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    corrected, _ = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    ops = state.operators
    np.testing.assert_allclose(corrected @ ops.integral, vanilla.fstar_l - vanilla.fstar_r, atol=1e-12)


def test_correction_dissipates_entropy():
    rng = np.random.default_rng(8)
    state = sine_state(n_cells=12, p=5)
    state = state.with_coeffs(state.coeffs + 0.1 * rng.standard_normal(state.coeffs.shape))
    _, report = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    assert len(report) == 12
    assert np.all(report.production_after <= report.production_before + 1e-12)
    assert np.all(report.epsilon >= report.delta)
    assert report.cell(3)["epsilon"] == float(report.epsilon[3])


def test_cell_entropy_inequality_on_initial_data():
    state = sine_state(n_cells=20, p=6)
    _, report = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    assert np.max(report.violation) <= 1e-11


def test_smooth_resolved_data_is_nearly_neutral():
    state = interpolate_ic(smooth(), Mesh1D(0.0, 2.0, 30), build_basis(6))
    _, report = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    np.testing.assert_allclose(report.violation, 0.0, atol=1e-10)


def test_jumps_dissipate_strictly():
    mesh = Mesh1D(0.0, 2.0, 4)
    state = DGState(mesh, build_basis(2), np.repeat(np.array([[1.0], [-1.0], [1.0], [-1.0]]), 3, axis=1))
    _, report = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    assert np.all(report.violation <= 1e-14)
    assert np.min(report.violation) < -0.1


def test_violation_matches_its_definition():
    state = sine_state(n_cells=8, p=3)
    corrected, report = ddg_rhs(state, BURGERS, LOCAL_LAX_FRIEDRICHS)
    Fl, Fr = left_right(interface_entropy_fluxes(state.coeffs, BURGERS, LOCAL_LAX_FRIEDRICHS))
    violation = cell_entropy_violation(state.coeffs, corrected, Fl, Fr, state.operators, BURGERS)
    np.testing.assert_allclose(violation, report.violation, atol=1e-15)
