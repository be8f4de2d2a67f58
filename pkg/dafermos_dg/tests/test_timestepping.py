"""SSPRK33 steps, stage records and output schedules."""

import math

import numpy as np
import pytest

from dafermos_dg.errors import BlowUpError, InvalidArgumentError, NonFiniteStateError
from dafermos_dg.timestepping import check_admissible, output_schedule, reached, ssprk33_step


def test_zero_rhs_keeps_the_state():
    u0 = np.array([[0.5, -1.0], [2.0, 3.0]])
    u, record = ssprk33_step(u0, 0.1, lambda u: np.zeros_like(u))
    np.testing.assert_array_equal(u, u0)
    np.testing.assert_array_equal(record.u1, u0)
    assert record.dt == 0.1


def test_linear_ode_matches_the_cubic_taylor_polynomial():
    lam, dt = -2.0, 0.1
    u, _ = ssprk33_step(np.array([1.0]), dt, lambda u: lam * u)
    z = lam * dt
    assert u[0] == pytest.approx(1.0 + z + z * z / 2 + z**3 / 6, rel=1e-15)


def test_third_order_convergence():
    errors = []
    for steps in (10, 20, 40):
        u, dt = np.array([1.0]), 1.0 / steps
        for _ in range(steps):
            u, _ = ssprk33_step(u, dt, lambda v: -v)
        errors.append(abs(u[0] - math.exp(-1.0)))
    assert math.log2(errors[0] / errors[1]) > 2.9
    assert math.log2(errors[1] / errors[2]) > 2.9


def test_stage_record_keeps_stages_and_extras():
    calls = []

    def rhs(u):
        calls.append(u.copy())
        return -u, float(len(calls))

    u, record = ssprk33_step(np.array([1.0]), 0.5, rhs, t=2.0)
    assert len(calls) == 3
    np.testing.assert_allclose(record.u1, [0.5])
    np.testing.assert_allclose(record.u2, [0.8125])
    assert record.extras == (1.0, 2.0, 3.0)
    assert tuple(float(d) for d in record.deltas) == (1.0, 2.0, 3.0)
    assert record.t == 2.0


def test_deltas_need_extras():
    _, record = ssprk33_step(np.array([1.0]), 0.1, lambda u: -u)
    with pytest.raises(InvalidArgumentError):
        record.deltas


def test_invalid_step_size():
    with pytest.raises(InvalidArgumentError):
        ssprk33_step(np.zeros(3), 0.0, lambda u: u)
    with pytest.raises(InvalidArgumentError):
        ssprk33_step(np.zeros(3), -0.1, lambda u: u)


def test_blow_up_reports_the_step_start_time():
    with pytest.raises(BlowUpError) as info:
        ssprk33_step(np.array([1.0]), 1.0, lambda u: 1e7 * u, t=0.25)
    assert info.value.time == 0.25


def test_non_finite_rhs_becomes_blow_up():
    def rhs(u):
        raise NonFiniteStateError("bad flux", cell=1)

    with pytest.raises(BlowUpError):
        ssprk33_step(np.zeros(2), 0.1, rhs)
    with pytest.raises(BlowUpError):
        ssprk33_step(np.zeros(2), 0.1, lambda u: np.full_like(u, np.nan))


def test_check_admissible():
    check_admissible(np.array([1e6, -1e6]), 0.0)
    with pytest.raises(BlowUpError):
        check_admissible(np.array([0.0, 1.0000001e6]), 0.0)
    with pytest.raises(BlowUpError):
        check_admissible(np.array([np.inf]), 0.0)


# Output schedules
def test_output_schedule_appends_the_end_time():
    assert output_schedule(1.0) == [1.0]
    assert output_schedule(1.0, [0.25, 0.5]) == [0.25, 0.5, 1.0]
    assert output_schedule(1.0, [0.5, 1.0]) == [0.5, 1.0]


@pytest.mark.parametrize("times", [[0.5, 0.25], [0.0, 0.5], [0.5, 1.5], [0.3, 0.3]])
def test_output_schedule_rejects_bad_times(times):
    with pytest.raises(InvalidArgumentError):
        output_schedule(1.0, times)


def test_reached_tolerates_round_off():
    assert reached(0.1 + 0.2, 0.3)
    assert not reached(0.3 - 1e-9, 0.3)
