"""
Schedule Tests

Run: pytest tests/test_schedule.py -v
"""

import math

import pytest


def _schedule(**kwargs):
    from ffdrive.algorithms.schedule import Schedule
    params = {"t_f": 0.48 * math.pi, "E_i": 0.5, "E_f": 1.0 / 6.0}
    params.update(kwargs)
    return Schedule(**params)


def test_eta_boundary_conditions():
    s = _schedule()
    assert s.eta(0.0) == (0.0, 0.0, 0.0)
    value, d1, d2 = s.eta(s.t_f)
    assert value == pytest.approx(1.0, abs=1e-12)
    assert abs(d1) < 1e-12
    assert abs(d2) < 1e-12
    assert s.eta(s.t_f / 2)[0] == pytest.approx(0.5, abs=1e-15)


def test_eta_derivatives_match_differences():
    s = _schedule()
    t, h = 0.37 * s.t_f, 1e-6
    value, d1, d2 = s.eta(t)
    assert d1 == pytest.approx((s.eta(t + h)[0] - s.eta(t - h)[0]) / (2 * h), rel=1e-6)
    assert d2 == pytest.approx((s.eta(t + h)[1] - s.eta(t - h)[1]) / (2 * h), rel=1e-6)


def test_phi0_boundary_conditions():
    s = _schedule()
    assert s.phi0(0.0) == (0.0, -0.5)
    value, rate = s.phi0(s.t_f)
    assert abs(value) < 1e-12
    assert rate == pytest.approx(-1.0 / 6.0, abs=1e-12)


def test_phi0_midpoint_value():
    """phi0(t_f/2) = t_f (E_f - E_i) / 8."""
    s = _schedule()
    value, _ = s.phi0(s.t_f / 2)
    assert value == pytest.approx(s.t_f * (1.0 / 6.0 - 0.5) / 8.0, abs=1e-12)
    assert value == pytest.approx(-0.0628319, abs=1e-7)


def test_phi0_second_derivative():
    s = _schedule()
    t, h = 0.6 * s.t_f, 1e-6
    numeric = (s.phi0(t + h)[1] - s.phi0(t - h)[1]) / (2 * h)
    assert s.phi0_second(t) == pytest.approx(numeric, rel=1e-6)


def test_zero_phase_convention():
    s = _schedule(phase_convention="zero")
    for frac in (0.0, 0.3, 1.0):
        assert s.phi0(frac * s.t_f) == (0.0, 0.0)


def test_schedule_validation():
    from ffdrive.core.errors import ValidationError

    with pytest.raises(ValidationError):
        _schedule(t_f=0.0)
    with pytest.raises(ValidationError):
        _schedule(phase_convention="linear")

    s = _schedule()
    with pytest.raises(ValidationError):
        s.eta(-0.1)
    with pytest.raises(ValidationError):
        s.phi0(s.t_f * 1.01)


def test_user_schedule_must_meet_boundary_conditions():
    """A linear ramp has eta' != 0 at the ends and is rejected."""
    from ffdrive.core.errors import ValidationError

    t_f = 2.0
    ramp = lambda t: (t / t_f, 1.0 / t_f, 0.0)
    with pytest.raises(ValidationError) as exc_info:
        _schedule(t_f=t_f, eta_fn=ramp)
    assert "eta_dot" in exc_info.value.details


def test_user_schedule_accepted():
    """A smooth user schedule passes and is reported as such."""
    t_f = 3.0

    def smooth(t):
        s = t / t_f
        return (
            s ** 3 * (10 - 15 * s + 6 * s ** 2),
            30 * s ** 2 * (1 - s) ** 2 / t_f,
            60 * s * (1 - s) * (1 - 2 * s) / t_f ** 2,
        )

    s = _schedule(t_f=t_f, eta_fn=smooth)
    assert s.eta_kind == "user"
    assert s.eta(1.5)[0] == pytest.approx(0.5)
