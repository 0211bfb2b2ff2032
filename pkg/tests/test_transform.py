"""Time-rescaling map, its inverse, and the existence-time correspondence."""

import math

import numpy as np
import pytest

from wdlab import TimeMapParams, existence_time, map_solution, tau, tau_inverse
from wdlab.equations import TwoComponentState
from wdlab.errors import OutOfRange


def test_params_validation():
    with pytest.raises(ValueError):
        TimeMapParams(-0.1)
    with pytest.raises(ValueError):
        TimeMapParams(1.0, p=3)
    assert TimeMapParams(0.5, 2).horizon == 1.0
    assert TimeMapParams(0.0).horizon == math.inf


def test_tau_basics():
    params = TimeMapParams(1.0, 1)
    assert tau(0.0, params) == 0.0
    assert abs(tau(50.0, params) - 1.0) <= 1e-15  # saturates at 1/lam
    near_zero = TimeMapParams(1e-8, 1)
    assert abs(tau(2.0, near_zero) - 2.0) <= 1e-7


def test_tau_monotone_concave_below_t():
    params = TimeMapParams(0.7, 2)
    ts = np.linspace(0.0, 4.0, 200)
    vals = np.array([tau(t, params) for t in ts])
    assert np.all(np.diff(vals) > 0)
    assert np.all(np.diff(vals, 2) < 1e-12)
    assert np.all(vals <= ts + 1e-15)
    assert np.all(vals < params.horizon)


def test_round_trips():
    for lam in (0.1, 1.0):
        for p in (1, 2):
            params = TimeMapParams(lam, p)
            for t in (0.1, 1.0, 10.0):
                s = tau(t, params)
                # near the horizon the inverse is conditioning-limited: the
                # achievable accuracy is eps / ((1 - p lam s) p lam)
                floor = 8e-16 / ((1.0 - p * lam * s) * p * lam)
                tol = max(1e-12 * max(1.0, t), floor)
                assert abs(tau_inverse(s, params) - t) <= tol
    assert tau_inverse(0.0, TimeMapParams(1.0)) == 0.0


def test_tau_inverse_horizon():
    params = TimeMapParams(0.5, 2)
    with pytest.raises(OutOfRange):
        tau_inverse(params.horizon, params)
    with pytest.raises(OutOfRange):
        tau_inverse(params.horizon + 1.0, params)


def test_lam_zero_identity_convention():
    params = TimeMapParams(0.0, 1)
    assert tau(3.25, params) == 3.25
    assert tau_inverse(3.25, params) == 3.25
    f = np.ones(16)
    assert np.array_equal(map_solution(f, 5.0, params), f)


def test_small_lam_limit_consistency():
    t = 1.5
    a = tau(t, TimeMapParams(1e-6, 1))
    b = tau(t, TimeMapParams(1e-8, 1))
    assert abs(a - b) <= 1e-5 * t


def test_map_solution_scaling_and_linearity():
    params = TimeMapParams(1.0, 1)
    c = 2.0 * np.ones(8)
    out = map_solution(c, 1.0, params)
    assert np.max(np.abs(out - 2.0 * math.exp(-1.0))) <= 1e-15
    u = np.arange(8.0)
    w = np.linspace(-1, 1, 8)
    lhs = map_solution(u + w, 0.7, params)
    rhs = map_solution(u, 0.7, params) + map_solution(w, 0.7, params)
    assert np.max(np.abs(lhs - rhs)) <= 1e-14
    assert np.array_equal(map_solution(u, 0.0, params), u)


def test_map_solution_state():
    params = TimeMapParams(0.5, 2)
    st = TwoComponentState(np.ones(8), 2.0 * np.ones(8))
    out = map_solution(st, 2.0, params)
    assert np.max(np.abs(out.m - math.exp(-1.0))) <= 1e-15
    assert np.max(np.abs(out.sigma - 2.0 * math.exp(-1.0))) <= 1e-15


def test_existence_time():
    assert existence_time(math.inf, 1.0) == math.inf
    assert existence_time(1.0, 1.0, 1) == math.inf
    assert abs(existence_time(0.5, 1.0, 1) - math.log(2.0)) <= 1e-14
    # consistency with the tau round trip
    params = TimeMapParams(0.8, 2)
    T = existence_time(0.4, 0.8, 2)
    assert abs(tau(T, params) - 0.4) <= 1e-13
    assert existence_time(0.25, 0.0) == 0.25
    with pytest.raises(ValueError):
        existence_time(0.0, 1.0)
