import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from restart_chaos.errors import DomainError
from restart_chaos.logistic import LogisticParams, logistic_orbit
from restart_chaos.oscillator import ESCAPED, TAYLOR_SUSPECT
from restart_chaos.quantum import (
    PROB_OUT_OF_RANGE,
    QuantumConfig,
    detection_probability,
    evolve_amplitudes,
    measurement_schedule,
    return_time,
    scales,
    state_amplitudes,
)

amplitudes = st.floats(min_value=0.7072, max_value=0.9999)
omegas = st.floats(min_value=0.1, max_value=10.0)
configs = st.builds(QuantumConfig.from_a, amplitudes, omegas)

Q_21 = QuantumConfig.from_a(math.sqrt(0.7), 1.0)


def test_config_validation():
    with pytest.raises(DomainError):
        QuantumConfig(0.6, 0.8, 1.0)  # a < b
    with pytest.raises(DomainError):
        QuantumConfig(0.8, 0.5, 1.0)  # not normalized
    with pytest.raises(DomainError):
        QuantumConfig(1.0, 0.0, 1.0)  # b must be positive
    with pytest.raises(DomainError):
        QuantumConfig(0.8, 0.6, 0.0)


@given(configs)
def test_constructor_preserves_norm(q):
    assert abs(q.a**2 + q.b**2 - 1) <= 1e-12


def test_state_amplitudes_examples():
    assert state_amplitudes(1.0, 0.0) == (1.0, 0.0)
    c, s = state_amplitudes(2.0, math.pi / 4)
    assert c == pytest.approx(0.0, abs=1e-15)
    assert s == pytest.approx(1.0, abs=1e-15)


@given(omegas, st.floats(min_value=0, max_value=1e3))
def test_state_amplitudes_unit_norm(omega, t):
    c, s = state_amplitudes(omega, t)
    assert abs(c * c + s * s - 1) <= 1e-14


def test_detection_probability_examples():
    q = QuantumConfig(0.8, 0.6, 1.0)
    assert detection_probability(q, 0.0, "exact") == pytest.approx(0.64, abs=1e-15)
    assert detection_probability(q, 0.1, "taylor") == pytest.approx(0.7332, rel=1e-14)


@given(configs, st.floats(min_value=0.0, max_value=0.1))
def test_taylor_probability_remainder(q, wt):
    t = wt / q.omega
    gap = abs(detection_probability(q, t, "exact") - detection_probability(q, t, "taylor"))
    assert gap <= 2 * (abs(q.a) + abs(q.b)) ** 2 * wt**3 + 1e-15


@given(configs, st.floats(min_value=0.0, max_value=100.0))
def test_exact_probability_in_unit_interval(q, t):
    assert 0.0 <= detection_probability(q, t, "exact") <= 1.0


@given(configs)
def test_exact_probability_peaks_at_phase(q):
    phi = math.atan2(q.b, q.a)
    assert detection_probability(q, phi / q.omega, "exact") == pytest.approx(1.0, abs=1e-10)
    grid = np.linspace(0, 2 * math.pi / q.omega, 2001)
    assert max(detection_probability(q, t) for t in grid) <= 1.0


def test_scales_examples():
    q = QuantumConfig.from_a(math.sqrt(0.7), 1.0)
    assert scales(q).gamma == pytest.approx(2.1, rel=1e-14)
    lit = scales(QuantumConfig(0.8, 0.6, 2.0), "paper_literal")
    assert lit.gamma == pytest.approx(1.6457142857142857, rel=1e-14)
    assert lit.t_q == pytest.approx(0.96 / (0.28 * 2.0), rel=1e-14)
    with pytest.raises(DomainError):
        scales(q, "other")


def test_gamma_near_four_point_six_two():
    # oracle: bracketing root finder on 4p(1-p)/(2p-1) = 3.9
    p = brentq(lambda p: 4 * p * (1 - p) / (2 * p - 1) - 3.9, 0.51, 0.99, xtol=1e-15)
    assert p == pytest.approx(0.6207303500405563, rel=1e-12)
    assert scales(QuantumConfig.from_a(math.sqrt(p), 1.0)).gamma == pytest.approx(3.9, rel=1e-10)
    assert scales(QuantumConfig.from_a(math.sqrt(0.6208), 1.0)).gamma == pytest.approx(3.9, abs=5e-3)


@given(amplitudes)
def test_conventions_coincide_at_unit_frequency(a):
    q = QuantumConfig.from_a(a, 1.0)
    assert scales(q, "dimensionless").gamma == scales(q, "paper_literal").gamma


def test_schedule_example():
    t_q = scales(Q_21).t_q
    sched = measurement_schedule(Q_21, 0.2 * t_q, 2)
    first, second = sched.entries
    assert second.eta == pytest.approx(0.336, rel=1e-12)
    assert second.p_taylor == pytest.approx(0.7 + 2.1 * 0.336 * 0.664, rel=1e-12)
    assert second.p_taylor == pytest.approx(1.1685184, rel=1e-12)
    assert PROB_OUT_OF_RANGE in second.flags
    assert first.tau == pytest.approx(0.2 * t_q, rel=1e-15)


@given(configs, st.floats(min_value=0.01, max_value=0.99))
def test_schedule_invariants(q, eta1):
    sc = scales(q)
    sched = measurement_schedule(q, eta1 * sc.t_q, 200)
    entries = sched.entries
    for prev, cur in zip(entries, entries[1:]):
        assert cur.eta == sc.gamma * prev.eta * (1.0 - prev.eta)
    for e in entries:
        assert e.tau == sc.t_q * e.eta
        assert 0.0 <= e.p_exact <= 1.0
        if ESCAPED not in e.flags:
            target = sc.gamma * e.eta * (1 - e.eta)
            assert e.p_diff == pytest.approx(target, rel=1e-12, abs=1e-300)
        assert (PROB_OUT_OF_RANGE in e.flags) == (not 0.0 <= e.p_taylor <= 1.0)
        assert (TAYLOR_SUSPECT in e.flags) == (e.omega_tau > 0.1)


def test_eta_matches_logistic_core():
    t_q = scales(Q_21).t_q
    sched = measurement_schedule(Q_21, 0.2 * t_q, 1000)
    orbit = logistic_orbit(LogisticParams(scales(Q_21).gamma, sched.entries[0].eta), 999)
    residuals = [abs(e.eta - v) for e, v in zip(sched.entries, orbit.values)]
    assert max(residuals) < 1e-12


def test_schedule_escape_when_gamma_large():
    q = QuantumConfig.from_a(math.sqrt(0.55), 1.0)  # gamma = 4*0.55*0.45/0.1 = 9.9
    sched = measurement_schedule(q, 0.5 * scales(q).t_q, 50)
    assert sched.escaped
    assert len(sched.entries) == 2


def test_schedule_rejects_bad_arguments():
    with pytest.raises(DomainError):
        measurement_schedule(Q_21, 0.0, 10)
    with pytest.raises(DomainError):
        measurement_schedule(Q_21, 0.1, 0)


def test_return_time_example():
    q = QuantumConfig(0.8, 0.6, 1.0)
    assert return_time(q) == pytest.approx(5.639684198386302, rel=1e-14)
    u, v = evolve_amplitudes((q.a, q.b), q.omega, return_time(q))
    assert u == pytest.approx(1.0, abs=1e-12)
    assert v == pytest.approx(0.0, abs=1e-12)


def test_return_time_full_period_limit():
    q = QuantumConfig.from_a(math.sqrt(1 - 1e-16), 2.0)
    assert return_time(q) == pytest.approx(math.pi, rel=1e-7)


@given(configs)
def test_return_time_rotates_back(q):
    u, v = evolve_amplitudes((q.a, q.b), q.omega, return_time(q))
    assert abs(u - 1.0) <= 1e-12
    assert abs(v) <= 1e-12
