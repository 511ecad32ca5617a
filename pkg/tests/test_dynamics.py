import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from restart_chaos.dynamics import (
    CHAOTIC,
    CONVERGENT,
    ESCAPED,
    PERIODIC,
    bifurcation_scan,
    count_clusters,
    detect_regime,
    lyapunov_exponent,
    lyapunov_from_orbit,
    regime_ladder_check,
)
from restart_chaos.errors import DomainError, EscapeError


def two_cycle(alpha):
    # oracle: roots of f(f(x)) = x other than the fixed points
    root = math.sqrt((alpha + 1) * (alpha - 3))
    return sorted(((alpha + 1 - root) / (2 * alpha), (alpha + 1 + root) / (2 * alpha)))


def test_two_cycle_oracle_values():
    assert two_cycle(3.2) == pytest.approx([0.513045, 0.799455], abs=1e-6)


def test_convergent_regime():
    report = detect_regime(2.5, 0.2)
    assert report.classification == CONVERGENT
    assert report.attractor_values == pytest.approx((0.6,), abs=1e-9)
    assert report.period is None


def test_period_two_regime():
    report = detect_regime(3.2, 0.2)
    assert report.classification == PERIODIC
    assert report.period == 2
    assert list(report.attractor_values) == pytest.approx(two_cycle(3.2), abs=1e-4)


@pytest.mark.parametrize("alpha, period", [(3.5, 4), (3.55, 8), (3.83, 3)])
def test_higher_periods(alpha, period):
    report = detect_regime(alpha, 0.2)
    assert report.classification == PERIODIC
    assert report.period == period
    assert len(report.attractor_values) == period
    assert report.lyapunov < 0


@pytest.mark.parametrize("alpha", [3.9, 4.0])
def test_chaotic_regime(alpha):
    report = detect_regime(alpha, 0.2)
    assert report.classification == CHAOTIC
    assert report.lyapunov > 0.01


def test_escaped_regime():
    report = detect_regime(4.2, 0.3)
    assert report.classification == ESCAPED
    assert math.isnan(report.lyapunov)


def test_unstable_fixed_point_seed_short_window():
    # no binary64 value is an exact fixed point here, so rounding drift shows up
    # only after a long transient
    report = detect_regime(3.9, 1 - 1 / 3.9, transient=0, window=16, tol=1e-9)
    assert report.classification == CONVERGENT


def test_detect_regime_deterministic():
    assert detect_regime(3.7, 0.3) == detect_regime(3.7, 0.3)


@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=0.05, max_value=0.95))
def test_subcritical_converges_to_zero(alpha, theta0):
    report = detect_regime(alpha, theta0, transient=2000, window=64, tol=1e-6)
    assert report.classification == CONVERGENT
    assert report.attractor_values[0] == pytest.approx(0.0, abs=1e-6)


@given(st.floats(min_value=1.1, max_value=2.9), st.floats(min_value=0.05, max_value=0.95))
@settings(max_examples=40)
def test_stable_fixed_point_range(alpha, theta0):
    report = detect_regime(alpha, theta0, transient=3000, window=64, tol=1e-6)
    assert report.classification == CONVERGENT
    assert report.attractor_values[0] == pytest.approx(1 - 1 / alpha, abs=1e-6)
    assert lyapunov_exponent(alpha, theta0, 10**4, 1000) < 0


@given(st.floats(min_value=3.05, max_value=3.4))
@settings(max_examples=20)
def test_period_is_minimal(alpha):
    tol = 1e-6
    report = detect_regime(alpha, 0.2, tol=tol)
    assert report.period == 2
    lo, hi = report.attractor_values
    assert hi - lo > tol


def test_detect_regime_validation():
    with pytest.raises(DomainError):
        detect_regime(3.0, 0.2, window=8)
    with pytest.raises(DomainError):
        detect_regime(3.0, 0.2, tol=1e-2)
    with pytest.raises(DomainError):
        detect_regime(-1.0, 0.2)


def test_lyapunov_fully_chaotic_is_ln2():
    value = lyapunov_exponent(4.0, 0.2, 10**6, 1000)
    assert value == pytest.approx(math.log(2), abs=0.01)
    assert 0.683 <= value <= 0.703


def test_lyapunov_fixed_point_multiplier():
    # |f'(0.6)| = |2 - alpha| = 0.5
    assert lyapunov_exponent(2.5, 0.2, 10**4, 1000) == pytest.approx(math.log(0.5), abs=1e-6)


def test_lyapunov_two_cycle_multiplier():
    # cycle multiplier is alpha^2 (1 - 2x1)(1 - 2x2) = -alpha^2 + 2 alpha + 4
    x1, x2 = two_cycle(3.2)
    multiplier = 3.2**2 * (1 - 2 * x1) * (1 - 2 * x2)
    assert multiplier == pytest.approx(-(3.2**2) + 2 * 3.2 + 4, rel=1e-12)
    value = lyapunov_exponent(3.2, 0.2, 10**4, 1000)
    assert value < 0
    assert value == pytest.approx(0.5 * math.log(abs(multiplier)), abs=1e-6)


def test_lyapunov_errors():
    with pytest.raises(EscapeError):
        lyapunov_exponent(4.5, 0.3, 10**4, 0)
    with pytest.raises(DomainError):
        lyapunov_exponent(3.9, 0.2, 100)


def test_lyapunov_from_orbit_floors_zero_derivative():
    assert lyapunov_from_orbit([0.5], 4.0) == pytest.approx(math.log(1e-300))


def test_count_clusters():
    assert count_clusters([]) == 0
    assert count_clusters([0.1, 0.10000001, 0.5]) == 2


def test_scan_convergent_window():
    table = bifurcation_scan(2.5, 2.9, 0.01, keep=64)
    assert len(table.rows) == 41
    for _, values in table.rows:
        assert max(values) - min(values) < 1e-6


def test_scan_period_two_window():
    table = bifurcation_scan(3.05, 3.4, 0.01, keep=64)
    assert table.alphas() == sorted(table.alphas())
    assert table.alphas()[-1] == pytest.approx(3.4)
    for _, values in table.rows:
        assert count_clusters(values, 1e-4) == 2


def test_scan_period_eight_row():
    table = bifurcation_scan(3.55, 3.56, 0.01, keep=64)
    alpha, values = table.rows[0]
    assert alpha == 3.55
    assert count_clusters(values, 1e-4) == 8


def test_scan_rows_independent_and_parallel_safe():
    serial = bifurcation_scan(3.0, 4.0, 0.05, keep=16)
    parallel = bifurcation_scan(3.0, 4.0, 0.05, keep=16, workers=2)
    assert serial == parallel
    single = bifurcation_scan(3.5, 3.6, 0.05, keep=16)
    assert single.rows == serial.rows[10:13]
    for _, values in serial.rows:
        assert all(0.0 <= v <= 1.0 for v in values)


def test_scan_validation():
    with pytest.raises(DomainError):
        bifurcation_scan(3.0, 4.5, 0.1)
    with pytest.raises(DomainError):
        bifurcation_scan(3.5, 3.0, 0.1)
    with pytest.raises(DomainError):
        bifurcation_scan(3.0, 3.5, 0.0)


def test_ladder_generic_seed():
    rungs = regime_ladder_check(0.2)
    assert [r.expected for r in rungs] == [
        "convergent", "period-2", "period-4", "period-8", "chaotic", "chaotic",
    ]
    assert all(r.passed for r in rungs)
    assert all(r.theta0 == 0.2 for r in rungs)


def test_ladder_perturbs_degenerate_midpoint_seed():
    rungs = regime_ladder_check(0.5)
    at_four = rungs[-1]
    assert at_four.theta0 != 0.5
    assert at_four.passed
    assert all(r.passed for r in rungs)
