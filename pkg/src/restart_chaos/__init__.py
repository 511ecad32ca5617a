"""Logistic-map dynamics of a restarted harmonic oscillator and a re-measured two-level vibrator."""
from .errors import DomainError, EscapeError
from .logistic import (
    LogisticParams,
    Orbit,
    PopulationParams,
    fixed_points,
    logistic_orbit,
    logistic_step,
    normalize_population,
    population_orbit,
)
from .oscillator import OscillatorConfig, compare_to_logistic, restart_schedule
from .quantum import QuantumConfig, measurement_schedule, return_time
from .dynamics import bifurcation_scan, detect_regime, lyapunov_exponent, regime_ladder_check

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EscapeError",
    "LogisticParams",
    "Orbit",
    "PopulationParams",
    "fixed_points",
    "logistic_orbit",
    "logistic_step",
    "normalize_population",
    "population_orbit",
    "OscillatorConfig",
    "compare_to_logistic",
    "restart_schedule",
    "QuantumConfig",
    "measurement_schedule",
    "return_time",
    "bifurcation_scan",
    "detect_regime",
    "lyapunov_exponent",
    "regime_ladder_check",
]
