"""Discrete logistic map in normalized and population form.

The normalized map is ``theta -> alpha * theta * (1 - theta)`` on [0, 1].
The population form is the difference recursion

    x_n = x_{n-1} + a*dt * x_{n-1} * (1 - x_{n-1}/r)

which becomes the normalized map after dividing by the scale
``K = r * (1 + a*dt) / (a*dt)`` and setting ``alpha = 1 + a*dt``.

All arithmetic is plain binary64 and the product is always evaluated as
``(alpha * theta) * (1 - theta)`` so orbits are bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "LogisticParams",
    "PopulationParams",
    "Orbit",
    "logistic_step",
    "logistic_orbit",
    "normalize_population",
    "population_scale",
    "denormalize",
    "population_orbit",
    "fixed_points",
]


def _check_alpha(alpha: float) -> None:
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be a positive finite number, got {alpha!r}")


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class LogisticParams:
    alpha: float
    theta0: float

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_unit("theta0", self.theta0)


@dataclass(frozen=True)
class PopulationParams:
    """Growth rate ``a``, time unit ``dt``, carrying capacity ``r`` and initial population ``x0``."""

    a: float
    dt: float
    r: float
    x0: float

    def __post_init__(self):
        for name in ("a", "dt", "x0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive, got {value!r}")
        if not (math.isfinite(self.r) and self.r > 1):
            raise DomainError(f"r must exceed 1, got {self.r!r}")
        if self.x0 >= population_scale(self):
            raise DomainError(
                f"x0={self.x0!r} must stay below r*(1+a*dt)/(a*dt)={population_scale(self)!r}"
            )


@dataclass(frozen=True)
class Orbit:
    """Iterates ``theta_0 .. theta_N`` of the normalized map.

    ``escaped`` is set when the last value left [0, 1]; the orbit is then
    shorter than requested and ends at the first escaped value.
    """

    values: tuple[float, ...]
    params: LogisticParams
    escaped: bool = False

    def __len__(self):
        return len(self.values)

    def residuals(self) -> list[float]:
        """One-step residuals ``|theta_n - alpha*theta_{n-1}*(1-theta_{n-1})|``."""
        alpha = self.params.alpha
        v = self.values
        return [abs(v[i] - alpha * v[i - 1] * (1.0 - v[i - 1])) for i in range(1, len(v))]


def logistic_step(theta: float, alpha: float) -> float:
    """Apply the logistic map once.

    >>> logistic_step(0.3, 2.0)
    0.42
    """
    _check_alpha(alpha)
    _check_unit("theta", theta)
    return alpha * theta * (1.0 - theta)


def logistic_orbit(params: LogisticParams, n_steps: int) -> Orbit:
    """Iterate ``n_steps`` times from ``params.theta0``.

    For ``alpha > 4`` the orbit may leave [0, 1]; iteration stops at the first
    such value, which is kept as the final element, and ``escaped`` is set.
    """
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps!r}")
    alpha = params.alpha
    theta = params.theta0
    values = [theta]
    for _ in range(n_steps):
        theta = alpha * theta * (1.0 - theta)
        values.append(theta)
        if not (0.0 <= theta <= 1.0):
            return Orbit(tuple(values), params, escaped=True)
    return Orbit(tuple(values), params)


def population_scale(p: PopulationParams) -> float:
    """Normalization scale ``r * (1 + a*dt) / (a*dt)``."""
    growth = p.a * p.dt
    return p.r * (1.0 + growth) / growth


def normalize_population(p: PopulationParams) -> LogisticParams:
    return LogisticParams(alpha=1.0 + p.a * p.dt, theta0=p.x0 / population_scale(p))


def denormalize(theta: float, p: PopulationParams) -> float:
    return theta * population_scale(p)


def population_orbit(p: PopulationParams, n_steps: int) -> list[float]:
    """Iterate the population difference recursion directly.

    Raises DomainError as soon as a value leaves ``(0, K)``, where ``K`` is
    the normalization scale.
    """
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps!r}")
    growth = p.a * p.dt
    upper = population_scale(p)
    x = p.x0
    xs = [x]
    for n in range(1, n_steps + 1):
        x = x + growth * x * (1.0 - x / p.r)
        if not (0.0 < x < upper):
            raise DomainError(f"population left (0, {upper!r}) at step {n}: x={x!r}")
        xs.append(x)
    return xs


def fixed_points(alpha: float) -> tuple[float, ...]:
    """Fixed points of the map in [0, 1], ascending."""
    _check_alpha(alpha)
    if alpha <= 1.0:
        return (0.0,)
    return (0.0, 1.0 - 1.0 / alpha)
