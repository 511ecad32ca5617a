"""Linear harmonic oscillator restarted on a logistic schedule.

The oscillator ``x(t) = x0 cos(wt) + (v0/w) sin(wt)`` is, for small ``t``,

    x(t) - x0 ~= v0 t - x0 w^2 t^2 / 2 = beta * eps * (1 - eps)

with ``beta = 2 v0^2 / (x0 w^2)`` and ``eps = t / t_star``,
``t_star = 2 v0 / (x0 w^2)``. Restarting the oscillator to ``(x0, v0)`` at
``tau_n = eps_n * t_star`` with ``eps_{n+1} = beta * eps_n * (1 - eps_n)``
makes the relative restart times follow the logistic map.

Units: ``beta`` is a length while it is also used as the dimensionless
logistic parameter. The simulator works in one consistent unit system and
uses the numeral of ``beta`` for both roles, so the numeral of
``x_n - x0`` is the next relative time ``eps_{n+1}`` by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import DomainError
from .logistic import logistic_step

__all__ = [
    "TAYLOR_SUSPECT",
    "EPS_OUT_OF_RANGE",
    "ESCAPED",
    "TAYLOR_SUSPECT_THRESHOLD",
    "OscillatorConfig",
    "OscillatorScales",
    "RestartEntry",
    "RestartSchedule",
    "ComparisonRow",
    "exact_position",
    "exact_displacement",
    "velocity",
    "energy",
    "taylor_position",
    "taylor_displacement",
    "taylor_error_bound",
    "scales",
    "restart_schedule",
    "compare_to_logistic",
]

TAYLOR_SUSPECT = "TAYLOR_SUSPECT"
EPS_OUT_OF_RANGE = "EPS_OUT_OF_RANGE"
ESCAPED = "ESCAPED"

# omega * tau above this marks the quadratic approximation as suspect
TAYLOR_SUSPECT_THRESHOLD = 0.1

Mode = Literal["taylor", "exact"]


@dataclass(frozen=True)
class OscillatorConfig:
    x0: float
    v0: float
    omega: float

    def __post_init__(self):
        for name in ("x0", "v0", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class OscillatorScales:
    beta: float
    t_star: float


@dataclass(frozen=True)
class RestartEntry:
    n: int
    eps: float
    tau: float
    delta_x: float
    omega_tau: float
    taylor_error_bound: float
    flags: frozenset[str] = field(default_factory=frozenset)


@dataclass(frozen=True)
class RestartSchedule:
    config: OscillatorConfig
    scales: OscillatorScales
    mode: str
    entries: tuple[RestartEntry, ...]

    @property
    def escaped(self) -> bool:
        return bool(self.entries) and ESCAPED in self.entries[-1].flags

    def flag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries:
            for flag in entry.flags:
                counts[flag] = counts.get(flag, 0) + 1
        return counts


def exact_position(c: OscillatorConfig, t: float) -> float:
    wt = c.omega * t
    return c.x0 * math.cos(wt) + (c.v0 / c.omega) * math.sin(wt)


def exact_displacement(c: OscillatorConfig, t: float) -> float:
    """``exact_position(c, t) - x0`` without the cancellation of subtracting x0."""
    wt = c.omega * t
    half = math.sin(0.5 * wt)
    return -2.0 * c.x0 * half * half + (c.v0 / c.omega) * math.sin(wt)


def velocity(c: OscillatorConfig, t: float) -> float:
    wt = c.omega * t
    return -c.x0 * c.omega * math.sin(wt) + c.v0 * math.cos(wt)


def energy(c: OscillatorConfig, t: float) -> float:
    """Energy per unit mass, ``v^2/2 + w^2 x^2/2``."""
    v = velocity(c, t)
    x = exact_position(c, t)
    return 0.5 * v * v + 0.5 * c.omega**2 * x * x


def taylor_position(c: OscillatorConfig, t: float) -> float:
    # the quadratic term carries the x0 factor (cos expansion times x0)
    return c.x0 + c.v0 * t - 0.5 * c.x0 * c.omega**2 * t * t


def taylor_displacement(c: OscillatorConfig, t: float) -> float:
    return c.v0 * t - 0.5 * c.x0 * c.omega**2 * t * t


def taylor_error_bound(c: OscillatorConfig, t: float) -> float:
    """Upper bound on ``|exact_position - taylor_position|`` at time ``t``.

    Sum of the Lagrange remainders of the cosine (fourth order) and sine
    (third order) expansions, scaled by their coefficients.
    """
    wt = c.omega * abs(t)
    return c.x0 * wt**4 / 24.0 + (c.v0 / c.omega) * wt**3 / 6.0


def scales(c: OscillatorConfig) -> OscillatorScales:
    w2 = c.omega * c.omega
    return OscillatorScales(
        beta=2.0 * c.v0 * c.v0 / (c.x0 * w2),
        t_star=2.0 * c.v0 / (c.x0 * w2),
    )


def _entry_flags(eps: float, omega_tau: float, beta: float) -> set[str]:
    flags = set()
    if omega_tau > TAYLOR_SUSPECT_THRESHOLD:
        flags.add(TAYLOR_SUSPECT)
    if not (0.0 <= eps <= 1.0):
        flags.add(EPS_OUT_OF_RANGE)
        if eps < 0.0 or beta > 4.0:
            flags.add(ESCAPED)
    return flags


def restart_schedule(
    c: OscillatorConfig, tau1: float, n_steps: int, mode: Mode = "taylor"
) -> RestartSchedule:
    """Generate the restart moments and the coordinate differences read at each.

    The relative moments always follow the logistic recursion in ``beta``;
    ``mode`` only selects which dynamics produces ``delta_x`` at each moment.
    Generation stops after the first ESCAPED entry.
    """
    if not (math.isfinite(tau1) and tau1 > 0):
        raise DomainError(f"tau1 must be positive, got {tau1!r}")
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps!r}")
    if mode == "taylor":
        displacement = taylor_displacement
    elif mode == "exact":
        displacement = exact_displacement
    else:
        raise DomainError(f"mode must be 'taylor' or 'exact', got {mode!r}")

    sc = scales(c)
    beta, t_star = sc.beta, sc.t_star
    entries = []
    eps = tau1 / t_star
    for n in range(1, n_steps + 1):
        if n > 1:
            eps = beta * eps * (1.0 - eps)
        tau = eps * t_star
        omega_tau = c.omega * tau
        flags = _entry_flags(eps, omega_tau, beta)
        entries.append(
            RestartEntry(
                n=n,
                eps=eps,
                tau=tau,
                delta_x=displacement(c, tau),
                omega_tau=omega_tau,
                taylor_error_bound=taylor_error_bound(c, tau),
                flags=frozenset(flags),
            )
        )
        if ESCAPED in flags:
            break
    return RestartSchedule(config=c, scales=sc, mode=mode, entries=tuple(entries))


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    eps: float
    # |eps_{n+1} - logistic_step(eps_n, beta)|; nan on the last row
    eps_residual: float
    # |delta_x_taylor - beta*eps*(1-eps)| / |beta*eps*(1-eps)|
    taylor_relative_residual: float
    # |delta_x_exact - beta*eps*(1-eps)|
    exact_gap: float
    taylor_error_bound: float
    flags: frozenset[str]


def compare_to_logistic(c: OscillatorConfig, tau1: float, n_steps: int) -> list[ComparisonRow]:
    """Residuals between the restart schedule and the logistic map, step by step.

    The one-step residual uses the logistic core module as an independent
    evaluation of the recursion. Entries whose ``eps`` left [0, 1] get a
    nan ``eps_residual``.
    """
    taylor = restart_schedule(c, tau1, n_steps, "taylor")
    exact = restart_schedule(c, tau1, n_steps, "exact")
    beta = taylor.scales.beta
    rows = []
    entries = taylor.entries
    for i, (te, ee) in enumerate(zip(entries, exact.entries)):
        logistic_value = beta * te.eps * (1.0 - te.eps)
        if i + 1 < len(entries) and 0.0 <= te.eps <= 1.0:
            eps_residual = abs(entries[i + 1].eps - logistic_step(te.eps, beta))
        else:
            eps_residual = math.nan
        if logistic_value != 0.0:
            rel = abs(te.delta_x - logistic_value) / abs(logistic_value)
        else:
            rel = abs(te.delta_x)
        rows.append(
            ComparisonRow(
                n=te.n,
                eps=te.eps,
                eps_residual=eps_residual,
                taylor_relative_residual=rel,
                exact_gap=abs(ee.delta_x - logistic_value),
                taylor_error_bound=te.taylor_error_bound,
                flags=te.flags,
            )
        )
    return rows
