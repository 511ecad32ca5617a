"""Two-level vibrator measured on a logistic schedule.

The state ``cos(wt)|1> + sin(wt)|2>`` is probed for ``|s> = a|1> + b|2>``.
To second order the detection probability is

    P(t) = a^2 + 2ab wt - (a^2 - b^2) (wt)^2 = a^2 + gamma * eta * (1 - eta)

with ``eta = t / t_q`` and ``t_q = 2ab / ((a^2 - b^2) w)``. Expanding the
quadratic gives the dimensionless ``gamma = (2ab)^2 / (a^2 - b^2)``; the
``paper_literal`` convention additionally divides by ``w`` and only agrees
with it at ``w = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import DomainError
from .oscillator import ESCAPED, TAYLOR_SUSPECT, TAYLOR_SUSPECT_THRESHOLD

__all__ = [
    "PROB_OUT_OF_RANGE",
    "QuantumConfig",
    "QuantumScales",
    "MeasurementEntry",
    "MeasurementSchedule",
    "state_amplitudes",
    "evolve_amplitudes",
    "detection_probability",
    "taylor_probability_shift",
    "scales",
    "measurement_schedule",
    "return_time",
]

PROB_OUT_OF_RANGE = "PROB_OUT_OF_RANGE"

Convention = Literal["dimensionless", "paper_literal"]
CONVENTIONS = ("dimensionless", "paper_literal")

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class QuantumConfig:
    a: float
    b: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if abs(self.a * self.a + self.b * self.b - 1.0) > _NORM_TOL:
            raise DomainError(f"a^2 + b^2 must equal 1, got {self.a**2 + self.b**2!r}")
        if not (self.a > self.b > 0):
            raise DomainError(f"need a > b > 0, got a={self.a!r}, b={self.b!r}")

    @classmethod
    def from_a(cls, a: float, omega: float) -> "QuantumConfig":
        """Build the config with ``b = sqrt(1 - a^2)``."""
        if not (0.0 < a < 1.0):
            raise DomainError(f"a must lie in (0, 1), got {a!r}")
        return cls(a=a, b=math.sqrt(1.0 - a * a), omega=omega)


@dataclass(frozen=True)
class QuantumScales:
    gamma: float
    t_q: float
    convention: str


@dataclass(frozen=True)
class MeasurementEntry:
    n: int
    eta: float
    tau: float
    p_taylor: float
    p_exact: float
    p_diff: float
    omega_tau: float
    flags: frozenset[str] = field(default_factory=frozenset)


@dataclass(frozen=True)
class MeasurementSchedule:
    config: QuantumConfig
    scales: QuantumScales
    entries: tuple[MeasurementEntry, ...]

    @property
    def escaped(self) -> bool:
        return bool(self.entries) and ESCAPED in self.entries[-1].flags

    def flag_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries:
            for flag in entry.flags:
                counts[flag] = counts.get(flag, 0) + 1
        return counts


def state_amplitudes(omega: float, t: float) -> tuple[float, float]:
    """Amplitudes on ``(|1>, |2>)`` at time ``t`` starting from ``|1>``."""
    wt = omega * t
    return math.cos(wt), math.sin(wt)


def evolve_amplitudes(amplitudes: tuple[float, float], omega: float, t: float) -> tuple[float, float]:
    """Rotate an arbitrary real state by the same dynamics for time ``t``."""
    c, s = state_amplitudes(omega, t)
    u, v = amplitudes
    return u * c - v * s, u * s + v * c


def taylor_probability_shift(q: QuantumConfig, t: float) -> float:
    """Second-order ``P(t) - a^2``, i.e. ``2ab wt - (a^2 - b^2)(wt)^2``."""
    wt = q.omega * t
    return 2.0 * q.a * q.b * wt - (q.a * q.a - q.b * q.b) * wt * wt


def detection_probability(q: QuantumConfig, t: float, mode: str = "exact") -> float:
    """Probability of detecting ``|s>`` at time ``t``.

    ``taylor`` mode is the quadratic form and is not confined to [0, 1].
    """
    if mode == "exact":
        c, s = state_amplitudes(q.omega, t)
        overlap = q.a * c + q.b * s
        return overlap * overlap
    if mode == "taylor":
        return q.a * q.a + taylor_probability_shift(q, t)
    raise DomainError(f"mode must be 'exact' or 'taylor', got {mode!r}")


def scales(q: QuantumConfig, convention: Convention = "dimensionless") -> QuantumScales:
    two_ab = 2.0 * q.a * q.b
    spread = q.a * q.a - q.b * q.b
    if convention == "dimensionless":
        gamma = two_ab * two_ab / spread
    elif convention == "paper_literal":
        gamma = two_ab * two_ab / (spread * q.omega)
    else:
        raise DomainError(f"unknown gamma convention {convention!r}")
    return QuantumScales(gamma=gamma, t_q=two_ab / (spread * q.omega), convention=convention)


def measurement_schedule(
    q: QuantumConfig, tau1: float, n_steps: int, convention: Convention = "dimensionless"
) -> MeasurementSchedule:
    """Measurement moments and detection probabilities conditioned on success.

    Each detection is followed by the cyclic return to ``|1>`` (see
    ``return_time``), so every round starts from the same state and the
    relative moments follow ``eta_{n+1} = gamma * eta_n * (1 - eta_n)``.
    Taylor probabilities outside [0, 1] are flagged, never clamped.
    """
    if not (math.isfinite(tau1) and tau1 > 0):
        raise DomainError(f"tau1 must be positive, got {tau1!r}")
    if n_steps < 1:
        raise DomainError(f"n_steps must be >= 1, got {n_steps!r}")
    sc = scales(q, convention)
    gamma, t_q = sc.gamma, sc.t_q
    a2 = q.a * q.a
    entries = []
    eta = tau1 / t_q
    for n in range(1, n_steps + 1):
        if n > 1:
            eta = gamma * eta * (1.0 - eta)
        tau = t_q * eta
        omega_tau = q.omega * tau
        p_diff = taylor_probability_shift(q, tau)
        p_taylor = a2 + p_diff
        flags = set()
        if not (0.0 <= p_taylor <= 1.0):
            flags.add(PROB_OUT_OF_RANGE)
        if omega_tau > TAYLOR_SUSPECT_THRESHOLD:
            flags.add(TAYLOR_SUSPECT)
        if not (0.0 <= eta <= 1.0):
            flags.add(ESCAPED)
        entries.append(
            MeasurementEntry(
                n=n,
                eta=eta,
                tau=tau,
                p_taylor=p_taylor,
                p_exact=detection_probability(q, tau, "exact"),
                p_diff=p_diff,
                omega_tau=omega_tau,
                flags=frozenset(flags),
            )
        )
        if ESCAPED in flags:
            break
    return MeasurementSchedule(config=q, scales=sc, entries=tuple(entries))


def return_time(q: QuantumConfig) -> float:
    """Time for ``|s>`` to rotate back to ``|1>``: ``(2 pi - atan2(b, a)) / w``."""
    phi = math.atan2(q.b, q.a)
    return (2.0 * math.pi - phi) / q.omega
