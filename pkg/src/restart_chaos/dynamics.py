"""Regime classification, Lyapunov exponents and bifurcation scans for the logistic map."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, EscapeError
from .logistic import fixed_points

__all__ = [
    "CONVERGENT",
    "PERIODIC",
    "CHAOTIC",
    "ESCAPED",
    "UNDETERMINED",
    "CHAOS_THRESHOLD",
    "RegimeReport",
    "BifurcationTable",
    "LadderRung",
    "detect_regime",
    "lyapunov_exponent",
    "lyapunov_from_orbit",
    "count_clusters",
    "bifurcation_scan",
    "regime_ladder_check",
    "LADDER",
]

CONVERGENT = "convergent"
PERIODIC = "periodic"
CHAOTIC = "chaotic"
ESCAPED = "escaped"
UNDETERMINED = "undetermined"

# finite-window exponents hover around zero near bifurcation points
CHAOS_THRESHOLD = 0.01
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class RegimeReport:
    classification: str
    period: int | None
    attractor_values: tuple[float, ...]
    lyapunov: float
    transient_used: int
    samples_used: int


@dataclass(frozen=True)
class BifurcationTable:
    rows: tuple[tuple[float, tuple[float, ...]], ...]

    def alphas(self) -> list[float]:
        return [alpha for alpha, _ in self.rows]


def _log_derivative(alpha: float, theta: float) -> float:
    d = abs(alpha * (1.0 - 2.0 * theta))
    return math.log(d if d >= _LOG_FLOOR else _LOG_FLOOR)


def lyapunov_from_orbit(values: Iterable[float], alpha: float) -> float:
    """Mean of ``ln|alpha (1 - 2 theta)|`` over the given orbit values."""
    total = 0.0
    count = 0
    for theta in values:
        total += _log_derivative(alpha, theta)
        count += 1
    if count == 0:
        raise DomainError("need at least one orbit value")
    return total / count


def lyapunov_exponent(alpha: float, theta0: float, n: int = 10**5, transient: int = 1000) -> float:
    """Per-step Lyapunov exponent of the logistic map.

    Averages ``ln|alpha (1 - 2 theta_k)|`` over ``n`` steps after discarding
    ``transient``. Raises EscapeError if the orbit leaves [0, 1].

    >>> round(lyapunov_exponent(2.5, 0.2, 10**4), 6)
    -0.693147
    """
    if not (alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if not (0.0 < theta0 < 1.0):
        raise DomainError(f"theta0 must lie in (0, 1), got {theta0!r}")
    if n < 10**4:
        raise DomainError(f"n must be at least 10^4, got {n!r}")
    if transient < 0:
        raise DomainError(f"transient must be >= 0, got {transient!r}")
    x = theta0
    for k in range(transient):
        x = alpha * x * (1.0 - x)
        if not (0.0 <= x <= 1.0):
            raise EscapeError(f"orbit escaped [0, 1] at step {k + 1}")
    total = 0.0
    log = math.log
    for k in range(n):
        d = abs(alpha * (1.0 - 2.0 * x))
        total += log(d if d >= _LOG_FLOOR else _LOG_FLOOR)
        x = alpha * x * (1.0 - x)
        if not (0.0 <= x <= 1.0):
            raise EscapeError(f"orbit escaped [0, 1] at step {transient + k + 1}")
    return total / n


def _max_lag_gap(values: Sequence[float], lag: int) -> float:
    return max(abs(values[i + lag] - values[i]) for i in range(len(values) - lag))


def detect_regime(
    alpha: float,
    theta0: float,
    transient: int = 2000,
    window: int = 1024,
    tol: float = 1e-6,
) -> RegimeReport:
    """Classify the long-term behaviour of the orbit from ``theta0``.

    After ``transient`` steps, ``window`` further values are inspected. The
    orbit is convergent when successive values agree within ``tol``,
    periodic with the smallest lag ``p <= window/2`` that repeats within
    ``tol``, chaotic when the window's Lyapunov exponent exceeds
    CHAOS_THRESHOLD, and undetermined otherwise.
    """
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if not (0.0 <= theta0 <= 1.0):
        raise DomainError(f"theta0 must lie in [0, 1], got {theta0!r}")
    if transient < 0:
        raise DomainError(f"transient must be >= 0, got {transient!r}")
    if window < 16:
        raise DomainError(f"window must be >= 16, got {window!r}")
    if not (0.0 < tol < 1e-3):
        raise DomainError(f"tol must lie in (0, 1e-3), got {tol!r}")

    def escaped(steps: int) -> RegimeReport:
        return RegimeReport(ESCAPED, None, (), math.nan, min(steps, transient), max(0, steps - transient))

    x = theta0
    for k in range(transient):
        x = alpha * x * (1.0 - x)
        if not (0.0 <= x <= 1.0):
            return escaped(k + 1)
    values = []
    for k in range(window):
        x = alpha * x * (1.0 - x)
        if not (0.0 <= x <= 1.0):
            return escaped(transient + k + 1)
        values.append(x)

    lyap = lyapunov_from_orbit(values, alpha)
    if _max_lag_gap(values, 1) < tol:
        return RegimeReport(CONVERGENT, None, (values[-1],), lyap, transient, window)
    for p in range(2, window // 2 + 1):
        if _max_lag_gap(values, p) < tol:
            attractor = tuple(sorted(values[-p:]))
            return RegimeReport(PERIODIC, p, attractor, lyap, transient, window)
    if lyap > CHAOS_THRESHOLD:
        return RegimeReport(CHAOTIC, None, (), lyap, transient, window)
    return RegimeReport(UNDETERMINED, None, (), lyap, transient, window)


def count_clusters(values: Iterable[float], tol: float = 1e-4) -> int:
    """Number of groups left after merging sorted values closer than ``tol``."""
    ordered = sorted(values)
    if not ordered:
        return 0
    clusters = 1
    for prev, cur in zip(ordered, ordered[1:]):
        if cur - prev > tol:
            clusters += 1
    return clusters


def _scan_row(args: tuple[float, float, int, int]) -> tuple[float, tuple[float, ...]]:
    alpha, theta0, transient, keep = args
    x = theta0
    for _ in range(transient):
        x = alpha * x * (1.0 - x)
    kept = []
    for _ in range(keep):
        x = alpha * x * (1.0 - x)
        kept.append(x)
    return alpha, tuple(kept)


def _alpha_grid(alpha_min: float, alpha_max: float, alpha_step: float) -> list[float]:
    count = int(math.floor((alpha_max - alpha_min) / alpha_step + 1e-9))
    grid = [alpha_min + k * alpha_step for k in range(count + 1)]
    return [min(a, alpha_max) for a in grid]


def bifurcation_scan(
    alpha_min: float,
    alpha_max: float,
    alpha_step: float,
    theta0: float = 0.2,
    transient: int = 2000,
    keep: int = 64,
    workers: int = 1,
) -> BifurcationTable:
    """Post-transient orbit samples on an evenly spaced alpha grid.

    Grid points are ``alpha_min + k * alpha_step`` up to ``alpha_max``. Rows
    are independent; with ``workers > 1`` they run in a process pool and are
    still returned in ascending alpha order.
    """
    if not (0.0 < alpha_min < alpha_max <= 4.0):
        raise DomainError(f"need 0 < alpha_min < alpha_max <= 4, got [{alpha_min!r}, {alpha_max!r}]")
    if not (alpha_step > 0):
        raise DomainError(f"alpha_step must be positive, got {alpha_step!r}")
    if not (0.0 <= theta0 <= 1.0):
        raise DomainError(f"theta0 must lie in [0, 1], got {theta0!r}")
    if transient < 0:
        raise DomainError(f"transient must be >= 0, got {transient!r}")
    if keep < 1:
        raise DomainError(f"keep must be >= 1, got {keep!r}")
    jobs = [(alpha, theta0, transient, keep) for alpha in _alpha_grid(alpha_min, alpha_max, alpha_step)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_scan_row(job) for job in jobs]
    return BifurcationTable(tuple(rows))


@dataclass(frozen=True)
class LadderRung:
    alpha: float
    expected: str
    theta0: float
    report: RegimeReport
    passed: bool
    detail: str = field(default="")


# (alpha, expected classification, expected period)
LADDER: tuple[tuple[float, str, int | None], ...] = (
    (2.5, CONVERGENT, None),
    (3.2, PERIODIC, 2),
    (3.5, PERIODIC, 4),
    (3.55, PERIODIC, 8),
    (3.9, CHAOTIC, None),
    (4.0, CHAOTIC, None),
)

_LADDER_PERTURBATION = 1e-7


def _degenerate_seed(alpha: float, theta0: float, probe: int = 64) -> bool:
    """True when the seed is a fixed point or its orbit hits 0 or 1 exactly within ``probe`` steps."""
    if theta0 in fixed_points(alpha) or alpha * theta0 * (1.0 - theta0) == theta0:
        return True
    x = theta0
    for _ in range(probe + 1):
        if x == 0.0 or x == 1.0:
            return True
        x = alpha * x * (1.0 - x)
    return False


def _two_cycle(alpha: float) -> tuple[float, float]:
    root = math.sqrt((alpha + 1.0) * (alpha - 3.0))
    return ((alpha + 1.0 - root) / (2.0 * alpha), (alpha + 1.0 + root) / (2.0 * alpha))


def _judge(alpha: float, expected: str, period: int | None, report: RegimeReport) -> tuple[bool, str]:
    if report.classification != expected:
        return False, f"got {report.classification}"
    if expected == CONVERGENT:
        target = 1.0 - 1.0 / alpha
        err = abs(report.attractor_values[0] - target)
        return err <= 1e-6, f"attractor {report.attractor_values[0]:.9f} vs {target:.9f}"
    if expected == PERIODIC:
        if report.period != period:
            return False, f"period {report.period}, expected {period}"
        if period == 2:
            err = max(abs(u - v) for u, v in zip(report.attractor_values, _two_cycle(alpha)))
            return err <= 1e-4, f"2-cycle error {err:.2e}"
        return True, f"period {period}"
    return report.lyapunov > CHAOS_THRESHOLD, f"lyapunov {report.lyapunov:.6f}"


def regime_ladder_check(theta0: float = 0.2, transient: int = 2000, window: int = 1024,
                        tol: float = 1e-6) -> list[LadderRung]:
    """Evaluate the convergent / period 2, 4, 8 / chaotic ladder.

    Seeds whose orbit falls exactly onto 0, 1 or a fixed point are nudged by
    1e-7 so each rung sees a generic orbit.
    """
    rungs = []
    for alpha, expected, period in LADDER:
        seed = theta0
        if _degenerate_seed(alpha, seed):
            seed = seed + _LADDER_PERTURBATION if seed < 0.5 else seed - _LADDER_PERTURBATION
        report = detect_regime(alpha, seed, transient=transient, window=window, tol=tol)
        passed, detail = _judge(alpha, expected, period, report)
        label = expected if period is None else f"period-{period}"
        rungs.append(LadderRung(alpha, label, seed, report, passed, detail))
    return rungs
