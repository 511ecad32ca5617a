"""Command-line front end.

Every subcommand accepts ``--config PATH`` (a JSON object whose keys are the
flag names with underscores, e.g. ``{"alpha": 3.9, "theta0": 0.2}``) and
``--strict``. Flags given on the command line override the file.

Exit codes: 0 success, 1 usage error, 2 validity flags raised under
``--strict`` (or a failed ladder rung), 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import dynamics, logistic, oscillator, quantum
from .errors import DomainError, EscapeError
from .io import Table, emit_csv, emit_svg_scatter

__all__ = ["UsageError", "RunConfig", "RunRecord", "parse_args", "run", "main", "COMMANDS"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Param:
    name: str
    kind: Callable[[str], Any]
    default: Any = None
    required: bool = False
    check: Callable[[Any], bool] | None = None
    requirement: str = ""
    choices: tuple[str, ...] | None = None

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")


def _pos(x):
    return math.isfinite(x) and x > 0


def _unit(x):
    return 0.0 <= x <= 1.0


POSITIVE = dict(check=_pos, requirement="must be positive and finite")
UNIT = dict(check=_unit, requirement="must lie in [0, 1]")
STEPS = dict(check=lambda n: n >= 1, requirement="must be >= 1")
NONNEG = dict(check=lambda n: n >= 0, requirement="must be >= 0")
DETECTION_A = dict(
    check=lambda a: 1.0 / math.sqrt(2.0) < a < 1.0,
    requirement="must lie in (1/sqrt(2), 1) so that a > b = sqrt(1 - a^2) > 0",
)
CONVENTION_CHOICES = ("dimensionless", "paper-literal")

COMMANDS: dict[str, tuple[Param, ...]] = {
    "logistic": (
        Param("alpha", float, required=True, **POSITIVE),
        Param("theta0", float, 0.2, **UNIT),
        Param("steps", int, 1000, **STEPS),
    ),
    "oscillator": (
        Param("x0", float, required=True, **POSITIVE),
        Param("v0", float, required=True, **POSITIVE),
        Param("omega", float, required=True, **POSITIVE),
        Param("tau1", float, required=True, **POSITIVE),
        Param("steps", int, 1000, **STEPS),
        Param("mode", str, "taylor", choices=("taylor", "exact")),
    ),
    "quantum": (
        Param("a", float, required=True, **DETECTION_A),
        Param("omega", float, 1.0, **POSITIVE),
        Param("tau1", float, required=True, **POSITIVE),
        Param("steps", int, 1000, **STEPS),
        Param("gamma_convention", str, "dimensionless", choices=CONVENTION_CHOICES),
    ),
    "bifurcate": (
        Param("alpha_min", float, 2.5, check=lambda a: 0 < a <= 4, requirement="must lie in (0, 4]"),
        Param("alpha_max", float, 4.0, check=lambda a: 0 < a <= 4, requirement="must lie in (0, 4]"),
        Param("alpha_step", float, 0.005, **POSITIVE),
        Param("theta0", float, 0.2, **UNIT),
        Param("transient", int, 2000, **NONNEG),
        Param("keep", int, 64, **STEPS),
        Param("workers", int, 1, **STEPS),
    ),
    "lyapunov": (
        Param("alpha", float, required=True, **POSITIVE),
        Param("theta0", float, 0.2, check=lambda t: 0 < t < 1, requirement="must lie in (0, 1)"),
        Param("steps", int, 100000, check=lambda n: n >= 10**4, requirement="must be >= 10000"),
        Param("transient", int, 1000, **NONNEG),
    ),
    "ladder": (
        Param("theta0", float, 0.2, check=lambda t: 0 < t < 1, requirement="must lie in (0, 1)"),
    ),
    "compare": (
        Param("x0", float, required=True, **POSITIVE),
        Param("v0", float, required=True, **POSITIVE),
        Param("omega", float, required=True, **POSITIVE),
        Param("tau1", float, required=True, **POSITIVE),
        Param("steps", int, 10000, **STEPS),
        Param("a", float, math.sqrt(0.7), **DETECTION_A),
        Param("gamma_convention", str, "dimensionless", choices=CONVENTION_CHOICES),
    ),
}

# keys shared by every command
OUTPUT_KEYS = ("out", "svg", "plot", "strict")


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict[str, Any]
    output_path: str | None = None
    svg_path: str | None = None
    plot_path: str | None = None
    strict: bool = False


@dataclass
class RunRecord:
    config_echo: RunConfig
    produced_files: list[str] = field(default_factory=list)
    flags_summary: dict[str, int] = field(default_factory=dict)
    exit_code: int = EXIT_OK
    messages: list[str] = field(default_factory=list)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="PATH", help="JSON file with parameter values")
    common.add_argument("--strict", action="store_true", help="exit 2 when any validity flag is raised")
    common.add_argument("--out", metavar="PATH", help="CSV output (standard output when omitted)")
    common.add_argument("--svg", metavar="PATH", help="dependency-free SVG scatter")
    common.add_argument("--plot", metavar="PATH", help="matplotlib figure (png, pdf or svg)")

    parser = _Parser(prog="restart-chaos", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, params in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], argument_default=argparse.SUPPRESS)
        for param in params:
            # values are converted during validation so JSON and flags share one path
            p.add_argument(param.flag, dest=param.name, metavar=param.name.upper())
    return parser


def _convert(param: Param, value: Any) -> Any:
    try:
        if param.kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            converted = int(value)
        elif param.kind is float:
            if isinstance(value, bool):
                raise ValueError
            converted = float(value)
        else:
            converted = str(value)
    except (TypeError, ValueError):
        raise UsageError(f"argument {param.flag}: invalid value {value!r}") from None
    if param.choices is not None and converted not in param.choices:
        raise UsageError(f"argument {param.flag}: {converted!r} is not one of {', '.join(param.choices)}")
    if param.check is not None and not param.check(converted):
        raise UsageError(f"argument {param.flag}: {converted!r} {param.requirement}")
    return converted


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"argument --config: {path} is not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise UsageError(f"argument --config: {path} must hold a JSON object")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Turn command-line arguments into a validated RunConfig.

    Raises UsageError naming the offending flag. OSError from reading the
    config file propagates.
    """
    ns = vars(_build_parser().parse_args(list(argv)))
    command = ns.pop("command")
    params = COMMANDS[command]
    merged: dict[str, Any] = {}
    if "config" in ns:
        file_values = _load_config_file(ns.pop("config"))
        known = {p.name for p in params} | set(OUTPUT_KEYS)
        unknown = sorted(set(file_values) - known)
        if unknown:
            raise UsageError(f"argument --config: unknown key(s) for {command}: {', '.join(unknown)}")
        merged.update(file_values)
    merged.update(ns)

    values: dict[str, Any] = {}
    for param in params:
        if param.name in merged:
            values[param.name] = _convert(param, merged[param.name])
    missing = [p.flag for p in params if p.required and p.name not in values]
    if missing:
        raise UsageError(f"missing required argument(s): {', '.join(missing)}")
    for param in params:
        values.setdefault(param.name, param.default)
    if command == "bifurcate" and not values["alpha_min"] < values["alpha_max"]:
        raise UsageError("argument --alpha-min: must be below --alpha-max")
    for key in ("gamma_convention",):
        if key in values:
            values[key] = values[key].replace("-", "_")

    strict = merged.get("strict", False)
    if not isinstance(strict, bool):
        raise UsageError("argument --strict: must be true or false")
    return RunConfig(
        command=command,
        parameters=values,
        output_path=merged.get("out"),
        svg_path=merged.get("svg"),
        plot_path=merged.get("plot"),
        strict=strict,
    )


def _schedule_flags(entries) -> str:
    return ";".join(sorted(entries))


def _run_logistic(cfg: RunConfig, record: RunRecord) -> Table:
    p = cfg.parameters
    orbit = logistic.logistic_orbit(logistic.LogisticParams(p["alpha"], p["theta0"]), p["steps"])
    if orbit.escaped:
        record.flags_summary["ESCAPED"] = 1
    return Table(["n", "theta"], [(n, v) for n, v in enumerate(orbit.values)])


def _run_oscillator(cfg: RunConfig, record: RunRecord) -> Table:
    p = cfg.parameters
    c = oscillator.OscillatorConfig(p["x0"], p["v0"], p["omega"])
    sched = oscillator.restart_schedule(c, p["tau1"], p["steps"], p["mode"])
    record.flags_summary.update(sched.flag_counts())
    record.messages.append(f"beta={sched.scales.beta!r} t_star={sched.scales.t_star!r}")
    columns = ["n", "eps", "tau", "delta_x", "omega_tau", "taylor_error_bound", "flags"]
    rows = [
        (e.n, e.eps, e.tau, e.delta_x, e.omega_tau, e.taylor_error_bound, _schedule_flags(e.flags))
        for e in sched.entries
    ]
    return Table(columns, rows)


def _run_quantum(cfg: RunConfig, record: RunRecord) -> Table:
    p = cfg.parameters
    q = quantum.QuantumConfig.from_a(p["a"], p["omega"])
    sched = quantum.measurement_schedule(q, p["tau1"], p["steps"], p["gamma_convention"])
    record.flags_summary.update(sched.flag_counts())
    record.messages.append(f"gamma={sched.scales.gamma!r} t_q={sched.scales.t_q!r}")
    columns = ["n", "eta", "tau", "p_taylor", "p_exact", "p_diff", "omega_tau", "flags"]
    rows = [
        (e.n, e.eta, e.tau, e.p_taylor, e.p_exact, e.p_diff, e.omega_tau, _schedule_flags(e.flags))
        for e in sched.entries
    ]
    return Table(columns, rows)


def _run_bifurcate(cfg: RunConfig, record: RunRecord) -> Table:
    p = cfg.parameters
    table = dynamics.bifurcation_scan(
        p["alpha_min"], p["alpha_max"], p["alpha_step"], p["theta0"], p["transient"], p["keep"], p["workers"]
    )
    return Table(["alpha", "value"], [(alpha, v) for alpha, values in table.rows for v in values])


def _run_lyapunov(cfg: RunConfig, record: RunRecord) -> Table | None:
    p = cfg.parameters
    try:
        value = dynamics.lyapunov_exponent(p["alpha"], p["theta0"], p["steps"], p["transient"])
    except EscapeError as exc:
        record.flags_summary["ESCAPED"] = 1
        record.messages.append(str(exc))
        record.exit_code = EXIT_INVALID
        return None
    print(format(value, ".12g"))
    return Table(
        ["alpha", "theta0", "steps", "transient", "lyapunov"],
        [(p["alpha"], p["theta0"], p["steps"], p["transient"], value)],
    )


def _run_ladder(cfg: RunConfig, record: RunRecord) -> Table:
    rungs = dynamics.regime_ladder_check(cfg.parameters["theta0"])
    rows = []
    for rung in rungs:
        status = "PASS" if rung.passed else "FAIL"
        print(f"{status} alpha={rung.alpha:g} expected={rung.expected} "
              f"got={rung.report.classification} ({rung.detail})")
        rows.append((rung.alpha, rung.expected, rung.theta0, rung.report.classification,
                     rung.report.period, rung.report.lyapunov, int(rung.passed)))
    failed = sum(not r.passed for r in rungs)
    if failed:
        record.flags_summary["LADDER_RUNG_FAILED"] = failed
        record.exit_code = EXIT_INVALID
    return Table(["alpha", "expected", "theta0", "classification", "period", "lyapunov", "passed"], rows)


def _run_compare(cfg: RunConfig, record: RunRecord) -> Table:
    p = cfg.parameters
    c = oscillator.OscillatorConfig(p["x0"], p["v0"], p["omega"])
    rows = oscillator.compare_to_logistic(c, p["tau1"], p["steps"])
    for row in rows:
        for flag in row.flags:
            record.flags_summary[flag] = record.flags_summary.get(flag, 0) + 1

    # quantum check: same relative starting moment, eta_1 = eps_1
    q = quantum.QuantumConfig.from_a(p["a"], p["omega"])
    qs = quantum.scales(q, p["gamma_convention"])
    eps1 = p["tau1"] / oscillator.scales(c).t_star
    qsched = quantum.measurement_schedule(q, eps1 * qs.t_q, p["steps"], p["gamma_convention"])
    for flag, count in qsched.flag_counts().items():
        record.flags_summary["quantum." + flag] = count
    gamma = qs.gamma
    q_entries = qsched.entries

    columns = [
        "n", "eps", "eps_residual", "taylor_relative_residual", "exact_gap", "taylor_error_bound",
        "exact_within_bound", "flags", "eta", "eta_residual", "p_diff_relative_residual", "quantum_flags",
    ]
    table_rows = []
    for i in range(max(len(rows), len(q_entries))):
        left: tuple = (None,) * 8
        if i < len(rows):
            r = rows[i]
            left = (r.n, r.eps, r.eps_residual, r.taylor_relative_residual, r.exact_gap, r.taylor_error_bound,
                    int(r.exact_gap <= r.taylor_error_bound), _schedule_flags(r.flags))
        right: tuple = (None,) * 4
        if i < len(q_entries):
            e = q_entries[i]
            if i + 1 < len(q_entries) and 0.0 <= e.eta <= 1.0:
                eta_res = abs(q_entries[i + 1].eta - logistic.logistic_step(e.eta, gamma))
            else:
                eta_res = math.nan
            expected = gamma * e.eta * (1.0 - e.eta)
            p_res = abs(e.p_diff - expected) / abs(expected) if expected else abs(e.p_diff)
            right = (e.eta, eta_res, p_res, _schedule_flags(e.flags))
            if left[0] is None:
                left = (e.n,) + left[1:]
        table_rows.append(left + right)

    finite = [r.eps_residual for r in rows if not math.isnan(r.eps_residual)]
    record.messages.append(
        f"max eps residual={max(finite, default=0.0):.3e} "
        f"max taylor relative residual={max(r.taylor_relative_residual for r in rows):.3e} "
        f"exact within bound={all(r.exact_gap <= r.taylor_error_bound for r in rows)}"
    )
    return Table(columns, table_rows)


_RUNNERS = {
    "logistic": (_run_logistic, ("n", "theta")),
    "oscillator": (_run_oscillator, ("n", "eps")),
    "quantum": (_run_quantum, ("n", "eta")),
    "bifurcate": (_run_bifurcate, ("alpha", "value")),
    "lyapunov": (_run_lyapunov, None),
    "ladder": (_run_ladder, None),
    "compare": (_run_compare, ("n", "eps")),
}


def _render_plot(cfg: RunConfig, table: Table) -> None:
    from . import plotting

    cmd = cfg.command
    if cmd == "logistic":
        plotting.orbit_figure(table, cfg.plot_path, title=f"alpha = {cfg.parameters['alpha']:g}")
    elif cmd == "bifurcate":
        plotting.bifurcation_figure(table, cfg.plot_path)
    elif cmd == "oscillator":
        plotting.schedule_figure(table, cfg.plot_path, "eps", "delta_x", title="Restart schedule")
    elif cmd == "quantum":
        plotting.schedule_figure(table, cfg.plot_path, "eta", "p_taylor", title="Measurement schedule")
    elif cmd == "compare":
        plotting.residual_figure(table, cfg.plot_path, ["taylor_relative_residual", "exact_gap", "taylor_error_bound"])
    elif cmd == "ladder":
        plotting.orbit_figure(table, cfg.plot_path, "alpha", "lyapunov", title="Regime ladder")
    else:
        raise UsageError(f"argument --plot: no figure for {cmd}")


def run(config: RunConfig) -> RunRecord:
    """Execute a validated configuration and write its outputs.

    OSError from writing files propagates; ``main`` maps it to exit code 3.
    """
    record = RunRecord(config_echo=config)
    runner, svg_axes = _RUNNERS[config.command]
    table = runner(config, record)
    if table is not None:
        to_stdout = config.command not in ("lyapunov", "ladder")
        if config.output_path is not None:
            emit_csv(table, config.output_path)
            record.produced_files.append(config.output_path)
        elif to_stdout:
            emit_csv(table, None)
        if config.svg_path is not None:
            if svg_axes is None:
                raise UsageError(f"argument --svg: no scatter defined for {config.command}")
            emit_svg_scatter(table, svg_axes[0], svg_axes[1], config.svg_path)
            record.produced_files.append(config.svg_path)
        if config.plot_path is not None:
            _render_plot(config, table)
            record.produced_files.append(config.plot_path)
    if config.strict and any(record.flags_summary.values()) and record.exit_code == EXIT_OK:
        record.exit_code = EXIT_INVALID
    return record


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
        record = run(config)
    except UsageError as exc:
        print(f"restart-chaos: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"restart-chaos: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"restart-chaos: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for message in record.messages:
        print(message, file=sys.stderr)
    if record.flags_summary:
        summary = ", ".join(f"{k}={v}" for k, v in sorted(record.flags_summary.items()))
        print(f"flags: {summary}", file=sys.stderr)
    return record.exit_code


if __name__ == "__main__":
    sys.exit(main())
