"""Command-line front end.

Subcommands: ``improvement`` (power-law sweep of the improvement factor),
``qfi`` (single-scenario report as JSON), ``resolution`` (interrogation-time
sweep to CSV with a JSON footer) and ``verify`` (self-check suite).

Every run writes a manifest beside its output.  Flags override an optional
key=value config file which overrides built-in defaults.  Exit codes:
0 success, 1 verification or constraint failure, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (
    FlatFunctionError,
    ResolutionQuery,
    UndefinedResolutionError,
    closed_form_uncorrelated,
    improvement_factor,
    optimal_time_closed,
    optimal_time_numeric,
    partial_corr_asymptote,
    ramsey_max_correlated,
)
from .models import Correlation, DephasingModel, ProbeKind, ProbeState
from .purify import UnsupportedCaseError
from .qfi import evaluate_scenario, family_basis, minimize_ansatz, purify_scenario
from .reporting import RunManifest, SweepTable, json_text, manifest_path_for, parse_config_file, write_json
from .verify import run_checks

_CORRELATIONS = {
    "uncorrelated": Correlation.UNCORRELATED,
    "max-correlated": Correlation.MAX_CORRELATED,
    "partial": Correlation.PARTIAL,
    "mixed": Correlation.MIXED,
}
_PROBES = {"product-plus": ProbeKind.PRODUCT_PLUS, "ghz": ProbeKind.GHZ}


def default_jobs() -> int:
    raw = os.environ.get("DEPHASE_QFI_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="dephase-qfi",
        description="Frequency-estimation precision bounds for dephasing qubits",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file; flags take precedence")
    common.add_argument("--jobs", type=int, default=None, help="concurrent sweep evaluations (default: DEPHASE_QFI_JOBS or 1)")

    p_imp = sub.add_parser("improvement", parents=[common], help="sweep the improvement factor over the decay power")
    p_imp.add_argument("--nu-min", type=float, default=1.0)
    p_imp.add_argument("--nu-max", type=float, default=6.0)
    p_imp.add_argument("--steps", type=int, default=101)
    p_imp.add_argument("--gamma", type=float, default=1.0, help="decay constant used by the numeric branch below nu=1")
    p_imp.add_argument("--n-particles", type=int, default=100, help="particle count used by the numeric branch")
    p_imp.add_argument("--total-time", type=float, default=1.0)
    p_imp.add_argument("--out", required=True, help="output CSV path")
    p_imp.add_argument("--plot", default=None, help="optional PNG path for the swept curve")

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--correlation", choices=sorted(_CORRELATIONS), default="uncorrelated")
    scenario.add_argument("--probe", choices=sorted(_PROBES), default="ghz")
    scenario.add_argument("--n", type=int, default=2, help="particle count")
    scenario.add_argument("--gamma", type=float, default=1.0)
    scenario.add_argument("--nu", type=float, default=1.0)
    scenario.add_argument("--total-time", type=float, default=1.0)
    scenario.add_argument("--amplitude", type=float, default=None, help="entangled-environment amplitude A (partial correlation)")
    scenario.add_argument("--theta", type=float, default=None, help="correlation mixing angle (mixed correlation)")

    p_qfi = sub.add_parser("qfi", parents=[common, scenario], help="evaluate one scenario and print a JSON report")
    p_qfi.add_argument("--t", type=float, default=1.0, help="interrogation time")
    p_qfi.add_argument("--phi", type=float, default=0.0, help="detuning phase")
    p_qfi.add_argument("--ansatz", choices=["complete", "family", "none"], default="family")
    p_qfi.add_argument("--out", default=None, help="also write the JSON report to this path")

    p_res = sub.add_parser("resolution", parents=[common, scenario], help="sweep resolutions over the interrogation time")
    p_res.add_argument("--t-min", type=float, required=True)
    p_res.add_argument("--t-max", type=float, required=True)
    p_res.add_argument("--steps", type=int, default=101)
    p_res.add_argument("--out", required=True, help="output CSV path")
    p_res.add_argument("--plot", default=None, help="optional PNG path for the swept curves")

    p_ver = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p_ver.add_argument("--depth", choices=["quick", "full"], default="quick")
    p_ver.add_argument("--seed", type=int, default=42, help="seed for randomized checks")
    p_ver.add_argument("--out", default=None, help="manifest path (default: verify.manifest.json)")
    p_ver.add_argument("--perturb-closed-forms", type=float, default=0.0, help=argparse.SUPPRESS)

    subparsers = {"improvement": p_imp, "qfi": p_qfi, "resolution": p_res, "verify": p_ver}
    return parser, subparsers


def _apply_config(parser, subparsers, argv: list[str]) -> argparse.Namespace:
    # two-stage parse: pull --config first, use its pairs as defaults, reparse
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        values = parse_config_file(args.config)
        sub = subparsers[args.command]
        actions = {action.dest: action for action in sub._actions}
        unknown = set(values) - set(actions)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        converted = {}
        for dest, raw in values.items():
            action = actions[dest]
            converted[dest] = action.type(raw) if action.type else raw
        sub.set_defaults(**converted)
        args = parser.parse_args(argv)
    return args


def _resolve_jobs(args) -> int:
    return args.jobs if args.jobs and args.jobs > 0 else default_jobs()


def _map_ordered(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _build_model(args) -> DephasingModel:
    correlation = _CORRELATIONS[args.correlation]
    if correlation is Correlation.PARTIAL:
        if args.amplitude is None:
            raise ValueError("partial correlation requires --amplitude")
        if args.n != 2:
            raise ValueError("partial correlation is supported for n = 2 only")
        return DephasingModel.partial(args.gamma, args.nu, args.amplitude)
    if correlation is Correlation.MIXED:
        if args.theta is None:
            raise ValueError("mixed correlation requires --theta")
        return DephasingModel.mixed(args.gamma, args.nu, args.n, args.theta)
    return DephasingModel(args.gamma, args.nu, args.n, correlation)


def _build_probe(args) -> ProbeState:
    kind = _PROBES[args.probe]
    if kind is ProbeKind.GHZ:
        return ProbeState.ghz(args.n)
    return ProbeState.product_plus(args.n)


def _linspace(lo: float, hi: float, steps: int) -> list[float]:
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def _plot_columns(path, x, columns, xlabel, ylabel):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for label, values in columns:
        ax.plot(x, values, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(columns) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def _write_manifest(command, argv, parameters, out_path, started, checks=None):
    manifest = RunManifest(
        command=command,
        argv=list(argv),
        parameters=parameters,
        version=__version__,
        duration_seconds=int(round(time.monotonic() - started)),
        checks=checks or [],
    )
    manifest.write(manifest_path_for(out_path, command))


def cmd_improvement(args, argv) -> int:
    started = time.monotonic()
    if args.nu_min < 0.05:
        raise ValueError("nu-min must be at least 0.05")
    if args.steps < 1:
        raise ValueError("steps must be at least 1")
    if args.nu_max < args.nu_min:
        raise ValueError("nu-max must not be below nu-min")
    grid = _linspace(args.nu_min, args.nu_max, args.steps)

    def point(nu: float) -> float:
        model = DephasingModel.uncorrelated(args.gamma, nu, max(args.n_particles, 1))
        return improvement_factor(model, n=args.n_particles, total_time=args.total_time)

    values = _map_ordered(point, grid, _resolve_jobs(args))
    table = SweepTable(columns=["nu", "improvement"])
    for nu, value in zip(grid, values):
        table.append((nu, value))
    table.write_csv(args.out)
    if args.plot:
        _plot_columns(args.plot, grid, [("improvement", values)], "decay power nu", "improvement factor")
    parameters = {
        "nu_min": args.nu_min,
        "nu_max": args.nu_max,
        "steps": args.steps,
        "gamma": args.gamma,
        "n_particles": args.n_particles,
        "total_time": args.total_time,
        "out": str(args.out),
        "jobs": _resolve_jobs(args),
    }
    _write_manifest("improvement", argv, parameters, args.out, started)
    return 0


def _scenario_parameters(args) -> dict:
    parameters = {
        "correlation": args.correlation,
        "probe": args.probe,
        "n": args.n,
        "gamma": args.gamma,
        "nu": args.nu,
        "total_time": args.total_time,
    }
    if args.amplitude is not None:
        parameters["amplitude"] = args.amplitude
    if args.theta is not None:
        parameters["theta"] = args.theta
    return parameters


def cmd_qfi(args, argv) -> int:
    started = time.monotonic()
    model = _build_model(args)
    probe = _build_probe(args)
    report = evaluate_scenario(probe, model, t=args.t, phi=args.phi, total_time=args.total_time, ansatz=args.ansatz)
    text = json_text(report.to_dict())
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii", newline="\n")
    parameters = _scenario_parameters(args)
    parameters.update({"t": args.t, "phi": args.phi, "ansatz": args.ansatz})
    if args.out:
        parameters["out"] = str(args.out)
    _write_manifest("qfi", argv, parameters, args.out, started)
    return 0


def _closed_resolution(model: DephasingModel, probe: ProbeState, t: float, total_time: float) -> float:
    if model.correlation is Correlation.UNCORRELATED:
        query = ResolutionQuery.from_probe(model, probe, t, max(total_time, t))
        # rescale to the requested total duration; the form scales as 1/sqrt(T)
        value = closed_form_uncorrelated(query)
        return value * math.sqrt(max(total_time, t) / total_time)
    if model.correlation is Correlation.MAX_CORRELATED:
        return ramsey_max_correlated(model, probe.kind, t, total_time)
    if model.correlation is Correlation.PARTIAL:
        # probe correlation <Z1 Z2>
        signs = np.array([1.0, -1.0, -1.0, 1.0])
        q = float(np.real(np.vdot(probe.amplitudes, signs * probe.amplitudes)))
        return partial_corr_asymptote(model.partial_amplitude, q, t)
    raise UnsupportedCaseError("no closed resolution for mixed correlation")


def cmd_resolution(args, argv) -> int:
    started = time.monotonic()
    if args.t_min <= 0:
        raise ValueError("t-min must be positive")
    if args.t_max < args.t_min:
        raise ValueError("t-max must not be below t-min")
    if args.steps < 1:
        raise ValueError("steps must be at least 1")
    model = _build_model(args)
    probe = _build_probe(args)
    if model.correlation is Correlation.MIXED:
        raise UnsupportedCaseError("resolution sweeps are not defined for mixed correlation")
    grid = _linspace(args.t_min, args.t_max, args.steps)

    def point(t: float):
        closed = _closed_resolution(model, probe, t, args.total_time)
        purified = purify_scenario(probe, model, t, 0.0)
        value, _ = minimize_ansatz(purified, family_basis(purified, model.correlation))
        variational = math.sqrt(t / (args.total_time * value)) if value > 0 else float("inf")
        return closed, variational

    results = _map_ordered(point, grid, _resolve_jobs(args))
    table = SweepTable(columns=["t", "delta_w_closed", "delta_w_qfi"])
    for t, (closed, variational) in zip(grid, results):
        table.append((t, closed, variational))
    table.write_csv(args.out)

    closed_fn = lambda t: _closed_resolution(model, probe, t, args.total_time)
    try:
        t_star_numeric = optimal_time_numeric(closed_fn, (args.t_min, args.t_max))
    except FlatFunctionError:
        t_star_numeric = None
    t_star_closed = None
    if model.correlation is Correlation.MAX_CORRELATED and model.gamma > 0:
        t_star_closed = optimal_time_closed(model, probe.kind)
    footer = {
        "t_star_numeric": t_star_numeric,
        "t_star_closed": t_star_closed,
        "scenario": _scenario_parameters(args),
    }
    write_json(f"{args.out}.footer.json", footer)

    if args.plot:
        _plot_columns(
            args.plot,
            grid,
            [("closed form", [r[0] for r in results]), ("variational", [r[1] for r in results])],
            "interrogation time t",
            "frequency resolution",
        )
    parameters = _scenario_parameters(args)
    parameters.update({"t_min": args.t_min, "t_max": args.t_max, "steps": args.steps, "out": str(args.out), "jobs": _resolve_jobs(args)})
    _write_manifest("resolution", argv, parameters, args.out, started)
    return 0


def cmd_verify(args, argv) -> int:
    started = time.monotonic()
    report = run_checks(args.depth, seed=args.seed, perturb=args.perturb_closed_forms)
    width = max(len(c.name) for c in report.checks)
    for check in report.checks:
        flag = "PASS" if check.passed else "FAIL"
        sys.stdout.write(f"[{flag}] {check.name:<{width}}  {check.detail}\n")
    sys.stdout.write("\n")
    for audit in report.audits:
        sys.stdout.write(f"[INFO] {audit}\n")
    passed = sum(1 for c in report.checks if c.passed)
    sys.stdout.write(f"\n{passed}/{len(report.checks)} checks passed ({report.depth}, {report.elapsed_seconds:.1f}s)\n")
    checks = [{"name": c.name, "passed": c.passed} for c in report.checks]
    parameters = {"depth": args.depth, "seed": args.seed}
    out = args.out if args.out else None
    manifest = RunManifest(
        command="verify",
        argv=list(argv),
        parameters=parameters,
        version=__version__,
        duration_seconds=int(round(time.monotonic() - started)),
        checks=checks,
    )
    manifest.write(out if out else "verify.manifest.json")
    return 0 if report.ok else 1


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        args = _apply_config(parser, subparsers, argv)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    try:
        if args.command == "improvement":
            return cmd_improvement(args, argv)
        if args.command == "qfi":
            return cmd_qfi(args, argv)
        if args.command == "resolution":
            return cmd_resolution(args, argv)
        if args.command == "verify":
            return cmd_verify(args, argv)
        raise ValueError(f"unknown command {args.command!r}")
    except (UnsupportedCaseError, UndefinedResolutionError, FlatFunctionError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
