"""Command-line interface.

Commands
--------
bound-state   solve K(E) = E for one parameter point
dynamics      sample a trajectory and write it as a table
qsl           speed-limit / backflow report for one parameter point
sweep         regenerate a preset coupling-strength survey (figures 2-5)
validate      run the built-in consistency checks

Exit codes: 0 success, 1 usage error, 2 bracket failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .bound_state import BracketFailureError, find_bound_state
from .checks import run_checks
from .dynamics import trajectory
from .measures import evaluate_point
from .spectral import AtomKind, ModelParams
from .svg import Panel, Series, render_figure
from .sweep import FigurePreset, SweepRow, figure_preset, run_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BRACKET = 2
EXIT_VALIDATION = 3

CSV_HEADER = "gamma0,n_atoms,theta,ratio,nonmarkov,bound_energy,status"
BOUND_PLOT_FLOOR = 1e-4
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation; to_argv() round-trips through parse_args()."""

    command: str
    kind: AtomKind = AtomKind.TWO_LEVEL
    n_atoms: int = 1
    theta: float = 0.0
    gamma0: float = 1.0
    lam: float = 2.0
    omega0: float = 1.0
    tau: float = 5.0
    steps: int = 4096
    figure: int | None = None
    output: str | None = None
    fmt: str = "csv"
    svg: str | None = None
    force: bool = False
    quick: bool = False


def _add_model_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--kind", choices=[k.value for k in AtomKind],
                    default=AtomKind.TWO_LEVEL.value, help="emitter kind")
    sp.add_argument("--n", dest="n_atoms", type=int, default=1,
                    help="number of emitters")
    sp.add_argument("--theta", type=float, default=0.0,
                    help="dipole angle cosine (V-type only)")
    sp.add_argument("--gamma0", type=float, required=True,
                    help="coupling strength in units of omega0")
    sp.add_argument("--lambda", dest="lam", type=float, required=True,
                    help="reservoir width in units of omega0")
    sp.add_argument("--omega0", type=float, default=1.0,
                    help="transition frequency (sets the unit)")


def _add_output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--output", default=None, help="write results to this path")
    sp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    sp.add_argument("--force", action="store_true",
                    help="overwrite an existing output file")


def build_parser() -> _Parser:
    p = _Parser(prog="qspeedup",
                description="Collective decay in a shared Lorentzian reservoir")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bound-state", help="solve K(E) = E")
    _add_model_flags(sp)

    sp = sub.add_parser("dynamics", help="sample a trajectory")
    _add_model_flags(sp)
    sp.add_argument("--tau", type=float, default=5.0, help="time window")
    sp.add_argument("--steps", type=int, default=4096, help="grid steps")
    _add_output_flags(sp)

    sp = sub.add_parser("qsl", help="speed-limit report")
    _add_model_flags(sp)
    sp.add_argument("--tau", type=float, default=5.0, help="time window")
    _add_output_flags(sp)

    sp = sub.add_parser("sweep", help="regenerate a survey grid")
    sp.add_argument("--figure", type=int, choices=(2, 3, 4, 5), required=True)
    _add_output_flags(sp)
    sp.add_argument("--svg", default=None, help="also draw the panels to this path")

    sp = sub.add_parser("validate", help="run the consistency checks")
    sp.add_argument("--quick", action="store_true", help="reduced grids, < 5 s")
    return p


def parse_args(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if v is not None or k in
              ("figure", "output", "svg")}
    if "kind" in fields:
        fields["kind"] = AtomKind(fields["kind"])
    return RunConfig(**fields)


def to_argv(cfg: RunConfig) -> list[str]:
    """Flag list that parses back to cfg (modulo unsupplied defaults)."""
    av = [cfg.command]
    if cfg.command in ("bound-state", "dynamics", "qsl"):
        av += ["--kind", cfg.kind.value, "--n", str(cfg.n_atoms),
               "--theta", repr(cfg.theta), "--gamma0", repr(cfg.gamma0),
               "--lambda", repr(cfg.lam), "--omega0", repr(cfg.omega0)]
    if cfg.command in ("dynamics", "qsl"):
        av += ["--tau", repr(cfg.tau)]
    if cfg.command == "dynamics":
        av += ["--steps", str(cfg.steps)]
    if cfg.command == "sweep":
        av += ["--figure", str(cfg.figure)]
        if cfg.svg:
            av += ["--svg", cfg.svg]
    if cfg.command in ("dynamics", "qsl", "sweep"):
        if cfg.output:
            av += ["--output", cfg.output]
        av += ["--format", cfg.fmt]
        if cfg.force:
            av.append("--force")
    if cfg.command == "validate" and cfg.quick:
        av.append("--quick")
    return av


def _fnum(x) -> str:
    # shortest round-trip decimal; plain floats only, never numpy scalar reprs
    return repr(float(x))


def _build_params(cfg: RunConfig) -> ModelParams:
    return ModelParams(gamma0=cfg.gamma0, lam=cfg.lam, n_atoms=cfg.n_atoms,
                       theta=cfg.theta, omega0=cfg.omega0, kind=cfg.kind)


def _write_text(path: str, text: str, force: bool) -> None:
    if os.path.exists(path) and not force:
        raise UsageError(f"refusing to overwrite {path} (pass --force)")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _config_echo(cfg: RunConfig, preset: FigurePreset | None = None) -> dict:
    if preset is not None:
        sc = preset.config
        return {
            "figure": preset.figure,
            "kind": sc.kind.value,
            "n_atoms_list": list(sc.n_atoms_list),
            "theta_list": list(sc.theta_list),
            "gamma0_grid": list(sc.gamma0_grid),
            "lam": sc.lam,
            "omega0": sc.omega0,
            "tau": sc.tau,
        }
    return {
        "kind": cfg.kind.value,
        "n_atoms": cfg.n_atoms,
        "theta": cfg.theta,
        "gamma0": cfg.gamma0,
        "lam": cfg.lam,
        "omega0": cfg.omega0,
        "tau": cfg.tau,
    }


def _rows_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            _fnum(r.gamma0), str(r.n_atoms), _fnum(r.theta), _fnum(r.ratio),
            _fnum(r.nonmarkov),
            "" if r.bound_energy is None else _fnum(r.bound_energy),
            r.status,
        ]))
    return "\n".join(lines) + "\n"


def _rows_json(rows: list[SweepRow], config: dict) -> str:
    payload = {
        "schema": 1,
        "config": config,
        "rows": [{
            "gamma0": r.gamma0,
            "n_atoms": r.n_atoms,
            "theta": r.theta,
            "ratio": r.ratio,
            "nonmarkov": r.nonmarkov,
            "bound_energy": r.bound_energy,
            "status": r.status,
        } for r in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _sweep_panels(rows: list[SweepRow], preset: FigurePreset) -> list[Panel]:
    sc = preset.config
    right_label = "ℜ" if preset.right_axis == "nonmarkov" else "E_b/ω₀"
    panels = []
    for n in sc.n_atoms_list:
        series = []
        for k, theta in enumerate(sc.theta_list):
            pts = [r for r in rows if r.n_atoms == n and r.theta == theta]
            xs = tuple(r.gamma0 for r in pts)
            suffix = f", θ={theta:g}" if len(sc.theta_list) > 1 else ""
            series.append(Series(
                x=xs, y=tuple(r.ratio for r in pts),
                label="τ_QSL/τ" + suffix, color=PALETTE[k % len(PALETTE)]))
            if preset.right_axis == "nonmarkov":
                ys = tuple(r.nonmarkov for r in pts)
            else:
                # presentation floor: energies under the plot resolution read 0
                ys = tuple(0.0 if r.bound_energy is None
                           or abs(r.bound_energy) < BOUND_PLOT_FLOOR
                           else r.bound_energy for r in pts)
            series.append(Series(
                x=xs, y=ys, label=right_label + suffix,
                color=PALETTE[(k + 2) % len(PALETTE)], dashed=True, axis="right"))
        panels.append(Panel(title=f"N = {n}", series=tuple(series),
                            y_left_label="τ_QSL/τ", y_right_label=right_label))
    return panels


def cmd_bound_state(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    result = find_bound_state(params)
    if not result.exists:
        print("no bound state (zero coupling)")
        return EXIT_OK
    print(f"energy     = {result.energy:.12g}")
    print(f"residual   = {result.residual:.3e}")
    print(f"iterations = {result.iterations}")
    print(f"bracket    = [{result.bracket[0]:.12g}, {result.bracket[1]:.12g}]")
    return EXIT_OK


def cmd_dynamics(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    traj = trajectory(params, cfg.tau, cfg.steps)
    if cfg.output is None:
        print(f"grid points      = {len(traj)}")
        print(f"final population = {traj.population[-1]:.12g}")
        print(f"min population   = {traj.population.min():.12g}")
        return EXIT_OK
    if cfg.fmt == "csv":
        lines = ["t,amplitude_re,amplitude_im,population,population_rate"]
        for i in range(len(traj)):
            lines.append(",".join([
                _fnum(traj.times[i]), _fnum(traj.amplitude[i].real),
                _fnum(traj.amplitude[i].imag), _fnum(traj.population[i]),
                _fnum(traj.population_rate[i])]))
        _write_text(cfg.output, "\n".join(lines) + "\n", cfg.force)
    else:
        payload = {
            "schema": 1,
            "config": _config_echo(cfg) | {"steps": cfg.steps},
            "rows": [{
                "t": float(traj.times[i]),
                "amplitude_re": float(traj.amplitude[i].real),
                "amplitude_im": float(traj.amplitude[i].imag),
                "population": float(traj.population[i]),
                "population_rate": float(traj.population_rate[i]),
            } for i in range(len(traj))],
        }
        _write_text(cfg.output, json.dumps(payload, indent=2) + "\n", cfg.force)
    print(f"wrote {len(traj)} samples to {cfg.output}")
    return EXIT_OK


def cmd_qsl(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    report = evaluate_point(params, cfg.tau)
    bound_note = None
    bound = None
    try:
        state = find_bound_state(params)
        bound = state.energy if state.exists else None
    except BracketFailureError as exc:
        bound_note = str(exc)
    print(f"tau              = {report.tau:.12g}")
    print(f"tau_qsl          = {report.tau_qsl:.12g}")
    print(f"ratio            = {report.ratio:.12g}")
    print(f"nonmarkov        = {report.nonmarkov:.12g}")
    print(f"final_population = {report.final_population:.12g}")
    print(f"bound_energy     = "
          + ("none" if bound is None else f"{bound:.12g}"))
    print(f"status           = {report.status.value}")
    if bound_note:
        print(f"note: {bound_note}")
    if cfg.output is not None:
        payload = {
            "schema": 1,
            "config": _config_echo(cfg),
            "report": {
                "tau": report.tau,
                "tau_qsl": report.tau_qsl,
                "ratio": report.ratio,
                "nonmarkov": report.nonmarkov,
                "final_population": report.final_population,
                "bound_energy": bound,
                "status": report.status.value,
            },
        }
        _write_text(cfg.output, json.dumps(payload, indent=2) + "\n", cfg.force)
        print(f"wrote report to {cfg.output}")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    preset = figure_preset(cfg.figure)
    rows = run_sweep(preset.config)
    out = cfg.output or f"fig{cfg.figure}.{cfg.fmt}"
    if cfg.fmt == "csv":
        _write_text(out, _rows_csv(rows), cfg.force)
    else:
        _write_text(out, _rows_json(rows, _config_echo(cfg, preset)), cfg.force)
    print(f"wrote {len(rows)} rows to {out}")
    if cfg.svg:
        _write_text(cfg.svg, render_figure(_sweep_panels(rows, preset)), cfg.force)
        print(f"wrote panels to {cfg.svg}")
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    results = run_checks(quick=cfg.quick)
    width = max(len(r.name) for r in results)
    for r in results:
        verdict = "PASS" if r.passed else "FAIL"
        print(f"{verdict} {r.name:<{width}}  worst={r.worst:.3e} "
              f"tol={r.tolerance:.1e}  {r.detail}")
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed")
        return EXIT_VALIDATION
    print(f"all {len(results)} checks passed")
    return EXIT_OK


_COMMANDS = {
    "bound-state": cmd_bound_state,
    "dynamics": cmd_dynamics,
    "qsl": cmd_qsl,
    "sweep": cmd_sweep,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else list(argv))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BracketFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BRACKET


if __name__ == "__main__":
    sys.exit(main())
