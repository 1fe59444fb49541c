"""Batch command-line front end.

Subcommands: ``kernel`` (kernel tables), ``solve`` (initial-value problems),
``delta`` (point-mass mixed measures), ``validate`` (oracle suites).  Output
is CSV or JSON written once at the end; identical configurations (including
the seed) produce byte-identical files.  Exit codes: 0 success, 1 validation
failure, 2 usage or configuration error.

The environment variable TELEGRAPH_THREADS caps internal parallelism; it is
applied to the numeric backend's thread knobs before arrays are imported, so
it must be set before the process starts (as an environment variable, not
from code).
"""

import os
import sys

_threads = os.environ.get("TELEGRAPH_THREADS")
if _threads is not None and _threads.isdigit() and int(_threads) >= 1:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, UsageError
from .fields import SampledField, SpaceGrid, from_function, zeros
from .kernel import MediumParams, fundamental_solution, time_derivative_parts, \
    time_derivative_regular
from .oracles import (DuhamelConfig, ValidationReport, binned_tv_distance,
                      duhamel_residual, expected_never_flip, fd_config_for,
                      fd_solve, rel_l2_error, simulate_walk, walk_config_for)
from .semigroup import StatePair, evolve
from .solver import DELTA_KINDS, point_source_solution, solve

SUITES = ("fd", "walk", "duhamel", "semigroup", "all")


def _fmt(v: float) -> str:
    """17 significant digits: round-trippable doubles, '.' decimal point."""
    return format(float(v), ".17g")


@dataclass
class RunConfig:
    """Effective configuration of one CLI invocation (echoed into JSON)."""

    command: str
    values: dict = field(default_factory=dict)

    def medium(self) -> MediumParams:
        return MediumParams(k=self.values["k"], c=self.values["c"])

    def grid(self) -> SpaceGrid:
        xmin = self.values["xmin"]
        xmax = self.values["xmax"]
        n = self.values["n"]
        if xmax <= xmin:
            raise UsageError(f"xmax ({xmax}) must exceed xmin ({xmin})")
        return SpaceGrid(x0=xmin, dx=(xmax - xmin) / (n - 1), n=n)


# option table: dest -> (type, default); None default means "computed later"
_COMMON = {
    "k": (float, 1.0),
    "c": (float, 1.0),
    "t": (float, 1.0),
    "out": (str, None),
    "format": (str, "csv"),
    "config": (str, None),
}
_OPTIONS = {
    "kernel": {**_COMMON, "xmin": (float, -2.0), "xmax": (float, 2.0), "n": (int, 401)},
    "solve": {**_COMMON, "xmin": (float, -8.0), "xmax": (float, 8.0), "n": (int, 4097),
              "init": (str, "gaussian"), "file": (str, None),
              "f_center": (float, 0.0), "f_width": (float, 1.0),
              "g_amp": (float, 0.0), "g_center": (float, 0.0), "g_width": (float, 1.0)},
    "delta": {**_COMMON, "kind": (str, "delta_position"),
              "xmin": (float, None), "xmax": (float, None), "n": (int, 2049),
              "mass_panels": (int, 16384)},
    "validate": {**_COMMON, "suite": (str, "all"), "dx": (float, 1.0 / 512),
                 "courant": (float, 0.9), "n_walkers": (int, 1_000_000),
                 "dt_walk": (float, 1e-3), "slabs": (int, 32),
                 "tol": (float, None), "seed": (int, 7)},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="telegraph",
        description="Damped wave equation: kernels, solvers, point-mass "
                    "measures and validation oracles.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "kernel": "tabulate the light-cone kernel and its time derivative",
        "solve": "solve an initial-value problem on a grid",
        "delta": "point-mass initial data as an atoms+density measure",
        "validate": "run oracle suites and report pass/fail",
    }
    for command, options in _OPTIONS.items():
        p = sub.add_parser(command, help=helps[command])
        for dest, (typ, _default) in options.items():
            flag = "--" + dest.replace("_", "-")
            if dest == "format":
                p.add_argument(flag, choices=("csv", "json"), default=None)
            elif dest == "kind":
                p.add_argument(flag, choices=DELTA_KINDS, default=None)
            elif dest == "suite":
                p.add_argument(flag, choices=SUITES, default=None)
            elif dest == "init":
                p.add_argument(flag, choices=("gaussian", "file"), default=None)
            else:
                p.add_argument(flag, type=typ, default=None)
    return parser


def _read_config_file(path: str) -> dict:
    """Simple key-value text: `name = value`, '#' comments, blank lines ok."""
    table = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(
                        f"{path}:{lineno}: expected 'name = value', got {raw.strip()!r}")
                name, value = line.split("=", 1)
                table[name.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return table


def merge_config(args: argparse.Namespace) -> RunConfig:
    """Flags override config-file entries override built-in defaults."""
    command = args.command
    options = _OPTIONS[command]
    file_table = {}
    if getattr(args, "config", None):
        file_table = _read_config_file(args.config)
    values = {}
    for dest, (typ, default) in options.items():
        given = getattr(args, dest)
        if given is not None:
            values[dest] = given
        elif dest in file_table:
            try:
                values[dest] = typ(file_table[dest])
            except ValueError as exc:
                raise UsageError(
                    f"config value for {dest!r} is not a valid {typ.__name__}: "
                    f"{file_table[dest]!r}") from exc
        else:
            values[dest] = default
    return RunConfig(command=command, values=values)


def _config_echo(cfg: RunConfig) -> dict:
    echo = {key: val for key, val in cfg.values.items()
            if key not in ("out", "config") and val is not None}
    return echo


def _gaussian_data(cfg: RunConfig, grid: SpaceGrid) -> tuple[SampledField, SampledField]:
    v = cfg.values
    f = from_function(grid, lambda x: np.exp(-((x - v["f_center"]) / v["f_width"]) ** 2))
    if v["g_amp"] == 0.0:
        return f, zeros(grid)
    g = from_function(grid, lambda x: v["g_amp"] * np.exp(
        -((x - v["g_center"]) / v["g_width"]) ** 2))
    return f, g


def _file_data(path: Optional[str]) -> tuple[SampledField, SampledField]:
    if not path:
        raise UsageError("--init file requires --file PATH")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as exc:
        raise UsageError(f"cannot read data file {path}: {exc}") from exc
    rows = []
    for ln in lines:
        if not ln or ln.startswith("#"):
            continue
        parts = [p.strip() for p in ln.split(",")]
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            if not rows:  # tolerate one header row
                continue
            raise UsageError(f"{path}: non-numeric row {ln!r}")
    if len(rows) < 2:
        raise UsageError(f"{path}: need at least two data rows (x,f,g)")
    if any(len(r) != 3 for r in rows):
        raise UsageError(f"{path}: every row must have exactly three columns x,f,g")
    data = np.asarray(rows, dtype=float)
    x = data[:, 0]
    dx = x[1] - x[0]
    if dx <= 0 or np.max(np.abs(np.diff(x) - dx)) > 1e-9 * max(1.0, abs(dx)):
        raise UsageError(f"{path}: x column must be uniformly increasing")
    grid = SpaceGrid(x0=float(x[0]), dx=float(dx), n=len(x))
    return SampledField(grid, data[:, 1]), SampledField(grid, data[:, 2])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_kernel(cfg: RunConfig) -> tuple[dict, list[str], bool]:
    medium = cfg.medium()
    grid = cfg.grid()
    t = cfg.values["t"]
    atoms, _ = time_derivative_parts(t, medium)
    x = grid.points()
    psi_vals = np.atleast_1d(fundamental_solution(x, t, medium))
    dt_vals = np.atleast_1d(time_derivative_regular(x, t, medium))
    atom_list = [{"x": float(p), "w": float(w)}
                 for p, w in zip(atoms.positions, atoms.weights)]
    payload = {
        "command": "kernel",
        "config": _config_echo(cfg),
        "atoms": atom_list,
        "table": {
            "columns": ["x", "kernel_value", "kernel_dt_regular"],
            "rows": [[float(a), float(b), float(d)]
                     for a, b, d in zip(x, psi_vals, dt_vals)],
        },
    }
    csv_lines = [f"# atom,{_fmt(a['x'])},{_fmt(a['w'])}" for a in atom_list]
    csv_lines.append("x,kernel_value,kernel_dt_regular")
    csv_lines += [f"{_fmt(a)},{_fmt(b)},{_fmt(d)}"
                  for a, b, d in zip(x, psi_vals, dt_vals)]
    return payload, csv_lines, True


def cmd_solve(cfg: RunConfig) -> tuple[dict, list[str], bool]:
    medium = cfg.medium()
    if cfg.values["init"] == "file":
        f, g = _file_data(cfg.values["file"])
    else:
        f, g = _gaussian_data(cfg, cfg.grid())
    u = solve(f, g, cfg.values["t"], medium)
    payload = {
        "command": "solve",
        "config": _config_echo(cfg),
        "table": {
            "columns": ["x", "solution"],
            "rows": [[float(a), float(b)] for a, b in zip(u.x, u.values)],
        },
    }
    csv_lines = ["x,solution"]
    csv_lines += [f"{_fmt(a)},{_fmt(b)}" for a, b in zip(u.x, u.values)]
    return payload, csv_lines, True


def cmd_delta(cfg: RunConfig) -> tuple[dict, list[str], bool]:
    medium = cfg.medium()
    t = cfg.values["t"]
    ct = medium.c * t
    v = dict(cfg.values)
    if v["xmin"] is None:
        v["xmin"] = -1.1 * ct
    if v["xmax"] is None:
        v["xmax"] = 1.1 * ct
    grid_cfg = RunConfig(cfg.command, v)
    measure = point_source_solution(v["kind"], t, medium, grid_cfg.grid(),
                                    mass_panels=v["mass_panels"])
    breakdown = measure.mass_breakdown(v["mass_panels"])
    dens = measure.density
    payload = {
        "command": "delta",
        "config": {**_config_echo(cfg), "xmin": v["xmin"], "xmax": v["xmax"]},
        "atoms": [{"x": p, "w": w} for p, w in measure.atoms],
        "density": [{"x": float(a), "v": float(b)}
                    for a, b in zip(dens.x, dens.values)],
        "mass": {"atoms": breakdown.atoms, "density": breakdown.density,
                 "total": breakdown.total},
    }
    csv_lines = [f"# atom,{_fmt(p)},{_fmt(w)}" for p, w in measure.atoms]
    csv_lines += [f"# mass,atoms,{_fmt(breakdown.atoms)}",
                  f"# mass,density,{_fmt(breakdown.density)}",
                  f"# mass,total,{_fmt(breakdown.total)}",
                  "x,density"]
    csv_lines += [f"{_fmt(a)},{_fmt(b)}" for a, b in zip(dens.x, dens.values)]
    return payload, csv_lines, True


def _suite_fd(cfg: RunConfig) -> list[ValidationReport]:
    medium = cfg.medium()
    t = cfg.values["t"]
    dx = cfg.values["dx"]
    half = 8.0
    grid = SpaceGrid(-half, dx, int(round(2 * half / dx)) + 1)
    f = from_function(grid, lambda x: np.exp(-x * x))
    g = zeros(grid)
    reference = solve(f, g, t, medium)
    approx = fd_solve(f, g, t, medium, fd_config_for(t, grid, medium, cfg.values["courant"]))
    tol = cfg.values["tol"] if cfg.values["tol"] is not None else 1e-3
    return [ValidationReport("fd_vs_convolution", "rel_L2",
                             rel_l2_error(approx, reference), tol)]


def _suite_walk(cfg: RunConfig) -> list[ValidationReport]:
    medium = cfg.medium()
    t = cfg.values["t"]
    walk_cfg = walk_config_for(medium, cfg.values["dt_walk"], t,
                               cfg.values["n_walkers"], cfg.values["seed"],
                               first_step="symmetric")
    estimate = simulate_walk(walk_cfg)
    ct = medium.c * t
    ref_grid = SpaceGrid(-1.25 * ct, 2.5 * ct / 4096, 4097)
    reference = point_source_solution("delta_position", t, medium, ref_grid)
    tol = cfg.values["tol"] if cfg.values["tol"] is not None else 0.02
    reports = [ValidationReport("walk_vs_point_source", "TV_distance",
                                binned_tv_distance(estimate, reference), tol)]
    frac = sum(w for _, w in estimate.atoms)
    expect = expected_never_flip(walk_cfg)
    sigma = math.sqrt(max(expect * (1 - expect), 1e-300) / walk_cfg.n_walkers)
    reports.append(ValidationReport("never_flipped_fraction", "atom_error",
                                    abs(frac - expect), 3 * sigma))
    return reports


def _suite_duhamel(cfg: RunConfig) -> list[ValidationReport]:
    medium = cfg.medium()
    t = cfg.values["t"]
    dx = max(cfg.values["dx"], 1.0 / 256)
    half = max(6.0, 2 * medium.c * t + 4.0)
    grid = SpaceGrid(-half, dx, int(round(2 * half / dx)) + 1)
    f = from_function(grid, lambda x: np.exp(-x * x))
    g = zeros(grid)
    residual = duhamel_residual(f, g, t, medium,
                                DuhamelConfig(n_slabs=cfg.values["slabs"]))
    tol = cfg.values["tol"] if cfg.values["tol"] is not None else 1e-4
    return [ValidationReport("duhamel_fixed_point", "max_abs", residual, tol)]


def _suite_semigroup(cfg: RunConfig) -> list[ValidationReport]:
    medium = cfg.medium()
    t = cfg.values["t"]
    dx = max(cfg.values["dx"], 1.0 / 256)
    half = 8.0
    grid = SpaceGrid(-half, dx, int(round(2 * half / dx)) + 1)
    f = from_function(grid, lambda x: np.exp(-x * x))
    state = StatePair(f, zeros(grid))
    whole = evolve(2 * t, state, medium)
    composed = evolve(t, evolve(t, state, medium), medium)
    window = (-half + 2 * medium.c * t, half - 2 * medium.c * t)
    tol = cfg.values["tol"] if cfg.values["tol"] is not None else 1e-5
    return [
        ValidationReport("composition_u", "rel_L2",
                         rel_l2_error(composed.u, whole.u, window), tol),
        ValidationReport("composition_ut", "rel_L2",
                         rel_l2_error(composed.ut, whole.ut, window), tol),
    ]


def cmd_validate(cfg: RunConfig) -> tuple[dict, list[str], bool]:
    suite = cfg.values["suite"]
    runners = {"fd": _suite_fd, "walk": _suite_walk,
               "duhamel": _suite_duhamel, "semigroup": _suite_semigroup}
    names = list(runners) if suite == "all" else [suite]
    reports: list[ValidationReport] = []
    for name in names:
        reports.extend(runners[name](cfg))
    payload = {
        "command": "validate",
        "config": _config_echo(cfg),
        "reports": [{"name": r.name, "metric": r.metric, "value": r.value,
                     "tolerance": r.tolerance, "pass": r.passed}
                    for r in reports],
    }
    csv_lines = ["name,metric,value,tolerance,pass"]
    csv_lines += [f"{r.name},{r.metric},{_fmt(r.value)},{_fmt(r.tolerance)},"
                  f"{'true' if r.passed else 'false'}" for r in reports]
    return payload, csv_lines, all(r.passed for r in reports)


def main(argv=None) -> int:
    threads = os.environ.get("TELEGRAPH_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        print(f"error: TELEGRAPH_THREADS must be a positive integer, "
              f"got {threads!r}", file=sys.stderr)
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args)
        runner = {"kernel": cmd_kernel, "solve": cmd_solve,
                  "delta": cmd_delta, "validate": cmd_validate}[cfg.command]
        payload, csv_lines, ok = runner(cfg)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    # validate always emits JSON (machine-readable reports)
    if cfg.command == "validate" or cfg.values.get("format") == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = "\n".join(csv_lines) + "\n"
    out_path = cfg.values.get("out")
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
            return 2
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # downstream consumer (head, etc.) closed the pipe; not our error
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())
    return 0 if ok else 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
