"""Command-line front end: ``risbeam synthesize|evaluate|project|tables``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import export
from .geometry import cartesian_to_spherical
from .lookup_tables import BUILTIN_IDS, TableError, TableParseError, builtin_table, format_table, project, project_indices
from .pattern_eval import evaluate_cut, evaluate_grid, metrics
from .scenario import ConfigError, inclusive_range, load_scenario, run_scenario
from .synthesis import SolverError
from .validation import resolve_table

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4
EXIT_INFEASIBLE = 5

log = logging.getLogger("risbeam")


class FeasibilityError(Exception):
    def __init__(self, indices):
        self.indices = indices
        super().__init__(f"{len(indices)} omega entries are not table members: elements {indices}")


def _prefix(args, default: str) -> str:
    prefix = args.out_prefix or default
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    return prefix


def _write_cut(prefix, suffix, cut, title):
    csv_path = f"{prefix}_cut_{suffix}.csv"
    export.write_cut(csv_path, cut)
    Path(f"{prefix}_cut_{suffix}.gp").write_text(
        export.cut_plot_script(Path(csv_path).name, cut.coordinate, title))
    return csv_path


def cmd_synthesize(args) -> int:
    sc = load_scenario(args.config, seed=args.seed)
    prefix = _prefix(args, sc.prefix)
    log.info("synthesizing %s: %d elements, table %s (%d entries), method %s",
             sc.name, sc.rows * sc.cols, sc.table.name, len(sc.table), sc.method)
    try:
        geom, _, result = run_scenario(sc)
    except (SolverError, np.linalg.LinAlgError) as exc:
        raise SolverError(str(exc)) from exc
    log.info("objective %.6g after %d iterations (converged=%s)",
             result.objective, result.iterations_run, result.converged)
    export.write_omega(f"{prefix}_omega.csv", result.omega, result.table_indices)
    export.write_trace(f"{prefix}_trace.csv", result.objective_trace, result.scale_trace)
    cut = sc.cut_spec()
    axes = {"rho": cut.rho_set, "theta": cut.theta_set, "phi": cut.phi_set}
    phi_cut = None
    for i, ref in enumerate(cut.reference_points):
        for coord, values in axes.items():
            c = evaluate_cut(result.omega, geom, sc.tx, ref, coord, values)
            suffix = coord if i == 0 else f"{coord}_ref{i + 1}"
            _write_cut(prefix, suffix, c, f"{sc.name}: {coord} cut, reference {i + 1}")
            if i == 0 and coord == "phi":
                phi_cut = c
    m = metrics(phi_cut, desired=cut.reference_points[0].phi)
    export.write_json(f"{prefix}_metrics.json", export.metrics_dict(m, "phi"))
    log.info("peak %.3f dB at phi=%.2f deg", m.peak_db, np.rad2deg(m.peak_location[0]))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    sc = load_scenario(args.config, seed=args.seed)
    omega = export.read_omega(args.omega)
    geom = sc.geometry()
    if omega.size != geom.n_elements:
        raise ConfigError(f"omega: {omega.size} values for a {geom.n_elements}-element array")
    if args.check_feasible:
        bad = np.flatnonzero(~sc.table.contains(omega))
        if bad.size:
            raise FeasibilityError(bad.tolist())
    if args.grid_step is not None:
        sc.grid_theta_deg = (sc.grid_theta_deg[0], sc.grid_theta_deg[1], args.grid_step)
        sc.grid_phi_deg = (sc.grid_phi_deg[0], sc.grid_phi_deg[1], args.grid_step)
    if args.rho is not None:
        sc.grid_rho = args.rho
    theta_deg = inclusive_range(*sc.grid_theta_deg)
    phi_deg = inclusive_range(*sc.grid_phi_deg)
    prefix = _prefix(args, sc.prefix + "_eval")
    grid = evaluate_grid(omega, geom, sc.tx, sc.grid_radius(), np.deg2rad(theta_deg), np.deg2rad(phi_deg))
    csv_path = f"{prefix}_grid.csv"
    export.write_grid(csv_path, grid, theta_deg, phi_deg)
    Path(f"{prefix}_grid.gp").write_text(export.grid_plot_script(Path(csv_path).name, sc.name))
    des = cartesian_to_spherical(sc.beam.desired_points[0], sc.ris_center)
    m = metrics(grid, desired=(des.theta, des.phi))
    export.write_json(f"{prefix}_metrics.json", export.metrics_dict(m, "theta_phi"))
    log.info("grid peak %.3f dB, secondary %.3f dB", m.peak_db, m.secondary_peak_db)
    return EXIT_OK


def cmd_project(args) -> int:
    try:
        table = resolve_table(args.table, args.levels)
    except TableParseError:
        raise
    except TableError as exc:
        raise ConfigError(f"table: {exc}") from None
    values = export.read_omega(args.input)
    out = args.output or f"{_prefix(args, 'out/projected')}_omega.csv"
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    projected = project(values, table)
    export.write_omega(out, projected, project_indices(projected, table))
    log.info("projected %d values onto %s -> %s", values.size, table.name, out)
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.action == "list":
        for tid in BUILTIN_IDS:
            size = "levels" if tid in ("UNIT", "SUNIT2") else str(len(builtin_table(tid)))
            print(f"{tid}\t{size}")
        return EXIT_OK
    if args.id is None:
        raise ConfigError("tables show: a table id is required")
    try:
        table = builtin_table(args.id, args.levels)
    except TableError as exc:
        raise ConfigError(str(exc)) from None
    sys.stdout.write(format_table(table))
    return EXIT_OK


def _add_globals(p, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=default, help="scenario JSON file or bundled scenario name")
    p.add_argument("--out-prefix", default=default, help="output path prefix")
    p.add_argument("--seed", type=int, default=default, help="override solver.seed")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="risbeam", description=__doc__)
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="optimize a configuration for a scenario")
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_synthesize, needs_config=True)

    p = sub.add_parser("evaluate", help="evaluate a configuration on a theta/phi grid")
    _add_globals(p, suppress=True)
    p.add_argument("--omega", required=True, help="omega CSV (m,re,im,table_index)")
    p.add_argument("--check-feasible", action="store_true", help="require every entry to be in the table")
    p.add_argument("--grid-step", type=float, help="theta/phi grid step in degrees")
    p.add_argument("--rho", type=float, help="grid radius in meters (default: first desired point)")
    p.set_defaults(func=cmd_evaluate, needs_config=True)

    p = sub.add_parser("project", help="project complex values onto a lookup table")
    _add_globals(p, suppress=True)
    p.add_argument("--input", required=True)
    p.add_argument("--table", required=True, help="built-in id or table CSV path")
    p.add_argument("--levels", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_project, needs_config=False)

    p = sub.add_parser("tables", help="list or show built-in tables")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("id", nargs="?")
    p.add_argument("--levels", type=int)
    p.set_defaults(func=cmd_tables, needs_config=False)
    return parser


def _configure_logging(quiet: bool) -> None:
    # own handler on the package logger; leaves the root logger untouched
    for h in [h for h in log.handlers if getattr(h, "_risbeam_cli", False)]:
        log.removeHandler(h)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    handler._risbeam_cli = True
    log.addHandler(handler)
    log.setLevel(logging.WARNING if quiet else logging.INFO)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.quiet)
    try:
        if args.needs_config and not args.config:
            raise ConfigError("--config is required")
        return args.func(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except FeasibilityError as exc:
        log.error("%s", exc)
        return EXIT_INFEASIBLE
    except SolverError as exc:
        log.error("solver error: %s", exc)
        return EXIT_SOLVER
    except (OSError, export.ParseError, TableParseError) as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("solver error: %s", exc)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
