"""JSON scenario configs: schema validation and assembly of the synthesis problem."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .beam_targets import BEAM_KINDS, BeamSpec, CutSpec, cut_targets, response_matrix, target_weight
from .array_response import DERIVATIVE_VARIABLES
from .geometry import ArrayGeometry, planar_array, spherical_to_cartesian, wavelength
from .lookup_tables import BUILTIN_IDS, LookupTable, TableError, TableParseError, builtin_table, load_table
from .synthesis import SCALE_MODES, SolverOptions, SynthesisResult, synthesize_cuts, synthesize_full


class ConfigError(ValueError):
    pass


_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_RANGE = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3,
          "description": "[start, stop, step] in degrees, stop inclusive"}

SCHEMA = {
    "type": "object",
    "required": ["frequency_hz", "tx", "beam"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "frequency_hz": {"type": "number", "exclusiveMinimum": 0},
        "ris_center": _POINT,
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "spacing_wavelengths": {"type": "number", "exclusiveMinimum": 0},
        "tx": _POINT,
        "beam": {
            "type": "object",
            "required": ["kind", "desired_points"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": list(BEAM_KINDS)},
                "desired_points": {"type": "array", "items": _POINT, "minItems": 1},
                "derivative_var": {"enum": list(DERIVATIVE_VARIABLES)},
            },
        },
        "table_id": {"enum": list(BUILTIN_IDS)},
        "table_levels": {"type": "integer", "minimum": 2},
        "table_amplitude": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "table_path": {"type": "string"},
        "cuts": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "reference_points": {"type": "array", "items": _POINT, "minItems": 1},
                "step_deg": {"type": "number", "exclusiveMinimum": 0, "maximum": 90},
                "rho_set_m": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0},
                              "minItems": 1},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"theta_deg": _RANGE, "phi_deg": _RANGE,
                           "rho_m": {"type": "number", "exclusiveMinimum": 0}},
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["cuts", "full"]},
                "beta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "max_iterations": {"type": "integer", "minimum": 1},
                "rel_tolerance": {"type": "number", "exclusiveMinimum": 0},
                "conjugate_scaling": {"type": "boolean"},
                "scale_mode": {"enum": list(SCALE_MODES)},
                "seed": {"type": "integer"},
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"prefix": {"type": "string", "minLength": 1}},
        },
    },
    "oneOf": [{"required": ["table_id"], "not": {"required": ["table_path"]}},
              {"required": ["table_path"], "not": {"required": ["table_id"]}}],
}


def _field_path(error) -> str:
    parts = [str(p) for p in error.absolute_path]
    return ".".join(parts) if parts else "<root>"


def validate_config(data: dict) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(e.absolute_path), e.message))
    if not errors:
        return
    err = jsonschema.exceptions.best_match(errors)
    if err.validator == "oneOf" and not err.absolute_path:
        raise ConfigError("<root>: exactly one of table_id or table_path must be given")
    bounds = ""
    if err.validator in ("exclusiveMinimum", "exclusiveMaximum", "minimum", "maximum"):
        schema = err.schema
        lo = schema.get("exclusiveMinimum", schema.get("minimum"))
        hi = schema.get("exclusiveMaximum", schema.get("maximum"))
        lo_b = "(" if "exclusiveMinimum" in schema else "["
        hi_b = ")" if "exclusiveMaximum" in schema else "]"
        bounds = f" (allowed range {lo_b}{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}{hi_b})"
    raise ConfigError(f"{_field_path(err)}: {err.message}{bounds}")


def bundled_scenarios() -> list[str]:
    root = resources.files("risbeam").joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_config_path(ref) -> Path:
    """A filesystem path, or the name of a bundled scenario."""
    path = Path(ref)
    if path.exists():
        return path
    name = path.name[:-5] if path.name.endswith(".json") else path.name
    if name in bundled_scenarios():
        return Path(str(resources.files("risbeam").joinpath("scenarios", name + ".json")))
    raise FileNotFoundError(f"config file not found: {ref}")


@dataclass
class Scenario:
    name: str
    frequency_hz: float
    ris_center: np.ndarray
    rows: int
    cols: int
    spacing_wavelengths: float
    tx: np.ndarray
    beam: BeamSpec
    table: LookupTable
    cut_reference_points: np.ndarray
    cut_step_deg: float
    cut_rho_set: list | None
    grid_theta_deg: tuple
    grid_phi_deg: tuple
    grid_rho: float | None
    method: str
    solver: SolverOptions
    prefix: str

    @property
    def wavelength(self) -> float:
        return wavelength(self.frequency_hz)

    def geometry(self) -> ArrayGeometry:
        lam = self.wavelength
        return planar_array(self.rows, self.cols, self.spacing_wavelengths * lam, self.ris_center, lam)

    def cut_spec(self) -> CutSpec:
        return CutSpec.default(self.cut_reference_points, self.cut_step_deg, self.cut_rho_set,
                               origin=self.ris_center)

    def grid_axes(self):
        """Theta and phi grid axes in radians."""
        return tuple(np.deg2rad(inclusive_range(*r)) for r in (self.grid_theta_deg, self.grid_phi_deg))

    def grid_radius(self) -> float:
        if self.grid_rho is not None:
            return self.grid_rho
        return float(np.linalg.norm(self.beam.desired_points[0] - self.ris_center))


def inclusive_range(start, stop, step):
    if step <= 0 or stop < start:
        raise ConfigError(f"grid range [{start}, {stop}, {step}] is empty")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def scenario_from_dict(data: dict, base_dir: Path | None = None, seed: int | None = None) -> Scenario:
    validate_config(data)
    base_dir = base_dir or Path.cwd()
    if "table_path" in data:
        path = Path(data["table_path"])
        if not path.is_absolute():
            path = base_dir / path
        try:
            table = load_table(path)
        except TableParseError:
            raise
        except TableError as exc:
            raise ConfigError(f"table_path: {exc}") from None
    else:
        table_id = data["table_id"]
        levels = data.get("table_levels")
        if table_id in ("UNIT", "SUNIT2") and levels is None:
            raise ConfigError(f"table_levels: required for table_id {table_id}")
        table = builtin_table(table_id, levels, data.get("table_amplitude", 1.0))
    beam_cfg = data["beam"]
    try:
        beam = BeamSpec(beam_cfg["kind"], beam_cfg["desired_points"], data["tx"],
                        beam_cfg.get("derivative_var", "phi"))
    except ValueError as exc:
        raise ConfigError(f"beam: {exc}") from None
    cuts = data.get("cuts", {})
    grid = data.get("grid", {})
    solver_cfg = dict(data.get("solver", {}))
    method = solver_cfg.pop("method", "cuts")
    if seed is not None:
        solver_cfg["seed"] = seed
    name = data.get("name", "scenario")
    return Scenario(
        name=name,
        frequency_hz=float(data["frequency_hz"]),
        ris_center=np.asarray(data.get("ris_center", [0.0, 0.0, 0.0]), dtype=float),
        rows=data.get("rows", 32),
        cols=data.get("cols", 32),
        spacing_wavelengths=float(data.get("spacing_wavelengths", 0.5)),
        tx=np.asarray(data["tx"], dtype=float),
        beam=beam,
        table=table,
        cut_reference_points=np.asarray(cuts.get("reference_points", beam_cfg["desired_points"]), dtype=float),
        cut_step_deg=float(cuts.get("step_deg", 0.5)),
        cut_rho_set=cuts.get("rho_set_m"),
        grid_theta_deg=tuple(grid.get("theta_deg", (0.0, 180.0, 1.0))),
        grid_phi_deg=tuple(grid.get("phi_deg", (-90.0, 90.0, 1.0))),
        grid_rho=grid.get("rho_m"),
        method=method,
        solver=SolverOptions(**solver_cfg),
        prefix=data.get("outputs", {}).get("prefix", f"out/{name}"),
    )


def load_scenario(ref, seed: int | None = None) -> Scenario:
    path = resolve_config_path(ref)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("<root>: config must be a JSON object")
    return scenario_from_dict(data, base_dir=path.parent, seed=seed)


def build_problem(sc: Scenario):
    """Geometry, unconstrained weight and the (B, g) blocks the solver works on."""
    geom = sc.geometry()
    weight = target_weight(sc.beam, geom)
    if sc.method == "cuts":
        blocks = cut_targets(weight, geom, sc.tx, sc.cut_spec())
        return geom, weight, [(B, t.samples) for B, t in blocks]
    theta, phi = sc.grid_axes()
    rhos = sc.cut_rho_set or [sc.grid_radius()]
    rr, tt, pp = np.meshgrid(rhos, theta, phi, indexing="ij")
    pts = spherical_to_cartesian(rr.ravel(), tt.ravel(), pp.ravel(), sc.ris_center)
    B = response_matrix(geom, sc.tx, pts)
    return geom, weight, [(B, B @ weight)]


def run_scenario(sc: Scenario) -> tuple[ArrayGeometry, np.ndarray, SynthesisResult]:
    geom, weight, blocks = build_problem(sc)
    if sc.method == "full":
        (B, g), = blocks
        return geom, weight, synthesize_full(B, g, sc.table, sc.solver)
    return geom, weight, synthesize_cuts(blocks, sc.table, sc.solver)
