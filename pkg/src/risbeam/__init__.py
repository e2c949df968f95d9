"""Lookup-table constrained RIS beam pattern synthesis."""
from .array_response import DERIVATIVE_VARIABLES, cascade, cascade_derivative, steering
from .beam_targets import (BeamSpec, CutSpec, TargetPattern, cut_points, cut_targets, response_matrix,
                           sample_pattern, target_weight)
from .estimators import LookupBeamSynthesizer, LookupProjector
from .geometry import (SPEED_OF_LIGHT, ArrayGeometry, DegeneratePointError, SphericalPoint,
                       cartesian_to_spherical, planar_array, spherical_to_cartesian, wavelength)
from .lookup_tables import LookupTable, TableError, builtin_table, load_table, project, save_table
from .pattern_eval import (PatternCut, PatternGrid, PatternMetrics, evaluate, evaluate_cut, evaluate_grid,
                           metrics, to_db)
from .synthesis import (SolverOptions, SynthesisResult, gradient_step, largest_eigenvalue, optimal_scale,
                        synthesize_cuts, synthesize_full)

__version__ = "0.1.0"
