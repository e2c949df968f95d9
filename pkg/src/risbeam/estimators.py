"""scikit-learn style wrappers around the solver and the table projection."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .lookup_tables import project, project_indices
from .synthesis import SolverOptions, synthesize_cuts, synthesize_full
from .validation import check_complex_array, check_is_fitted, check_response_problem, resolve_table


class LookupBeamSynthesizer(BaseEstimator):
    """Fit a lookup-table RIS configuration to a complex target pattern.

    ``fit(B, g)`` takes the response matrix (rows ``b^T(p_k, tx)``) and the
    target samples. Passing ``groups`` splits the rows into cuts and runs the
    reduced-complexity solver, one block per distinct group label in order
    of first appearance.

    Attributes
    ----------
    omega_ : ndarray of shape (M,)
    scale_ : complex
    objective_ : float
    objective_trace_ : ndarray
    table_ : LookupTable
    table_indices_ : ndarray of int
    n_iter_ : int
    converged_ : bool
    """

    def __init__(self, table="V", levels=None, beta=0.5, max_iterations=200, rel_tolerance=1e-6,
                 conjugate_scaling=True, scale_mode="printed", seed=0):
        self.table = table
        self.levels = levels
        self.beta = beta
        self.max_iterations = max_iterations
        self.rel_tolerance = rel_tolerance
        self.conjugate_scaling = conjugate_scaling
        self.scale_mode = scale_mode
        self.seed = seed

    def _options(self) -> SolverOptions:
        return SolverOptions(beta=self.beta, max_iterations=self.max_iterations,
                             rel_tolerance=self.rel_tolerance, conjugate_scaling=self.conjugate_scaling,
                             seed=self.seed, scale_mode=self.scale_mode)

    def fit(self, B, g, groups=None):
        B, g = check_response_problem(B, g)
        table = resolve_table(self.table, self.levels)
        opts = self._options()
        if groups is None:
            result = synthesize_full(B, g, table, opts)
        else:
            groups = np.asarray(groups)
            if groups.shape != (B.shape[0],):
                raise ValueError("groups must have one label per row of B")
            _, first = np.unique(groups, return_index=True)
            labels = groups[np.sort(first)]
            pairs = [(B[groups == lab], g[groups == lab]) for lab in labels]
            result = synthesize_cuts(pairs, table, opts)
        self.table_ = table
        self.omega_ = result.omega
        self.scale_ = result.s
        self.objective_ = result.objective
        self.objective_trace_ = result.objective_trace
        self.table_indices_ = result.table_indices
        self.n_iter_ = result.iterations_run
        self.converged_ = result.converged
        self.result_ = result
        return self

    def pattern(self, B) -> np.ndarray:
        """Realized (unscaled) pattern ``B omega``."""
        check_is_fitted(self, "omega_")
        B = check_complex_array(B, 2, "B")
        if B.shape[1] != self.omega_.size:
            raise ValueError(f"B has {B.shape[1]} columns, expected {self.omega_.size}")
        return B @ self.omega_

    def predict(self, B) -> np.ndarray:
        """Scaled approximation ``s B omega`` of the target."""
        pattern = self.pattern(B)
        return self.scale_ * pattern

    def score(self, B, g) -> float:
        """Negative squared residual, so that larger is better."""
        B, g = check_response_problem(B, g)
        r = g - self.predict(B)
        return -float(np.vdot(r, r).real)


class LookupProjector(TransformerMixin, BaseEstimator):
    """Map complex coefficients to their nearest lookup-table entries."""

    def __init__(self, table="V", levels=None):
        self.table = table
        self.levels = levels

    def fit(self, X=None, y=None):
        self.table_ = resolve_table(self.table, self.levels)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "table_")
        X = np.asarray(X)
        check_complex_array(X.reshape(-1), 1, "X")
        return project(X, self.table_)

    def transform_indices(self, X) -> np.ndarray:
        check_is_fitted(self, "table_")
        return project_indices(X, self.table_)
