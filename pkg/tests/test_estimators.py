import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from risbeam import LookupBeamSynthesizer, LookupProjector
from risbeam.lookup_tables import builtin_table, save_table
from risbeam.synthesis import synthesize_cuts, synthesize_full, SolverOptions


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_params_roundtrip():
    est = LookupBeamSynthesizer(table="UNIT", levels=8, beta=0.3)
    params = est.get_params()
    assert params["table"] == "UNIT" and params["levels"] == 8 and params["beta"] == 0.3
    est.set_params(beta=0.2, scale_mode="stacked")
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "omega_")


def test_fit_matches_solver():
    rng = np.random.default_rng(40)
    B, g = crandn(rng, 12, 5), crandn(rng, 12)
    est = LookupBeamSynthesizer(table="K2").fit(B, g)
    ref = synthesize_full(B, g, builtin_table("K2"))
    np.testing.assert_array_equal(est.omega_, ref.omega)
    assert est.scale_ == ref.s and est.n_iter_ == ref.iterations_run
    np.testing.assert_allclose(est.predict(B), ref.s * (B @ ref.omega))
    assert est.score(B, g) == pytest.approx(-ref.objective, rel=1e-12)
    np.testing.assert_array_equal(est.table_.coefficients[est.table_indices_], est.omega_)


def test_groups_run_cut_solver():
    rng = np.random.default_rng(41)
    B, g = crandn(rng, 12, 5), crandn(rng, 12)
    groups = np.array(["b"] * 4 + ["a"] * 8)
    est = LookupBeamSynthesizer(table="V", scale_mode="stacked").fit(B, g, groups=groups)
    ref = synthesize_cuts([(B[:4], g[:4]), (B[4:], g[4:])], builtin_table("V"),
                          SolverOptions(scale_mode="stacked"))
    np.testing.assert_array_equal(est.omega_, ref.omega)
    with pytest.raises(ValueError, match="groups"):
        est.fit(B, g, groups=groups[:3])


def test_table_from_path(tmp_path):
    path = tmp_path / "t.csv"
    save_table(builtin_table("K1"), path)
    rng = np.random.default_rng(42)
    est = LookupBeamSynthesizer(table=str(path)).fit(crandn(rng, 6, 3), crandn(rng, 6))
    assert set(est.omega_.tolist()) <= set(builtin_table("K1").coefficients.tolist())


def test_input_validation():
    est = LookupBeamSynthesizer()
    with pytest.raises(NotFittedError):
        est.predict(np.ones((2, 2)))
    with pytest.raises(ValueError, match="rows"):
        est.fit(np.ones((3, 2)), np.ones(4))
    with pytest.raises(ValueError, match="NaN"):
        est.fit(np.array([[np.nan, 1.0]]), np.ones(1))
    with pytest.raises(TypeError):
        est.fit(np.array([["a", "b"]]), np.ones(1))
    with pytest.raises(ValueError, match="beta"):
        LookupBeamSynthesizer(beta=2.0).fit(np.ones((2, 2)), np.ones(2))
    fitted = LookupBeamSynthesizer(table="K1").fit(np.eye(2), np.ones(2))
    with pytest.raises(ValueError, match="columns"):
        fitted.pattern(np.ones((2, 3)))


def test_projector():
    proj = LookupProjector(table="K1").fit()
    out = proj.transform([[0.2 + 3j, -0.1], [5.0, -7.0j]])
    assert out.shape == (2, 2)
    assert out.tolist() == [[0.891250938133746, -0.891250938133746],
                            [0.891250938133746, 0.891250938133746]]
    assert proj.transform_indices([-0.3]).tolist() == [1]
    np.testing.assert_array_equal(proj.fit_transform([0.1j, -1]), proj.transform([0.1j, -1]))
    with pytest.raises(NotFittedError):
        LookupProjector().transform([1.0])
