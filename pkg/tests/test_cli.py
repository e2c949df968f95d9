import json
import logging

import numpy as np
import pytest

from risbeam import cli, export
from risbeam.lookup_tables import builtin_table
from risbeam.pattern_eval import PatternGrid, metrics

SMALL = {
    "name": "small",
    "frequency_hz": 5.15e9,
    "rows": 8,
    "cols": 8,
    "tx": [5, 5, 0],
    "beam": {"kind": "directional", "desired_points": [[2, 3, 2]]},
    "table_id": "K2",
    "cuts": {"step_deg": 1.0},
    "grid": {"theta_deg": [0, 180, 3], "phi_deg": [-90, 90, 3]},
    "solver": {"method": "cuts", "scale_mode": "stacked"},
}


def write_config(tmp_path, **overrides):
    data = json.loads(json.dumps(SMALL))
    for key, value in overrides.items():
        data[key] = value
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return path


def run(*argv):
    return cli.main(["--quiet", *map(str, argv)])


@pytest.fixture
def synthesized(tmp_path):
    cfg = write_config(tmp_path)
    prefix = tmp_path / "out" / "s"
    assert run("synthesize", "--config", cfg, "--out-prefix", prefix) == 0
    return cfg, prefix


def test_synthesize_outputs(synthesized):
    _, prefix = synthesized
    for suffix in ("_omega.csv", "_trace.csv", "_cut_rho.csv", "_cut_theta.csv", "_cut_phi.csv",
                   "_cut_phi.gp", "_metrics.json"):
        assert (prefix.parent / (prefix.name + suffix)).exists(), suffix
    header = (prefix.parent / "s_omega.csv").read_text().splitlines()[0]
    assert header == "m,re,im,table_index"
    assert (prefix.parent / "s_trace.csv").read_text().startswith("iter,objective,s_re,s_im\n")
    omega = export.read_omega(f"{prefix}_omega.csv")
    assert builtin_table("K2").contains(omega).all()


def test_metrics_agree_with_cut_csv(synthesized):
    _, prefix = synthesized
    saved = json.loads((prefix.parent / "s_metrics.json").read_text())
    cut = export.read_cut(f"{prefix}_cut_phi.csv")
    m = metrics(cut)
    assert saved["peak_db"] == pytest.approx(m.peak_db, abs=1e-9)
    assert saved["secondary_peak_db"] == pytest.approx(m.secondary_peak_db, abs=1e-9)
    assert saved["peak_location"][0] == pytest.approx(np.rad2deg(m.peak_location[0]), abs=1e-9)


def test_evaluate_grid_and_metrics(synthesized, tmp_path):
    cfg, prefix = synthesized
    eprefix = tmp_path / "out" / "e"
    assert run("evaluate", "--config", cfg, "--omega", f"{prefix}_omega.csv",
               "--check-feasible", "--out-prefix", eprefix) == 0
    theta, phi, db = export.read_grid(f"{eprefix}_grid.csv")
    lines = (tmp_path / "out" / "e_grid.csv").read_text().splitlines()
    assert lines[0] == "theta_deg,phi_deg,mag_db"
    assert lines[1].startswith("0.0,-90.0,") and lines[2].startswith("0.0,-87.0,")
    grid = PatternGrid(np.deg2rad(theta), np.deg2rad(phi), (10 ** (db / 20)).astype(complex))
    saved = json.loads((tmp_path / "out" / "e_metrics.json").read_text())
    m = metrics(grid)
    assert saved["peak_db"] == pytest.approx(m.peak_db, abs=1e-9)
    assert saved["secondary_peak_db"] == pytest.approx(m.secondary_peak_db, abs=1e-9)
    assert (tmp_path / "out" / "e_grid.gp").exists()


def test_csv_roundtrip_bytes(synthesized, tmp_path):
    _, prefix = synthesized
    for path in sorted(prefix.parent.glob("*.csv")):
        header, cols = export.read_table_csv(path)
        copy = tmp_path / ("copy_" + path.name)
        export.write_table_csv(copy, header, cols)
        assert copy.read_bytes() == path.read_bytes(), path.name


def test_determinism(tmp_path):
    cfg = write_config(tmp_path)
    for tag in ("a", "b"):
        assert run("synthesize", "--config", cfg, "--out-prefix", tmp_path / tag / "r", "--seed", 3) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_bad_beta_exit_code(tmp_path, caplog):
    cfg = write_config(tmp_path, solver={"method": "cuts", "beta": 1.5})
    with caplog.at_level(logging.ERROR, logger="risbeam"):
        assert run("synthesize", "--config", cfg) == 2
    assert "solver.beta" in caplog.text and "(0, 1)" in caplog.text


def test_config_field_errors(tmp_path, caplog):
    cfg = write_config(tmp_path, rows=0)
    with caplog.at_level(logging.ERROR, logger="risbeam"):
        assert run("synthesize", "--config", cfg) == 2
    assert "rows" in caplog.text
    cfg.write_text("{not json")
    assert run("synthesize", "--config", cfg) == 2
    assert run("synthesize") == 2


def test_io_errors(tmp_path):
    assert run("synthesize", "--config", tmp_path / "missing.json") == 4
    bad = tmp_path / "bad.csv"
    bad.write_text("m,re,im\nx\n")
    assert run("project", "--input", bad, "--table", "K1") == 4
    cfg = write_config(tmp_path)
    assert run("evaluate", "--config", cfg, "--omega", tmp_path / "none.csv") == 4


def test_infeasible_omega_exit_code(tmp_path, caplog):
    cfg = write_config(tmp_path)
    omega = np.full(64, 0.891250938133746 + 0j)
    omega[[3, 17]] = 0.5
    path = tmp_path / "w.csv"
    export.write_omega(path, omega, np.zeros(64, dtype=int))
    with caplog.at_level(logging.ERROR, logger="risbeam"):
        assert run("evaluate", "--config", cfg, "--omega", path, "--check-feasible",
                   "--out-prefix", tmp_path / "e") == 5
    assert "[3, 17]" in caplog.text
    assert run("evaluate", "--config", cfg, "--omega", path, "--out-prefix", tmp_path / "e") == 0


def test_project_k1_and_idempotence(tmp_path):
    rng = np.random.default_rng(50)
    raw = tmp_path / "raw.csv"
    raw.write_text("re,im\n" + "".join(f"{a!r},{b!r}\n" for a, b in rng.standard_normal((16, 2)).tolist()))
    first, second = tmp_path / "p1.csv", tmp_path / "p2.csv"
    assert run("project", "--input", raw, "--table", "K1", "--output", first) == 0
    values = export.read_omega(first)
    assert set(values.tolist()) <= {0.891250938133746, -0.891250938133746}
    assert run("project", "--input", first, "--table", "K1", "--output", second) == 0
    assert first.read_bytes() == second.read_bytes()


def test_project_table_errors(tmp_path):
    raw = tmp_path / "raw.csv"
    raw.write_text("1.0,0.0\n")
    assert run("project", "--input", raw, "--table", "UNIT", "--output", tmp_path / "o.csv") == 2
    assert run("project", "--input", raw, "--table", tmp_path / "nope.csv", "--output", tmp_path / "o.csv") == 4


def test_tables_commands(capsys):
    assert run("tables", "list") == 0
    listed = capsys.readouterr().out
    for tid in ("V", "K1", "K2", "UNIT", "SUNIT2"):
        assert tid in listed
    assert run("tables", "show", "K1") == 0
    assert capsys.readouterr().out == "re,im\n0.891250938133746,0.0\n-0.891250938133746,0.0\n"
    assert run("tables", "show") == 2
    assert run("tables", "show", "SUNIT2", "--levels", "4") == 0
    assert len(capsys.readouterr().out.splitlines()) == 5


@pytest.mark.slow
def test_shipped_examples(tmp_path):
    values = {}
    for name in ("directional_v", "directional_unit", "directional_k1", "directional_k2"):
        prefix = tmp_path / name
        assert run("synthesize", "--config", name, "--out-prefix", prefix) == 0
        assert run("evaluate", "--config", name, "--omega", f"{prefix}_omega.csv", "--check-feasible",
                   "--out-prefix", f"{prefix}_eval") == 0
        values[name] = (json.loads((tmp_path / f"{name}_metrics.json").read_text()),
                        json.loads((tmp_path / f"{name}_eval_metrics.json").read_text()))
    assert 52.0 <= values["directional_v"][0]["peak_db"] <= 58.0
    assert values["directional_unit"][0]["peak_db"] == pytest.approx(60.2, abs=0.3)
    # desired point [2, 3, 2]: theta = atan2(3, 2), phi = asin(2 / sqrt(17))
    peak_theta, peak_phi = values["directional_unit"][1]["peak_location"]
    assert peak_theta == pytest.approx(np.rad2deg(np.arctan2(3, 2)), abs=1.0)
    assert peak_phi == pytest.approx(np.rad2deg(np.arcsin(2 / np.sqrt(17))), abs=1.0)
    delta = values["directional_k2"][1]["peak_db"] - values["directional_k1"][1]["peak_db"]
    assert delta == pytest.approx(3.0, abs=1.5)
