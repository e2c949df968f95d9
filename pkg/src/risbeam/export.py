"""CSV / JSON writers and readers for configurations, traces, cuts and grids.

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back and writing it again reproduces it byte for byte.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .pattern_eval import PatternCut, PatternGrid, PatternMetrics


class ParseError(ValueError):
    pass


def _num(x) -> str:
    return repr(float(x))


def _write_rows(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue())


def _read_rows(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError(f"{path}: file is empty")
    return rows[0], rows[1:]


def write_omega(path, omega, indices) -> None:
    _write_rows(path, ["m", "re", "im", "table_index"],
                ([m, _num(w.real), _num(w.imag), int(i)] for m, (w, i) in enumerate(zip(omega, indices))))


def read_omega(path) -> np.ndarray:
    """Complex values from an omega CSV, or from headerless/``re,im`` two-column CSV."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError(f"{path}: no values found")
    header = [h.strip() for h in rows[0]]
    if "re" in header and "im" in header:
        ire, iim = header.index("re"), header.index("im")
        body = rows[1:]
    else:
        ire, iim = 0, 1
        body = rows
    values = []
    for lineno, row in enumerate(body, start=2 if body is not rows else 1):
        try:
            values.append(complex(float(row[ire]), float(row[iim])))
        except (ValueError, IndexError):
            raise ParseError(f"{path}: line {lineno}: cannot parse {','.join(row)!r}") from None
    if not values:
        raise ParseError(f"{path}: no values found")
    return np.asarray(values)


def write_trace(path, objectives, scales) -> None:
    _write_rows(path, ["iter", "objective", "s_re", "s_im"],
                ([r, _num(o), _num(s.real), _num(s.imag)] for r, (o, s) in enumerate(zip(objectives, scales))))


def cut_label(coordinate: str) -> str:
    return "rho_m" if coordinate == "rho" else f"{coordinate}_deg"


def cut_export_axis(cut: PatternCut) -> np.ndarray:
    return cut.axis if cut.coordinate == "rho" else np.rad2deg(cut.axis)


def write_cut(path, cut: PatternCut) -> None:
    axis = cut_export_axis(cut)
    db = cut.magnitude_db
    _write_rows(path, [cut_label(cut.coordinate), "mag_db", "re", "im"],
                ([_num(a), _num(d), _num(z.real), _num(z.imag)]
                 for a, d, z in zip(axis, db, cut.complex_samples)))


def read_cut(path) -> PatternCut:
    header, body = _read_rows(path)
    coordinate = header[0].rsplit("_", 1)[0]
    data = np.array([[float(v) for v in row] for row in body])
    axis = data[:, 0] if coordinate == "rho" else np.deg2rad(data[:, 0])
    return PatternCut(coordinate, axis, data[:, 2] + 1j * data[:, 3])


def write_grid(path, grid: PatternGrid, theta_deg=None, phi_deg=None) -> None:
    theta_deg = np.rad2deg(grid.theta_axis) if theta_deg is None else theta_deg
    phi_deg = np.rad2deg(grid.phi_axis) if phi_deg is None else phi_deg
    db = grid.magnitude_db
    _write_rows(path, ["theta_deg", "phi_deg", "mag_db"],
                ([_num(t), _num(p), _num(db[i, j])]
                 for i, t in enumerate(theta_deg) for j, p in enumerate(phi_deg)))


def read_grid(path):
    """Return (theta_deg axis, phi_deg axis, mag_db matrix) from a grid CSV."""
    _, body = _read_rows(path)
    data = np.array([[float(v) for v in row] for row in body])
    theta = np.unique(data[:, 0])
    phi = np.unique(data[:, 1])
    return theta, phi, data[:, 2].reshape(len(theta), len(phi))


def metrics_dict(m: PatternMetrics, coordinate: str) -> dict:
    """Flat JSON-ready metrics; angle locations in degrees, undefined lobes as null."""
    def loc(values):
        if values is None:
            return None
        return [float(v) if coordinate == "rho" else float(np.rad2deg(v)) for v in values]

    secondary = m.secondary_peak_db if math.isfinite(m.secondary_peak_db) else None
    return {
        "coordinate": coordinate,
        "peak_db": m.peak_db,
        "peak_location": loc(m.peak_location),
        "secondary_peak_db": secondary,
        "secondary_peak_location": loc(m.secondary_peak_location),
        "null_depth_db": m.null_depth_db,
    }


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2, allow_nan=False) + "\n")


def cut_plot_script(csv_name: str, coordinate: str, title: str) -> str:
    unit = "m" if coordinate == "rho" else "deg"
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{coordinate} ({unit})'\n"
        "set ylabel '|G| (dB)'\n"
        f"set title '{title}'\n"
        "set grid\n"
        "set terminal pngcairo size 900,600\n"
        f"set output '{csv_name[:-4]}.png'\n"
        f"plot '{csv_name}' using 1:2 with lines lw 2\n"
    )


def grid_plot_script(csv_name: str, title: str) -> str:
    return (
        "set datafile separator ','\n"
        "set xlabel 'phi (deg)'\n"
        "set ylabel 'theta (deg)'\n"
        "set cblabel '|G| (dB)'\n"
        f"set title '{title}'\n"
        "set view map\n"
        "set terminal pngcairo size 900,700\n"
        f"set output '{csv_name[:-4]}.png'\n"
        f"plot '{csv_name}' every ::1 using 2:1:3 with image notitle\n"
    )


INT_COLUMNS = frozenset({"m", "iter", "table_index"})


def read_table_csv(path):
    """Header and numeric columns of any CSV written by this module."""
    header, body = _read_rows(path)
    cols = {name: [] for name in header}
    for row in body:
        for name, value in zip(header, row):
            cols[name].append(int(value) if name in INT_COLUMNS else float(value))
    return header, cols


def write_table_csv(path, header, cols) -> None:
    n = len(cols[header[0]])
    _write_rows(path, header, ([cols[h][i] if h in INT_COLUMNS else _num(cols[h][i]) for h in header]
                               for i in range(n)))
