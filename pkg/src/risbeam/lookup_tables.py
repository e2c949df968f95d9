"""Finite sets of realizable reflection coefficients and projection onto them."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

MODULUS_TOLERANCE = 1e-9
K_AMPLITUDE = 0.891250938133746

# (real, imag) pairs of the measured 14-state prototype element response
SET_V = (
    (0.705881663503301, 0.454874816836335),
    (0.614312562634405, 0.531271558748285),
    (0.475934107814557, 0.506942448025792),
    (0.312209976375841, 0.42259048294233),
    (0.111822453204272, 0.312651838583432),
    (-0.0913794808614622, -0.0208313626559627),
    (0.135183293840408, -0.446930997789427),
    (0.457051113855161, -0.537546263774266),
    (0.646418002339778, -0.46806616159338),
    (0.830757906262032, -0.357145071975791),
    (0.881458766139799, -0.254203355481816),
    (0.924391111031014, -0.207693362330688),
    (0.926939342567385, -0.162193617949656),
    (0.943816578371453, -0.114314640581941),
)

BUILTIN_IDS = ("V", "K1", "K2", "UNIT", "SUNIT2")
_ASSET_FILES = {"V": "set_v.csv", "K1": "set_k1.csv", "K2": "set_k2.csv"}


class TableError(ValueError):
    """Invalid lookup table contents or identifier."""


class TableParseError(TableError):
    """A table file could not be read as coefficient pairs."""


@dataclass(frozen=True, eq=False)
class LookupTable:
    name: str
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex).ravel().copy()
        if c.size == 0:
            raise TableError(f"table {self.name!r} is empty")
        if not np.all(np.isfinite(c)):
            raise TableError(f"table {self.name!r} has non-finite entries")
        bad = np.flatnonzero(np.abs(c) > 1 + MODULUS_TOLERANCE)
        if bad.size:
            raise TableError(f"table {self.name!r}: entry {bad[0]} has modulus {abs(c[bad[0]]):.12g} > 1")
        if np.unique(c).size != c.size:
            raise TableError(f"table {self.name!r} has duplicate entries")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __len__(self):
        return self.coefficients.size

    def __eq__(self, other):
        if not isinstance(other, LookupTable):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    def contains(self, values) -> np.ndarray:
        """Elementwise exact membership test."""
        return np.isin(np.asarray(values, dtype=complex), self.coefficients)

    def index_of(self, values) -> np.ndarray:
        """Table index of each value; raises if any value is not an exact member."""
        values = np.atleast_1d(np.asarray(values, dtype=complex))
        hit = values[:, None] == self.coefficients[None, :]
        missing = np.flatnonzero(~hit.any(axis=1))
        if missing.size:
            raise TableError(f"values at positions {missing.tolist()} are not members of table {self.name!r}")
        return hit.argmax(axis=1)


def _uniform_phases(levels: int) -> np.ndarray:
    if int(levels) != levels or levels < 2:
        raise TableError(f"levels must be an integer >= 2, got {levels}")
    return 2 * np.pi * np.arange(int(levels)) / int(levels)


def builtin_table(table_id: str, levels: int | None = None, amplitude: float = 1.0) -> LookupTable:
    """Return one of the shipped tables.

    ``V``, ``K1`` and ``K2`` are the measured/prototype sets. ``UNIT`` is
    ``levels`` uniformly spaced unit-modulus phases and ``SUNIT2`` is the
    scaled-shifted circle ``0.5 (1 + exp(j psi))``; ``amplitude`` rescales
    only these two parametric sets.
    """
    key = str(table_id).upper()
    if key == "V":
        return LookupTable("V", [complex(re, im) for re, im in SET_V])
    if key == "K1":
        return LookupTable("K1", [K_AMPLITUDE, -K_AMPLITUDE])
    if key == "K2":
        return LookupTable("K2", [K_AMPLITUDE, 1j * K_AMPLITUDE, -K_AMPLITUDE, -1j * K_AMPLITUDE])
    if key in ("UNIT", "SUNIT2"):
        if levels is None:
            raise TableError(f"table {key} requires a number of levels")
        psi = _uniform_phases(levels)
        unit = np.cos(psi) + 1j * np.sin(psi)
        values = unit if key == "UNIT" else 0.5 * (1 + unit)
        return LookupTable(f"{key}{int(levels)}", amplitude * values)
    raise TableError(f"unknown table id {table_id!r}; expected one of {BUILTIN_IDS}")


def parse_table(text: str, name: str = "table") -> LookupTable:
    """Parse lookup-table CSV text: optional ``re,im`` header, ``#`` comments."""
    values = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if not values and fields == ["re", "im"]:
            continue
        if len(fields) != 2:
            raise TableParseError(f"{name}: line {lineno}: expected 2 comma-separated values, got {len(fields)}")
        try:
            values.append(complex(float(fields[0]), float(fields[1])))
        except ValueError:
            raise TableParseError(f"{name}: line {lineno}: cannot parse {line!r}") from None
    if not values:
        raise TableError(f"{name}: no coefficients found")
    return LookupTable(name, values)


def load_table(path) -> LookupTable:
    path = Path(path)
    return parse_table(path.read_text(), name=path.stem)


def format_table(table: LookupTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im"])
    for c in table.coefficients:
        writer.writerow([repr(float(c.real)), repr(float(c.imag))])
    return buf.getvalue()


def save_table(table: LookupTable, path) -> None:
    Path(path).write_text(format_table(table))


def asset_table(table_id: str) -> LookupTable:
    """Load one of the shipped CSV assets (``V``, ``K1``, ``K2``)."""
    key = str(table_id).upper()
    if key not in _ASSET_FILES:
        raise TableError(f"no asset file for table {table_id!r}")
    text = resources.files("risbeam").joinpath("tables", _ASSET_FILES[key]).read_text()
    return parse_table(text, name=key)


def project(values, table: LookupTable) -> np.ndarray:
    """Nearest table entry for every input value (lowest index wins ties)."""
    return table.coefficients[project_indices(values, table)]


def project_indices(values, table: LookupTable) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    c = table.coefficients
    dre = v.real[..., None] - c.real
    dim = v.imag[..., None] - c.imag
    # np.argmin returns the first minimum, which is the lowest table index
    return np.argmin(dre * dre + dim * dim, axis=-1)
