"""Reading angle samples from delimited text files."""

from dataclasses import dataclass
import math

import numpy as np

from .special import normalize_angle

UNITS = ("radians", "degrees", "hours24")


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSpec:
    path: str
    unit: str = "radians"
    delimiter: str = ","
    column: int = 0

    def __post_init__(self):
        if self.unit not in UNITS:
            raise DataError(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.column < 0:
            raise DataError("column index must be nonnegative")


@dataclass(frozen=True)
class Ingested:
    angles: np.ndarray
    skipped: int
    raw: np.ndarray


def to_radians(values, unit):
    """Convert raw values to angles in [-pi, pi).

    Clock times (``hours24``) must lie in [0, 24); midnight maps to 0 and
    noon to -pi.
    """
    v = np.asarray(values, dtype=float)
    if unit == "degrees":
        v = np.deg2rad(v)
    elif unit == "hours24":
        bad = (v < 0) | (v >= 24)
        if bad.any():
            raise DataError(f"hours24 value {v[bad][0]!r} outside [0, 24)")
        v = 2.0 * math.pi * v / 24.0
    return normalize_angle(v)


def parse_lines(lines, delimiter=",", column=0):
    """Values of one column, skipping blank and ``#`` comment lines.

    A first line that does not parse is treated as a header.
    """
    values = []
    skipped = 0
    first = True
    for i, line in enumerate(lines):
        text = line.strip()
        if not text or text.startswith("#"):
            skipped += 1
            continue
        header_allowed, first = first, False
        fields = text.split(delimiter) if delimiter else text.split()
        if column >= len(fields):
            raise DataError(f"line {i + 1}: no column {column}")
        try:
            x = float(fields[column])
        except ValueError:
            if header_allowed:
                skipped += 1
                continue
            raise DataError(f"line {i + 1}: cannot parse {fields[column]!r}") from None
        if not math.isfinite(x):
            raise DataError(f"line {i + 1}: non-finite value")
        values.append(x)
    if not values:
        raise DataError("no parsable values")
    return np.array(values), skipped


def ingest(spec):
    try:
        with open(spec.path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataError(f"cannot read {spec.path}: {exc.strerror or exc}") from exc
    raw, skipped = parse_lines(lines, spec.delimiter, spec.column)
    return Ingested(to_radians(raw, spec.unit), skipped, raw)


def format_angles(angles):
    """One value per line, 17 significant digits, LF terminated."""
    return "".join("%.17g\n" % a for a in np.asarray(angles, dtype=float))
