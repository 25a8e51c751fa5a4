"""Series file parsing, angle literals, and numeric formatting."""

from __future__ import annotations

import csv
import math
import re

import numpy as np

__all__ = ["SeriesFormatError", "read_series", "parse_angle", "fmt"]


class SeriesFormatError(ValueError):
    """Malformed series file; message carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


_ANGLE_RE = re.compile(r"^(-)?(\d+(?:\.\d+)?)?\s*pi\s*(?:/\s*(\d+(?:\.\d+)?))?$")


def parse_angle(text: str) -> float:
    """Parse a radian value, either decimal or a pi-rational like '3pi/8'."""
    s = text.strip().lower()
    m = _ANGLE_RE.match(s)
    if m:
        sign = -1.0 if m.group(1) else 1.0
        coef = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        return sign * coef * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}; use decimal radians or 'Npi/M'") from None


def fmt(v: float) -> str:
    """Fixed 17-significant-digit formatting for byte-stable output files."""
    return f"{float(v):.17g}"


def read_series(path: str) -> np.ndarray:
    """Read a delimited series file into a (length, d) float array.

    Expected layout: header row with columns ``t, x1[, x2]``; ``t``
    starts at 0 and increases by 1 with no gaps.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesFormatError(1, "empty file, expected a header row") from None
        cols = [c.strip().lower() for c in header]
        if not cols or cols[0] != "t":
            raise SeriesFormatError(1, f"first column must be 't', got {header!r}")
        d = len(cols) - 1
        if d not in (1, 2) or cols[1:] != [f"x{k}" for k in range(1, d + 1)]:
            raise SeriesFormatError(
                1, f"value columns must be x1[, x2], got {header[1:]!r}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != d + 1:
                raise SeriesFormatError(lineno, f"expected {d + 1} fields, got {len(row)}")
            try:
                t = int(row[0])
            except ValueError:
                raise SeriesFormatError(lineno, f"bad time index {row[0]!r}") from None
            if t != len(rows):
                raise SeriesFormatError(
                    lineno, f"time index must increase by 1 from 0, got {t}"
                )
            try:
                rows.append([float(c) for c in row[1:]])
            except ValueError:
                raise SeriesFormatError(lineno, f"bad numeric value in {row[1:]!r}") from None
    if not rows:
        raise SeriesFormatError(2, "no data rows")
    return np.array(rows, dtype=float)
