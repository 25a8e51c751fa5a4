import math

import numpy as np
import pytest

from qwforecast.series_io import SeriesFormatError, fmt, parse_angle, read_series


def write(tmp_path, text):
    p = tmp_path / "series.csv"
    p.write_text(text)
    return str(p)


def test_read_one_dimensional(tmp_path):
    path = write(tmp_path, "t,x1\n0,0\n1,2.5\n2,-1\n")
    np.testing.assert_array_equal(read_series(path), [[0.0], [2.5], [-1.0]])


def test_read_two_dimensional(tmp_path):
    path = write(tmp_path, "t,x1,x2\n0,0,0\n1,1.5,-2\n")
    np.testing.assert_array_equal(read_series(path), [[0, 0], [1.5, -2]])


@pytest.mark.parametrize(
    "text,line",
    [
        ("x1,t\n0,0\n", 1),
        ("t,x1\n0,0\n2,1\n", 3),
        ("t,x1\n0,zero\n", 2),
        ("t,x1\n0,0\n1,1,9\n", 3),
        ("t,x1,x3\n0,0,0\n", 1),
        ("t,x1\n", 2),
    ],
)
def test_malformed_files_name_the_line(tmp_path, text, line):
    path = write(tmp_path, text)
    with pytest.raises(SeriesFormatError, match=f"line {line}"):
        read_series(path)


@pytest.mark.parametrize(
    "text,want",
    [
        ("pi/4", math.pi / 4),
        ("pi", math.pi),
        ("3pi/8", 3 * math.pi / 8),
        ("2pi/3", 2 * math.pi / 3),
        ("0.5", 0.5),
        ("1.25e-1", 0.125),
        ("0", 0.0),
    ],
)
def test_parse_angle(text, want):
    assert parse_angle(text) == pytest.approx(want, abs=1e-15)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ValueError):
        parse_angle("pie/4")


def test_fmt_round_trips_doubles():
    for v in (0.5, 1 / 3, math.pi, 1e-17, 123456.789):
        assert float(fmt(v)) == v
