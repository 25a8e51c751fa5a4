import numpy as np
import pytest

from qwforecast.cli import main
from qwforecast.closed_form import v1_closed


def run(argv):
    return main(argv)


def write_series(tmp_path, values, name="series.csv"):
    p = tmp_path / name
    lines = ["t,x1"] + [f"{t},{v}" for t, v in enumerate(values)]
    p.write_text("\n".join(lines) + "\n")
    return str(p)


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [l.split(",") for l in lines[1:] if not l.startswith("#")]


def test_simulate_hadamard_single_step(tmp_path):
    out = tmp_path / "dist.csv"
    rc = run(["simulate", "--theta", "pi/4", "--xi", "pi/4", "--steps", "1",
              "--out", str(out)])
    assert rc == 0
    header, rows = read_rows(out)
    assert header == ["t", "x1", "mu"]
    assert [r[:2] for r in rows] == [["0", "0"], ["1", "-1"], ["1", "1"]]
    np.testing.assert_allclose([float(r[2]) for r in rows], [1.0, 0.5, 0.5], atol=1e-12)


def test_simulate_zero_steps(tmp_path):
    out = tmp_path / "dist.csv"
    assert run(["simulate", "--theta", "0", "--xi", "0", "--steps", "0", "--out", str(out)]) == 0
    _, rows = read_rows(out)
    assert rows == [["0", "0", "1"]]


def test_simulate_deterministic_left_drift(tmp_path):
    out = tmp_path / "dist.csv"
    assert run(["simulate", "--theta", "0", "--xi", "0", "--steps", "5", "--out", str(out)]) == 0
    _, rows = read_rows(out)
    assert [r[:2] for r in rows] == [[str(t), str(-t)] for t in range(6)]
    assert all(float(r[2]) == 1.0 for r in rows)


def test_simulate_round_trip_mass(tmp_path):
    out = tmp_path / "dist.csv"
    assert run(["simulate", "--theta1", "0.61", "--xi", "0.8", "--steps", "9",
                "--out", str(out)]) == 0
    _, rows = read_rows(out)
    mass = {}
    for t, x, mu in rows:
        mass[int(t)] = mass.get(int(t), 0.0) + float(mu)
    for t in range(10):
        assert mass[t] == pytest.approx(1.0, abs=1e-9)


def test_simulate_two_dimensional(tmp_path):
    out = tmp_path / "dist.csv"
    assert run(["simulate", "--family", "four-state-2d", "--theta1", "0.5",
                "--phase", "0", "--phase", "0", "--phase", "0",
                "--steps", "1", "--out", str(out)]) == 0
    header, rows = read_rows(out)
    assert header == ["t", "x1", "x2", "mu"]
    t1 = [r for r in rows if r[0] == "1"]
    assert [(r[1], r[2]) for r in t1] == [("-1", "0"), ("0", "-1"), ("0", "1"), ("1", "0")]


def test_simulate_usage_errors(tmp_path):
    out = str(tmp_path / "x.csv")
    assert run(["simulate", "--theta", "0.2", "--steps", "1", "--out", out]) == 1
    assert run(["simulate", "--theta", "0.2", "--theta1", "0.5", "--xi", "0",
                "--steps", "1", "--out", out]) == 1
    assert run(["simulate", "--theta", "2.0", "--xi", "0", "--steps", "1", "--out", out]) == 1


def test_surface_matches_v1(tmp_path):
    series = write_series(tmp_path, [0.0, 1.5])
    out = tmp_path / "surface.csv"
    assert run(["surface", series, "--n", "1", "--res", "9", "--res", "9",
                "--out", str(out)]) == 0
    header, rows = read_rows(out)
    assert header == ["theta", "xi", "V"]
    assert len(rows) == 81
    for theta, xi, v in ((float(a), float(b), float(c)) for a, b, c in rows):
        assert v == pytest.approx(v1_closed(1.5, theta, xi), abs=1e-12)
    footer = [l for l in out.read_text().splitlines() if l.startswith("# argmin")]
    assert len(footer) == 2


def test_surface_flat_cases(tmp_path):
    series = write_series(tmp_path, [0.0, 0.0])
    out = tmp_path / "surface.csv"
    assert run(["surface", series, "--n", "1", "--res", "5", "--res", "5",
                "--out", str(out)]) == 0
    _, rows = read_rows(out)
    assert all(float(r[2]) == pytest.approx(1.0, abs=1e-12) for r in rows)
    assert "# constant" in out.read_text()

    single = write_series(tmp_path, [0.0], name="single.csv")
    out0 = tmp_path / "surface0.csv"
    assert run(["surface", single, "--n", "0", "--res", "5", "--res", "5",
                "--out", str(out0)]) == 0
    _, rows0 = read_rows(out0)
    assert all(float(r[2]) == 0.0 for r in rows0)


def test_surface_n_out_of_range(tmp_path):
    series = write_series(tmp_path, [0.0, 1.0])
    assert run(["surface", series, "--n", "3", "--out", str(tmp_path / "s.csv")]) == 1


def test_forecast_two_point_series(tmp_path):
    series = write_series(tmp_path, [0.0, 7.0])
    out = tmp_path / "trace.csv"
    assert run(["forecast", series, "--res", "17", "--res", "17", "--out", str(out)]) == 0
    header, rows = read_rows(out)
    assert header == ["t", "x_true", "x_star", "rule", "v_min", "n_argmin"]
    assert rows[0][:4] == ["1", "7", "0", "ConstantV"]
    assert rows[1][0] == "2" and rows[1][1] == ""
    assert float(rows[1][2]) == pytest.approx(1.0, abs=1e-9)
    assert rows[1][3] == "TieAverage" and rows[1][5] == "2"


def test_forecast_single_point(tmp_path):
    series = write_series(tmp_path, [0.0])
    out = tmp_path / "trace.csv"
    assert run(["forecast", series, "--out", str(out)]) == 0
    _, rows = read_rows(out)
    assert len(rows) == 1
    assert rows[0][0] == "1" and rows[0][1] == "" and float(rows[0][2]) == 0.0


def test_forecast_negative_step(tmp_path):
    series = write_series(tmp_path, [0.0, -2.0])
    out = tmp_path / "trace.csv"
    assert run(["forecast", series, "--res", "17", "--res", "17", "--out", str(out)]) == 0
    _, rows = read_rows(out)
    assert float(rows[-1][2]) == pytest.approx(-1.0, abs=1e-9)


def test_forecast_deterministic_across_threads(tmp_path):
    series = write_series(tmp_path, [0.0, 1.2, -0.7, 0.4, 2.0])
    out1, out4 = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["forecast", series, "--res", "13", "--res", "13"]
    assert run(base + ["--threads", "1", "--out", str(out1)]) == 0
    assert run(base + ["--threads", "4", "--out", str(out4)]) == 0
    assert out1.read_bytes() == out4.read_bytes()


def test_forecast_config_file_with_flag_override(tmp_path):
    series = write_series(tmp_path, [0.0, 7.0])
    out = tmp_path / "trace.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "family = two-state-1d\nresolutions = 17,17\nscale = 1.0\n"
        f"out = {tmp_path / 'ignored.csv'}\n# comment\n"
    )
    assert run(["forecast", series, "--config", str(cfg), "--out", str(out)]) == 0
    assert out.exists() and not (tmp_path / "ignored.csv").exists()
    _, rows = read_rows(out)
    assert float(rows[-1][2]) == pytest.approx(1.0, abs=1e-9)


def test_forecast_malformed_series(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x1\n0,0\n5,1\n")
    rc = run(["forecast", str(bad), "--out", str(tmp_path / "t.csv")])
    assert rc == 1


def test_selfcheck_passes_small():
    assert run(["selfcheck", "--steps", "5", "--trials", "5", "--seed", "42"]) == 0


def test_selfcheck_refuses_over_cap():
    assert run(["selfcheck", "--steps", "13"]) == 1


def test_selfcheck_vacuous():
    assert run(["selfcheck", "--steps", "3", "--trials", "0"]) == 0
