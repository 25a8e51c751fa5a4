"""Command-line surface: simulate, surface, forecast, selfcheck.

Exit codes: 0 on success, 1 on usage or parse errors, 2 when a
selfcheck deviation exceeds tolerance. All numeric output uses 17
significant digits and fixed row order, so output files are
byte-identical across runs and thread counts.
"""

from __future__ import annotations

import os
import sys

import click
import numpy as np

from .closed_form import e2_closed, e3_closed, en_series, v1_closed
from .engine import distribution, evolve_history, expectation
from .families import DomainError, WalkFamily, WalkSpec
from .forecast import (
    GridSpec,
    Rule,
    Series,
    evaluate_v,
    parameter_grid,
    rolling_forecast,
    _v_over_grid,
)
from .path_oracle import DEFAULT_CAP, oracle_distribution
from .series_io import SeriesFormatError, fmt, parse_angle, read_series

_FAMILY_CHOICES = [f.value for f in WalkFamily]
_PARAM_NAMES = {
    WalkFamily.TWO_STATE_1D: ("theta", "xi"),
    WalkFamily.THREE_STATE_1D: ("theta1", "phi1", "phi2"),
    WalkFamily.FOUR_STATE_2D: ("theta1", "phi1", "phi2", "phi3"),
}


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("QWFORECAST_THREADS", "1")))
    except ValueError:
        return 1


def _angle(value: str | None) -> float | None:
    if value is None:
        return None
    try:
        return parse_angle(value)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None


def _build_spec(family: WalkFamily, theta, theta1, xi, phases) -> WalkSpec:
    try:
        if family is WalkFamily.TWO_STATE_1D:
            if phases:
                raise click.ClickException("--phase applies only to the 3- and 4-state families")
            if xi is None:
                raise click.ClickException("the two-state family needs --xi")
            if (theta is None) == (theta1 is None):
                raise click.ClickException("give exactly one of --theta (angle) or --theta1 (raw)")
            if theta is not None:
                return WalkSpec.from_angles(theta, xi)
            return WalkSpec.from_raw(family, theta1, [xi])
        if theta is not None or xi is not None:
            raise click.ClickException("--theta/--xi apply only to the two-state family")
        if theta1 is None:
            raise click.ClickException(f"{family.value} needs --theta1")
        need = family.n_init_params
        if len(phases) != need:
            raise click.ClickException(f"{family.value} needs exactly {need} --phase values")
        return WalkSpec.from_raw(family, theta1, list(phases))
    except DomainError as exc:
        raise click.ClickException(str(exc)) from None


@click.group()
def cli():
    """Quantum-walk time-series forecasting toolkit."""


@cli.command()
@click.option("--family", type=click.Choice(_FAMILY_CHOICES), default="two-state-1d")
@click.option("--theta", default=None, help="Coin angle in [0, pi/2] (two-state family).")
@click.option("--theta1", default=None, help="Raw coin parameter in [0, 1].")
@click.option("--xi", default=None, help="Initial-state angle in [0, pi/2] (two-state family).")
@click.option("--phase", "phases", multiple=True,
              help="Initial-state phase in [0, 2pi]; repeat per parameter.")
@click.option("--steps", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def simulate(family, theta, theta1, xi, phases, steps, out):
    """Evolve one walk and write its site distributions for t = 0..steps."""
    fam = WalkFamily(family)
    if steps < 0:
        raise click.ClickException(f"steps must be nonnegative, got {steps}")
    spec = _build_spec(
        fam, _angle(theta), _angle(theta1), _angle(xi), tuple(_angle(p) for p in phases)
    )
    history = evolve_history(spec, steps)
    lines = ["t,x1,mu" if fam.lattice_dim == 1 else "t,x1,x2,mu"]
    for field in history:
        dist = distribution(field)
        xs = dist.positions
        if fam.lattice_dim == 1:
            for i, x in enumerate(xs):
                if dist.mass[i] > 0.0:
                    lines.append(f"{field.time},{x},{fmt(dist.mass[i])}")
        else:
            for i, x1 in enumerate(xs):
                for j, x2 in enumerate(xs):
                    if dist.mass[i, j] > 0.0:
                        lines.append(f"{field.time},{x1},{x2},{fmt(dist.mass[i, j])}")
    _write(out, lines)
    return 0


def _write(path: str, lines: list[str]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from None


def _read_series_or_fail(path: str) -> np.ndarray:
    try:
        return read_series(path)
    except (SeriesFormatError, OSError) as exc:
        raise click.ClickException(f"{path}: {exc}") from None


@cli.command()
@click.argument("series_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--family", type=click.Choice(_FAMILY_CHOICES), default="two-state-1d")
@click.option("--n", type=int, required=True, help="Fit horizon; needs data up to time n.")
@click.option("--res", "resolutions", multiple=True, type=int,
              help="Grid points per parameter axis; repeat per axis.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--threads", type=int, default=None)
def surface(series_file, family, n, resolutions, out, threads):
    """Evaluate the objective V_n on the full parameter grid."""
    fam = WalkFamily(family)
    raw = _read_series_or_fail(series_file)
    series = Series.from_raw(raw)
    if n < 0 or n > series.last_time:
        raise click.ClickException(
            f"n must lie in [0, {series.last_time}] for this series, got {n}"
        )
    grid = GridSpec(tuple(resolutions)) if resolutions else GridSpec.default_for(fam)
    threads = threads if threads is not None else _default_threads()
    try:
        params = parameter_grid(fam, grid)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    if fam.lattice_dim != series.d:
        raise click.ClickException(
            f"series dimension {series.d} does not match family {fam.value}"
        )
    v = _v_over_grid(series.values[: n + 1], fam, params, n, threads)
    names = _PARAM_NAMES[fam]
    lines = [",".join(names) + ",V"]
    for row, val in zip(params, v):
        lines.append(",".join(fmt(p) for p in row) + "," + fmt(val))
    v_min, v_max = float(v.min()), float(v.max())
    if (v_max - v_min) < 1e-9 * max(1.0, abs(v_max)):
        lines.append("# constant")
    else:
        mask = v <= v_min + 1e-9 * max(1.0, abs(v_min))
        for row, val in zip(params[mask], v[mask]):
            lines.append("# argmin," + ",".join(fmt(p) for p in row) + "," + fmt(val))
    _write(out, lines)
    return 0


def _load_config(path: str) -> dict[str, str]:
    cfg = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            if "=" not in body:
                raise click.ClickException(f"{path} line {lineno}: expected 'key = value'")
            key, value = body.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


@cli.command()
@click.argument("series_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--family", type=click.Choice(_FAMILY_CHOICES), default=None)
@click.option("--res", "resolutions", multiple=True, type=int)
@click.option("--scale", type=float, default=None)
@click.option("--tie-rel", type=float, default=None)
@click.option("--const-rel", type=float, default=None)
@click.option("--refine/--no-refine", default=None)
@click.option("--threads", type=int, default=None)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def forecast(series_file, family, resolutions, scale, tie_rel, const_rel,
             refine, threads, config, out):
    """Rolling one-step forecast; the last row is out of sample."""
    cfg = _load_config(config) if config else {}
    family = family or cfg.get("family", "two-state-1d")
    if not resolutions and "resolutions" in cfg:
        resolutions = tuple(int(r) for r in cfg["resolutions"].split(","))
    scale = scale if scale is not None else float(cfg.get("scale", 1.0))
    tie_rel = tie_rel if tie_rel is not None else float(cfg.get("tie_rel", 1e-9))
    const_rel = const_rel if const_rel is not None else float(cfg.get("const_rel", 1e-9))
    if refine is None:
        refine = cfg.get("refine", "false").lower() in ("1", "true", "yes", "on")
    if threads is None:
        threads = int(cfg["threads"]) if "threads" in cfg else _default_threads()
    out = out or cfg.get("out")
    if out is None:
        raise click.ClickException("an output path is required (--out or config 'out')")
    if tie_rel <= 0 or const_rel <= 0:
        raise click.ClickException("tolerances must be positive")

    fam = WalkFamily(family)
    raw = _read_series_or_fail(series_file)
    try:
        series = Series.from_raw(raw, scale=scale)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    if fam.lattice_dim != series.d:
        raise click.ClickException(
            f"series dimension {series.d} does not match family {fam.value}"
        )
    grid = GridSpec(tuple(resolutions)) if resolutions else GridSpec.default_for(fam)
    try:
        trace = rolling_forecast(
            series, fam, grid,
            tie_rel=tie_rel, const_rel=const_rel, threads=threads, refine=refine,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None

    d = series.d
    true_cols = ["x_true"] if d == 1 else [f"x_true{k}" for k in (1, 2)]
    star_cols = ["x_star"] if d == 1 else [f"x_star{k}" for k in (1, 2)]
    lines = [",".join(["t", *true_cols, *star_cols, "rule", "v_min", "n_argmin"])]
    for step in trace.steps:
        t = step.time
        if t <= series.last_time:
            truth = [fmt(v) for v in series.to_raw(series.values[t])]
        else:
            truth = [""] * d
        stars = [fmt(v) for v in step.value]
        lines.append(
            ",".join(
                [str(t), *truth, *stars, step.rule.value, fmt(step.v_min),
                 str(step.argmin_params.shape[0])]
            )
        )
    _write(out, lines)
    return 0


@cli.command()
@click.option("--steps", type=int, default=8, help="Max walk length for the oracle check.")
@click.option("--trials", type=int, default=100)
@click.option("--seed", type=int, default=42)
def selfcheck(steps, trials, seed):
    """Cross-check the engine against the path oracle and closed forms."""
    if steps > DEFAULT_CAP:
        raise click.ClickException(
            f"steps={steps} exceeds the oracle cap of {DEFAULT_CAP}"
        )
    if steps < 0 or trials < 0:
        raise click.ClickException("steps and trials must be nonnegative")
    rng = np.random.default_rng(seed)
    failures = []
    max_oracle = 0.0
    max_closed = 0.0
    for _ in range(trials):
        theta, xi = rng.uniform(0.0, np.pi / 2, size=2)
        spec = WalkSpec.from_angles(theta, xi)
        u = spec.coin_matrix()
        phi = spec.initial_state()
        history = evolve_history(spec, steps)
        for n in range(steps + 1):
            dev = float(
                np.max(np.abs(distribution(history[n]).mass - oracle_distribution(u, phi, n).mass))
            )
            max_oracle = max(max_oracle, dev)
            if dev > 1e-12:
                failures.append(f"oracle: theta={theta!r} xi={xi!r} n={n} dev={dev:.3e}")
        x1 = rng.normal()
        series = Series.from_raw([0.0, x1])
        dev = abs(evaluate_v(series, spec, 1) - v1_closed(x1, theta, xi))
        max_closed = max(max_closed, dev)
        if dev > 1e-9:
            failures.append(f"v1: theta={theta!r} xi={xi!r} dev={dev:.3e}")
        th = min(theta, np.pi / 2 - 0.01)
        spec_s = WalkSpec.from_angles(th, xi)
        hist = evolve_history(spec_s, max(3, min(steps, 10)))
        for n, ref in ((2, e2_closed(th, xi)), (3, e3_closed(th, xi))):
            dev = abs(float(expectation(distribution(hist[n]))[0]) - ref)
            max_closed = max(max_closed, dev)
            if dev > 1e-9:
                failures.append(f"e{n}: theta={th!r} xi={xi!r} dev={dev:.3e}")
        for n in range(2, len(hist)):
            dev = abs(float(expectation(distribution(hist[n]))[0]) - en_series(th, xi, n))
            max_closed = max(max_closed, dev)
            if dev > 1e-9:
                failures.append(f"series n={n}: theta={th!r} xi={xi!r} dev={dev:.3e}")
    click.echo(f"engine vs oracle:       max deviation {max_oracle:.3e} over {trials} trials, n <= {steps}")
    click.echo(f"engine vs closed form:  max deviation {max_closed:.3e}")
    if failures:
        for f in failures:
            click.echo(f"FAIL {f}", err=True)
        click.echo(f"selfcheck FAILED ({len(failures)} deviations over tolerance)", err=True)
        return 2
    click.echo("selfcheck passed")
    return 0


def main(argv=None) -> int:
    """Entry point with the documented exit-code contract."""
    try:
        rv = cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    return rv if isinstance(rv, int) else 0


def run():  # console-script hook
    sys.exit(main())
