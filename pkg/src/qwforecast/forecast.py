"""Grid-search fitting of walk parameters and one-step-ahead forecasting.

The objective V_n accumulates, over t = 0..n, the expected squared
distance between the walker's position at time t and the observed value
x_t. Fitting minimizes V_n over the family's parameter box on a finite
grid; the forecast is the walker's expected position one step past the
data, averaged over all grid minimizers. A flat objective falls back to
repeating the last observation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .engine import batch_mass, evolve_batch, batch_expectation, iterate_states
from .families import (
    WalkFamily,
    WalkSpec,
    build_coin,
    build_coin_angle,
    build_initial_state,
    parameter_bounds,
)

__all__ = [
    "Rule",
    "Series",
    "GridSpec",
    "StepEstimate",
    "ForecastTrace",
    "MinimizeResult",
    "parameter_grid",
    "evaluate_v",
    "minimize_v",
    "estimate_next",
    "rolling_forecast",
]

DEFAULT_TIE_REL = 1e-9
DEFAULT_CONST_REL = 1e-9

_DEFAULT_RESOLUTIONS = {
    WalkFamily.TWO_STATE_1D: (65, 65),
    WalkFamily.THREE_STATE_1D: (17, 9, 9),
    WalkFamily.FOUR_STATE_2D: (9, 9, 9, 9),
}


class Rule(Enum):
    UNIQUE_MIN = "UniqueMin"
    TIE_AVERAGE = "TieAverage"
    CONSTANT_V = "ConstantV"


@dataclass(frozen=True)
class Series:
    """Observed data, anchored so the first value is exactly zero.

    ``values`` are in walk units: (raw - anchor) / scale. ``to_raw``
    converts estimates back to the original units.
    """

    values: np.ndarray  # (N+1, d)
    anchor: np.ndarray  # (d,)
    scale: float = 1.0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.values.ndim != 2 or self.values.shape[0] < 1:
            raise ValueError("series must contain at least one d-vector")
        if np.any(self.values[0] != 0.0):
            raise ValueError("anchored series must start at the zero vector")

    @classmethod
    def from_raw(cls, raw, scale: float = 1.0) -> "Series":
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        raw = np.asarray(raw, dtype=float)
        if raw.ndim == 1:
            raw = raw[:, None]
        if raw.ndim != 2 or raw.shape[0] < 1:
            raise ValueError("series must be a (length, d) array with length >= 1")
        anchor = raw[0].copy()
        return cls((raw - anchor) / scale, anchor, float(scale))

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def last_time(self) -> int:
        return self.values.shape[0] - 1

    def to_raw(self, v: np.ndarray) -> np.ndarray:
        return self.anchor + self.scale * np.asarray(v, dtype=float)


@dataclass(frozen=True)
class GridSpec:
    """Per-axis point counts for the search grid; endpoints always included."""

    resolutions: tuple[int, ...]

    def __post_init__(self):
        if any(r < 2 for r in self.resolutions):
            raise ValueError("each grid resolution must be >= 2 so endpoints are present")

    @classmethod
    def default_for(cls, family: WalkFamily) -> "GridSpec":
        return cls(_DEFAULT_RESOLUTIONS[family])


@dataclass(frozen=True)
class StepEstimate:
    time: int
    value: np.ndarray  # (d,), in raw data units
    argmin_params: np.ndarray  # (A, K)
    v_min: float
    rule: Rule


@dataclass(frozen=True)
class ForecastTrace:
    steps: tuple[StepEstimate, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.steps])

    def __len__(self) -> int:
        return len(self.steps)

    def __getitem__(self, i):
        return self.steps[i]


@dataclass(frozen=True)
class MinimizeResult:
    argmin_params: np.ndarray  # (A, K), lexicographically ordered
    v_min: float
    constant: bool


def parameter_grid(family: WalkFamily, grid: GridSpec) -> np.ndarray:
    """All grid points of the parameter box, shape (G, K), lexicographic order.

    The two-state family is searched in the angle parameterization.
    """
    bounds = parameter_bounds(family, angle_coin=family is WalkFamily.TWO_STATE_1D)
    if len(grid.resolutions) != len(bounds):
        raise ValueError(
            f"grid has {len(grid.resolutions)} axes, {family.value} needs {len(bounds)}"
        )
    axes = [np.linspace(lo, hi, r) for (lo, hi), r in zip(bounds, grid.resolutions)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _grid_matrices(family: WalkFamily, params: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if family is WalkFamily.TWO_STATE_1D:
        coins = build_coin_angle(params[:, 0])
    else:
        coins = build_coin(family, params[:, 0])
    phis = build_initial_state(family, params[:, 1:])
    return coins, phis


def _v_chunk(values: np.ndarray, family: WalkFamily, coins, phis, n: int) -> np.ndarray:
    """V_n for one batch of parameter points; one evolution pass covers all t."""
    w = 2 * n + 1
    xs = np.arange(w) - n
    v = np.zeros(coins.shape[0])
    for t, psi in iterate_states(family, coins, phis, n):
        mu = batch_mass(psi)
        xt = values[t]
        if family.lattice_dim == 1:
            v += mu @ (xs - xt[0]) ** 2
        else:
            w2 = (xs - xt[0])[:, None] ** 2 + (xs - xt[1])[None, :] ** 2
            v += np.einsum("bxy,xy->b", mu, w2)
    return v


def _v_over_grid(
    values: np.ndarray, family: WalkFamily, params: np.ndarray, n: int, threads: int = 1
) -> np.ndarray:
    coins, phis = _grid_matrices(family, params)
    g = params.shape[0]
    if threads <= 1 or g < 2 * threads:
        return _v_chunk(values, family, coins, phis, n)
    edges = np.linspace(0, g, threads + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(
            pool.map(
                lambda se: _v_chunk(values, family, coins[se[0]:se[1]], phis[se[0]:se[1]], n),
                zip(edges[:-1], edges[1:]),
            )
        )
    return np.concatenate(parts)


def evaluate_v(series: Series, spec: WalkSpec, n: int) -> float:
    """V_n for a single fully specified walk."""
    if spec.family.lattice_dim != series.d:
        raise ValueError(
            f"family {spec.family.value} walks in dimension {spec.family.lattice_dim}, "
            f"series has dimension {series.d}"
        )
    if n > series.last_time:
        raise ValueError(f"V_{n} needs observations up to time {n}, series ends at {series.last_time}")
    coins = spec.coin_matrix()[None]
    phis = spec.initial_state()[None]
    return float(_v_chunk(series.values[: n + 1], spec.family, coins, phis, n)[0])


def minimize_v(
    series: Series,
    family: WalkFamily,
    grid: GridSpec,
    n: int,
    *,
    tie_rel: float = DEFAULT_TIE_REL,
    const_rel: float = DEFAULT_CONST_REL,
    threads: int = 1,
    refine: bool = False,
) -> MinimizeResult:
    """Exhaustive grid minimization of V_n over the family's parameter box."""
    if family.lattice_dim != series.d:
        raise ValueError(
            f"family {family.value} walks in dimension {family.lattice_dim}, "
            f"series has dimension {series.d}"
        )
    if n > series.last_time:
        raise ValueError(f"V_{n} needs observations up to time {n}, series ends at {series.last_time}")
    params = parameter_grid(family, grid)
    values = series.values[: n + 1]
    v = _v_over_grid(values, family, params, n, threads)
    v_min, v_max = float(v.min()), float(v.max())
    constant = (v_max - v_min) < const_rel * max(1.0, abs(v_max))
    if constant:
        return MinimizeResult(params[:0], v_min, True)
    argmins = params[v <= v_min + tie_rel * max(1.0, abs(v_min))]
    if refine:
        bounds = parameter_bounds(family, angle_coin=family is WalkFamily.TWO_STATE_1D)
        spans = [
            (hi - lo) / (r - 1) for (lo, hi), r in zip(bounds, grid.resolutions)
        ]
        lo = np.maximum(argmins.min(axis=0) - spans, [b[0] for b in bounds])
        hi = np.minimum(argmins.max(axis=0) + spans, [b[1] for b in bounds])
        axes = [np.linspace(a, b, r) for a, b, r in zip(lo, hi, grid.resolutions)]
        mesh = np.meshgrid(*axes, indexing="ij")
        sub = np.stack([m.ravel() for m in mesh], axis=-1)
        v2 = _v_over_grid(values, family, sub, n, threads)
        all_params = np.vstack([params, sub])
        all_v = np.concatenate([v, v2])
        v_min = float(all_v.min())
        argmins = all_params[all_v <= v_min + tie_rel * max(1.0, abs(v_min))]
        argmins = np.unique(argmins, axis=0)
    return MinimizeResult(argmins, v_min, False)


def _expectations_at(family: WalkFamily, params: np.ndarray, steps: int) -> np.ndarray:
    coins, phis = _grid_matrices(family, params)
    psi = evolve_batch(family, coins, phis, steps)
    return batch_expectation(family, psi, steps)


def estimate_next(
    series: Series,
    family: WalkFamily,
    grid: GridSpec,
    n: int,
    *,
    tie_rel: float = DEFAULT_TIE_REL,
    const_rel: float = DEFAULT_CONST_REL,
    threads: int = 1,
    refine: bool = False,
) -> StepEstimate:
    """One forecast step: fit V_n, then the expected position at time n+1.

    A flat objective repeats the last observation; several minimizers are
    averaged with equal weight.
    """
    res = minimize_v(
        series, family, grid, n,
        tie_rel=tie_rel, const_rel=const_rel, threads=threads, refine=refine,
    )
    if res.constant:
        value = series.to_raw(series.values[n])
        return StepEstimate(n + 1, value, res.argmin_params, res.v_min, Rule.CONSTANT_V)
    exp = _expectations_at(family, res.argmin_params, n + 1)
    value = series.to_raw(exp.mean(axis=0))
    rule = Rule.UNIQUE_MIN if res.argmin_params.shape[0] == 1 else Rule.TIE_AVERAGE
    return StepEstimate(n + 1, value, res.argmin_params, res.v_min, rule)


def rolling_forecast(
    series: Series,
    family: WalkFamily,
    grid: GridSpec | None = None,
    *,
    tie_rel: float = DEFAULT_TIE_REL,
    const_rel: float = DEFAULT_CONST_REL,
    threads: int = 1,
    refine: bool = False,
) -> ForecastTrace:
    """Estimates x*_1 .. x*_{N+1}, each fitted only on data up to its own step.

    V_0 is identically zero, so x*_1 always repeats x_0; the final entry
    is the out-of-sample forecast one step past the data.
    """
    if grid is None:
        grid = GridSpec.default_for(family)
    k = family.n_coin_params + family.n_init_params
    steps = [
        StepEstimate(
            1, series.to_raw(np.zeros(series.d)), np.empty((0, k)), 0.0, Rule.CONSTANT_V
        )
    ]
    for n in range(1, series.last_time + 1):
        steps.append(
            estimate_next(
                series, family, grid, n,
                tie_rel=tie_rel, const_rel=const_rel, threads=threads, refine=refine,
            )
        )
    return ForecastTrace(tuple(steps))
