"""Scikit-learn style wrapper around the rolling forecaster."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .families import WalkFamily
from .forecast import GridSpec, Series, rolling_forecast

__all__ = ["QuantumWalkForecaster"]


class QuantumWalkForecaster(BaseEstimator):
    """One-step-ahead forecaster driven by a parameterized quantum walk.

    Parameters
    ----------
    family : str
        One of "two-state-1d", "three-state-1d", "four-state-2d". The
        family's lattice dimension must match the series dimension.
    resolutions : tuple of int, optional
        Grid points per parameter axis; defaults depend on the family.
    tie_rel, const_rel : float
        Relative tolerances for argmin ties and for declaring the
        objective flat.
    scale : float
        Series values are divided by this before fitting and estimates
        multiplied back, mapping data onto the walk's unit lattice.
    refine : bool
        Re-search a finer grid around the coarse argmin set.
    threads : int
        Worker threads for grid evaluation; results are identical for
        any thread count.
    """

    def __init__(
        self,
        family: str = "two-state-1d",
        resolutions: tuple[int, ...] | None = None,
        tie_rel: float = 1e-9,
        const_rel: float = 1e-9,
        scale: float = 1.0,
        refine: bool = False,
        threads: int = 1,
    ):
        self.family = family
        self.resolutions = resolutions
        self.tie_rel = tie_rel
        self.const_rel = const_rel
        self.scale = scale
        self.refine = refine
        self.threads = threads

    def fit(self, X, y=None):
        """Fit on a series of shape (length,) or (length, d); d in {1, 2}."""
        family = WalkFamily(self.family)
        series = Series.from_raw(np.asarray(X, dtype=float), scale=self.scale)
        if series.d != family.lattice_dim:
            raise ValueError(
                f"series dimension {series.d} does not match family "
                f"{family.value} (dimension {family.lattice_dim})"
            )
        grid = (
            GridSpec(tuple(self.resolutions))
            if self.resolutions is not None
            else GridSpec.default_for(family)
        )
        self.series_ = series
        self.trace_ = rolling_forecast(
            series,
            family,
            grid,
            tie_rel=self.tie_rel,
            const_rel=self.const_rel,
            threads=self.threads,
            refine=self.refine,
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "trace_"):
            raise NotFittedError("call fit before predict")

    def predict(self) -> np.ndarray:
        """Out-of-sample forecast one step past the fitted series, shape (d,)."""
        self._check_fitted()
        return self.trace_[-1].value

    def fitted_values(self) -> np.ndarray:
        """In-sample one-step estimates x*_1 .. x*_N, shape (N, d)."""
        self._check_fitted()
        return self.trace_.values[:-1]
