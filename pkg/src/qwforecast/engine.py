"""Exact state-vector evolution of the walk on a bounded lattice window.

The walker's amplitude at time n lives on the window ||x||_1 <= n. For
1D families the state is stored as a (2n+1, m) complex array indexed by
x + n; for the 2D family it is (2n+1, 2n+1, m) indexed by (x1 + n,
x2 + n). Batched variants evolve many parameter points at once (leading
batch axis), which is what the grid search is built on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .families import WalkFamily, WalkSpec, chirality_moves

__all__ = [
    "AmplitudeField",
    "Distribution",
    "evolve",
    "evolve_history",
    "distribution",
    "expectation",
    "iterate_states",
    "evolve_batch",
    "batch_mass",
    "batch_expectation",
]


@dataclass(frozen=True)
class AmplitudeField:
    """Chirality amplitudes over the window ||x||_1 <= time."""

    family: WalkFamily
    time: int
    amplitudes: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        """Coordinate values along each window axis, -time .. time."""
        return np.arange(-self.time, self.time + 1)

    def amplitude(self, *x: int) -> np.ndarray:
        idx = tuple(c + self.time for c in x)
        return self.amplitudes[idx]

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class Distribution:
    """Site probabilities mu_n(x) over the window ||x||_1 <= time."""

    family: WalkFamily
    time: int
    mass: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return np.arange(-self.time, self.time + 1)

    def prob(self, *x: int) -> float:
        idx = tuple(c + self.time for c in x)
        return float(self.mass[idx])

    @property
    def total_mass(self) -> float:
        return float(self.mass.sum())


def _shift(family: WalkFamily, rotated: np.ndarray) -> np.ndarray:
    """Move each chirality component one site in its direction.

    ``rotated`` has shape (B, W, m) or (B, W, W, m). Amplitude never
    reaches the window edge before the final step, so edge truncation
    drops nothing.
    """
    out = np.zeros_like(rotated)
    moves = chirality_moves(family)
    for c, mv in enumerate(moves):
        src = rotated[..., c]
        for axis, step in enumerate(mv):
            ax = axis + 1  # skip batch axis
            if step == -1:
                src = np.concatenate(
                    [np.take(src, range(1, src.shape[ax]), axis=ax),
                     np.zeros_like(np.take(src, [0], axis=ax))],
                    axis=ax,
                )
            elif step == 1:
                src = np.concatenate(
                    [np.zeros_like(np.take(src, [0], axis=ax)),
                     np.take(src, range(0, src.shape[ax] - 1), axis=ax)],
                    axis=ax,
                )
        out[..., c] = src
    return out


def iterate_states(
    family: WalkFamily, coins: np.ndarray, phis: np.ndarray, steps: int
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (t, psi) for t = 0 .. steps over a batch of walks.

    ``coins`` is (B, m, m), ``phis`` is (B, m). The state array keeps the
    full 2*steps+1 window at every t; sites outside ||x||_1 <= t are zero.
    """
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    b, m = phis.shape
    w = 2 * steps + 1
    if family.lattice_dim == 1:
        psi = np.zeros((b, w, m), dtype=complex)
        psi[:, steps, :] = phis
    else:
        psi = np.zeros((b, w, w, m), dtype=complex)
        psi[:, steps, steps, :] = phis
    yield 0, psi
    for t in range(1, steps + 1):
        rotated = np.einsum("bij,b...j->b...i", coins, psi)
        psi = _shift(family, rotated)
        yield t, psi


def evolve_batch(
    family: WalkFamily, coins: np.ndarray, phis: np.ndarray, steps: int
) -> np.ndarray:
    """Final state array after ``steps`` steps for a batch of walks."""
    psi = None
    for _, psi in iterate_states(family, coins, phis, steps):
        pass
    return psi


def batch_mass(psi: np.ndarray) -> np.ndarray:
    """Site probabilities from a batched state array (chirality summed out)."""
    return np.sum(np.abs(psi) ** 2, axis=-1)


def batch_expectation(family: WalkFamily, psi: np.ndarray, time: int) -> np.ndarray:
    """Position expectation E(X_time), shape (B, d)."""
    mu = batch_mass(psi)
    w = mu.shape[1]
    xs = np.arange(w) - (w - 1) // 2
    if family.lattice_dim == 1:
        return (mu @ xs)[:, None]
    e1 = np.einsum("bxy,x->b", mu, xs)
    e2 = np.einsum("bxy,y->b", mu, xs)
    return np.stack([e1, e2], axis=-1)


def _crop(psi_row: np.ndarray, steps: int, t: int) -> np.ndarray:
    """Restrict a full-window state to the window of time t."""
    lo, hi = steps - t, steps + t + 1
    if psi_row.ndim == 2:
        return psi_row[lo:hi]
    return psi_row[lo:hi, lo:hi]


def evolve(spec: WalkSpec, steps: int) -> AmplitudeField:
    """Run ``steps`` coin-and-shift steps from the origin state."""
    coins = spec.coin_matrix()[None]
    phis = spec.initial_state()[None]
    psi = evolve_batch(spec.family, coins, phis, steps)
    return AmplitudeField(spec.family, steps, psi[0].copy())


def evolve_history(spec: WalkSpec, steps: int) -> list[AmplitudeField]:
    """All intermediate fields Psi_0 .. Psi_steps, each on its own window."""
    coins = spec.coin_matrix()[None]
    phis = spec.initial_state()[None]
    out = []
    for t, psi in iterate_states(spec.family, coins, phis, steps):
        out.append(AmplitudeField(spec.family, t, _crop(psi[0], steps, t).copy()))
    return out


def distribution(field: AmplitudeField) -> Distribution:
    """mu_n(x) = squared norm of the amplitude vector at x."""
    mass = np.sum(np.abs(field.amplitudes) ** 2, axis=-1)
    return Distribution(field.family, field.time, mass)


def expectation(dist: Distribution) -> np.ndarray:
    """E(X_n) = sum_x x mu_n(x), componentwise; shape (d,)."""
    xs = dist.positions
    if dist.family.lattice_dim == 1:
        return np.array([dist.mass @ xs])
    e1 = np.einsum("xy,x->", dist.mass, xs)
    e2 = np.einsum("xy,y->", dist.mass, xs)
    return np.array([e1, e2])
