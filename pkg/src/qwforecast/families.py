"""Walk families: coin operators, initial states, and parameter domains.

Three families of discrete-time quantum walks are supported:

- ``TWO_STATE_1D``: two chiralities (L, R) on the integer line,
- ``THREE_STATE_1D``: three chiralities (L, S, R) on the integer line,
  where S leaves the walker in place,
- ``FOUR_STATE_2D``: four chiralities (L, R, D, U) on the integer plane.

Each family has a one-parameter coin and a small set of initial-state
parameters, all constrained to closed intervals. Builders accept scalars
or arrays of parameters and broadcast, so a whole parameter grid can be
turned into a stack of coin matrices in one call.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "DomainError",
    "WalkFamily",
    "WalkSpec",
    "build_coin",
    "build_coin_angle",
    "build_initial_state",
    "chirality_moves",
    "parameter_bounds",
]


class DomainError(ValueError):
    """A walk parameter lies outside its declared closed interval."""


class WalkFamily(Enum):
    TWO_STATE_1D = "two-state-1d"
    THREE_STATE_1D = "three-state-1d"
    FOUR_STATE_2D = "four-state-2d"

    @property
    def lattice_dim(self) -> int:
        return 2 if self is WalkFamily.FOUR_STATE_2D else 1

    @property
    def coin_size(self) -> int:
        return _COIN_SIZE[self]

    @property
    def n_coin_params(self) -> int:
        return 1

    @property
    def n_init_params(self) -> int:
        return _N_INIT[self]


_COIN_SIZE = {
    WalkFamily.TWO_STATE_1D: 2,
    WalkFamily.THREE_STATE_1D: 3,
    WalkFamily.FOUR_STATE_2D: 4,
}

_N_INIT = {
    WalkFamily.TWO_STATE_1D: 1,
    WalkFamily.THREE_STATE_1D: 2,
    WalkFamily.FOUR_STATE_2D: 3,
}

# Displacement of each chirality component per step, one row per component.
_MOVES = {
    WalkFamily.TWO_STATE_1D: ((-1,), (1,)),
    WalkFamily.THREE_STATE_1D: ((-1,), (0,), (1,)),
    WalkFamily.FOUR_STATE_2D: ((-1, 0), (1, 0), (0, -1), (0, 1)),
}


def chirality_moves(family: WalkFamily) -> np.ndarray:
    """Per-component lattice displacement, shape (m, d)."""
    return np.array(_MOVES[family], dtype=int)


def parameter_bounds(family: WalkFamily, angle_coin: bool = False) -> list[tuple[float, float]]:
    """Closed intervals for (coin, init...) parameters, in search order.

    For ``TWO_STATE_1D`` the coin interval is [0, 1] in the raw
    parameterization and [0, pi/2] when ``angle_coin`` is set.
    """
    if family is WalkFamily.TWO_STATE_1D:
        coin = (0.0, np.pi / 2) if angle_coin else (0.0, 1.0)
        return [coin, (0.0, np.pi / 2)]
    if angle_coin:
        raise ValueError("angle coin parameterization exists only for the two-state family")
    if family is WalkFamily.THREE_STATE_1D:
        return [(0.0, 1.0), (0.0, 2 * np.pi), (0.0, 2 * np.pi)]
    return [(0.0, 1.0), (0.0, 2 * np.pi), (0.0, 2 * np.pi), (0.0, 2 * np.pi)]


def _check_interval(name: str, value: np.ndarray, lo: float, hi: float) -> None:
    bad = (value < lo) | (value > hi) | ~np.isfinite(value)
    if np.any(bad):
        offender = np.asarray(value)[bad].flat[0]
        raise DomainError(f"{name} = {offender!r} outside [{lo:g}, {hi:g}]")


def _stack_matrix(entries, shape) -> np.ndarray:
    rows = [
        np.stack(
            [np.broadcast_to(np.asarray(e, dtype=complex), shape) for e in row],
            axis=-1,
        )
        for row in entries
    ]
    return np.stack(rows, axis=-2)


def build_coin(family: WalkFamily, theta1) -> np.ndarray:
    """Coin unitary for the raw parameterization theta1 in [0, 1].

    ``theta1`` may be a scalar or an array; the result has shape
    ``theta1.shape + (m, m)`` with dtype complex128.
    """
    t = np.asarray(theta1, dtype=float)
    _check_interval("coin parameter theta1", t, 0.0, 1.0)
    if family is WalkFamily.TWO_STATE_1D:
        s = np.sqrt(1.0 - t**2)
        return _stack_matrix([[t, s], [s, -t]], t.shape)
    if family is WalkFamily.THREE_STATE_1D:
        q = t * np.sqrt(2.0 * (1.0 - t**2))
        r = 1.0 - t**2
        return _stack_matrix(
            [[-(t**2), q, r], [q, 2 * t**2 - 1.0, q], [r, q, -(t**2)]],
            t.shape,
        )
    w = np.sqrt(t * (1.0 - t))
    u = 1.0 - t
    return _stack_matrix(
        [[-t, u, w, w], [u, -t, w, w], [w, w, -u, t], [w, w, t, -u]],
        t.shape,
    )


def build_coin_angle(theta) -> np.ndarray:
    """2x2 coin [[cos t, sin t], [sin t, -cos t]] for t in [0, pi/2]."""
    t = np.asarray(theta, dtype=float)
    _check_interval("coin angle theta", t, 0.0, np.pi / 2)
    c, s = np.cos(t), np.sin(t)
    return _stack_matrix([[c, s], [s, -c]], t.shape)


def build_initial_state(family: WalkFamily, params) -> np.ndarray:
    """Unit-norm initial chirality vector for the family.

    ``params`` has shape (..., M2) where M2 is the family's number of
    initial-state parameters; the result has shape (..., m).
    """
    p = np.atleast_1d(np.asarray(params, dtype=float))
    if p.shape[-1] != family.n_init_params:
        raise DomainError(
            f"initial-state parameter vector has length {p.shape[-1]}, "
            f"expected {family.n_init_params} for {family.value}"
        )
    if family is WalkFamily.TWO_STATE_1D:
        xi = p[..., 0]
        _check_interval("initial-state angle xi", xi, 0.0, np.pi / 2)
        return np.stack([np.cos(xi) + 0j, 1j * np.sin(xi)], axis=-1)
    hi = 2 * np.pi
    for k in range(family.n_init_params):
        _check_interval(f"initial-state phase theta2[{k}]", p[..., k], 0.0, hi)
    phases = np.exp(1j * p)
    ones = np.ones(p.shape[:-1], dtype=complex)
    if family is WalkFamily.THREE_STATE_1D:
        vec = np.stack([ones, phases[..., 0], phases[..., 1]], axis=-1)
        return vec / np.sqrt(3.0)
    vec = np.stack([ones, phases[..., 0], phases[..., 1], phases[..., 2]], axis=-1)
    return vec / 2.0


@dataclass(frozen=True)
class WalkSpec:
    """One fully determined walk: family plus coin and initial-state parameters.

    ``coin_kind`` is ``"raw"`` (theta1 in [0, 1], all families) or
    ``"angle"`` (theta in [0, pi/2], two-state family only; the raw
    equivalent is theta1 = cos theta).
    """

    family: WalkFamily
    coin: tuple[float, ...]
    init: tuple[float, ...]
    coin_kind: str = "raw"

    def __post_init__(self):
        if self.coin_kind not in ("raw", "angle"):
            raise ValueError(f"unknown coin_kind {self.coin_kind!r}")
        if self.coin_kind == "angle" and self.family is not WalkFamily.TWO_STATE_1D:
            raise ValueError("angle coin parameterization exists only for the two-state family")
        if len(self.coin) != self.family.n_coin_params:
            raise DomainError(
                f"coin parameter vector has length {len(self.coin)}, "
                f"expected {self.family.n_coin_params}"
            )
        if len(self.init) != self.family.n_init_params:
            raise DomainError(
                f"initial-state parameter vector has length {len(self.init)}, "
                f"expected {self.family.n_init_params}"
            )
        # Validate domains eagerly.
        self.coin_matrix()
        self.initial_state()

    @classmethod
    def from_raw(cls, family: WalkFamily, theta1: float, init) -> "WalkSpec":
        return cls(family, (float(theta1),), tuple(float(v) for v in np.atleast_1d(init)))

    @classmethod
    def from_angles(cls, theta: float, xi: float) -> "WalkSpec":
        return cls(WalkFamily.TWO_STATE_1D, (float(theta),), (float(xi),), coin_kind="angle")

    def coin_matrix(self) -> np.ndarray:
        if self.coin_kind == "angle":
            return build_coin_angle(self.coin[0])
        return build_coin(self.family, self.coin[0])

    def initial_state(self) -> np.ndarray:
        return build_initial_state(self.family, self.init)
