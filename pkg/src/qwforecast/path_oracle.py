"""Brute-force path-sum oracle for the two-state walk on the line.

Every left/right step sequence of length n is enumerated as a bit
pattern and its matrix product accumulated, with no recurrence shared
with the state-vector engine. Intentionally exponential; a hard cap
keeps it honest as a test oracle rather than a simulator.
"""

from __future__ import annotations

import numpy as np

from .engine import Distribution
from .families import WalkFamily

__all__ = ["DEFAULT_CAP", "OracleCapError", "split_coin", "path_sum", "oracle_distribution"]

DEFAULT_CAP = 12


class OracleCapError(ValueError):
    """Requested walk length exceeds the enumeration cap."""


def split_coin(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split U into its left-moving (top row) and right-moving (bottom row) parts."""
    U = np.asarray(U, dtype=complex)
    P = np.zeros_like(U)
    Q = np.zeros_like(U)
    P[0] = U[0]
    Q[1] = U[1]
    return P, Q


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise OracleCapError(
            f"path enumeration over {n} steps exceeds the cap of {cap} "
            f"(2**{n} paths); the oracle is intentionally exponential"
        )


def _step_bits(n: int) -> np.ndarray:
    """(2**n, n) array; bits[p, t] = 1 if pattern p moves right at step t."""
    patterns = np.arange(1 << n, dtype=np.uint32)
    return (patterns[:, None] >> np.arange(n)) & 1


def path_sum(U: np.ndarray, l: int, r: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Sum of ordered products over all interleavings of l P-steps and r Q-steps."""
    if l < 0 or r < 0:
        raise ValueError(f"step counts must be nonnegative, got l={l}, r={r}")
    n = l + r
    _check_cap(n, cap)
    P, Q = split_coin(U)
    if n == 0:
        return np.eye(2, dtype=complex)
    bits = _step_bits(n)
    keep = bits.sum(axis=1) == r
    bits = bits[keep]
    # One full product per pattern; step t acts first, i.e. rightmost.
    prods = np.broadcast_to(np.eye(2, dtype=complex), (bits.shape[0], 2, 2)).copy()
    choices = np.stack([P, Q])
    for t in range(n):
        prods = np.einsum("pij,pjk->pik", choices[bits[:, t]], prods)
    return prods.sum(axis=0)


def oracle_distribution(
    U: np.ndarray, phi: np.ndarray, n: int, cap: int = DEFAULT_CAP
) -> Distribution:
    """Distribution at time n by summing amplitudes over all 2**n paths.

    Mass at x = -l + r is ||Xi_n(l, r) phi||^2; amplitudes of paths with
    the same (l, r) are summed before taking the squared norm.
    """
    _check_cap(n, cap)
    phi = np.asarray(phi, dtype=complex)
    if not np.isclose(np.linalg.norm(phi), 1.0, atol=1e-9):
        raise ValueError("initial state must be unit norm")
    mass = np.zeros(2 * n + 1)
    if n == 0:
        mass[0] = 1.0
        return Distribution(WalkFamily.TWO_STATE_1D, 0, mass)
    P, Q = split_coin(U)
    bits = _step_bits(n)
    vecs = np.broadcast_to(phi, (1 << n, 2)).copy()
    choices = np.stack([P, Q])
    for t in range(n):
        vecs = np.einsum("pij,pj->pi", choices[bits[:, t]], vecs)
    rights = bits.sum(axis=1)
    for r in range(n + 1):
        amp = vecs[rights == r].sum(axis=0)  # Xi_n(n - r, r) @ phi
        x = r - (n - r)
        mass[x + n] = float(np.sum(np.abs(amp) ** 2))
    return Distribution(WalkFamily.TWO_STATE_1D, n, mass)
