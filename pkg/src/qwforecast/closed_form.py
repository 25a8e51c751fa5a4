"""Analytic expressions for the two-state walk in the angle parameterization.

These are independent of the state-vector engine and double as fast
paths and cross-checks. All take the coin angle theta and initial-state
angle xi, both in [0, pi/2].
"""

from __future__ import annotations

import math

__all__ = ["v1_closed", "e2_closed", "e3_closed", "en_series"]


def v1_closed(x1: float, theta: float, xi: float) -> float:
    """Objective after one observation: x1^2 + 2 cos(2 theta) cos(2 xi) x1 + 1."""
    return x1**2 + 2.0 * math.cos(2 * theta) * math.cos(2 * xi) * x1 + 1.0


def e2_closed(theta: float, xi: float) -> float:
    """Position expectation at time 2."""
    return -2.0 * math.cos(theta) ** 2 * math.cos(2 * theta) * math.cos(2 * xi)


def e3_closed(theta: float, xi: float) -> float:
    """Position expectation at time 3."""
    c, s = math.cos(theta), math.sin(theta)
    return -(
        (3 * c**4 + s**4) * math.cos(2 * theta) + s**2 * math.sin(2 * theta) ** 2
    ) * math.cos(2 * xi)


def en_series(theta: float, xi: float, n: int) -> float:
    """Position expectation at time n >= 2 via the combinatorial double sum.

    Requires theta in [0, pi/2); at theta = pi/2 the walk is a trivial
    bouncing case the series does not cover, so use the engine there.
    The terms alternate in sign through (-tan^2 theta)^(gamma+delta);
    binomial coefficients are exact integers, but cancellation still
    limits trust to n <= 50 (cross-checked against the engine in tests).
    """
    if n < 2:
        raise ValueError(f"series expectation is defined for n >= 2, got {n}")
    if not 0.0 <= theta < math.pi / 2:
        raise ValueError(
            "coin angle must lie in [0, pi/2); theta = pi/2 is a trivial case, "
            "use the state-vector engine instead"
        )
    c2 = math.cos(2 * theta)
    tan2 = math.tan(theta) ** 2
    total = n * c2
    for k in range(1, (n - 1) // 2 + 1):
        for g in range(1, k + 1):
            for d in range(1, k + 1):
                w = (
                    math.comb(k - 1, g - 1)
                    * math.comb(k - 1, d - 1)
                    * math.comb(n - k - 1, g - 1)
                    * math.comb(n - k - 1, d - 1)
                )
                total += (
                    (-tan2) ** (g + d)
                    * w
                    * (n - 2 * k) ** 2
                    / (g * d)
                    * (n * c2 + g + d)
                )
    return -math.cos(theta) ** (2 * (n - 1)) * total * math.cos(2 * xi)
