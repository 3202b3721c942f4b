"""Small statistics helpers for the experiment harness."""

from __future__ import annotations

import math


def wilson_interval(errors: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Better behaved than the normal approximation at the tails, which is
    exactly where BER measurements live.
    """
    if n <= 0:
        raise ValueError("need at least one trial")
    if not 0 <= errors <= n:
        raise ValueError("errors must lie in [0, n]")
    p = errors / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    return (max(0.0, center - half), min(1.0, center + half))


def binomial_se(p: float, n: int) -> float:
    """Standard error of a proportion estimate from n Bernoulli draws."""
    if n <= 0:
        raise ValueError("need at least one trial")
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)
