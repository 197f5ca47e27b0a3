"""Shared helpers for the test suite: independent brute-force oracles and
rational sampling utilities."""

import math
from fractions import Fraction

from ordagg import IntervalSpec, SetFunction


def grid_points(interval: IntervalSpec, denom: int):
    """The points i/denom that belong to the interval."""
    lo = 0 if interval.has_inf else 1
    hi = denom if interval.has_sup else denom - 1
    return [Fraction(i, denom) for i in range(lo, hi + 1)]


def brute_force_cn(n: int):
    """Filter every set function on [n]; the independent enumeration route."""
    hits = []
    for bits in range(1 << (1 << n)):
        f = SetFunction(n, bits)
        if f.is_nondecreasing() and not f.is_constant():
            hits.append(bits)
    return hits


def weak_order_count(n: int) -> int:
    """Number of weak orders on n labeled elements: ordered set partitions,
    counted as surjections onto 1..k summed over k."""
    return sum(
        sum((-1) ** (k - j) * math.comb(k, j) * j**n for j in range(k + 1))
        for k in range(1, n + 1)
    )
