"""Named aggregation functions for the command line and the test suites.

Name grammar (case sensitive):

    min, max, mean          arity 2; append digits for another arity (min3)
    mode                    arity 3 by default; mode5 etc.
    medianN                 N odd (median3, median5)
    projK, projKofN         projection onto coordinate K (arity 2 default)
    osKofN                  K-th smallest of N
    const-bottom, const-top endpoint constants (arity suffix as for min)

Lattice-backed names evaluate exactly through their canonical form; mean
is exact rational arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import lattice
from .domain import IntervalSpec
from .lattice import LatticePolynomial


@dataclass(frozen=True)
class NamedFunction:
    name: str
    arity: int
    evaluate: Callable[[tuple[Fraction, ...]], Fraction]
    polynomial: Optional[LatticePolynomial] = None
    constant: Optional[str] = None  # "bottom" | "top"

    @property
    def representable(self) -> bool:
        """Whether a discrete representative exists on every chain."""
        return self.polynomial is not None or self.constant is not None or (
            self.name.startswith("mode")
        )


def _mean(points):
    return Fraction(sum(points), len(points))


_PATTERNS = (
    re.compile(r"(?P<base>min|max|mean)(?P<n>\d*)$"),
    re.compile(r"(?P<base>mode)(?P<n>\d*)$"),
    re.compile(r"(?P<base>median)(?P<n>\d+)$"),
    re.compile(r"(?P<base>proj)(?P<k>\d+)(?:of(?P<n>\d+))?$"),
    re.compile(r"(?P<base>os)(?P<k>\d+)of(?P<n>\d+)$"),
    re.compile(r"(?P<base>const-bottom|const-top)(?P<n>\d*)$"),
)


def resolve(name: str) -> NamedFunction:
    """Parse a function name; raises ValueError for unknown names."""
    for pattern in _PATTERNS:
        m = pattern.fullmatch(name.strip())
        if m:
            return _build(name.strip(), m)
    raise ValueError(f"unknown function name {name!r}")


def _build(name: str, m: re.Match) -> NamedFunction:
    base = m.group("base")
    groups = m.groupdict()
    if base in ("min", "max", "mean"):
        n = int(groups["n"]) if groups["n"] else 2
        if n < 1:
            raise ValueError("arity must be >= 1")
        if base == "mean":
            return NamedFunction(name, n, _mean)
        poly = lattice.order_statistic(n, 1 if base == "min" else n)
        return NamedFunction(name, n, poly.eval, polynomial=poly)
    if base == "mode":
        n = int(groups["n"]) if groups["n"] else 3
        if n < 1:
            raise ValueError("arity must be >= 1")
        return NamedFunction(name, n, lattice.mode)
    if base == "median":
        n = int(groups["n"])
        poly = lattice.median(n)
        return NamedFunction(name, n, poly.eval, polynomial=poly)
    if base == "proj":
        k = int(groups["k"])
        n = int(groups["n"]) if groups["n"] else max(2, k)
        poly = lattice.projection(n, k)
        return NamedFunction(name, n, poly.eval, polynomial=poly)
    if base == "os":
        k, n = int(groups["k"]), int(groups["n"])
        poly = lattice.order_statistic(n, k)
        return NamedFunction(name, n, poly.eval, polynomial=poly)
    # endpoint constants: evaluation needs no interval, representation does
    n = int(groups["n"]) if groups["n"] else 2
    which = "bottom" if base == "const-bottom" else "top"
    value = Fraction(0) if which == "bottom" else Fraction(1)
    return NamedFunction(name, n, lambda points: value, constant=which)


def constant_polynomial(fn: NamedFunction, interval: IntervalSpec) -> LatticePolynomial:
    if fn.constant == "bottom":
        return lattice.constant_bottom(fn.arity, interval)
    if fn.constant == "top":
        return lattice.constant_top(fn.arity, interval)
    raise ValueError(f"{fn.name} is not an endpoint constant")
