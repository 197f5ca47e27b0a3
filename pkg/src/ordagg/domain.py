"""Ordinal domains and exact piecewise-linear order automorphisms.

Every scale domain is a real interval normalized to endpoints 0 and 1;
nothing downstream depends on endpoint magnitudes, only on which endpoints
belong to the interval, so an interval is just a pair of inclusion flags
and unbounded intervals behave exactly like open ones.

Admissible transformations are modeled as strictly increasing piecewise
linear bijections of [0, 1] with rational breakpoints fixing 0 and 1.
They restrict to order automorphisms of all four interval shapes, they
are closed under composition and inversion, and any finite strictly
increasing point assignment extends to one, which is all the randomized
falsifiers need.

All arithmetic is exact (`fractions.Fraction`); no floats anywhere.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Point = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class PointError(ValueError):
    """A point is not a member of the interval it is used with."""


_SHAPE_NAMES = {
    (False, False): "open",
    (True, False): "left-closed",
    (False, True): "right-closed",
    (True, True): "closed",
}
_SHAPE_FLAGS = {name: flags for flags, name in _SHAPE_NAMES.items()}


@dataclass(frozen=True)
class IntervalSpec:
    """A real interval with endpoints normalized to 0 and 1.

    Only the inclusion flags matter; `open`, `left-closed`, `right-closed`
    and `closed` are the four possible shapes.
    """

    has_inf: bool
    has_sup: bool

    @property
    def name(self) -> str:
        return _SHAPE_NAMES[(self.has_inf, self.has_sup)]

    @classmethod
    def from_name(cls, name: str) -> "IntervalSpec":
        try:
            flags = _SHAPE_FLAGS[name]
        except KeyError:
            raise ValueError(
                f"unknown interval shape {name!r}; expected one of "
                f"{', '.join(sorted(_SHAPE_FLAGS))}"
            ) from None
        return cls(*flags)

    @property
    def boundary(self) -> tuple[Fraction, ...]:
        """The included endpoints, in increasing order."""
        points = []
        if self.has_inf:
            points.append(ZERO)
        if self.has_sup:
            points.append(ONE)
        return tuple(points)

    @property
    def boundary_size(self) -> int:
        return int(self.has_inf) + int(self.has_sup)

    def contains(self, x: Fraction) -> bool:
        if x < ZERO or x > ONE:
            return False
        if x == ZERO:
            return self.has_inf
        if x == ONE:
            return self.has_sup
        return True

    def require(self, x: Fraction) -> Fraction:
        if not self.contains(x):
            raise PointError(f"{x} is not a point of the {self.name} interval")
        return x


OPEN = IntervalSpec(False, False)
LEFT_CLOSED = IntervalSpec(True, False)
RIGHT_CLOSED = IntervalSpec(False, True)
CLOSED = IntervalSpec(True, True)
SHAPES = (OPEN, LEFT_CLOSED, RIGHT_CLOSED, CLOSED)


def make_interval(has_inf: bool, has_sup: bool) -> IntervalSpec:
    """One of the four canonical domain shapes."""
    return IntervalSpec(bool(has_inf), bool(has_sup))


def _collinear(a, b, c) -> bool:
    return (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0])


def _prune(points):
    """Drop interior breakpoints lying on the segment of their neighbours,
    so equal maps have equal breakpoint tuples."""
    kept = [points[0]]
    for pt in points[1:]:
        while len(kept) >= 2 and _collinear(kept[-2], kept[-1], pt):
            kept.pop()
        kept.append(pt)
    return tuple(kept)


@dataclass(frozen=True)
class PLBijection:
    """A strictly increasing piecewise-linear bijection of [0, 1] fixing
    both endpoints, stored as breakpoints from (0, 0) to (1, 1).

    Construction canonicalizes (collinear interior breakpoints are
    dropped), so two instances are equal iff they are the same map.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.breakpoints)
        if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
            raise ValueError("breakpoints must run from (0,0) to (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 >= x1 or y0 >= y1:
                raise ValueError(
                    "breakpoints must be strictly increasing in both coordinates"
                )
        object.__setattr__(self, "breakpoints", _prune(pts))

    @classmethod
    def identity(cls) -> "PLBijection":
        return cls(((ZERO, ZERO), (ONE, ONE)))

    @classmethod
    def through(cls, anchors: Iterable[tuple[Fraction, Fraction]]) -> "PLBijection":
        """The bijection through the given interior anchor points.

        Anchors must be strictly increasing in both coordinates and lie in
        (0, 1) x (0, 1); the endpoints are added automatically.
        """
        pts = sorted((Fraction(x), Fraction(y)) for x, y in anchors)
        for x, y in pts:
            if not (ZERO < x < ONE and ZERO < y < ONE):
                raise ValueError("anchor points must be interior")
        return cls(((ZERO, ZERO), *pts, (ONE, ONE)))

    @property
    def is_identity(self) -> bool:
        return self.breakpoints == ((ZERO, ZERO), (ONE, ONE))

    def __call__(self, x: Fraction) -> Fraction:
        """Exact image of x under the map (x must lie in [0, 1])."""
        x = Fraction(x)
        if x < ZERO or x > ONE:
            raise PointError(f"{x} is outside [0, 1]")
        xs = [p[0] for p in self.breakpoints]
        i = bisect.bisect_right(xs, x)
        if i == len(xs):
            return ONE
        (x0, y0), (x1, y1) = self.breakpoints[i - 1], self.breakpoints[i]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def compose(self, other: "PLBijection") -> "PLBijection":
        """The map x -> self(other(x))."""
        other_inv = other.invert()
        xs = {x for x, _ in other.breakpoints}
        xs.update(other_inv(x) for x, _ in self.breakpoints)
        return PLBijection(tuple((x, self(other(x))) for x in sorted(xs)))

    def invert(self) -> "PLBijection":
        return PLBijection(tuple((y, x) for x, y in self.breakpoints))


def random_pl_bijection(seed: int, breakpoint_budget: int) -> PLBijection:
    """Deterministic pseudo-random automorphism with at most the given
    number of interior breakpoints; budget 0 gives the identity."""
    if breakpoint_budget < 0:
        raise ValueError("breakpoint budget must be >= 0")
    if breakpoint_budget == 0:
        return PLBijection.identity()
    rng = random.Random(seed * 1_000_003 + breakpoint_budget)
    denom = 4 * (breakpoint_budget + 1)
    xs = sorted(rng.sample(range(1, denom), breakpoint_budget))
    ys = sorted(rng.sample(range(1, denom), breakpoint_budget))
    return PLBijection.through(
        (Fraction(x, denom), Fraction(y, denom)) for x, y in zip(xs, ys)
    )
