"""Orbit structure of tuples under order automorphisms.

Tuples in E^n fall into finitely many equivalence classes under increasing
bijections of E applied to every coordinate at once (order patterns with
boundary anchors) and, more coarsely, under bijections applied to each
coordinate independently (boundary patterns only).  Both kinds are
enumerated symbolically and recovered from sample points, and both carry
the coordinatewise partial order used by the monotone decompositions.
"""

from __future__ import annotations

import enum
import itertools
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .domain import IntervalSpec, ONE, ZERO

ENUMERATION_CAP = 12


def _enumeration_cap() -> int:
    return int(os.environ.get("ORDAGG_ENUMERATION_CAP", ENUMERATION_CAP))


class SizeCapError(ValueError):
    """Requested enumeration exceeds the configured size cap."""


class Level(enum.IntEnum):
    """Position of a single coordinate relative to the interval boundary."""

    BOTTOM = 0
    INTERIOR = 1
    TOP = 2

    @property
    def label(self) -> str:
        return self.name.lower()


def level_of(x: Fraction, interval: IntervalSpec) -> Level:
    x = interval.require(Fraction(x))
    if x == ZERO and interval.has_inf:
        return Level.BOTTOM
    if x == ONE and interval.has_sup:
        return Level.TOP
    return Level.INTERIOR


@dataclass(frozen=True)
class Orbit:
    """A minimal order invariant subset of E^n in canonical form.

    `blocks` is the ordered partition of coordinate indices (1-based) by
    increasing value; the anchor flags pin the first block to inf E and/or
    the last block to sup E.  A single block cannot carry both anchors.
    """

    blocks: tuple[tuple[int, ...], ...]
    anchored_bottom: bool = False
    anchored_top: bool = False

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        for block in blocks:
            if not block or list(block) != sorted(block):
                raise ValueError("each block must be a nonempty sorted index tuple")
            if seen & set(block):
                raise ValueError("blocks must be disjoint")
            seen.update(block)
        n = len(seen)
        if seen != set(range(1, n + 1)):
            raise ValueError("blocks must partition 1..n")
        if self.anchored_bottom and self.anchored_top and len(blocks) == 1:
            raise ValueError("a single block cannot touch both endpoints")

    @property
    def arity(self) -> int:
        return sum(len(b) for b in self.blocks)

    def valid_for(self, interval: IntervalSpec) -> bool:
        return (not self.anchored_bottom or interval.has_inf) and (
            not self.anchored_top or interval.has_sup
        )

    def projection(self, i: int) -> Level:
        """Boundary position of coordinate i (1-based) on this orbit."""
        if not 1 <= i <= self.arity:
            raise IndexError(f"coordinate {i} out of range 1..{self.arity}")
        if self.anchored_bottom and i in self.blocks[0]:
            return Level.BOTTOM
        if self.anchored_top and i in self.blocks[-1]:
            return Level.TOP
        return Level.INTERIOR

    def strong(self) -> "StrongOrbit":
        """The coordinatewise projection of this orbit."""
        return StrongOrbit(tuple(self.projection(i) for i in range(1, self.arity + 1)))

    def sort_key(self):
        return (len(self.blocks), self.blocks, (self.anchored_bottom, self.anchored_top))

    def to_text(self) -> str:
        body = "<".join("{" + ",".join(str(i) for i in b) + "}" for b in self.blocks)
        if self.anchored_bottom:
            body = "inf=" + body
        if self.anchored_top:
            body = body + "=sup"
        return body

    @classmethod
    def from_text(cls, text: str) -> "Orbit":
        body = text.strip()
        bottom = body.startswith("inf=")
        if bottom:
            body = body[4:]
        top = body.endswith("=sup")
        if top:
            body = body[:-4]
        blocks = []
        for part in body.split("<"):
            m = re.fullmatch(r"\{(\d+(?:,\d+)*)\}", part.strip())
            if not m:
                raise ValueError(f"malformed orbit text {text!r}")
            blocks.append(tuple(int(s) for s in m.group(1).split(",")))
        return cls(tuple(blocks), bottom, top)


@dataclass(frozen=True)
class StrongOrbit:
    """A minimal strongly order invariant subset: one boundary position per
    coordinate, a product of cells."""

    levels: tuple[Level, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(Level(v) for v in self.levels))
        if not self.levels:
            raise ValueError("need at least one coordinate")

    @property
    def arity(self) -> int:
        return len(self.levels)

    def valid_for(self, interval: IntervalSpec) -> bool:
        return all(
            (lv != Level.BOTTOM or interval.has_inf)
            and (lv != Level.TOP or interval.has_sup)
            for lv in self.levels
        )

    def projection(self, i: int) -> Level:
        if not 1 <= i <= self.arity:
            raise IndexError(f"coordinate {i} out of range 1..{self.arity}")
        return self.levels[i - 1]

    def sort_key(self):
        return tuple(int(lv) for lv in self.levels)

    def to_text(self) -> str:
        return "(" + ",".join(lv.label for lv in self.levels) + ")"


def pattern_of(points: Sequence[Fraction], interval: IntervalSpec) -> Orbit:
    """The unique orbit containing the tuple.

    Two tuples share an orbit iff some increasing bijection of E maps one
    to the other coordinate-for-coordinate with a single shared map.
    """
    xs = [interval.require(Fraction(x)) for x in points]
    if not xs:
        raise ValueError("need at least one coordinate")
    by_value: dict[Fraction, list[int]] = {}
    for i, x in enumerate(xs, start=1):
        by_value.setdefault(x, []).append(i)
    ordered = sorted(by_value)
    blocks = tuple(tuple(by_value[v]) for v in ordered)
    return Orbit(
        blocks,
        anchored_bottom=interval.has_inf and ordered[0] == ZERO,
        anchored_top=interval.has_sup and ordered[-1] == ONE,
    )


def strong_pattern_of(points: Sequence[Fraction], interval: IntervalSpec) -> StrongOrbit:
    """Coordinatewise boundary classification; the orbit under independent
    per-coordinate bijections."""
    if not points:
        raise ValueError("need at least one coordinate")
    return StrongOrbit(tuple(level_of(x, interval) for x in points))


def strong_orbit_of(orbit: Orbit) -> StrongOrbit:
    return orbit.strong()


def _ordered_set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    items = tuple(range(1, n + 1))

    def rec(remaining: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
        if not remaining:
            yield ()
            return
        for size in range(1, len(remaining) + 1):
            for block in itertools.combinations(remaining, size):
                taken = set(block)
                rest = tuple(i for i in remaining if i not in taken)
                for tail in rec(rest):
                    yield (block, *tail)

    return rec(items)


def enumerate_orbits(n: int, interval: IntervalSpec) -> tuple[Orbit, ...]:
    """All orbits of E^n, duplicate-free, in canonical order (block count,
    then block contents, then anchor flags)."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    cap = _enumeration_cap()
    if n > cap:
        raise SizeCapError(f"orbit enumeration capped at n={cap}, got n={n}")
    found = []
    for blocks in _ordered_set_partitions(n):
        for bottom in (False, True):
            if bottom and not interval.has_inf:
                continue
            for top in (False, True):
                if top and not interval.has_sup:
                    continue
                if bottom and top and len(blocks) == 1:
                    continue
                found.append(Orbit(blocks, bottom, top))
    found.sort(key=Orbit.sort_key)
    return tuple(found)


def enumerate_strong_orbits(n: int, interval: IntervalSpec) -> tuple[StrongOrbit, ...]:
    """All strong orbits of E^n: every combination of per-coordinate
    boundary positions, (1 + |boundary|)^n in total."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    cap = _enumeration_cap()
    if n > cap:
        raise SizeCapError(f"strong orbit enumeration capped at n={cap}, got n={n}")
    levels = [
        lv
        for lv in (Level.BOTTOM, Level.INTERIOR, Level.TOP)
        if (lv != Level.BOTTOM or interval.has_inf)
        and (lv != Level.TOP or interval.has_sup)
    ]
    return tuple(
        StrongOrbit(combo) for combo in itertools.product(levels, repeat=n)
    )


def orbit_leq(a, b) -> bool:
    """Coordinatewise partial order: BOTTOM < INTERIOR < TOP on every
    projection.  Both arguments must be of the same kind and arity."""
    if type(a) is not type(b):
        raise ValueError("cannot compare orbits of different kinds")
    if a.arity != b.arity:
        raise ValueError("mismatched arity")
    return all(a.projection(i) <= b.projection(i) for i in range(1, a.arity + 1))
