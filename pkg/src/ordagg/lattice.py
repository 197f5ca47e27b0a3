"""Lattice polynomial functions over real intervals.

A function built from projections with min and max is determined by a 0/1
set function on coordinate subsets, and exactly one nondecreasing set
function represents each polynomial; that canonical form makes equality,
enumeration and duality cheap.  Set functions are stored as bitmasks
indexed by subset mask, so evaluating alpha(S) is a single bit probe.

The two constant set functions are admitted as degenerate polynomials
(the included-endpoint constants) when the interval provides the matching
endpoint.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .domain import IntervalSpec, ONE, ZERO
from .orbits import SizeCapError

CN_CAP = 5


class ConstantPolynomialError(ValueError):
    """Constant polynomial over an interval lacking the matching endpoint."""


@dataclass(frozen=True)
class SetFunction:
    """alpha: subsets of [n] -> {0, 1}; bit m of `bits` is the value at the
    subset with characteristic mask m (coordinate i <-> bit i-1)."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("arity must be >= 1")
        if not 0 <= self.bits < 1 << (1 << self.n):
            raise ValueError("bit vector out of range for this arity")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def top_bits(self) -> int:
        return (1 << (1 << self.n)) - 1

    def value(self, mask: int) -> int:
        return self.bits >> mask & 1

    def is_constant(self) -> bool:
        return self.bits in (0, self.top_bits)

    def is_nondecreasing(self) -> bool:
        for m in range(1 << self.n):
            if not self.value(m):
                continue
            for i in range(self.n):
                if not self.value(m | 1 << i):
                    return False
        return True

    def in_cn(self) -> bool:
        return self.is_nondecreasing() and not self.is_constant()

    def allowed_over(self, interval: IntervalSpec) -> bool:
        """Membership in the extended family over the interval: constants
        are allowed only when the matching endpoint is included."""
        if not self.is_nondecreasing():
            return False
        if self.bits == 0:
            return interval.has_inf
        if self.bits == self.top_bits:
            return interval.has_sup
        return True

    def dual(self) -> "SetFunction":
        bits = 0
        for m in range(1 << self.n):
            if not self.value(self.full_mask ^ m):
                bits |= 1 << m
        return SetFunction(self.n, bits)

    def is_symmetric(self) -> bool:
        """True iff the value depends only on the subset size."""
        by_size: dict[int, int] = {}
        for m in range(1 << self.n):
            size = bin(m).count("1")
            v = self.value(m)
            if by_size.setdefault(size, v) != v:
                return False
        return True

    def min_true_masks(self) -> tuple[int, ...]:
        """Minimal true subsets; assumes a nondecreasing set function."""
        out = []
        for m in range(1 << self.n):
            if not self.value(m):
                continue
            if all(not self.value(m & ~(1 << i)) for i in range(self.n) if m >> i & 1):
                if m == 0 or any(m >> i & 1 for i in range(self.n)):
                    out.append(m)
        return tuple(out)

    def to_min_true_text(self) -> str:
        parts = []
        for m in self.min_true_masks():
            members = ",".join(str(i + 1) for i in range(self.n) if m >> i & 1)
            parts.append("{" + members + "}")
        return "[" + ",".join(parts) + "]"

    @classmethod
    def projection(cls, n: int, k: int) -> "SetFunction":
        if not 1 <= k <= n:
            raise ValueError(f"projection index {k} out of range 1..{n}")
        bits = 0
        for m in range(1 << n):
            if m >> (k - 1) & 1:
                bits |= 1 << m
        return cls(n, bits)

    @classmethod
    def order_statistic(cls, n: int, k: int) -> "SetFunction":
        if not 1 <= k <= n:
            raise ValueError(f"order statistic index {k} out of range 1..{n}")
        bits = 0
        for m in range(1 << n):
            if bin(m).count("1") >= n - k + 1:
                bits |= 1 << m
        return cls(n, bits)

    @classmethod
    def constant(cls, n: int, value: int) -> "SetFunction":
        return cls(n, 0 if not value else (1 << (1 << n)) - 1)


@dataclass(frozen=True)
class LatticePolynomial:
    """A lattice polynomial in canonical disjunctive form.

    `alpha` is the unique nondecreasing set function with
    alpha(S) = p(characteristic vector of S); the constant alphas encode
    the two endpoint constants.  Use `canonicalize` to build one from an
    arbitrary raw set function.
    """

    alpha: SetFunction

    def __post_init__(self):
        if not self.alpha.is_nondecreasing():
            raise ValueError("alpha must be nondecreasing; use canonicalize()")

    @property
    def arity(self) -> int:
        return self.alpha.n

    @property
    def beta(self) -> SetFunction:
        """The nonincreasing conjunctive companion: beta(S) is the value of
        the polynomial at the characteristic vector of the complement."""
        bits = 0
        full = self.alpha.full_mask
        for m in range(1 << self.arity):
            if self.alpha.value(full ^ m):
                bits |= 1 << m
        return SetFunction(self.arity, bits)

    def eval(self, points: Sequence[Fraction]) -> Fraction:
        return self.eval_disjunctive(points)

    def eval_disjunctive(self, points: Sequence[Fraction]) -> Fraction:
        """Max over true subsets of the min of the selected coordinates."""
        xs = self._check_arity(points)
        if self.alpha.bits == 0:
            return ZERO
        if self.alpha.bits == self.alpha.top_bits:
            return ONE
        best = None
        for m in range(1, 1 << self.arity):
            if not self.alpha.value(m):
                continue
            term = min(xs[i] for i in range(self.arity) if m >> i & 1)
            if best is None or term > best:
                best = term
        return best

    def eval_conjunctive(self, points: Sequence[Fraction]) -> Fraction:
        """Min over false co-subsets of the max of the selected coordinates."""
        xs = self._check_arity(points)
        if self.alpha.bits == 0:
            return ZERO
        if self.alpha.bits == self.alpha.top_bits:
            return ONE
        beta = self.beta
        best = None
        for m in range(1, 1 << self.arity):
            if beta.value(m):
                continue
            term = max(xs[i] for i in range(self.arity) if m >> i & 1)
            if best is None or term < best:
                best = term
        return best

    def _check_arity(self, points: Sequence[Fraction]):
        if len(points) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(points)}")
        return [Fraction(x) for x in points]

    def order_statistic_index(self) -> Optional[int]:
        """The index k if this polynomial is the k-th order statistic,
        else None.  Symmetric nonconstant polynomials are exactly the
        order statistics; constants have no index."""
        if self.alpha.is_constant() or not self.alpha.is_symmetric():
            return None
        threshold = min(bin(m).count("1") for m in self.alpha.min_true_masks())
        return self.arity - threshold + 1

    def dual(self) -> "LatticePolynomial":
        return LatticePolynomial(self.alpha.dual())

    def is_weakly_self_dual(self) -> bool:
        """Verdict from alpha alone; meaningful when the interval keeps
        either both or neither endpoint."""
        return self.alpha.dual() == self.alpha


def canonicalize(
    raw: SetFunction, interval: IntervalSpec | None = None
) -> LatticePolynomial:
    """Canonical polynomial disjunctively defined by an arbitrary raw set
    function, computed by evaluating the raw form on all characteristic
    vectors.  Idempotent on canonical input.

    Raises ConstantPolynomialError when the result is constant and no
    interval with the matching endpoint is supplied.
    """
    size = 1 << raw.n
    bits = 0
    for m in range(size):
        if any(raw.value(s) and s & m == s for s in range(size)):
            bits |= 1 << m
    alpha = SetFunction(raw.n, bits)
    if alpha.is_constant():
        endpoint_ok = (
            interval is not None
            and (interval.has_inf if bits == 0 else interval.has_sup)
        )
        if not endpoint_ok:
            which = "inf" if bits == 0 else "sup"
            raise ConstantPolynomialError(
                f"constant polynomial needs an interval containing its {which}"
            )
    return LatticePolynomial(alpha)


def projection(n: int, k: int) -> LatticePolynomial:
    return LatticePolynomial(SetFunction.projection(n, k))


def order_statistic(n: int, k: int) -> LatticePolynomial:
    return LatticePolynomial(SetFunction.order_statistic(n, k))


def median(n: int) -> LatticePolynomial:
    if n % 2 == 0:
        raise ValueError("median needs an odd number of arguments")
    return order_statistic(n, (n + 1) // 2)


def constant_bottom(n: int, interval: IntervalSpec) -> LatticePolynomial:
    if not interval.has_inf:
        raise ConstantPolynomialError("interval does not contain its inf")
    return LatticePolynomial(SetFunction.constant(n, 0))


def constant_top(n: int, interval: IntervalSpec) -> LatticePolynomial:
    if not interval.has_sup:
        raise ConstantPolynomialError("interval does not contain its sup")
    return LatticePolynomial(SetFunction.constant(n, 1))


def enumerate_cn(n: int, cap: int | None = None) -> tuple[SetFunction, ...]:
    """All nondecreasing nonconstant set functions on [n], ascending by bit
    vector.

    Built by pairing: a monotone function on k variables is a pair of
    monotone functions on k-1 variables with the lower half pointwise
    below the upper half, so the family is generated without scanning all
    2^(2^n) candidates.
    """
    if n < 1:
        raise ValueError("arity must be >= 1")
    if cap is None:
        cap = int(os.environ.get("ORDAGG_CN_CAP", CN_CAP))
    if n > cap:
        raise SizeCapError(f"set function enumeration capped at n={cap}, got n={n}")
    funcs = [0, 1]
    width = 1
    for _ in range(n):
        funcs = [
            lo | hi << width for hi in funcs for lo in funcs if lo & ~hi == 0
        ]
        width <<= 1
    top = (1 << width) - 1
    return tuple(SetFunction(n, bits) for bits in sorted(funcs) if bits not in (0, top))


def mode(points: Sequence[Fraction]) -> Fraction:
    """Smallest value of maximal multiplicity."""
    if not points:
        raise ValueError("mode needs at least one value")
    counts = Counter(Fraction(x) for x in points)
    best = max(counts.values())
    return min(v for v, c in counts.items() if c == best)
