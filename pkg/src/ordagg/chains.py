"""Finite chains, endpoint-preserving embeddings, and dense aggregation
tables.

A finite ordinal scale is a chain of ranks 0..k-1.  Placing the chain
inside an interval requires an endpoint-preserving strictly increasing
embedding: included endpoints are pinned to ranks 0 and k-1.  Functions on
the interval that respect order automorphisms pull back through any such
embedding to the same rank table, which is what `discrete_representative`
computes (and fails loudly when no representative exists).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .domain import IntervalSpec, ONE, ZERO

CELL_CAP = 10**7


class GridError(ValueError):
    """The requested lattice cannot hold the chain."""


class RepresentationError(ValueError):
    """The source function has no representative on the chain."""


class ChainMismatchError(ValueError):
    """Operation needs chains the table does not have."""


@dataclass(frozen=True)
class Chain:
    """A finite chain of ranks 0..size-1; 0 is the bottom, size-1 the top."""

    size: int

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("a chain needs at least two elements")


@dataclass(frozen=True)
class ChainEmbedding:
    """Strictly increasing, endpoint-preserving placement of chain ranks in
    an interval: an included inf pins rank 0 to 0, an included sup pins the
    top rank to 1, everything else lands in the interior."""

    interval: IntervalSpec
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise ValueError("a chain needs at least two elements")
        for a, b in zip(vals, vals[1:]):
            if a >= b:
                raise ValueError("embedding values must be strictly increasing")
        for v in vals:
            self.interval.require(v)
        if self.interval.has_inf and vals[0] != ZERO:
            raise ValueError("rank 0 must map to the included inf")
        if self.interval.has_sup and vals[-1] != ONE:
            raise ValueError("the top rank must map to the included sup")

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def chain(self) -> Chain:
        return Chain(len(self.values))

    def __call__(self, rank: int) -> Fraction:
        return self.values[rank]

    def rank_of(self, value: Fraction) -> Optional[int]:
        try:
            return self.values.index(Fraction(value))
        except ValueError:
            return None


def canonical_embedding(size: int, interval: IntervalSpec) -> ChainEmbedding:
    """The default placement: ranks spread as (i+1)/(size+1) with included
    endpoints pinned."""
    if size < 2:
        raise ValueError("a chain needs at least two elements")
    vals = [Fraction(i + 1, size + 1) for i in range(size)]
    if interval.has_inf:
        vals[0] = ZERO
    if interval.has_sup:
        vals[-1] = ONE
    return ChainEmbedding(interval, tuple(vals))


def enumerate_embeddings(
    size: int, grid: int, interval: IntervalSpec
) -> tuple[ChainEmbedding, ...]:
    """Every placement of the chain onto the lattice {i/grid : 0 <= i <= grid}
    restricted to the interval.  Pinned endpoints consume the lattice ends;
    the free ranks choose among the grid-1 interior lattice points."""
    if size < 2:
        raise ValueError("a chain needs at least two elements")
    if grid < size:
        raise GridError(f"grid {grid} too small for a chain of {size}")
    interior = [Fraction(i, grid) for i in range(1, grid)]
    free = size - interval.boundary_size
    if free > len(interior):
        raise GridError(
            f"grid {grid} has only {len(interior)} interior points; "
            f"{free} are needed"
        )
    prefix = [ZERO] if interval.has_inf else []
    suffix = [ONE] if interval.has_sup else []
    return tuple(
        ChainEmbedding(interval, tuple(prefix + list(combo) + suffix))
        for combo in itertools.combinations(interior, free)
    )


@dataclass(frozen=True)
class DiscreteTable:
    """A total aggregation table on finite chains, stored densely in
    row-major cell order.  Input chains need at least two ranks; the output
    chain may be smaller (a re-ranked constant table has a single rank)."""

    input_sizes: tuple[int, ...]
    output_size: int
    entries: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.input_sizes)
        object.__setattr__(self, "input_sizes", sizes)
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        if not sizes:
            raise ValueError("need at least one input chain")
        if any(s < 2 for s in sizes):
            raise ValueError("input chains need at least two elements")
        if self.output_size < 1:
            raise ValueError("output chain needs at least one element")
        total = math.prod(sizes)
        if total > CELL_CAP:
            raise ValueError(f"table of {total} cells exceeds the cap of {CELL_CAP}")
        if len(self.entries) != total:
            raise ValueError(
                f"expected {total} entries for sizes {sizes}, got {len(self.entries)}"
            )
        if any(not 0 <= e < self.output_size for e in self.entries):
            raise ValueError("entry outside the output chain")

    @property
    def arity(self) -> int:
        return len(self.input_sizes)

    @property
    def inputs_uniform(self) -> bool:
        return len(set(self.input_sizes)) == 1

    @property
    def square(self) -> bool:
        return self.inputs_uniform and self.output_size == self.input_sizes[0]

    def cells(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(s) for s in self.input_sizes))

    def _index(self, cell: Sequence[int]) -> int:
        idx = 0
        for size, r in zip(self.input_sizes, cell):
            if not 0 <= r < size:
                raise IndexError(f"rank {r} outside chain of {size}")
            idx = idx * size + r
        return idx

    def __getitem__(self, cell: Sequence[int]) -> int:
        return self.entries[self._index(cell)]

    @classmethod
    def from_function(
        cls,
        input_sizes: Sequence[int],
        output_size: int,
        fn: Callable[[tuple[int, ...]], int],
    ) -> "DiscreteTable":
        sizes = tuple(input_sizes)
        entries = tuple(fn(cell) for cell in itertools.product(*(range(s) for s in sizes)))
        return cls(sizes, output_size, entries)

    def attained(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.entries)))

    def normalize_output(self) -> "DiscreteTable":
        """Re-rank the outputs order-isomorphically onto 0..m-1 so the
        output chain is exactly the attained image."""
        ranks = {v: i for i, v in enumerate(self.attained())}
        return DiscreteTable(
            self.input_sizes, len(ranks), tuple(ranks[e] for e in self.entries)
        )


def discrete_representative(
    source,
    size: int,
    interval: IntervalSpec,
    arity: int | None = None,
    embedding: ChainEmbedding | None = None,
) -> DiscreteTable:
    """Pull the source back onto chain ranks through an endpoint-preserving
    embedding.

    `source` is either a callable on point tuples or an object with an
    `eval` method (and an `arity` attribute).  Every value must land on an
    embedded rank; a value outside the chain means the source has no
    representative there and raises RepresentationError.  For genuinely
    order invariant sources the result does not depend on the embedding.
    """
    fn = getattr(source, "eval", source)
    if arity is None:
        arity = getattr(source, "arity", None)
        if arity is None:
            raise ValueError("arity needed for a bare callable source")
    emb = embedding if embedding is not None else canonical_embedding(size, interval)
    if emb.size != size or emb.interval != interval:
        raise ValueError("embedding does not match the requested chain")
    entries = []
    for cell in itertools.product(range(size), repeat=arity):
        points = tuple(emb(r) for r in cell)
        value = fn(points)
        rank = emb.rank_of(value)
        if rank is None:
            raise RepresentationError(
                f"value {value} at cell {cell} is not on the chain: "
                "the source is not order invariant over this interval"
            )
        entries.append(rank)
    return DiscreteTable((size,) * arity, size, tuple(entries))


def tabulate_function(
    fn: Callable[[tuple[Fraction, ...]], Fraction],
    coordinate_points: Sequence[Sequence[Fraction]],
) -> DiscreteTable:
    """Sample a real-valued function on a rational grid (one strictly
    increasing point list per coordinate) and rank the attained outputs
    onto a fresh output chain."""
    grids = [tuple(Fraction(p) for p in pts) for pts in coordinate_points]
    for pts in grids:
        if len(pts) < 2 or any(a >= b for a, b in zip(pts, pts[1:])):
            raise ValueError("each coordinate needs >= 2 strictly increasing points")
    values = [fn(tuple(combo)) for combo in itertools.product(*grids)]
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return DiscreteTable(
        tuple(len(pts) for pts in grids),
        len(order),
        tuple(order[v] for v in values),
    )


def smoothness_violation(
    table: DiscreteTable,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """First cell pair (row-major, then coordinate) where a one-rank input
    step moves the output by more than one rank; None when smooth."""
    for cell in table.cells():
        out = table[cell]
        for j in range(table.arity):
            if cell[j] + 1 >= table.input_sizes[j]:
                continue
            neighbour = cell[:j] + (cell[j] + 1,) + cell[j + 1 :]
            if abs(table[neighbour] - out) > 1:
                return cell, neighbour
    return None


def is_smooth(table: DiscreteTable) -> bool:
    return smoothness_violation(table) is None


def nondecreasing_violation(
    table: DiscreteTable,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """First neighbouring cell pair where raising one input lowers the
    output; None when the table is nondecreasing."""
    for cell in table.cells():
        out = table[cell]
        for j in range(table.arity):
            if cell[j] + 1 >= table.input_sizes[j]:
                continue
            neighbour = cell[:j] + (cell[j] + 1,) + cell[j + 1 :]
            if table[neighbour] < out:
                return cell, neighbour
    return None


def is_nondecreasing(table: DiscreteTable) -> bool:
    return nondecreasing_violation(table) is None


@dataclass(frozen=True)
class TablePredicates:
    nondecreasing: bool
    idempotent: bool
    internal: bool
    symmetric: bool
    self_dual: bool


def table_predicates(table: DiscreteTable) -> TablePredicates:
    """Exhaustive structural predicates.  Everything except nondecreasing
    compares inputs with outputs, so all chains must coincide."""
    if not table.square:
        raise ChainMismatchError(
            "idempotent/internal/symmetric/self-dual need all chains equal"
        )
    size = table.input_sizes[0]
    idempotent = all(table[(r,) * table.arity] == r for r in range(size))
    internal = True
    symmetric = True
    self_dual = True
    for cell in table.cells():
        out = table[cell]
        if not min(cell) <= out <= max(cell):
            internal = False
        if table[tuple(sorted(cell))] != out:
            symmetric = False
        reflected = tuple(size - 1 - r for r in cell)
        if table[reflected] != size - 1 - out:
            self_dual = False
    return TablePredicates(
        nondecreasing=is_nondecreasing(table),
        idempotent=idempotent,
        internal=internal,
        symmetric=symmetric,
        self_dual=self_dual,
    )
