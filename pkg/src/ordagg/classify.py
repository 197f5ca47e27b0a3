"""Classifiers for the three meaningfulness families, with witnesses.

A table on finite chains, together with a declared interval shape, is
checked structurally against each family:

* shared-scale invariance ("invariance"): on every order-pattern class the
  table must be one fixed coordinate or one included-endpoint constant;
* comparison meaningfulness on one shared scale ("cm-single"): the
  comparison between two outputs may depend only on the joint order
  pattern of the two input tuples;
* comparison meaningfulness on independent scales ("cm-independent"):
  the comparison may depend only on the per-coordinate boundary positions
  and per-coordinate comparisons.

The cm families are decided twice, on purpose: the pattern-functionality
check transcribes the definition directly, and the range-relation check
rebuilds the structural form (one coordinate plus a strictly monotone or
constant value map per class, with ranges pairwise equal, separated, or a
shared singleton).  The two must agree; the exhaustive test sweeps enforce
that.

Every rejection returns a `Witness` that replays the violation from its
own stored data.  For functions on the continuous domain only randomized
falsification is offered: a found witness is a proof, an empty budget is
not.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .chains import (
    ChainMismatchError,
    DiscreteTable,
    canonical_embedding,
    nondecreasing_violation,
    smoothness_violation,
)
from .domain import IntervalSpec, ONE, PLBijection, ZERO, random_pl_bijection
from .lattice import SetFunction, enumerate_cn
from .orbits import Level, Orbit, SizeCapError, StrongOrbit, orbit_leq, pattern_of

DEFAULT_SEED = 1729

FAMILIES = ("order-invariant", "cm-single", "cm-independent")


class NotInFamilyError(ValueError):
    """Decomposition requested for a table outside the family."""


class NotNondecreasingError(ValueError):
    """Monotone decomposition requested for a non-monotone table."""


def sign(a, b) -> int:
    return (a > b) - (a < b)


# ---------------------------------------------------------------------------
# Order patterns of rank tuples
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _rank_pattern_cached(cell: tuple, size: int, interval: IntervalSpec) -> Orbit:
    emb = canonical_embedding(size, interval)
    return pattern_of(tuple(emb(r) for r in cell), interval)


def rank_pattern(cell: Sequence[int], size: int, interval: IntervalSpec) -> Orbit:
    """Order pattern of a rank tuple: ranks behave like interior points,
    except rank 0 is the included inf and the top rank the included sup."""
    return _rank_pattern_cached(tuple(cell), size, interval)


def rank_level(rank: int, size: int, interval: IntervalSpec) -> Level:
    if rank == 0 and interval.has_inf:
        return Level.BOTTOM
    if rank == size - 1 and interval.has_sup:
        return Level.TOP
    return Level.INTERIOR


def rank_strong_pattern(
    cell: Sequence[int], sizes: Sequence[int], interval: IntervalSpec
) -> StrongOrbit:
    return StrongOrbit(
        tuple(rank_level(r, s, interval) for r, s in zip(cell, sizes))
    )


def _pair_key_single(a, b, size, interval):
    return _rank_pattern_cached(a + b, size, interval)


def _pair_key_indep(a, b, sizes, interval):
    return tuple(
        (rank_level(x, s, interval), rank_level(y, s, interval), sign(x, y))
        for x, y, s in zip(a, b, sizes)
    )


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    """Concrete evidence that a table or function breaks a family's
    defining condition.  `replay` re-derives the violation from the stored
    data alone (table kinds) or from the stored transformations plus the
    function (continuous kinds)."""

    kind: str  # invariance | cm-single | cm-independent | monotonicity | smoothness
    interval: IntervalSpec
    inputs: tuple[tuple, ...]
    images: tuple[tuple, ...] = ()
    outputs: tuple = ()
    transforms: tuple[PLBijection, ...] = ()
    sizes: tuple[int, ...] = ()
    detail: str = ""

    def replay(self, fn: Callable | None = None, table: DiscreteTable | None = None) -> bool:
        if self.transforms:
            if fn is None:
                raise ValueError("replaying this witness needs the function")
            return self._replay_function(fn)
        return self._replay_table(table)

    def _replay_function(self, fn) -> bool:
        if self.kind == "invariance":
            (x,) = self.inputs
            phi = self.transforms[0]
            fx = fn(x)
            return fn(tuple(phi(v) for v in x)) != phi(fx)
        if self.kind in ("cm-single", "cm-independent"):
            x, y = self.inputs
            if self.kind == "cm-single":
                if len(self.transforms) != 1:
                    return False
                phi = self.transforms[0]
                px = tuple(phi(v) for v in x)
                py = tuple(phi(v) for v in y)
            else:
                if len(self.transforms) != len(x):
                    return False
                px = tuple(t(v) for t, v in zip(self.transforms, x))
                py = tuple(t(v) for t, v in zip(self.transforms, y))
            return sign(fn(x), fn(y)) != sign(fn(px), fn(py))
        raise ValueError(f"witness kind {self.kind!r} does not replay on a function")

    def _replay_table(self, table: DiscreteTable | None) -> bool:
        if table is not None and not self._outputs_match(table):
            return False
        if self.kind == "invariance":
            return self._replay_invariance()
        if self.kind in ("cm-single", "cm-independent"):
            return self._replay_cm()
        if self.kind == "monotonicity":
            a, b = self.inputs
            return _one_step(a, b) and self.outputs[0] > self.outputs[1]
        if self.kind == "smoothness":
            a, b = self.inputs
            return _one_step(a, b) and abs(self.outputs[0] - self.outputs[1]) > 1
        raise ValueError(f"unknown witness kind {self.kind!r}")

    def _outputs_match(self, table) -> bool:
        cells = self.inputs + self.images
        return all(table[c] == o for c, o in zip(cells, self.outputs))

    def _replay_invariance(self) -> bool:
        size = self.sizes[0]
        if len(self.inputs) == 1:
            (a,) = self.inputs
            out = self.outputs[0]
            if out in a:
                return False
            if self.interval.has_inf and out == 0:
                return False
            if self.interval.has_sup and out == size - 1:
                return False
            return True
        a, b = self.inputs
        if rank_pattern(a, size, self.interval) != rank_pattern(b, size, self.interval):
            return False
        out_a, out_b = self.outputs
        mapping = dict(zip(a, b))
        if self.interval.has_inf:
            mapping.setdefault(0, 0)
        if self.interval.has_sup:
            mapping.setdefault(size - 1, size - 1)
        expected = mapping.get(out_a)
        return expected is None or expected != out_b

    def _replay_cm(self) -> bool:
        if not self.images:
            return self._replay_cm_structural()
        a0, b0 = self.inputs
        a1, b1 = self.images
        if self.kind == "cm-single":
            size = self.sizes[0]
            same = _pair_key_single(a0, b0, size, self.interval) == _pair_key_single(
                a1, b1, size, self.interval
            )
        else:
            same = _pair_key_indep(a0, b0, self.sizes, self.interval) == _pair_key_indep(
                a1, b1, self.sizes, self.interval
            )
        o = self.outputs
        return same and sign(o[0], o[1]) != sign(o[2], o[3])

    def _replay_cm_structural(self) -> bool:
        """Re-run the per-class analysis on the stored cells alone; the
        violation is confirmed iff already those cells admit no structure."""
        independent = self.kind == "cm-independent"
        classes: dict = {}
        for cell, out in zip(self.inputs, self.outputs):
            if independent:
                key = rank_strong_pattern(cell, self.sizes, self.interval)
            else:
                key = rank_pattern(cell, self.sizes[0], self.interval)
            classes.setdefault(key, []).append((cell, out))
        candidate_lists = []
        ranges = []
        for _, items in sorted(classes.items(), key=lambda kv: kv[0].sort_key()):
            arity = len(items[0][0])
            found = []
            for k in range(arity):
                mapping: dict = {}
                ok = True
                for cell, out in items:
                    if mapping.setdefault(cell[k], out) != out:
                        ok = False
                        break
                if ok and _map_shape(mapping) is not None:
                    found.append((k + 1, mapping))
            if not found:
                return True
            candidate_lists.append(found)
            ranges.append(frozenset(out for _, out in items))
        n = len(candidate_lists)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if _range_relation(ranges[i], ranges[j]) == "forced":
                    parent[find(i)] = find(j)
        components: dict = {}
        for i in range(n):
            components.setdefault(find(i), []).append(i)
        return any(
            _solve_shared_map([candidate_lists[i] for i in idx]) is None
            for idx in components.values()
        )


def _one_step(a, b) -> bool:
    diffs = [(x, y) for x, y in zip(a, b) if x != y]
    return len(a) == len(b) and len(diffs) == 1 and abs(diffs[0][0] - diffs[0][1]) == 1


def monotonicity_witness(table: DiscreteTable, interval: IntervalSpec) -> Optional[Witness]:
    pair = nondecreasing_violation(table)
    if pair is None:
        return None
    a, b = pair
    return Witness(
        kind="monotonicity",
        interval=interval,
        inputs=(a, b),
        outputs=(table[a], table[b]),
        sizes=table.input_sizes,
        detail="raising one input lowers the output",
    )


def smoothness_witness(table: DiscreteTable, interval: IntervalSpec) -> Optional[Witness]:
    pair = smoothness_violation(table)
    if pair is None:
        return None
    a, b = pair
    return Witness(
        kind="smoothness",
        interval=interval,
        inputs=(a, b),
        outputs=(table[a], table[b]),
        sizes=table.input_sizes,
        detail="a one-rank input step moves the output by more than one rank",
    )


# ---------------------------------------------------------------------------
# Order invariance on tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitAssignment:
    """Everything that explains a pattern class: the coordinates the table
    projects onto throughout the class, and the endpoint constants it
    equals throughout the class.  At least one of the two is nonempty."""

    projections: tuple[int, ...]
    constants: tuple[str, ...]  # subset of ("inf", "sup")

    def describe(self) -> str:
        if self.projections:
            return f"proj {self.projections[0]}"
        return f"const {self.constants[0]}"


@dataclass(frozen=True)
class OrderInvariantForm:
    """Per-pattern-class explanation of an order invariant table; doubles
    as an evaluable function on point tuples for re-representation."""

    interval: IntervalSpec
    size: int
    arity: int
    assignments: tuple[tuple[Orbit, OrbitAssignment], ...]

    @functools.cached_property
    def _mapping(self) -> dict[Orbit, OrbitAssignment]:
        return dict(self.assignments)

    def assignment_for(self, orbit: Orbit) -> OrbitAssignment:
        return self._mapping[orbit]

    def eval(self, points: Sequence[Fraction]) -> Fraction:
        pattern = pattern_of(points, self.interval)
        assignment = self._mapping.get(pattern)
        if assignment is None:
            raise ValueError(f"pattern {pattern.to_text()} not covered by this form")
        if assignment.projections:
            return Fraction(points[assignment.projections[0] - 1])
        return ZERO if assignment.constants[0] == "inf" else ONE


def check_order_invariant(
    table: DiscreteTable, interval: IntervalSpec
) -> Union[OrderInvariantForm, Witness]:
    """Structural decision: on every order-pattern class the table must be
    one fixed coordinate throughout, or one included-endpoint constant
    throughout.  Returns the explanation, or the first witness."""
    if not table.square:
        raise ChainMismatchError("order invariance needs a table S^n -> S on one chain")
    size = table.input_sizes[0]
    running: dict[Orbit, tuple[set, set]] = {}
    history: dict[Orbit, list] = {}
    for cell in table.cells():
        out = table[cell]
        projections = frozenset(i + 1 for i, r in enumerate(cell) if r == out)
        constants = frozenset(
            name
            for name, included, rank in (
                ("inf", interval.has_inf, 0),
                ("sup", interval.has_sup, size - 1),
            )
            if included and out == rank
        )
        if not projections and not constants:
            return Witness(
                kind="invariance",
                interval=interval,
                inputs=(cell,),
                outputs=(out,),
                sizes=table.input_sizes,
                detail="output is neither a coordinate nor an included endpoint",
            )
        pattern = rank_pattern(cell, size, interval)
        if pattern not in running:
            running[pattern] = (set(projections), set(constants))
            history[pattern] = [(cell, projections, constants)]
            continue
        live_proj, live_const = running[pattern]
        live_proj &= projections
        live_const &= constants
        if not live_proj and not live_const:
            for prev, prev_proj, prev_const in history[pattern]:
                if not (prev_proj & projections) and not (prev_const & constants):
                    return Witness(
                        kind="invariance",
                        interval=interval,
                        inputs=(prev, cell),
                        outputs=(table[prev], out),
                        sizes=table.input_sizes,
                        detail="same order pattern, incompatible outputs",
                    )
            prev = history[pattern][0][0]
            return Witness(
                kind="invariance",
                interval=interval,
                inputs=(prev, cell),
                outputs=(table[prev], out),
                sizes=table.input_sizes,
                detail="pattern class admits no shared explanation",
            )
        history[pattern].append((cell, projections, constants))
    assignments = tuple(
        (pattern, OrbitAssignment(tuple(sorted(p)), tuple(sorted(c))))
        for pattern, (p, c) in sorted(running.items(), key=lambda kv: kv[0].sort_key())
    )
    return OrderInvariantForm(interval, size, table.arity, assignments)


# ---------------------------------------------------------------------------
# Comparison meaningfulness on tables
# ---------------------------------------------------------------------------

def cm_pattern_violation(
    table: DiscreteTable, interval: IntervalSpec, independent: bool = False
) -> Optional[Witness]:
    """Definitional check: the comparison between two outputs may depend
    only on the joint pattern of the two input tuples (shared scale), or on
    the per-coordinate boundary positions and comparisons (independent
    scales).  Returns the first conflicting pair of pairs, scanning cells
    in row-major order."""
    if not independent and not table.inputs_uniform:
        raise ChainMismatchError("a single shared scale needs equal input chains")
    cells = list(table.cells())
    size = table.input_sizes[0]
    sizes = table.input_sizes
    kind = "cm-independent" if independent else "cm-single"
    seen: dict = {}
    for a in cells:
        out_a = table[a]
        for b in cells:
            if independent:
                key = _pair_key_indep(a, b, sizes, interval)
            else:
                key = _pair_key_single(a, b, size, interval)
            s = sign(out_a, table[b])
            first = seen.get(key)
            if first is None:
                seen[key] = (a, b, s)
            elif first[2] != s:
                return Witness(
                    kind=kind,
                    interval=interval,
                    inputs=(first[0], first[1]),
                    images=(a, b),
                    outputs=(table[first[0]], table[first[1]], out_a, table[b]),
                    sizes=sizes,
                    detail="same joint pattern, opposite comparison",
                )
    return None


def _map_shape(mapping: dict) -> Optional[str]:
    outs = [mapping[k] for k in sorted(mapping)]
    if all(o == outs[0] for o in outs):
        return "constant"
    if all(a < b for a, b in zip(outs, outs[1:])):
        return "increasing"
    if all(a > b for a, b in zip(outs, outs[1:])):
        return "decreasing"
    return None


@dataclass(frozen=True)
class GClass:
    """A strictly monotone or constant value map shared by one group of
    pattern classes, as explicit (input rank, output rank) pairs."""

    mapping: tuple[tuple[int, int], ...]

    @property
    def shape(self) -> str:
        return _map_shape(dict(self.mapping))

    @property
    def outputs(self) -> frozenset:
        return frozenset(v for _, v in self.mapping)

    def describe(self) -> str:
        pairs = " ".join(f"{a}->{b}" for a, b in self.mapping)
        return f"{self.shape} [{pairs}]"


@dataclass(frozen=True)
class CMSingleForm:
    interval: IntervalSpec
    input_size: int
    output_size: int
    assignments: tuple[tuple[Orbit, int, int], ...]  # (class, coordinate, g index)
    g_classes: tuple[GClass, ...]


@dataclass(frozen=True)
class CMIndependentForm:
    interval: IntervalSpec
    input_sizes: tuple[int, ...]
    output_size: int
    assignments: tuple[tuple[StrongOrbit, int, int], ...]
    g_classes: tuple[GClass, ...]


def _cm_classes(table, interval, independent):
    groups: dict = {}
    if independent:
        for cell in table.cells():
            groups.setdefault(
                rank_strong_pattern(cell, table.input_sizes, interval), []
            ).append(cell)
    else:
        size = table.input_sizes[0]
        for cell in table.cells():
            groups.setdefault(rank_pattern(cell, size, interval), []).append(cell)
    return sorted(groups.items(), key=lambda kv: kv[0].sort_key())


def _class_candidates(cells, table):
    found = []
    for k in range(table.arity):
        mapping: dict = {}
        ok = True
        for cell in cells:
            out = table[cell]
            if mapping.setdefault(cell[k], out) != out:
                ok = False
                break
        if ok and _map_shape(mapping) is not None:
            found.append((k + 1, mapping))
    return found


def _range_relation(r1: frozenset, r2: frozenset) -> str:
    if max(r1) < min(r2) or max(r2) < min(r1):
        return "separated"
    if r1 == r2 and len(r1) == 1:
        return "equal-singleton"
    return "forced"


def _merge_ok(merged: dict, extra: dict) -> bool:
    return all(merged.get(k, v) == v for k, v in extra.items())


def _solve_shared_map(candidate_lists):
    """Pick one candidate per class so a single strictly monotone or
    constant map covers them all; first solution in candidate order."""
    chosen: list = []

    def rec(i, merged):
        if i == len(candidate_lists):
            return _map_shape(merged) is not None
        for k, mapping in candidate_lists[i]:
            if _merge_ok(merged, mapping):
                trial = dict(merged)
                trial.update(mapping)
                chosen.append((k, mapping))
                if rec(i + 1, trial):
                    return True
                chosen.pop()
        return False

    if rec(0, {}):
        return list(chosen)
    return None


def _minimal_grouping(candidate_lists, component_ids):
    """Branch-and-bound search for the fewest shared value maps explaining
    all classes; classes in the same forced component must share a map."""
    n = len(candidate_lists)
    best: Optional[tuple] = None

    def rec(i, groups, members, comp_to_group, choices):
        nonlocal best
        if best is not None and len(groups) >= len(best[0]):
            return
        if i == n:
            if all(_map_shape(g) is not None for g in groups):
                best = ([dict(g) for g in groups], list(members), list(choices))
            return
        cid = component_ids[i]
        forced_group = comp_to_group.get(cid)
        for k, mapping in candidate_lists[i]:
            if forced_group is not None:
                targets = [forced_group]
            else:
                targets = list(range(len(groups))) + [len(groups)]
            for gi in targets:
                if gi == len(groups):
                    groups.append(dict(mapping))
                    members.append([i])
                    comp_to_group[cid] = gi
                    choices.append((k, gi))
                    rec(i + 1, groups, members, comp_to_group, choices)
                    choices.pop()
                    del comp_to_group[cid]
                    members.pop()
                    groups.pop()
                else:
                    if not _merge_ok(groups[gi], mapping):
                        continue
                    saved = dict(groups[gi])
                    groups[gi].update(mapping)
                    members[gi].append(i)
                    had = cid in comp_to_group
                    comp_to_group[cid] = gi
                    choices.append((k, gi))
                    rec(i + 1, groups, members, comp_to_group, choices)
                    choices.pop()
                    if not had:
                        del comp_to_group[cid]
                    members[gi].pop()
                    groups[gi] = saved

    rec(0, [], [], {}, [])
    return best


def cm_range_form(
    table: DiscreteTable,
    interval: IntervalSpec,
    independent: bool = False,
    minimize_g: bool = False,
) -> Union[CMSingleForm, CMIndependentForm, None]:
    """Structural decision through the per-class form: one coordinate and
    one strictly monotone or constant value map per pattern class, with
    ranges of distinct maps pairwise separated or a shared singleton.
    Returns the form, or None when no such form exists.

    With `minimize_g`, a branch-and-bound pass also merges compatible maps
    so the reported number of distinct value maps is minimal.
    """
    if not independent and not table.inputs_uniform:
        raise ChainMismatchError("a single shared scale needs equal input chains")
    classes = _cm_classes(table, interval, independent)
    candidate_lists = [_class_candidates(cells, table) for _, cells in classes]
    if any(not lst for lst in candidate_lists):
        return None
    ranges = [frozenset(table[c] for c in cells) for _, cells in classes]
    n = len(classes)

    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _range_relation(ranges[i], ranges[j]) == "forced":
                parent[find(i)] = find(j)

    component_ids = [find(i) for i in range(n)]
    components: dict = {}
    for i, cid in enumerate(component_ids):
        components.setdefault(cid, []).append(i)

    group_of = [0] * n
    coordinate_of = [0] * n
    group_maps: list[dict] = []
    if minimize_g and n <= 16:
        solved = _minimal_grouping(candidate_lists, component_ids)
        if solved is None:
            return None
        maps, _, choices = solved
        group_maps = maps
        for i, (k, gi) in enumerate(choices):
            coordinate_of[i] = k
            group_of[i] = gi
    else:
        for cid in sorted(components, key=lambda c: components[c][0]):
            idx = components[cid]
            solution = _solve_shared_map([candidate_lists[i] for i in idx])
            if solution is None:
                return None
            merged: dict = {}
            for (k, mapping), i in zip(solution, idx):
                merged.update(mapping)
                coordinate_of[i] = k
                group_of[i] = len(group_maps)
            group_maps.append(merged)

    g_classes = tuple(GClass(tuple(sorted(m.items()))) for m in group_maps)
    assignments = tuple(
        (classes[i][0], coordinate_of[i], group_of[i]) for i in range(n)
    )
    if independent:
        return CMIndependentForm(
            interval, table.input_sizes, table.output_size, assignments, g_classes
        )
    return CMSingleForm(
        interval, table.input_sizes[0], table.output_size, assignments, g_classes
    )


def _structural_cm_witness(table, interval, independent: bool) -> Witness:
    """Witness for a table that defeats the per-class form even though no
    pair of grid pairs exposes it: the cells of the offending class (or of
    the offending group of classes with entangled output ranges), which
    replay by re-running the class analysis on the stored data."""
    kind = "cm-independent" if independent else "cm-single"
    classes = _cm_classes(table, interval, independent)
    for key, cells in classes:
        if not _class_candidates(cells, table):
            return Witness(
                kind=kind,
                interval=interval,
                inputs=tuple(cells),
                outputs=tuple(table[c] for c in cells),
                sizes=table.input_sizes,
                detail="no strictly monotone or constant single-coordinate "
                "map explains this pattern class",
            )
    candidate_lists = [_class_candidates(cells, table) for _, cells in classes]
    ranges = [frozenset(table[c] for c in cells) for _, cells in classes]
    n = len(classes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _range_relation(ranges[i], ranges[j]) == "forced":
                parent[find(i)] = find(j)
    components: dict = {}
    for i in range(n):
        components.setdefault(find(i), []).append(i)
    for idx in sorted(components.values(), key=lambda ix: ix[0]):
        if _solve_shared_map([candidate_lists[i] for i in idx]) is None:
            cells = [c for i in idx for c in classes[i][1]]
            return Witness(
                kind=kind,
                interval=interval,
                inputs=tuple(cells),
                outputs=tuple(table[c] for c in cells),
                sizes=table.input_sizes,
                detail="classes with entangled output ranges admit no shared "
                "strictly monotone or constant value map",
            )
    raise RuntimeError("structural witness requested for a member table")


def check_cm_single(
    table: DiscreteTable, interval: IntervalSpec, minimize_g: bool = False
) -> Union[CMSingleForm, Witness]:
    """Comparison meaningfulness on one shared ordinal scale.

    The verdict is the structural per-class form (the exact family); the
    definitional pattern check supplies the witness when it sees the
    violation (it is necessary but, on coarse chains, not sufficient), and
    a class-analysis witness covers the remaining rejections.
    """
    form = cm_range_form(table, interval, independent=False, minimize_g=minimize_g)
    if form is not None:
        return form
    witness = cm_pattern_violation(table, interval, independent=False)
    if witness is not None:
        return witness
    return _structural_cm_witness(table, interval, independent=False)


def check_cm_independent(
    table: DiscreteTable, interval: IntervalSpec, minimize_g: bool = False
) -> Union[CMIndependentForm, Witness]:
    """Comparison meaningfulness on independent ordinal scales; see
    `check_cm_single` for the verdict/witness split."""
    form = cm_range_form(table, interval, independent=True, minimize_g=minimize_g)
    if form is not None:
        return form
    witness = cm_pattern_violation(table, interval, independent=True)
    if witness is not None:
        return witness
    return _structural_cm_witness(table, interval, independent=True)


# ---------------------------------------------------------------------------
# Monotone decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionEntry:
    orbit: StrongOrbit
    alpha: Optional[SetFunction] = None
    coordinate: Optional[int] = None
    g: Optional[GClass] = None


@dataclass(frozen=True)
class Decomposition:
    """Boundary-pattern-indexed form of a nondecreasing member: a
    polynomial (and for the cm families a value map) per class, chosen
    monotone along the coordinatewise class order."""

    family: str
    interval: IntervalSpec
    entries: tuple[DecompositionEntry, ...]

    def entry_for(self, orbit: StrongOrbit) -> DecompositionEntry:
        for e in self.entries:
            if e.orbit == orbit:
                return e
        raise KeyError(orbit.to_text())

    @property
    def interior_alpha(self) -> Optional[SetFunction]:
        for e in self.entries:
            if all(lv == Level.INTERIOR for lv in e.orbit.levels):
                return e.alpha
        return None

    @property
    def idempotent_compatible(self) -> bool:
        """Whether the all-interior class carries a nonconstant polynomial,
        as an idempotent member must."""
        alpha = self.interior_alpha
        return alpha is not None and not alpha.is_constant()


def _alpha_on_ranks(alpha: SetFunction, cell, size: int) -> int:
    if alpha.bits == 0:
        return 0
    if alpha.bits == alpha.top_bits:
        return size - 1
    best = None
    for mask in range(1, 1 << alpha.n):
        if alpha.value(mask):
            term = min(cell[i] for i in range(alpha.n) if mask >> i & 1)
            if best is None or term > best:
                best = term
    return best


def _alpha_leq(a: SetFunction, b: SetFunction) -> bool:
    return a.bits & ~b.bits == 0


def _alpha_universe(n: int, interval: IntervalSpec):
    universe = list(enumerate_cn(n))
    if interval.has_inf:
        universe.insert(0, SetFunction.constant(n, 0))
    if interval.has_sup:
        universe.append(SetFunction.constant(n, 1))
    return universe


def _g_increasing_leq(g1: dict, g2: dict) -> bool:
    r1, r2 = set(g1.values()), set(g2.values())
    if len(r1) == 1 and r1 == r2:
        return True
    if max(r1) < min(r2):
        return True
    if _merge_ok(g1, g2):
        union = dict(g1)
        union.update(g2)
        return _map_shape(union) in ("constant", "increasing")
    return False


def decompose_nondecreasing(
    table: DiscreteTable,
    interval: IntervalSpec,
    family: str = "order-invariant",
) -> Decomposition:
    """Express a nondecreasing member of the family per boundary-pattern
    class.

    * order-invariant: a polynomial per class, with the class-to-polynomial
      map nondecreasing; prefers one global polynomial when it exists,
      otherwise picks the smallest consistent polynomial per class.
    * cm-single: a polynomial plus a strictly increasing or constant value
      map per class, both chosen nondecreasing along the class order.
    * cm-independent: a coordinate plus a strictly increasing or constant
      value map per class; classes sharing a nonconstant map must share the
      coordinate.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if nondecreasing_violation(table) is not None:
        raise NotNondecreasingError("table is not nondecreasing")
    if family == "order-invariant":
        outcome = check_order_invariant(table, interval)
    elif family == "cm-single":
        outcome = cm_pattern_violation(table, interval, independent=False)
    else:
        outcome = cm_pattern_violation(table, interval, independent=True)
    if isinstance(outcome, Witness):
        raise NotInFamilyError(f"table is not {family}: {outcome.detail}")

    classes = _cm_classes(table, interval, independent=True)  # boundary classes
    n = table.arity
    size = table.input_sizes[0]

    if family == "order-invariant":
        universe = _alpha_universe(n, interval)
        candidates = [
            [
                alpha
                for alpha in universe
                if all(_alpha_on_ranks(alpha, cell, size) == table[cell] for cell in cells)
            ]
            for _, cells in classes
        ]
        if any(not c for c in candidates):
            raise NotInFamilyError("no polynomial fits some class")
        shared = set(range(len(universe)))
        by_alpha = [{a.bits for a in cand} for cand in candidates]
        common = set.intersection(*[set(bits) for bits in by_alpha])
        if common:
            bits = min(common)
            alpha = next(a for a in universe if a.bits == bits)
            chosen = [alpha] * len(classes)
        else:
            chosen = _fit_monotone(
                [c for c in candidates],
                [key for key, _ in classes],
                leq=lambda a, b: _alpha_leq(a, b),
                order=lambda a: a.bits,
            )
            if chosen is None:
                raise NotInFamilyError("no nondecreasing polynomial selection exists")
        entries = tuple(
            DecompositionEntry(orbit=key, alpha=alpha)
            for (key, _), alpha in zip(classes, chosen)
        )
        return Decomposition(family, interval, entries)

    if family == "cm-single":
        universe = _alpha_universe(n, interval)
        candidates = []
        for _, cells in classes:
            fits = []
            for alpha in universe:
                g: dict = {}
                ok = True
                for cell in cells:
                    v = _alpha_on_ranks(alpha, cell, size)
                    if g.setdefault(v, table[cell]) != table[cell]:
                        ok = False
                        break
                if ok and _map_shape(g) in ("constant", "increasing"):
                    fits.append((alpha, g))
            if not fits:
                raise NotInFamilyError("no transformed polynomial fits some class")
            fits.sort(key=lambda ag: (ag[0].bits, tuple(sorted(ag[1].items()))))
            candidates.append(fits)
        chosen = _fit_monotone(
            candidates,
            [key for key, _ in classes],
            leq=lambda x, y: _alpha_leq(x[0], y[0]) and _g_increasing_leq(x[1], y[1]),
            order=lambda x: (x[0].bits, tuple(sorted(x[1].items()))),
        )
        if chosen is None:
            raise NotInFamilyError("no nondecreasing selection exists")
        entries = tuple(
            DecompositionEntry(
                orbit=key, alpha=alpha, g=GClass(tuple(sorted(g.items())))
            )
            for (key, _), (alpha, g) in zip(classes, chosen)
        )
        return Decomposition(family, interval, entries)

    # cm-independent
    candidates = []
    for _, cells in classes:
        fits = []
        for k in range(1, n + 1):
            g: dict = {}
            ok = True
            for cell in cells:
                if g.setdefault(cell[k - 1], table[cell]) != table[cell]:
                    ok = False
                    break
            if ok and _map_shape(g) in ("constant", "increasing"):
                fits.append((k, g))
        if not fits:
            raise NotInFamilyError("no transformed projection fits some class")
        candidates.append(fits)

    def coupled_ok(assigned):
        for (k1, g1), (k2, g2) in itertools.combinations(assigned, 2):
            if g1 == g2 and _map_shape(g1) != "constant" and k1 != k2:
                return False
        return True

    chosen = _fit_monotone(
        candidates,
        [key for key, _ in classes],
        leq=lambda x, y: _g_increasing_leq(x[1], y[1]),
        order=lambda x: (x[0], tuple(sorted(x[1].items()))),
        extra=coupled_ok,
    )
    if chosen is None:
        raise NotInFamilyError("no coupled nondecreasing selection exists")
    entries = tuple(
        DecompositionEntry(orbit=key, coordinate=k, g=GClass(tuple(sorted(g.items()))))
        for (key, _), (k, g) in zip(classes, chosen)
    )
    return Decomposition(family, interval, entries)


def _fit_monotone(candidates, keys, leq, order, extra=None):
    """Deterministic backtracking selection, one candidate per class, with
    the selection monotone along the coordinatewise class order."""
    n = len(candidates)
    comparable = [
        [
            (j, orbit_leq(keys[j], keys[i]), orbit_leq(keys[i], keys[j]))
            for j in range(i)
        ]
        for i in range(n)
    ]
    picked: list = []

    def rec(i):
        if i == n:
            return extra is None or extra(picked)
        for cand in sorted(candidates[i], key=order):
            ok = True
            for j, j_below_i, i_below_j in comparable[i]:
                if j_below_i and not leq(picked[j], cand):
                    ok = False
                    break
                if i_below_j and not leq(cand, picked[j]):
                    ok = False
                    break
            if not ok:
                continue
            picked.append(cand)
            if extra is not None and not extra(picked):
                picked.pop()
                continue
            if rec(i + 1):
                return True
            picked.pop()
        return False

    if rec(0):
        return list(picked)
    return None


# ---------------------------------------------------------------------------
# Generate-and-match oracles
# ---------------------------------------------------------------------------

GENERATION_CLASS_CAP = 8
GENERATION_COMBO_CAP = 2_000_000


def _set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[head] + partition[i]] + partition[i + 1 :]
        yield [[head]] + partition


def _ordered_partitions(items):
    if not items:
        yield []
        return
    n = len(items)
    for size in range(1, n + 1):
        for block in itertools.combinations(items, size):
            taken = set(block)
            rest = [x for x in items if x not in taken]
            for tail in _ordered_partitions(rest):
                yield [list(block)] + tail


@functools.lru_cache(maxsize=None)
def generate_order_invariant(
    size: int, arity: int, interval: IntervalSpec
) -> frozenset:
    """Every order invariant table on the chain, built from its structural
    parameters: an explanation (coordinate or included-endpoint constant)
    per pattern class."""
    cells = list(itertools.product(range(size), repeat=arity))
    classes: dict = {}
    for cell in cells:
        classes.setdefault(rank_pattern(cell, size, interval), []).append(cell)
    keys = sorted(classes, key=lambda p: p.sort_key())
    options = []
    for key in keys:
        opts = [("proj", k) for k in range(arity)]
        if interval.has_inf:
            opts.append(("const", 0))
        if interval.has_sup:
            opts.append(("const", size - 1))
        options.append(opts)
    combos = 1
    for opts in options:
        combos *= len(opts)
        if combos > GENERATION_COMBO_CAP:
            raise SizeCapError("order invariant generation too large")
    index_of = {cell: i for i, cell in enumerate(cells)}
    class_cells = [classes[key] for key in keys]
    out = set()
    for assignment in itertools.product(*options):
        entries = [0] * len(cells)
        for (kind, value), members in zip(assignment, class_cells):
            for cell in members:
                entries[index_of[cell]] = cell[value] if kind == "proj" else value
        out.add(tuple(entries))
    return frozenset(out)


@functools.lru_cache(maxsize=None)
def generate_cm_family(
    input_sizes: tuple, interval: IntervalSpec, independent: bool
) -> frozenset:
    """Every comparison meaningful table on the chains, up to output
    re-ranking, built from structural parameters: a coordinate per class, a
    grouping of classes into shared value maps, a direction per group, and
    an arrangement of the groups (distinct nonconstant ranges never
    interleave; only singleton ranges may coincide)."""
    sizes = tuple(input_sizes)
    probe = DiscreteTable(sizes, 1, (0,) * int(_prod(sizes)))
    classes = _cm_classes(probe, interval, independent)
    if len(classes) > GENERATION_CLASS_CAP:
        raise SizeCapError("comparison-meaningful generation too large")
    arity = len(sizes)
    cells = list(probe.cells())
    index_of = {cell: i for i, cell in enumerate(cells)}
    class_cells = [cells_ for _, cells_ in classes]
    m = len(classes)
    out = set()
    for ks in itertools.product(range(arity), repeat=m):
        domains = [
            sorted({cell[ks[c]] for cell in class_cells[c]}) for c in range(m)
        ]
        for partition in _set_partitions(list(range(m))):
            group_domain = [
                sorted(set().union(*[domains[c] for c in group]))
                for group in partition
            ]
            direction_choices = [
                ("increasing", "decreasing", "constant")
                if len(dom) > 1
                else ("constant",)
                for dom in group_domain
            ]
            for dirs in itertools.product(*direction_choices):
                levels = [
                    1 if d == "constant" else len(dom)
                    for d, dom in zip(dirs, group_domain)
                ]
                tieable = [i for i, width in enumerate(levels) if width == 1]
                for arrangement in _ordered_partitions(list(range(len(partition)))):
                    if any(
                        len(block) > 1 and any(g not in tieable for g in block)
                        for block in arrangement
                    ):
                        continue
                    base = {}
                    next_level = 0
                    for block in arrangement:
                        for g in block:
                            base[g] = next_level
                        next_level += 1 if len(block) > 1 else levels[block[0]]
                    entries = [0] * len(cells)
                    for gi, group in enumerate(partition):
                        dom = group_domain[gi]
                        pos = {r: p for p, r in enumerate(dom)}
                        for c in group:
                            for cell in class_cells[c]:
                                r = cell[ks[c]]
                                if dirs[gi] == "constant":
                                    level = base[gi]
                                elif dirs[gi] == "increasing":
                                    level = base[gi] + pos[r]
                                else:
                                    level = base[gi] + len(dom) - 1 - pos[r]
                                entries[index_of[cell]] = level
                    out.add(tuple(entries))
    return frozenset(out)


def _prod(xs):
    p = 1
    for x in xs:
        p *= x
    return p


def oracle_generate_and_match(
    table: DiscreteTable, interval: IntervalSpec, family: str
) -> bool:
    """Independent membership decision by exhaustive generation of the
    family from its structural parameters (tiny instances only)."""
    if family == "order-invariant":
        if not table.square:
            raise ChainMismatchError("order invariance needs a square table")
        generated = generate_order_invariant(
            table.input_sizes[0], table.arity, interval
        )
        return table.entries in generated
    if family in ("cm-single", "cm-independent"):
        independent = family == "cm-independent"
        if not independent and not table.inputs_uniform:
            raise ChainMismatchError("a single shared scale needs equal input chains")
        generated = generate_cm_family(table.input_sizes, interval, independent)
        return table.normalize_output().entries in generated
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# Randomized falsifiers on the continuous domain
# ---------------------------------------------------------------------------

def _sample_pool(interval: IntervalSpec, denom: int):
    lo = 0 if interval.has_inf else 1
    hi = denom if interval.has_sup else denom - 1
    return [Fraction(i, denom) for i in range(lo, hi + 1)]


def falsify_invariance(
    fn: Callable,
    arity: int,
    interval: IntervalSpec,
    trials: int = 1000,
    seed: int = DEFAULT_SEED,
) -> Optional[Witness]:
    """Search for inputs x and a transformation phi with
    fn(phi(x)) != phi(fn(x)).  Deterministic in the seed; the input grid
    refines and the breakpoint budget grows as trials proceed.  None means
    the budget ran out, not a proof."""
    rng = random.Random(seed)
    for t in range(trials):
        pool = _sample_pool(interval, 6 + t % 25)
        x = tuple(rng.choice(pool) for _ in range(arity))
        phi = random_pl_bijection(rng.randrange(1 << 30), 1 + t // 50)
        fx = fn(x)
        expected = phi(fx)
        got = fn(tuple(phi(v) for v in x))
        if got != expected:
            return Witness(
                kind="invariance",
                interval=interval,
                inputs=(x,),
                outputs=(fx, expected, got),
                transforms=(phi,),
                detail="transforming inputs does not transform the output",
            )
    return None


def _respacing(rng: random.Random, values, floor_denom: int) -> PLBijection:
    """A random automorphism moving the given interior values to fresh
    positions while keeping their order."""
    interior = sorted(v for v in set(values) if ZERO < v < ONE)
    if not interior:
        return PLBijection.identity()
    denom = max(floor_denom, 2 * (len(interior) + 1))
    targets = sorted(rng.sample(range(1, denom), len(interior)))
    return PLBijection.through(
        (v, Fraction(tv, denom)) for v, tv in zip(interior, targets)
    )


def falsify_cm(
    fn: Callable,
    arity: int,
    interval: IntervalSpec,
    mode: str = "single",
    trials: int = 1000,
    seed: int = DEFAULT_SEED,
) -> Optional[Witness]:
    """Search for two inputs whose comparison flips under an admissible
    transformation: one shared map in `single` mode, one map per coordinate
    in `independent` mode.  None means the budget ran out, not a proof."""
    if mode not in ("single", "independent"):
        raise ValueError("mode must be 'single' or 'independent'")
    rng = random.Random(seed)
    kind = "cm-single" if mode == "single" else "cm-independent"
    for t in range(trials):
        pool = _sample_pool(interval, 6 + t % 25)
        x = tuple(rng.choice(pool) for _ in range(arity))
        y = tuple(rng.choice(pool) for _ in range(arity))
        if mode == "single":
            phi = _respacing(rng, x + y, 8 + t % 17)
            transforms = (phi,)
            px = tuple(phi(v) for v in x)
            py = tuple(phi(v) for v in y)
        else:
            transforms = tuple(
                _respacing(rng, (x[i], y[i]), 8 + (t + i) % 17) for i in range(arity)
            )
            px = tuple(tr(v) for tr, v in zip(transforms, x))
            py = tuple(tr(v) for tr, v in zip(transforms, y))
        fx, fy = fn(x), fn(y)
        gx, gy = fn(px), fn(py)
        if sign(fx, fy) != sign(gx, gy):
            return Witness(
                kind=kind,
                interval=interval,
                inputs=(x, y),
                images=(px, py),
                outputs=(fx, fy, gx, gy),
                transforms=transforms,
                detail="comparison of outputs flips under admissible transformation",
            )
    return None
