import random
from fractions import Fraction as F

import pytest

from ordagg import (
    CLOSED,
    LEFT_CLOSED,
    OPEN,
    RIGHT_CLOSED,
    SHAPES,
    IntervalSpec,
    PLBijection,
    PointError,
    make_interval,
    random_pl_bijection,
)

from util import grid_points

BENT = PLBijection(((F(0), F(0)), (F(1, 2), F(1, 4)), (F(1), F(1))))


def test_make_interval_boundary_sizes():
    assert make_interval(False, False).boundary_size == 0
    assert make_interval(True, True).boundary_size == 2
    assert make_interval(True, False).boundary_size == 1
    assert make_interval(True, False).name == "left-closed"


def test_interval_names_round_trip():
    for shape in SHAPES:
        assert IntervalSpec.from_name(shape.name) == shape
    with pytest.raises(ValueError):
        IntervalSpec.from_name("half-open")


def test_membership_depends_on_flags():
    assert OPEN.contains(F(1, 2))
    assert not OPEN.contains(F(0))
    assert not OPEN.contains(F(1))
    assert CLOSED.contains(F(0)) and CLOSED.contains(F(1))
    assert LEFT_CLOSED.contains(F(0)) and not LEFT_CLOSED.contains(F(1))
    assert RIGHT_CLOSED.contains(F(1)) and not RIGHT_CLOSED.contains(F(0))
    with pytest.raises(PointError):
        OPEN.require(F(1))


def test_identity_application():
    ident = PLBijection.identity()
    assert ident(F(3, 7)) == F(3, 7)


def test_breakpoint_lookup():
    assert BENT(F(1, 2)) == F(1, 4)


def test_linear_interpolation_between_breakpoints():
    # between (1/2, 1/4) and (1, 1) the slope is 3/2
    assert BENT(F(3, 4)) == F(5, 8)


def test_invert_swaps_breakpoints():
    assert BENT.invert().breakpoints == (
        (F(0), F(0)),
        (F(1, 4), F(1, 2)),
        (F(1), F(1)),
    )


def test_identity_element_and_inverse():
    ident = PLBijection.identity()
    assert ident.invert() == ident
    assert BENT.compose(ident) == BENT
    assert ident.compose(BENT) == BENT
    assert BENT.compose(BENT.invert()) == ident
    assert BENT.invert().compose(BENT) == ident


def test_zero_budget_gives_identity():
    assert random_pl_bijection(123, 0) == PLBijection.identity()


def test_random_bijection_is_deterministic():
    for seed in (0, 1, 99):
        for budget in (1, 3, 7):
            assert random_pl_bijection(seed, budget) == random_pl_bijection(
                seed, budget
            )


def test_random_bijection_cancels_with_inverse():
    rng = random.Random(5)
    for _ in range(25):
        phi = random_pl_bijection(rng.randrange(1 << 20), rng.randrange(1, 8))
        assert phi.compose(phi.invert()) == PLBijection.identity()
        for x in grid_points(CLOSED, 13):
            assert phi.invert()(phi(x)) == x


def test_composition_associative():
    rng = random.Random(11)
    for _ in range(20):
        f = random_pl_bijection(rng.randrange(1 << 20), 3)
        g = random_pl_bijection(rng.randrange(1 << 20), 4)
        h = random_pl_bijection(rng.randrange(1 << 20), 2)
        assert f.compose(g).compose(h) == f.compose(g.compose(h))


def test_strict_monotonicity_and_endpoints():
    rng = random.Random(23)
    for _ in range(30):
        phi = random_pl_bijection(rng.randrange(1 << 20), rng.randrange(0, 9))
        assert phi(F(0)) == F(0) and phi(F(1)) == F(1)
        pts = grid_points(CLOSED, 17)
        images = [phi(x) for x in pts]
        assert all(a < b for a, b in zip(images, images[1:]))


def test_through_realizes_finite_assignments():
    anchors = ((F(1, 10), F(1, 10)), (F(3, 10), F(2, 5)), (F(4, 5), F(4, 5)))
    phi = PLBijection.through(anchors)
    for x, y in anchors:
        assert phi(x) == y
    with pytest.raises(ValueError):
        PLBijection.through(((F(0), F(1, 2)),))


def test_malformed_breakpoints_rejected():
    with pytest.raises(ValueError):
        PLBijection(((F(0), F(0)), (F(1, 2), F(1, 2))))
    with pytest.raises(ValueError):
        PLBijection(((F(0), F(0)), (F(2, 3), F(1, 3)), (F(1, 3), F(2, 3)), (F(1), F(1))))


def test_collinear_breakpoints_are_pruned():
    padded = PLBijection(
        ((F(0), F(0)), (F(1, 4), F(1, 4)), (F(1, 2), F(1, 2)), (F(1), F(1)))
    )
    assert padded == PLBijection.identity()
