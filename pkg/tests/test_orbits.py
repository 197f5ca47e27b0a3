import itertools
import random
from fractions import Fraction as F

import pytest

from ordagg import (
    CLOSED,
    LEFT_CLOSED,
    OPEN,
    RIGHT_CLOSED,
    SHAPES,
    Level,
    Orbit,
    PointError,
    SizeCapError,
    StrongOrbit,
    enumerate_orbits,
    enumerate_strong_orbits,
    orbit_leq,
    pattern_of,
    random_pl_bijection,
    strong_pattern_of,
)

from util import grid_points, weak_order_count


def test_square_vertex_pattern():
    orbit = pattern_of((F(0), F(0)), CLOSED)
    assert orbit.blocks == ((1, 2),)
    assert orbit.anchored_bottom and not orbit.anchored_top


def test_open_diagonal_pattern():
    orbit = pattern_of((F(3, 10), F(3, 10)), CLOSED)
    assert orbit.blocks == ((1, 2),)
    assert not orbit.anchored_bottom and not orbit.anchored_top


def test_open_triangle_pattern():
    orbit = pattern_of((F(1, 5), F(7, 10)), CLOSED)
    assert orbit.blocks == ((1,), (2,))
    assert not orbit.anchored_bottom and not orbit.anchored_top


def test_pattern_rejects_invalid_points():
    with pytest.raises(PointError):
        pattern_of((F(0), F(1, 2)), OPEN)


def test_orbit_counts():
    assert len(enumerate_orbits(2, CLOSED)) == 11
    assert len(enumerate_orbits(2, OPEN)) == 3
    assert len(enumerate_orbits(1, CLOSED)) == 3


def test_strong_orbit_counts():
    assert len(enumerate_strong_orbits(2, CLOSED)) == 9
    assert len(enumerate_strong_orbits(2, OPEN)) == 1
    assert len(enumerate_strong_orbits(3, LEFT_CLOSED)) == 8


def test_strong_count_law():
    for interval in SHAPES:
        for n in range(1, 7):
            expected = (1 + interval.boundary_size) ** n
            assert len(enumerate_strong_orbits(n, interval)) == expected


def test_open_orbit_count_is_weak_order_count():
    for n in range(1, 5):
        assert len(enumerate_orbits(n, OPEN)) == weak_order_count(n)


def test_orbit_count_matches_grid_classification():
    # every orbit is realized on a grid with n+1 interior points, and the
    # grid realizes nothing else
    for interval in SHAPES:
        for n in (1, 2, 3):
            pts = grid_points(interval, n + 2)
            seen = {pattern_of(combo, interval) for combo in itertools.product(pts, repeat=n)}
            assert seen == set(enumerate_orbits(n, interval))


def test_strong_pattern_examples():
    assert strong_pattern_of((F(0), F(1, 2), F(1)), CLOSED).levels == (
        Level.BOTTOM,
        Level.INTERIOR,
        Level.TOP,
    )
    assert strong_pattern_of((F(1, 3), F(2, 3)), OPEN).levels == (
        Level.INTERIOR,
        Level.INTERIOR,
    )


def test_same_strong_orbit_different_orbit():
    x = (F(1, 3), F(2, 3))
    y = (F(2, 3), F(1, 3))
    assert strong_pattern_of(x, CLOSED) == strong_pattern_of(y, CLOSED)
    assert pattern_of(x, CLOSED) != pattern_of(y, CLOSED)


def test_projection_examples():
    vertex = pattern_of((F(0), F(0)), CLOSED)
    assert vertex.projection(1) == Level.BOTTOM
    diagonal = pattern_of((F(1, 2), F(1, 2)), CLOSED)
    assert diagonal.projection(2) == Level.INTERIOR
    spread = pattern_of((F(0), F(1, 2), F(1)), CLOSED)
    assert spread.projection(3) == Level.TOP
    with pytest.raises(IndexError):
        spread.projection(4)


def test_strong_orbit_of_orbit():
    triangle_low = pattern_of((F(1, 4), F(3, 4)), CLOSED)
    triangle_high = pattern_of((F(3, 4), F(1, 4)), CLOSED)
    interior = StrongOrbit((Level.INTERIOR, Level.INTERIOR))
    assert triangle_low.strong() == interior
    assert triangle_high.strong() == interior
    vertex = pattern_of((F(0), F(1)), CLOSED)
    assert vertex.strong() == StrongOrbit((Level.BOTTOM, Level.TOP))


def test_projection_image_of_orbits_is_strong_orbits():
    for interval in SHAPES:
        for n in (1, 2, 3):
            image = {orbit.strong() for orbit in enumerate_orbits(n, interval)}
            assert image == set(enumerate_strong_orbits(n, interval))


def test_closed_square_projection_image_count():
    assert len({o.strong() for o in enumerate_orbits(2, CLOSED)}) == 9


def test_partial_order_basics():
    a = StrongOrbit((Level.BOTTOM, Level.BOTTOM))
    b = StrongOrbit((Level.INTERIOR, Level.TOP))
    c = StrongOrbit((Level.BOTTOM, Level.TOP))
    d = StrongOrbit((Level.TOP, Level.BOTTOM))
    assert orbit_leq(a, b)
    assert not orbit_leq(c, d) and not orbit_leq(d, c)
    with pytest.raises(ValueError):
        orbit_leq(a, StrongOrbit((Level.BOTTOM,)))


def test_partial_order_laws_on_enumeration():
    orbits = enumerate_orbits(2, CLOSED)
    for a in orbits:
        assert orbit_leq(a, a)
    for a in orbits:
        for b in orbits:
            if orbit_leq(a, b) and orbit_leq(b, a):
                assert a.strong() == b.strong()
            for c in orbits:
                if orbit_leq(a, b) and orbit_leq(b, c):
                    assert orbit_leq(a, c)


def test_partition_property_random_sample():
    rng = random.Random(17)
    for interval in SHAPES:
        for n in (1, 2, 3, 4):
            known = set(enumerate_orbits(n, interval))
            for _ in range(650):
                pts = tuple(
                    rng.choice(grid_points(interval, 12)) for _ in range(n)
                )
                assert pattern_of(pts, interval) in known


def test_diagonal_invariance_of_pattern():
    rng = random.Random(31)
    for interval in SHAPES:
        for _ in range(50):
            n = rng.randrange(1, 5)
            pts = tuple(rng.choice(grid_points(interval, 10)) for _ in range(n))
            phi = random_pl_bijection(rng.randrange(1 << 20), rng.randrange(0, 6))
            moved = tuple(phi(x) for x in pts)
            assert pattern_of(pts, interval) == pattern_of(moved, interval)


def test_independent_transformations_keep_strong_pattern_only():
    rng = random.Random(47)
    hits_pattern_change = 0
    for _ in range(200):
        n = rng.randrange(2, 5)
        pts = tuple(rng.choice(grid_points(OPEN, 10)) for _ in range(n))
        maps = [
            random_pl_bijection(rng.randrange(1 << 20), rng.randrange(1, 6))
            for _ in range(n)
        ]
        moved = tuple(phi(x) for phi, x in zip(maps, pts))
        assert strong_pattern_of(pts, OPEN) == strong_pattern_of(moved, OPEN)
        if pattern_of(pts, OPEN) != pattern_of(moved, OPEN):
            hits_pattern_change += 1
    assert hits_pattern_change > 0


def test_enumeration_is_duplicate_free_and_sorted():
    for interval in SHAPES:
        orbits = enumerate_orbits(3, interval)
        assert len(set(orbits)) == len(orbits)
        keys = [o.sort_key() for o in orbits]
        assert keys == sorted(keys)


def test_enumeration_cap():
    with pytest.raises(SizeCapError):
        enumerate_orbits(13, OPEN)
    with pytest.raises(SizeCapError):
        enumerate_strong_orbits(13, CLOSED)


def test_enumeration_cap_env_override(monkeypatch):
    monkeypatch.setenv("ORDAGG_ENUMERATION_CAP", "3")
    with pytest.raises(SizeCapError):
        enumerate_orbits(4, OPEN)
    monkeypatch.setenv("ORDAGG_ENUMERATION_CAP", "12")
    assert len(enumerate_orbits(4, OPEN)) == 75


def test_strong_pattern_agrees_with_orbit_projection():
    rng = random.Random(61)
    for interval in SHAPES:
        for _ in range(100):
            n = rng.randrange(1, 5)
            pts = tuple(rng.choice(grid_points(interval, 9)) for _ in range(n))
            assert strong_pattern_of(pts, interval) == pattern_of(pts, interval).strong()


def test_single_block_cannot_touch_both_ends():
    with pytest.raises(ValueError):
        Orbit(((1, 2),), anchored_bottom=True, anchored_top=True)


def test_orbit_text_round_trip():
    for interval in SHAPES:
        for orbit in enumerate_orbits(3, interval):
            assert Orbit.from_text(orbit.to_text()) == orbit
    assert pattern_of((F(0), F(0), F(1, 2)), CLOSED).to_text() == "inf={1,2}<{3}"
