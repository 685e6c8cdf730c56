"""Checks for the brute-force reference implementations.

Expected portions in the frozen cases below were worked out by hand on
paper (sight lines, sign tests, and vertical stabs for small scenes) before
the oracle was written, and the oracle must reproduce them exactly.
"""

import random

import pytest
from gmpy2 import mpq

from kvis.geom import (NEG_INF, POS_INF, Line2, Piece, Plane3, Point2,
                       Point3, Portion)
from kvis.oracle import (oracle_level2d, oracle_vis2d, oracle_vis3d_point,
                         separation_count)


def P(x, y):
    return Point2(mpq(x), mpq(y))


O = P(0, 0)


def three_lines():
    # x = 1, y = 1, x + y + 1 = 0 around the origin
    return [Piece.line(Line2.of(1, 0, -1)),
            Piece.line(Line2.of(0, 1, -1)),
            Piece.line(Line2.of(1, 1, 1))]


def test_three_lines_k0():
    # worked by hand: each line is visible on the segment cut out by the
    # other two; parameters follow each carrier's canonical anchor/direction
    got = oracle_vis2d(three_lines(), O, 0)
    assert got == [Portion(0, mpq(-1), mpq(2)),
                   Portion(1, mpq(-2), mpq(1)),
                   Portion(2, mpq(-2), mpq(1))]
    # endpoints in the plane: (1,1)-(1,-2), (-2,1)-(1,1), (-2,1)-(1,-2)
    pieces = three_lines()
    assert pieces[0].point_at(mpq(-1)) == P(1, 1)
    assert pieces[0].point_at(mpq(2)) == P(1, -2)
    assert pieces[2].point_at(mpq(-2)) == P(-2, 1)
    assert pieces[2].point_at(mpq(1)) == P(1, -2)


def test_three_lines_k1_sees_everything():
    # no point of any of the three lines is blocked twice
    got = oracle_vis2d(three_lines(), O, 1)
    assert got == [Portion(0, NEG_INF, POS_INF),
                   Portion(1, NEG_INF, POS_INF),
                   Portion(2, NEG_INF, POS_INF)]


def test_query_on_element():
    # query sits in the interior of element 0; worked by hand
    pieces = [Piece.segment(P(-1, 0), P(3, 0)),
              Piece.segment(P(1, -1), P(1, 1)),
              Piece.segment(P(2, 1), P(2, 3))]
    got = oracle_vis2d(pieces, O, 0)
    assert got == [Portion(0, mpq(0), mpq(1, 2)),
                   Portion(1, mpq(0), mpq(1)),
                   Portion(2, mpq(1, 2), mpq(1))]
    got1 = oracle_vis2d(pieces, O, 1)
    assert got1 == [Portion(0, mpq(0), mpq(1)),
                    Portion(1, mpq(0), mpq(1)),
                    Portion(2, mpq(0), mpq(1))]


def test_blocker_casts_closed_shadow():
    # a vertical stick at x = 2 shadows the middle of a far wall at x = 4;
    # sights grazing the stick's endpoints count as blocked, so the shadow
    # on the wall is the closed band u in [1/4, 3/4] (worked by hand)
    pieces = [Piece.segment(P(2, 1), P(2, 3)),
              Piece.segment(P(4, 0), P(4, 8))]
    got = oracle_vis2d(pieces, O, 0)
    assert got == [Portion(0, mpq(0), mpq(1)),
                   Portion(1, mpq(0), mpq(1, 4)),
                   Portion(1, mpq(3, 4), mpq(1))]
    assert oracle_vis2d(pieces, O, 1) == [Portion(0, mpq(0), mpq(1)),
                                          Portion(1, mpq(0), mpq(1))]


def test_k_at_least_n_sees_everything():
    rng = random.Random(7)
    pieces = []
    while len(pieces) < 6:
        a, b, c, d = (rng.randint(-5, 5) for _ in range(4))
        if (a, b) != (c, d):
            pieces.append(Piece.segment(P(a, b), P(c, d)))
    for k in (len(pieces) - 1, len(pieces), len(pieces) + 3):
        got = oracle_vis2d(pieces, P(0, mpq(1, 3)), k)
        assert got == [Portion(i, p.lo, p.hi) for i, p in enumerate(pieces)]


def random_pieces(rng, n, allow_vertical=True):
    pieces = []
    while len(pieces) < n:
        kind = rng.choice(("seg", "seg", "ray", "line"))
        a, b, c, d = (mpq(rng.randint(-5, 5)) for _ in range(4))
        try:
            if kind == "seg":
                p = Piece.segment(Point2(a, b), Point2(c, d))
            elif kind == "ray":
                p = Piece.ray(Point2(a, b), (c, d))
            else:
                p = Piece.line(Line2.of(a, b, c))
        except ValueError:
            continue
        if not allow_vertical and p.carrier.is_vertical():
            continue
        pieces.append(p)
    return pieces


@pytest.mark.parametrize("seed", range(8))
def test_direct_and_batched_agree_on_visibility(seed):
    rng = random.Random(seed)
    pieces = random_pieces(rng, rng.randint(2, 8))
    query = P(rng.randint(-5, 5), rng.randint(-5, 5))
    for k in (0, 1, 2, 4):
        direct = oracle_vis2d(pieces, query, k, method="direct")
        batched = oracle_vis2d(pieces, query, k, method="batched")
        assert direct == batched, (seed, k)


@pytest.mark.parametrize("seed", range(8))
def test_direct_and_batched_agree_on_levels(seed):
    rng = random.Random(100 + seed)
    pieces = random_pieces(rng, rng.randint(2, 8), allow_vertical=False)
    for k in (0, 1, 3):
        for side in ("upper", "lower"):
            direct = oracle_level2d(pieces, k, side, method="direct")
            batched = oracle_level2d(pieces, k, side, method="batched")
            assert direct == batched, (seed, k, side)


def test_levels_of_a_wedge():
    # two crossing lines through the origin: the 0-level on the upper side
    # is the upward wedge, on the lower side the downward wedge
    pieces = [Piece.line(Line2.of(1, -1, 0)),   # y = x, param t -> (-t, -t)
              Piece.line(Line2.of(1, 1, 0))]    # y = -x, param t -> (t, -t)
    up = oracle_level2d(pieces, 0, "upper")
    assert up == [Portion(0, NEG_INF, mpq(0)), Portion(1, NEG_INF, mpq(0))]
    down = oracle_level2d(pieces, 0, "lower")
    assert down == [Portion(0, mpq(0), POS_INF), Portion(1, mpq(0), POS_INF)]
    # every point of both lines has at most one line above it
    assert oracle_level2d(pieces, 1, "upper") == \
        [Portion(0, NEG_INF, POS_INF), Portion(1, NEG_INF, POS_INF)]


def test_levels_with_segments():
    # a roof over a floor: the floor is hidden from above where the roof covers it
    floor = Piece.segment(P(0, 0), P(10, 0))
    roof = Piece.segment(P(2, 5), P(4, 5))
    up = oracle_level2d([floor, roof], 0, "upper")
    assert up == [Portion(0, mpq(0), mpq(1, 5)),
                  Portion(0, mpq(2, 5), mpq(1)),
                  Portion(1, mpq(0), mpq(1))]
    assert oracle_level2d([floor, roof], 1, "upper") == \
        [Portion(0, mpq(0), mpq(1)), Portion(1, mpq(0), mpq(1))]


def test_levels_reject_vertical():
    with pytest.raises(ValueError):
        oracle_level2d([Piece.segment(P(0, 0), P(0, 5))], 0)


def test_separation_count():
    planes = [Plane3.of(0, 0, 1, -1), Plane3.of(0, 0, 1, 1), Plane3.of(1, 0, 0, 0)]
    a = Point3(mpq(0), mpq(0), mpq(0))
    b = Point3(mpq(0), mpq(0), mpq(3))
    assert separation_count(planes, a, b) == 1
    assert separation_count(planes, a, b, exclude=0) == 0
    # plane through an endpoint does not separate
    c = Point3(mpq(0), mpq(0), mpq(1))
    assert separation_count(planes, a, c) == 0
    assert oracle_vis3d_point(planes, a, b, 1)
    assert not oracle_vis3d_point(planes, a, b, 0)
