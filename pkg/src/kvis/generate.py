"""Deterministic pseudo-random scene generation.

Every generator takes an integer seed and derives its random stream from a
string tag, so the same (kind, seed, n) always yields the same scene, in
this process and any other.  Coordinates stay within [-10^4, 10^4].
"""

from __future__ import annotations

import random
from functools import cmp_to_key
from math import gcd

from gmpy2 import mpq

from .geom import (Line2, OVERLAP, Piece, Plane3, Point2, Point3,
                   convex_hull, piece_pair_intersection)

COORD_RANGE = 10_000


def _rng(tag: str, seed: int, n: int) -> random.Random:
    return random.Random(f"{tag}:{seed}:{n}")


def gen_lines(seed: int, n: int) -> tuple[list[Line2], Point2]:
    rng = _rng("lines", seed, n)
    query = Point2(mpq(rng.randint(-100, 100)), mpq(rng.randint(-100, 100)))
    lines: list[Line2] = []
    seen = set()
    while len(lines) < n:
        a, b, c = (rng.randint(-COORD_RANGE, COORD_RANGE) for _ in range(3))
        if (a, b) == (0, 0):
            continue
        l = Line2.of(a, b, c)
        key = (l.a, l.b, l.c)
        if key in seen:
            continue
        seen.add(key)
        lines.append(l)
    return lines, query


def _accept(pieces: list[Piece], cand: Piece) -> bool:
    for p in pieces:
        hit = piece_pair_intersection(p, cand)
        if isinstance(hit, tuple) and hit[0] == OVERLAP:
            return False
    return True


def gen_segments(seed: int, n: int) -> tuple[list[Piece], Point2]:
    rng = _rng("segments", seed, n)
    query = Point2(mpq(rng.randint(-100, 100)), mpq(rng.randint(-100, 100)))
    pieces: list[Piece] = []
    while len(pieces) < n:
        x0, y0, x1, y1 = (rng.randint(-COORD_RANGE, COORD_RANGE)
                          for _ in range(4))
        if (x0, y0) == (x1, y1):
            continue
        cand = Piece.segment(Point2(mpq(x0), mpq(y0)), Point2(mpq(x1), mpq(y1)))
        if _accept(pieces, cand):
            pieces.append(cand)
    return pieces, query


def gen_mixed(seed: int, n: int) -> tuple[list[Piece], Point2]:
    """Segments, rays, and full lines in one scene."""
    rng = _rng("mixed", seed, n)
    query = Point2(mpq(rng.randint(-100, 100)), mpq(rng.randint(-100, 100)))
    pieces: list[Piece] = []
    while len(pieces) < n:
        kind = rng.choice(("seg", "seg", "ray", "line"))
        try:
            if kind == "seg":
                a, b, c, d = (rng.randint(-COORD_RANGE, COORD_RANGE)
                              for _ in range(4))
                cand = Piece.segment(Point2(mpq(a), mpq(b)),
                                     Point2(mpq(c), mpq(d)))
            elif kind == "ray":
                a, b = (rng.randint(-COORD_RANGE, COORD_RANGE)
                        for _ in range(2))
                dx, dy = (rng.randint(-50, 50) for _ in range(2))
                cand = Piece.ray(Point2(mpq(a), mpq(b)), (mpq(dx), mpq(dy)))
            else:
                a, b, c = (rng.randint(-COORD_RANGE, COORD_RANGE)
                           for _ in range(3))
                cand = Piece.line(Line2.of(a, b, c))
        except ValueError:
            continue
        if _accept(pieces, cand):
            pieces.append(cand)
    return pieces, query


def _half(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2*pi), measured from the +x axis
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    cr = u[0] * v[1] - u[1] * v[0]
    if cr == 0:
        return 0
    return -1 if cr > 0 else 1


def _primitive_directions(bound: int) -> list[tuple[int, int]]:
    dirs = [(p, q) for p in range(-bound, bound + 1)
            for q in range(-bound, bound + 1)
            if (p, q) != (0, 0) and gcd(abs(p), abs(q)) == 1]
    dirs.sort(key=cmp_to_key(_angle_cmp))
    return dirs


def star_polygon(seed: int, n: int) -> tuple[list[Point2], Point2]:
    """Simple polygon with n vertices, star-shaped around the query point.

    Vertices sit at integer multiples of angularly sorted primitive integer
    directions from the center; consecutive direction gaps stay below a
    half turn, which makes the fan construction simple and the center
    strictly interior.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices")
    rng = _rng("star", seed, n)
    cx, cy = rng.randint(-100, 100), rng.randint(-100, 100)
    bound = 12
    dirs = _primitive_directions(bound)
    while len(dirs) < 4 * n:
        bound += 4
        dirs = _primitive_directions(bound)
    total = len(dirs)
    offset = rng.randrange(total)
    chosen = [dirs[(offset + (i * total) // n) % total] for i in range(n)]
    assert len(set(chosen)) == n
    rmax = (COORD_RANGE - 200) // bound
    verts = []
    for p, q in chosen:
        r = rng.randint(max(1, rmax // 10), rmax)
        verts.append(Point2(mpq(cx + r * p), mpq(cy + r * q)))
    for i in range(n):
        u = (verts[i].x - cx, verts[i].y - cy)
        v = (verts[(i + 1) % n].x - cx, verts[(i + 1) % n].y - cy)
        assert u[0] * v[1] - u[1] * v[0] > 0, "direction gap reached a half turn"
    return verts, Point2(mpq(cx), mpq(cy))


def comb_polygon(seed: int, n: int) -> tuple[list[Point2], Point2]:
    """Comb with (n-4)/4 upward teeth over a handle bar; the query point
    varies with the seed inside the handle.  Requires n = 4t + 4."""
    if n < 8 or n % 4 != 0:
        raise ValueError("comb needs n = 4t + 4 with t >= 1")
    t = (n - 4) // 4
    u = 10
    w = (2 * t + 1) * u
    verts = [Point2(mpq(0), mpq(0)), Point2(mpq(w), mpq(0)),
             Point2(mpq(w), mpq(u))]
    for i in range(t - 1, -1, -1):
        verts.append(Point2(mpq((2 * i + 2) * u), mpq(u)))
        verts.append(Point2(mpq((2 * i + 2) * u), mpq(3 * u)))
        verts.append(Point2(mpq((2 * i + 1) * u), mpq(3 * u)))
        verts.append(Point2(mpq((2 * i + 1) * u), mpq(u)))
    verts.append(Point2(mpq(0), mpq(u)))
    assert len(verts) == n
    rng = _rng("comb", seed, n)
    query = Point2(mpq(1 + rng.randrange(w - 2)), mpq(2 + rng.randrange(7)))
    return verts, query


def convex_polygon(seed: int, n: int) -> tuple[list[Point2], Point2]:
    """Convex polygon as the hull of n random points (the hull may have
    fewer vertices); query at the vertex average, strictly interior."""
    rng = _rng("convex", seed, n)
    pts = set()
    while len(pts) < max(n, 3):
        pts.add((rng.randint(-COORD_RANGE, COORD_RANGE),
                 rng.randint(-COORD_RANGE, COORD_RANGE)))
    hull = convex_hull([Point2(mpq(x), mpq(y)) for x, y in pts])
    if len(hull) < 3:
        return convex_polygon(seed + 7919, n)
    m = len(hull)
    query = Point2(sum(v.x for v in hull) / m, sum(v.y for v in hull) / m)
    return hull, query


def gen_polygon(seed: int, n: int) -> tuple[list[Point2], Point2]:
    """The CLI's polygon kind: the star construction."""
    return star_polygon(seed, n)


def tangent_lines(seed: int, n: int) -> tuple[list[Line2], Point2]:
    """Lines tangent to a common circle around the origin, in random
    rational directions.

    Since (m^2-p^2, 2mp) has length m^2+p^2, setting c = -R(m^2+p^2)
    puts the line at distance exactly R from the query.  Every line then
    supports the k = 0 visible set, so output size provably grows with n
    (independently random lines leave the query's cell at constant
    expected complexity, which shows no growth at all).
    """
    rng = _rng("tangent-lines", seed, n)
    lines: list[Line2] = []
    seen = set()
    while len(lines) < n:
        m, p = rng.randint(1, 16), rng.randint(0, 16)
        if gcd(m, p) != 1:
            continue
        a, b = m * m - p * p, 2 * m * p
        if rng.random() < 0.5:
            a, b = b, a
        a *= rng.choice((-1, 1))
        b *= rng.choice((-1, 1))
        l = Line2.of(a, b, -1000 * (m * m + p * p))
        key = (l.a, l.b, l.c)
        if key in seen:
            continue
        seen.add(key)
        lines.append(l)
    return lines, Point2(mpq(0), mpq(0))


def tangent_planes(seed: int, n: int) -> tuple[list[Plane3], Point3]:
    """Planes tangent to a common sphere around the origin.

    Pythagorean-quadruple normals (2pu, 2qu, p^2+q^2-u^2) have integer
    length e = p^2+q^2+u^2, so d = -100e puts each plane at distance
    exactly 100 from the query.  Same rationale as tangent_lines.
    """
    rng = _rng("tangent-planes", seed, n)
    planes: list[Plane3] = []
    seen = set()
    while len(planes) < n:
        p = rng.choice((-1, 1)) * rng.randint(1, 7)
        q = rng.choice((-1, 1)) * rng.randint(1, 7)
        u = rng.randint(1, 7)
        a, b, c = 2 * p * u, 2 * q * u, p * p + q * q - u * u
        e = p * p + q * q + u * u
        if rng.random() < 0.5:
            # permuting components keeps the length, adds coverage
            a, c = c, a
        if rng.random() < 0.5:
            c = -c
        h = Plane3.of(a, b, c, -100 * e)
        key = (h.a, h.b, h.c, h.d)
        if key in seen:
            continue
        seen.add(key)
        planes.append(h)
    return planes, Point3(mpq(0), mpq(0), mpq(0))


def gen_planes(seed: int, n: int) -> tuple[list[Plane3], Point3]:
    rng = _rng("planes", seed, n)
    query = Point3(mpq(rng.randint(-100, 100)), mpq(rng.randint(-100, 100)),
                   mpq(rng.randint(-100, 100)))
    planes: list[Plane3] = []
    seen = set()
    while len(planes) < n:
        a, b, c, d = (rng.randint(-COORD_RANGE, COORD_RANGE)
                      for _ in range(4))
        if (a, b, c) == (0, 0, 0):
            continue
        h = Plane3.of(a, b, c, d)
        key = (h.a, h.b, h.c, h.d)
        if key in seen or h.eval(query) == 0:
            continue
        seen.add(key)
        planes.append(h)
    return planes, query
