"""The self-inverse map behind the visibility-to-levels reduction.

T sends (x, y) to (x/y, 1/y) in the plane and (x, y, z) to (x/z, y/z, 1/z)
in space.  Its one essential property: the open sight segment from the
origin to a point w maps to the open vertical ray above T(w) (below, when w
is under the axis).  An obstacle crosses the sight segment exactly when its
image crosses that ray, which turns "how many obstacles block w" into "how
many images pass strictly above T(w)", a level query.

T is an involution and fixes each half-plane, so results computed on images
pull back through T itself.
"""

from __future__ import annotations

import math
from typing import Iterator, Optional

from gmpy2 import mpq

from .geom import (Extent, Inf, Line2, NEG_INF, POS_INF, Piece, Plane3,
                   Point2, Point3, is_finite, rsign)


def map_point2(p: Point2) -> Point2:
    if p.y == 0:
        raise ValueError("points on the x-axis have no image")
    return Point2(p.x / p.y, 1 / p.y)


def map_point3(p: Point3) -> Point3:
    if p.z == 0:
        raise ValueError("points on the z = 0 plane have no image")
    return Point3(p.x / p.z, p.y / p.z, 1 / p.z)


def map_line2(l: Line2) -> Line2:
    """Image of a line: a*x + b*y + c = 0 becomes a*x + c*y + b = 0.

    The x-axis itself has no image.  A line through the origin (c = 0) maps
    to a vertical line, and only those do.
    """
    if l.a == 0 and l.c == 0:
        raise ValueError("the x-axis has no image line")
    return Line2.of(l.a, l.c, l.b)


def map_plane3(h: Plane3) -> Plane3:
    """Image of a plane: coefficient swap c <-> d, mirroring the 2D rule."""
    if h.a == 0 and h.b == 0 and h.d == 0:
        raise ValueError("the z = 0 plane has no image plane")
    return Plane3.of(h.a, h.b, h.d, h.c)


def half_plane_side(piece: Piece) -> int:
    """+1 if the piece's interior lies above the x-axis, -1 if below.

    Only valid after axis splitting: the interior must not cross the axis.
    """
    return rsign(piece.interior_sample().y)


def split_at_axis(piece: Piece) -> tuple[list[Piece], Optional[mpq]]:
    """Split a piece whose interior crosses the x-axis into two closed
    halves sharing the crossing parameter.  Returns the halves and that
    parameter (None if no split was needed)."""
    l = piece.carrier
    if l.is_horizontal():
        return [piece], None
    t0 = piece.param_of(Point2(l.x_at_y0(), mpq(0)))
    if piece.lo < t0 < piece.hi:
        return [piece.sub(piece.lo, t0), piece.sub(t0, piece.hi)], t0
    return [piece], None


def _image_param(m: Line2, origin: Point2, direction, p: Point2) -> mpq:
    dx, dy = direction
    if dx != 0:
        return (p.x - origin.x) / dx
    return (p.y - origin.y) / dy


def map_piece2(piece: Piece) -> Piece:
    """Image of a piece that stays (weakly) on one side of the x-axis.

    End correspondence: a finite end on the axis maps to an unbounded image
    end; an unbounded end of a non-horizontal piece maps to the image
    carrier's own axis point, which is included closed (it is the limit of
    the image, and portions are closures anyway).  Horizontal pieces map to
    horizontal pieces with unbounded ends staying unbounded.
    """
    l = piece.carrier
    if l.c == 0:
        raise ValueError("carrier through the origin: image would be vertical")
    if not l.is_horizontal():
        t0 = piece.param_of(Point2(l.x_at_y0(), mpq(0)))
        if piece.lo < t0 < piece.hi:
            raise ValueError("piece interior crosses the x-axis; split first")
    m = map_line2(l)
    origin, direction = m.anchor(), m.direction()

    sample = map_point2(piece.interior_sample())
    u_sample = _image_param(m, origin, direction, sample)

    finite: list[mpq] = []
    unbounded = 0
    for bound in (piece.lo, piece.hi):
        if is_finite(bound):
            p = piece.point_at(bound)
            if p.y == 0:
                unbounded += 1
            else:
                finite.append(_image_param(m, origin, direction, map_point2(p)))
        elif l.is_horizontal():
            unbounded += 1
        else:
            finite.append(_image_param(m, origin, direction,
                                       Point2(m.x_at_y0(), mpq(0))))
    if unbounded == 2:
        lo, hi = NEG_INF, POS_INF
    elif unbounded == 1:
        f = finite[0]
        lo, hi = (f, POS_INF) if u_sample > f else (NEG_INF, f)
    else:
        lo, hi = (finite[0], finite[1]) if finite[0] < finite[1] else (finite[1], finite[0])
    return Piece(m, origin, direction, lo, hi)


def _two_interior_params(piece: Piece) -> tuple[mpq, mpq]:
    if is_finite(piece.lo) and is_finite(piece.hi):
        step = (piece.hi - piece.lo) / 3
        return piece.lo + step, piece.lo + 2 * step
    if is_finite(piece.lo):
        return piece.lo + 1, piece.lo + 2
    if is_finite(piece.hi):
        return piece.hi - 2, piece.hi - 1
    return mpq(0), mpq(1)


def pull_back_interval(source: Piece, image: Piece, lo: Extent,
                       hi: Extent) -> tuple[Extent, Extent]:
    """Map a parameter interval on the image piece back to the source.

    The correspondence is monotone, so it is enough to map both ends and
    sort.  Ends equal to the image's own bounds map to the matching source
    bound (that is where infinities trade places with axis points); interior
    ends map pointwise through the involution.
    """
    u1, u2 = _two_interior_params(image)
    t1 = source.param_of(map_point2(image.point_at(u1)))
    t2 = source.param_of(map_point2(image.point_at(u2)))
    increasing = t2 > t1

    def back(u: Extent) -> Extent:
        if u == image.lo:
            return source.lo if increasing else source.hi
        if u == image.hi:
            return source.hi if increasing else source.lo
        return source.param_of(map_point2(image.point_at(u)))

    a, b = back(lo), back(hi)
    return (a, b) if a <= b else (b, a)


def rotation_candidates() -> Iterator[tuple[tuple[int, int], tuple[mpq, mpq]]]:
    """Deterministic stream of exact rotations, labelled by their generating
    pair: the identity (1, 0), then every coprime pair m > n >= 1 ordered by
    m, giving cos = (m^2-n^2)/(m^2+n^2), sin = 2mn/(m^2+n^2).  All angles
    are distinct."""
    yield ((1, 0), (mpq(1), mpq(0)))
    m = 2
    while True:
        for n in range(1, m):
            if math.gcd(m, n) == 1:
                den = m * m + n * n
                yield ((m, n), (mpq(m * m - n * n, den), mpq(2 * m * n, den)))
        m += 1


def rotations() -> Iterator[tuple[mpq, mpq]]:
    for _, cs in rotation_candidates():
        yield cs


def rotate_point(p: Point2, cos_sin: tuple[mpq, mpq]) -> Point2:
    c, s = cos_sin
    return Point2(c * p.x - s * p.y, s * p.x + c * p.y)


def rotate_direction(d, cos_sin) -> tuple[mpq, mpq]:
    c, s = cos_sin
    dx, dy = d
    return (c * dx - s * dy, s * dx + c * dy)


def rotate_line(l: Line2, cos_sin: tuple[mpq, mpq]) -> Line2:
    # the normal vector rotates with the line, the offset is unchanged
    c, s = cos_sin
    return Line2.of(c * l.a - s * l.b, s * l.a + c * l.b, l.c)


def rotate_piece(piece: Piece, cos_sin: tuple[mpq, mpq]) -> Piece:
    """Rotate a piece rigidly.  Parameters are preserved exactly."""
    return Piece(rotate_line(piece.carrier, cos_sin),
                 rotate_point(piece.origin, cos_sin),
                 rotate_direction(piece.direction, cos_sin),
                 piece.lo, piece.hi)


def translate_point(p: Point2, dx: mpq, dy: mpq) -> Point2:
    return Point2(p.x + dx, p.y + dy)


def translate_line(l: Line2, dx: mpq, dy: mpq) -> Line2:
    return Line2.of(l.a, l.b, l.c - l.a * dx - l.b * dy)


def translate_piece(piece: Piece, dx: mpq, dy: mpq) -> Piece:
    return Piece(translate_line(piece.carrier, dx, dy),
                 translate_point(piece.origin, dx, dy),
                 piece.direction, piece.lo, piece.hi)
