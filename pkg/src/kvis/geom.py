"""Exact 2D/3D geometric primitives over rational arithmetic.

Every coordinate, coefficient, and predicate in this package is exact: the
scalar type is gmpy2.mpq, which keeps rationals in canonical reduced form
(positive denominator, gcd(num, den) = 1), so equality and hashing behave
like mathematical equality.  Floats never enter any computation; they appear
only when serializing SVG path data.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

Rational = mpq

_RAT_RE = re.compile(r"^[+-]?[0-9]+(/[0-9]+)?$")


def rat(value) -> Rational:
    """Coerce an int, mpq, or "num/den" string to an exact rational.

    Floats are rejected: accepting them silently would launder binary
    rounding error into an exact pipeline.
    """
    if isinstance(value, mpq):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, str):
        s = value.strip()
        if not _RAT_RE.match(s):
            raise ValueError(f"not a rational literal: {value!r}")
        try:
            return mpq(s)
        except ZeroDivisionError:
            raise ValueError(f"invalid rational (zero denominator): {value!r}")
    raise TypeError(f"cannot make a rational from {type(value).__name__}")


def rsign(x) -> int:
    """Sign of a rational as -1, 0, or +1."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


class Inf:
    """Signed infinity used as an interval bound.

    Compares against rationals and the other infinity the obvious way.
    Only two instances exist: NEG_INF and POS_INF.
    """

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __lt__(self, other):
        if isinstance(other, Inf):
            return self.sign < other.sign
        return self.sign < 0

    def __gt__(self, other):
        if isinstance(other, Inf):
            return self.sign > other.sign
        return self.sign > 0

    def __le__(self, other):
        return self == other or self < other

    def __ge__(self, other):
        return self == other or self > other

    def __eq__(self, other):
        return isinstance(other, Inf) and other.sign == self.sign

    def __hash__(self):
        return hash(("Inf", self.sign))

    def __neg__(self):
        return NEG_INF if self.sign > 0 else POS_INF

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"


NEG_INF = Inf(-1)
POS_INF = Inf(+1)

Extent = Union[Rational, Inf]


def is_finite(e: Extent) -> bool:
    return not isinstance(e, Inf)


def ext_min(a: Extent, b: Extent) -> Extent:
    return a if a <= b else b


def ext_max(a: Extent, b: Extent) -> Extent:
    return a if a >= b else b


@dataclass(frozen=True)
class Point2:
    x: Rational
    y: Rational

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Point3:
    x: Rational
    y: Rational
    z: Rational

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z


def _canonical_coeffs(coeffs: Sequence) -> tuple[int, ...]:
    """Scale rational coefficients to coprime integers, first nonzero positive."""
    qs = [rat(c) for c in coeffs]
    if all(q == 0 for q in qs):
        raise ValueError("all coefficients zero")
    den = 1
    for q in qs:
        den = den * int(q.denominator) // math.gcd(den, int(q.denominator))
    ints = [int(q * den) for q in qs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


@dataclass(frozen=True)
class Line2:
    """Line a*x + b*y + c = 0 with canonical coprime integer coefficients.

    Equal lines always compare equal; construct through of() or through().
    """

    a: int
    b: int
    c: int

    @staticmethod
    def of(a, b, c) -> "Line2":
        ca, cb, cc = _canonical_coeffs((a, b, c))
        if ca == 0 and cb == 0:
            raise ValueError("degenerate line: a = b = 0")
        return Line2(ca, cb, cc)

    @staticmethod
    def through(p: Point2, q: Point2) -> "Line2":
        if p == q:
            raise ValueError("two coincident points do not define a line")
        # (y_p - y_q) x + (x_q - x_p) y + (x_p y_q - x_q y_p) = 0
        return Line2.of(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y)

    def eval(self, p: Point2) -> Rational:
        return self.a * p.x + self.b * p.y + self.c

    def side(self, p: Point2) -> int:
        return rsign(self.eval(p))

    def is_vertical(self) -> bool:
        return self.b == 0

    def is_horizontal(self) -> bool:
        return self.a == 0

    def direction(self) -> tuple[Rational, Rational]:
        return (mpq(self.b), mpq(-self.a))

    def anchor(self) -> Point2:
        """A canonical point on the line."""
        if self.b != 0:
            return Point2(mpq(0), mpq(-self.c, self.b))
        return Point2(mpq(-self.c, self.a), mpq(0))

    def x_at_y0(self) -> Rational:
        """x-coordinate of the crossing with the x-axis (undefined if horizontal)."""
        if self.a == 0:
            raise ValueError("horizontal line never meets the x-axis once")
        return mpq(-self.c, self.a)


@dataclass(frozen=True)
class Plane3:
    """Plane a*x + b*y + c*z + d = 0, canonical coprime integer coefficients."""

    a: int
    b: int
    c: int
    d: int

    @staticmethod
    def of(a, b, c, d) -> "Plane3":
        ca, cb, cc, cd = _canonical_coeffs((a, b, c, d))
        if ca == 0 and cb == 0 and cc == 0:
            raise ValueError("degenerate plane: a = b = c = 0")
        return Plane3(ca, cb, cc, cd)

    def eval(self, p: Point3) -> Rational:
        return self.a * p.x + self.b * p.y + self.c * p.z + self.d

    def side(self, p: Point3) -> int:
        return rsign(self.eval(p))

    def normal(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def anchor(self) -> Point3:
        coeffs = (self.a, self.b, self.c)
        i = max(range(3), key=lambda j: abs(coeffs[j]))
        vals = [mpq(0), mpq(0), mpq(0)]
        vals[i] = mpq(-self.d, coeffs[i])
        return Point3(*vals)


def orientation(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of the signed area of triangle pqr: +1 left turn, -1 right, 0 collinear."""
    return rsign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


PARALLEL = "parallel"
IDENTICAL = "identical"


def intersect_lines(l1: Line2, l2: Line2):
    """Intersection point of two lines, or PARALLEL / IDENTICAL."""
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        return IDENTICAL if l1 == l2 else PARALLEL
    x = mpq(l1.b * l2.c - l2.b * l1.c, det)
    y = mpq(l2.a * l1.c - l1.a * l2.c, det)
    return Point2(x, y)


@dataclass(frozen=True)
class Piece:
    """A connected portion of a line: the point set {origin + t*direction :
    lo <= t <= hi} with lo < hi, either bound possibly infinite.

    Pieces are closed at finite bounds.  Degenerate single points are rejected.
    """

    carrier: Line2
    origin: Point2
    direction: tuple[Rational, Rational]
    lo: Extent
    hi: Extent

    def __post_init__(self):
        dx, dy = self.direction
        if dx == 0 and dy == 0:
            raise ValueError("zero direction")
        if self.carrier.a * dx + self.carrier.b * dy != 0:
            raise ValueError("direction not parallel to carrier")
        if self.carrier.eval(self.origin) != 0:
            raise ValueError("origin not on carrier")
        if not self.lo < self.hi:
            raise ValueError("empty or single-point piece")

    @staticmethod
    def segment(p: Point2, q: Point2) -> "Piece":
        if p == q:
            raise ValueError("degenerate segment")
        return Piece(Line2.through(p, q), p, (q.x - p.x, q.y - p.y), mpq(0), mpq(1))

    @staticmethod
    def ray(origin: Point2, direction: tuple) -> "Piece":
        dx, dy = rat(direction[0]), rat(direction[1])
        tip = Point2(origin.x + dx, origin.y + dy)
        return Piece(Line2.through(origin, tip), origin, (dx, dy), mpq(0), POS_INF)

    @staticmethod
    def line(l: Line2) -> "Piece":
        return Piece(l, l.anchor(), l.direction(), NEG_INF, POS_INF)

    def point_at(self, t) -> Point2:
        t = rat(t) if not isinstance(t, mpq) else t
        return Point2(self.origin.x + t * self.direction[0],
                      self.origin.y + t * self.direction[1])

    def param_of(self, p: Point2) -> Rational:
        """Parameter of a point known to lie on the carrier."""
        dx, dy = self.direction
        if dx != 0:
            return (p.x - self.origin.x) / dx
        return (p.y - self.origin.y) / dy

    def contains_param(self, t: Extent) -> bool:
        return self.lo <= t <= self.hi

    def sub(self, lo: Extent, hi: Extent) -> "Piece":
        """Sub-piece on the same parametrization."""
        if not (self.lo <= lo and hi <= self.hi and lo < hi):
            raise ValueError("sub-interval out of range")
        return Piece(self.carrier, self.origin, self.direction, lo, hi)

    def is_segment(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    def is_line(self) -> bool:
        return not is_finite(self.lo) and not is_finite(self.hi)

    def is_ray(self) -> bool:
        return is_finite(self.lo) != is_finite(self.hi)

    def finite_endpoints(self) -> list[Point2]:
        pts = []
        if is_finite(self.lo):
            pts.append(self.point_at(self.lo))
        if is_finite(self.hi):
            pts.append(self.point_at(self.hi))
        return pts

    def interior_sample(self) -> Point2:
        """Some point strictly inside the parameter interval."""
        if is_finite(self.lo) and is_finite(self.hi):
            return self.point_at((self.lo + self.hi) / 2)
        if is_finite(self.lo):
            return self.point_at(self.lo + 1)
        if is_finite(self.hi):
            return self.point_at(self.hi - 1)
        return self.point_at(0)


@dataclass(frozen=True)
class Portion:
    """A closed sub-interval [lo, hi] of element eid's canonical parameter
    range.  Results of every visibility or level computation are lists of
    these, sorted by (eid, lo), with touching intervals already merged."""

    eid: int
    lo: Extent
    hi: Extent


def sort_portions(portions: Iterable[Portion]) -> list[Portion]:
    return sorted(portions, key=lambda p: (p.eid, not isinstance(p.lo, Inf) or p.lo.sign > 0, p.lo))


def merge_touching(intervals: list[tuple[Extent, Extent]]) -> list[tuple[Extent, Extent]]:
    """Union of closed intervals: merge any that overlap or touch."""
    if not intervals:
        return []
    ivs = sorted(intervals, key=lambda iv: (not isinstance(iv[0], Inf) or iv[0].sign > 0, iv[0]))
    out = [ivs[0]]
    for lo, hi in ivs[1:]:
        plo, phi = out[-1]
        if lo <= phi:
            if hi > phi:
                out[-1] = (plo, hi)
        else:
            out.append((lo, hi))
    return out


def point_on_piece(p: Point2, piece: Piece) -> bool:
    if piece.carrier.eval(p) != 0:
        return False
    return piece.contains_param(piece.param_of(p))


def _open_closed_overlap(olo: Extent, ohi: Extent, clo: Extent, chi: Extent) -> bool:
    """Does the open interval (olo, ohi) meet the closed interval [clo, chi]?"""
    return olo < chi and clo < ohi


def piece_meets_open_segment(piece: Piece, p: Point2, q: Point2) -> bool:
    """Exact test: does the piece's point set meet the open segment (p, q)?

    A single tangential touch counts; a collinear overlap counts (once, by
    virtue of being one piece).  Touching exactly at p or q does not count.
    """
    if p == q:
        raise ValueError("degenerate sight segment")
    sight = Line2.through(p, q)
    hit = intersect_lines(piece.carrier, sight)
    if hit is PARALLEL:
        return False
    if hit is IDENTICAL:
        tp = piece.param_of(p)
        tq = piece.param_of(q)
        lo, hi = (tp, tq) if tp < tq else (tq, tp)
        return _open_closed_overlap(lo, hi, piece.lo, piece.hi)
    if not piece.contains_param(piece.param_of(hit)):
        return False
    # strictly between p and q along the sight line
    if abs(q.x - p.x) >= abs(q.y - p.y):
        s = (hit.x - p.x) / (q.x - p.x)
    else:
        s = (hit.y - p.y) / (q.y - p.y)
    return 0 < s < 1


def crossing_count(p: Point2, q: Point2, pieces: Iterable[Piece]) -> int:
    """Number of pieces whose point set intersects the open segment (p, q)."""
    return sum(1 for piece in pieces if piece_meets_open_segment(piece, p, q))


def piece_meets_vertical_ray(piece: Piece, x0: Rational, y0: Rational,
                             upward: bool = True) -> bool:
    """Does the piece meet the open vertical ray from (x0, y0) (strictly
    above when upward, strictly below otherwise)?"""
    if piece.carrier.is_vertical():
        if piece.carrier.a * x0 + piece.carrier.c != 0:
            return False
        ylo, yhi = _y_interval(piece)
        if upward:
            return _open_closed_overlap(y0, POS_INF, ylo, yhi)
        return _open_closed_overlap(NEG_INF, y0, ylo, yhi)
    dx = piece.direction[0]
    t = (x0 - piece.origin.x) / dx
    if not piece.contains_param(t):
        return False
    y = piece.point_at(t).y
    return y > y0 if upward else y < y0


def _y_interval(piece: Piece) -> tuple[Extent, Extent]:
    dy = piece.direction[1]
    ends = []
    for e in (piece.lo, piece.hi):
        if is_finite(e):
            ends.append(piece.point_at(e).y)
        else:
            ends.append(POS_INF if (e.sign > 0) == (dy > 0) else NEG_INF)
    return (ends[0], ends[1]) if ends[0] <= ends[1] else (ends[1], ends[0])


OVERLAP = "overlap"


def piece_pair_intersection(p1: Piece, p2: Piece):
    """Intersection of two pieces: None, a Point2, or (OVERLAP, lo, hi)
    giving the shared sub-interval in p1's parameters (lo < hi possible
    degenerate lo == hi for a touch, reported as the Point2 instead)."""
    hit = intersect_lines(p1.carrier, p2.carrier)
    if hit is PARALLEL:
        return None
    if hit is IDENTICAL:
        a = p1.param_of(p2.point_at(p2.lo)) if is_finite(p2.lo) else None
        b = p1.param_of(p2.point_at(p2.hi)) if is_finite(p2.hi) else None
        dx, dy = p1.direction
        qx, qy = p2.direction
        same = (dx * qx + dy * qy) > 0
        lo2 = a if same else b
        hi2 = b if same else a
        lo2 = NEG_INF if lo2 is None else lo2
        hi2 = POS_INF if hi2 is None else hi2
        lo = ext_max(p1.lo, lo2)
        hi = ext_min(p1.hi, hi2)
        if lo > hi:
            return None
        if lo == hi:
            return p1.point_at(lo)
        return (OVERLAP, lo, hi)
    if p1.contains_param(p1.param_of(hit)) and p2.contains_param(p2.param_of(hit)):
        return hit
    return None


def convex_hull(points: Sequence[Point2]) -> list[Point2]:
    """Convex hull (strict: no collinear interior points), counterclockwise,
    starting at the lexicographically smallest vertex.  Exact."""
    pts = sorted(set((p.x, p.y) for p in points))
    pts = [Point2(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts
    lower: list[Point2] = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]
