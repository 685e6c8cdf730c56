"""k-crossing visibility in the plane.

A point w of an element is k-visible from the query point q when the open
segment (q, w) meets at most k elements; an element never hides its own
points.  The result is, per element, the set of k-visible parameter
intervals (closures of the qualifying open runs, touching intervals
merged).

The computation routes through the levels reduction: after translating the
query to the origin and rotating so that no endpoint or pairwise crossing
sits on the x-axis, each element half above (below) the axis maps through
the involution to a piece whose depth in the image arrangement equals the
number of blockers.  Upper levels answer the upper half-plane, lower levels
the lower one, and the two pull-backs stitch along the axis.  Elements
whose carrier passes through the query degenerate to a one-dimensional
problem handled directly.
"""

from __future__ import annotations

from itertools import islice
from typing import Optional, Sequence

from gmpy2 import mpq

from .geom import (IDENTICAL, NEG_INF, OVERLAP, POS_INF, Extent, Line2,
                   Piece, Point2, Portion, ext_max, ext_min, intersect_lines,
                   is_finite, merge_touching, piece_pair_intersection,
                   point_on_piece, sort_portions)
from .levels import (lower_level_portions, mirror_piece, sweep,
                     upper_level_portions)
from .transform import (half_plane_side, map_piece2, pull_back_interval,
                        rotate_piece, rotation_candidates, split_at_axis,
                        translate_piece)


class SceneValidationError(ValueError):
    """The scene breaks a structural rule (not a syntax problem)."""


def validate_pieces(pieces: Sequence[Piece], query: Point2) -> None:
    """Reject overlapping collinear elements (visibility through a shared
    sub-segment has no single-crossing reading)."""
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            hit = piece_pair_intersection(pieces[i], pieces[j])
            if isinstance(hit, tuple) and hit[0] == OVERLAP:
                raise SceneValidationError(
                    f"elements {i} and {j} overlap along a common carrier")


def _project_interval(d: Piece, e: Piece) -> tuple[Extent, Extent]:
    """e's parameter interval expressed in d's parameters (same carrier)."""
    dx, dy = d.direction
    ex, ey = e.direction
    same = dx * ex + dy * ey > 0
    lo = d.param_of(e.point_at(e.lo)) if is_finite(e.lo) else None
    hi = d.param_of(e.point_at(e.hi)) if is_finite(e.hi) else None
    if not same:
        lo, hi = hi, lo
    return (NEG_INF if lo is None else lo, POS_INF if hi is None else hi)


def collinear_visibility(di: int, pieces: Sequence[Piece], k: int) -> list[Portion]:
    """Visibility along an element whose carrier passes through the query
    (which sits at the origin here).

    Everything happens on one line: crossings of other carriers contribute
    point blockers, elements sharing the carrier contribute interval
    blockers, and the blocked count grows monotonically with distance from
    the query on each side.  The portion on a side extends to the
    (k+1-base)-th blocking event, duplicates counted.
    """
    d = pieces[di]
    t_q = d.param_of(Point2(mpq(0), mpq(0)))
    base_r = base_l = 0
    ev_r: list = []
    ev_l: list = []
    for j, e in enumerate(pieces):
        if j == di:
            continue
        hit = intersect_lines(d.carrier, e.carrier)
        if hit is IDENTICAL:
            e1, e2 = _project_interval(d, e)
            if e1 <= t_q < e2:
                base_r += 1
            elif e1 > t_q:
                ev_r.append(e1)
            if e1 < t_q <= e2:
                base_l += 1
            elif e2 < t_q:
                ev_l.append(e2)
        elif isinstance(hit, Point2):
            if not point_on_piece(hit, e):
                continue
            t_w = d.param_of(hit)
            if t_w > t_q:
                ev_r.append(t_w)
            elif t_w < t_q:
                ev_l.append(t_w)
            # a crossing exactly at the query can never block anything
    spans = []
    if base_r <= k:
        ev_r.sort()
        m = k - base_r
        u = ev_r[m] if m < len(ev_r) else POS_INF
        lo, hi = ext_max(t_q, d.lo), ext_min(u, d.hi)
        if lo < hi:
            spans.append((lo, hi))
    if base_l <= k:
        ev_l.sort(reverse=True)
        m = k - base_l
        u = ev_l[m] if m < len(ev_l) else NEG_INF
        lo, hi = ext_max(u, d.lo), ext_min(t_q, d.hi)
        if lo < hi:
            spans.append((lo, hi))
    return [Portion(di, lo, hi) for lo, hi in merge_touching(spans)]


def _choose_rotation(pieces: Sequence[Piece]) -> tuple[tuple[int, int],
                                                       tuple[mpq, mpq]]:
    """First exact rotation leaving no endpoint or pairwise crossing on the
    x-axis.  The stream of candidates is deterministic; scenes blocking all
    of the first 1024 do not occur in practice and are rejected."""
    crit: list[Point2] = []
    for p in pieces:
        crit.extend(p.finite_endpoints())
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            hit = piece_pair_intersection(pieces[i], pieces[j])
            if isinstance(hit, Point2):
                crit.append(hit)
    for label, (c, s) in islice(rotation_candidates(), 1024):
        if all(s * p.x + c * p.y != 0 for p in crit):
            return label, (c, s)
    raise SceneValidationError("no admissible rotation in the first 1024")


def kvis_many(pieces: Sequence[Piece], query: Point2, ks: Sequence[int],
              validate: bool = True
              ) -> tuple[dict[int, list[Portion]], tuple[int, int]]:
    """k-visible portions for several thresholds over one normalization.

    The translation, rotation, axis split, transform, and both level sweeps
    depend only on the scene, so they are done once and each k reuses them.
    Returns {k: portions} plus the generating pair (m, n) of the rotation
    used ((1, 0) when nothing needed rotating).
    """
    if any(k < 0 for k in ks):
        raise SceneValidationError("k must be nonnegative")
    if validate:
        validate_pieces(pieces, query)
    n = len(pieces)
    rot = (1, 0)
    out: dict[int, list[Portion]] = {k: [] for k in ks}
    if n == 0:
        return out, rot
    small = sorted(set(k for k in ks if k < n - 1))
    for k in set(ks) - set(small):
        # at most n-1 elements can ever block a point
        out[k] = [Portion(i, p.lo, p.hi) for i, p in enumerate(pieces)]
    if not small:
        return out, rot
    moved = [translate_piece(p, -query.x, -query.y) for p in pieces]
    collinear = [i for i, p in enumerate(moved) if p.carrier.c == 0]
    main_idx = [i for i in range(n) if i not in set(collinear)]
    sides = []
    if main_idx:
        main = [moved[i] for i in main_idx]
        rot, cs = _choose_rotation(main)
        plus: list[tuple[int, Piece]] = []
        minus: list[tuple[int, Piece]] = []
        for eid, p in zip(main_idx, main):
            halves, _ = split_at_axis(rotate_piece(p, cs))
            for h in halves:
                (plus if half_plane_side(h) > 0 else minus).append((eid, h))
        for bucket, lower in ((plus, False), (minus, True)):
            if not bucket:
                continue
            halves = [h for _, h in bucket]
            images = [map_piece2(h) for h in halves]
            res = sweep([mirror_piece(im) for im in images] if lower
                        else images)
            sides.append((bucket, halves, images, res, lower))
    for k in small:
        got = list(out[k])
        for di in collinear:
            got.extend(collinear_visibility(di, moved, k))
        spans: dict[int, list] = {i: [] for i in main_idx}
        for bucket, halves, images, res, lower in sides:
            levelf = lower_level_portions if lower else upper_level_portions
            for portion in levelf(images, k, res=res):
                lo, hi = pull_back_interval(halves[portion.eid],
                                            images[portion.eid],
                                            portion.lo, portion.hi)
                spans[bucket[portion.eid][0]].append((lo, hi))
        for eid in main_idx:
            for lo, hi in merge_touching(spans[eid]):
                if lo < hi:
                    got.append(Portion(eid, lo, hi))
        out[k] = sort_portions(got)
    return out, rot


def kvis_scene(pieces: Sequence[Piece], query: Point2, k: int,
               validate: bool = True) -> tuple[list[Portion], tuple[int, int]]:
    """k-visible portions of each element plus the rotation label used.

    Parameters in the result refer to each element's own parametrization
    (the Piece as passed in), which every rigid motion here preserves.
    """
    many, rot = kvis_many(pieces, query, [k], validate)
    return many[k], rot


def kvis_generic(pieces: Sequence[Piece], query: Point2, k: int,
                 validate: bool = True) -> list[Portion]:
    """k-visible portions of each element, exactly."""
    return kvis_scene(pieces, query, k, validate)[0]


def kvis_lines(lines: Sequence[Line2], query: Point2, k: int,
               validate: bool = True) -> list[Portion]:
    """k-visibility over an arrangement of full lines.  Portions are
    parametrized along each line's canonical anchor and direction."""
    return kvis_generic([Piece.line(l) for l in lines], query, k, validate)


def polygon_edges(vertices: Sequence[Point2]) -> list[Piece]:
    n = len(vertices)
    return [Piece.segment(vertices[i], vertices[(i + 1) % n])
            for i in range(n)]


def point_in_polygon(q: Point2, vertices: Sequence[Point2]) -> bool:
    """Strict interior test by exact crossing parity.  Points on the
    boundary must be excluded beforehand."""
    inside = False
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if (a.y > q.y) != (b.y > q.y):
            x_hit = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if q.x < x_hit:
                inside = not inside
    return inside


def validate_polygon(vertices: Sequence[Point2], query: Point2) -> list[Piece]:
    if len(vertices) < 3:
        raise SceneValidationError("a polygon needs at least 3 vertices")
    if len(set((v.x, v.y) for v in vertices)) != len(vertices):
        raise SceneValidationError("repeated polygon vertex")
    try:
        edges = polygon_edges(vertices)
    except ValueError as exc:
        raise SceneValidationError(str(exc)) from exc
    n = len(edges)
    for i in range(n):
        for j in range(i + 1, n):
            hit = piece_pair_intersection(edges[i], edges[j])
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                shared = vertices[j] if j == i + 1 else vertices[0]
                if hit != shared:
                    raise SceneValidationError(
                        f"edges {i} and {j} meet beyond their shared vertex")
            elif hit is not None:
                raise SceneValidationError(
                    f"non-adjacent edges {i} and {j} intersect")
    if any(point_on_piece(query, e) for e in edges):
        raise SceneValidationError("query point lies on the boundary")
    if not point_in_polygon(query, vertices):
        raise SceneValidationError("query point lies outside the polygon")
    return edges


def kvis_polygon(vertices: Sequence[Point2], query: Point2, k: int) -> list[Portion]:
    """k-visibility of a point inside a simple polygon, on its boundary.

    Edge i runs from vertex i to vertex i+1 with parameters in [0, 1];
    portions are reported per edge under that parametrization.
    """
    edges = validate_polygon(vertices, query)
    return kvis_generic(edges, query, k, validate=False)


def portion_count(portions: Sequence[Portion]) -> int:
    return len(portions)


def endpoint_count(portions: Sequence[Portion]) -> int:
    """Number of finite portion boundaries, the complexity measure for the
    output-size envelope."""
    return sum(int(is_finite(p.lo)) + int(is_finite(p.hi)) for p in portions)
