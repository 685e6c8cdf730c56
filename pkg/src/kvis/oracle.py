"""Brute-force reference implementations.

Everything here answers visibility and level queries from first principles,
by classifying sample points with direct crossing tests.  Nothing is shared
with the transform-based pipeline beyond the geometric primitives, so
agreement between the two is meaningful evidence of correctness.

Two method variants are provided for the 2D queries:

* "direct" evaluates a full crossing count at the midpoint of every
  candidate run.  It is the most literal possible reading of the
  definitions and is quadratic per sample.

* "batched" classifies whole runs at once, per blocker: a blocker's status
  (blocking / not blocking) can only change at a handful of parameters it
  induces itself, so one direct test per constant block suffices.  Both
  variants apply exactly the same point-versus-open-segment test; they
  differ only in how often it runs.  Tests assert they produce identical
  portions.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .geom import (IDENTICAL, NEG_INF, PARALLEL, POS_INF, Extent, Inf, Line2,
                   Piece, Plane3, Point2, Point3, Portion, intersect_lines,
                   is_finite, piece_meets_open_segment,
                   piece_meets_vertical_ray, piece_pair_intersection,
                   sort_portions)


@dataclass
class CountProfile:
    """Piecewise-constant crossing counts along one piece.

    cuts splits [lo, hi] into len(cuts)+1 open runs; counts[i] is the count
    on run i.  Counts exactly at cut parameters are deliberately not
    recorded: reported portions are closures of qualifying runs, so isolated
    single-parameter dips or spikes never influence the output.
    """

    eid: int
    lo: Extent
    hi: Extent
    cuts: list
    counts: list


def portions_from_profile(prof: CountProfile, k: int) -> list[Portion]:
    bounds = [prof.lo] + prof.cuts + [prof.hi]
    out: list[Portion] = []
    run_start: Optional[int] = None
    for i, c in enumerate(prof.counts):
        if c <= k:
            if run_start is None:
                run_start = i
        elif run_start is not None:
            out.append(Portion(prof.eid, bounds[run_start], bounds[i]))
            run_start = None
    if run_start is not None:
        out.append(Portion(prof.eid, bounds[run_start], bounds[-1]))
    return out


def portions_from_profiles(profiles: Iterable[CountProfile], k: int) -> list[Portion]:
    out: list[Portion] = []
    for prof in profiles:
        out.extend(portions_from_profile(prof, k))
    return sort_portions(out)


def _run_midpoints(lo: Extent, hi: Extent, cuts: list) -> list:
    """One interior sample parameter per run."""
    bounds = [lo] + cuts + [hi]
    mids = []
    for a, b in zip(bounds, bounds[1:]):
        if isinstance(a, Inf) and isinstance(b, Inf):
            mids.append(mpq(0))
        elif isinstance(a, Inf):
            mids.append(b - 1)
        elif isinstance(b, Inf):
            mids.append(a + 1)
        else:
            mids.append((a + b) / 2)
    return mids


def _clip_cuts(piece: Piece, params: Iterable) -> list:
    return sorted({t for t in params if piece.lo < t < piece.hi})


def _pair_events_vis(d: Piece, blocker: Piece, query: Point2,
                     t_query: Optional[mpq]) -> list:
    """Parameters on d where blocker's status against sight lines from
    query can change."""
    evs = []
    hit = intersect_lines(d.carrier, blocker.carrier)
    if isinstance(hit, Point2):
        evs.append(d.param_of(hit))
    elif hit is IDENTICAL:
        evs.extend(d.param_of(p) for p in blocker.finite_endpoints())
    if hit is not IDENTICAL:
        for e in blocker.finite_endpoints():
            if e == query:
                continue
            h2 = intersect_lines(d.carrier, Line2.through(query, e))
            if isinstance(h2, Point2):
                evs.append(d.param_of(h2))
    if t_query is not None:
        evs.append(t_query)
    return evs


def _vis_count_batched(d: Piece, di: int, pieces: Sequence[Piece],
                       query: Point2) -> CountProfile:
    t_query = d.param_of(query) if d.carrier.eval(query) == 0 else None
    per_blocker = []
    all_events = []
    for j, e in enumerate(pieces):
        if j == di:
            continue
        evs = _pair_events_vis(d, e, query, t_query)
        per_blocker.append((e, evs))
        all_events.extend(evs)
    cuts = _clip_cuts(d, all_events)
    mids = _run_midpoints(d.lo, d.hi, cuts)
    nruns = len(mids)
    diff = [0] * (nruns + 1)
    for e, evs in per_blocker:
        # run indices where this blocker's own events sit; status is
        # constant on each stretch of runs between them
        marks = sorted({bisect_left(cuts, t) for t in evs
                        if d.lo < t < d.hi})
        starts = [0] + [m + 1 for m in marks]
        for bi, a in enumerate(starts):
            b = marks[bi] if bi < len(marks) else nruns - 1
            if a > b:
                continue
            if piece_meets_open_segment(e, query, d.point_at(mids[a])):
                diff[a] += 1
                diff[b + 1] -= 1
    counts = []
    acc = 0
    for i in range(nruns):
        acc += diff[i]
        counts.append(acc)
    return CountProfile(di, d.lo, d.hi, cuts, counts)


def _critical_viewpoints(pieces: Sequence[Piece]) -> list[Point2]:
    pts = []
    for p in pieces:
        pts.extend(p.finite_endpoints())
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            hit = piece_pair_intersection(pieces[i], pieces[j])
            if isinstance(hit, Point2):
                pts.append(hit)
    return pts


def _vis_count_direct(d: Piece, di: int, pieces: Sequence[Piece],
                      query: Point2, viewpoints: Sequence[Point2]) -> CountProfile:
    t_query = d.param_of(query) if d.carrier.eval(query) == 0 else None
    events = []
    for j, e in enumerate(pieces):
        if j == di:
            continue
        events.extend(_pair_events_vis(d, e, query, t_query))
    for v in viewpoints:
        if v == query:
            continue
        hit = intersect_lines(d.carrier, Line2.through(query, v))
        if isinstance(hit, Point2):
            events.append(d.param_of(hit))
    cuts = _clip_cuts(d, events)
    others = [e for j, e in enumerate(pieces) if j != di]
    counts = []
    for t in _run_midpoints(d.lo, d.hi, cuts):
        w = d.point_at(t)
        counts.append(sum(1 for e in others
                          if piece_meets_open_segment(e, query, w)))
    return CountProfile(di, d.lo, d.hi, cuts, counts)


def vis2d_profiles(pieces: Sequence[Piece], query: Point2,
                   method: str = "batched") -> list[CountProfile]:
    """Per-piece crossing-count profiles seen from query.

    A piece never blocks its own points, so its own index is excluded from
    each count.
    """
    if method == "batched":
        return [_vis_count_batched(d, i, pieces, query)
                for i, d in enumerate(pieces)]
    if method == "direct":
        vps = _critical_viewpoints(pieces)
        return [_vis_count_direct(d, i, pieces, query, vps)
                for i, d in enumerate(pieces)]
    raise ValueError(f"unknown method {method!r}")


def oracle_vis2d(pieces: Sequence[Piece], query: Point2, k: int,
                 method: str = "batched") -> list[Portion]:
    """Portions of each piece whose points are k-visible from query,
    computed by direct sight-segment classification."""
    return portions_from_profiles(vis2d_profiles(pieces, query, method), k)


def _pair_events_level(d: Piece, other: Piece) -> list:
    """Parameters on d where other's above/below status can change."""
    evs = []
    hit = intersect_lines(d.carrier, other.carrier)
    if isinstance(hit, Point2):
        evs.append(d.param_of(hit))
    dx = d.direction[0]
    for e in other.finite_endpoints():
        evs.append((e.x - d.origin.x) / dx)
    return evs


def _level_count_batched(d: Piece, di: int, pieces: Sequence[Piece],
                         upward: bool) -> CountProfile:
    per_other = []
    all_events = []
    for j, e in enumerate(pieces):
        if j == di:
            continue
        evs = _pair_events_level(d, e)
        per_other.append((e, evs))
        all_events.extend(evs)
    cuts = _clip_cuts(d, all_events)
    mids = _run_midpoints(d.lo, d.hi, cuts)
    nruns = len(mids)
    diff = [0] * (nruns + 1)
    for e, evs in per_other:
        marks = sorted({bisect_left(cuts, t) for t in evs
                        if d.lo < t < d.hi})
        starts = [0] + [m + 1 for m in marks]
        for bi, a in enumerate(starts):
            b = marks[bi] if bi < len(marks) else nruns - 1
            if a > b:
                continue
            w = d.point_at(mids[a])
            if piece_meets_vertical_ray(e, w.x, w.y, upward):
                diff[a] += 1
                diff[b + 1] -= 1
    counts = []
    acc = 0
    for i in range(nruns):
        acc += diff[i]
        counts.append(acc)
    return CountProfile(di, d.lo, d.hi, cuts, counts)


def _level_count_direct(d: Piece, di: int, pieces: Sequence[Piece],
                        upward: bool) -> CountProfile:
    events = []
    dx = d.direction[0]
    for j, e in enumerate(pieces):
        if j == di:
            continue
        hit = intersect_lines(d.carrier, e.carrier)
        if isinstance(hit, Point2):
            events.append(d.param_of(hit))
    for e in pieces:
        for p in e.finite_endpoints():
            events.append((p.x - d.origin.x) / dx)
    cuts = _clip_cuts(d, events)
    counts = []
    for t in _run_midpoints(d.lo, d.hi, cuts):
        w = d.point_at(t)
        counts.append(sum(1 for j, e in enumerate(pieces) if j != di
                          and piece_meets_vertical_ray(e, w.x, w.y, upward)))
    return CountProfile(di, d.lo, d.hi, cuts, counts)


def level2d_profiles(pieces: Sequence[Piece], upward: bool = True,
                     method: str = "batched") -> list[CountProfile]:
    """Per-piece depth profiles: how many other pieces lie strictly above
    (or below) each point, measured along the vertical.

    Vertical pieces are not supported; levels are defined for x-monotone
    input only.
    """
    for p in pieces:
        if p.carrier.is_vertical():
            raise ValueError("levels are undefined for vertical pieces")
    if method == "batched":
        return [_level_count_batched(d, i, pieces, upward)
                for i, d in enumerate(pieces)]
    if method == "direct":
        return [_level_count_direct(d, i, pieces, upward)
                for i, d in enumerate(pieces)]
    raise ValueError(f"unknown method {method!r}")


def oracle_level2d(pieces: Sequence[Piece], k: int, side: str = "upper",
                   method: str = "batched") -> list[Portion]:
    """Portions of each piece on the (<= k)-level: at most k other pieces
    strictly above (side="upper") or strictly below (side="lower")."""
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    profiles = level2d_profiles(pieces, upward=(side == "upper"), method=method)
    return portions_from_profiles(profiles, k)


def separation_count(planes: Sequence[Plane3], a: Point3, b: Point3,
                     exclude: Optional[int] = None) -> int:
    """Number of planes strictly separating a from b (open segment test:
    a plane through a or b itself does not separate)."""
    cnt = 0
    for i, h in enumerate(planes):
        if i == exclude:
            continue
        if h.side(a) * h.side(b) < 0:
            cnt += 1
    return cnt


def oracle_vis3d_point(planes: Sequence[Plane3], query: Point3, target: Point3,
                       k: int, exclude: Optional[int] = None) -> bool:
    """Is target k-visible from query among the given planes?"""
    return separation_count(planes, query, target, exclude) <= k
