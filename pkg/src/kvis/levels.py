"""Levels of an arrangement of non-vertical pieces, by plane sweep.

The sweep advances a vertical line left to right over a clip box chosen so
that every endpoint and every pairwise intersection lies strictly inside
it.  The active list holds the pieces currently under the line, ordered
bottom to top; the depth of a piece is the number of actives strictly above
it, which is just its distance from the top of the list.  All events at one
geometric vertex are handled by a single splice: the run of actives passing
through the vertex is located by binary search, enders drop out, starters
and survivors go back in sorted by their height just right of the vertex.

A vertex can change depths beyond the run itself: when the number of
actives changes, everything below the run shifts.  Depth is therefore NOT
constant between consecutive vertices of a single piece, and the sweep
tracks each piece's maximal constant-depth stretches explicitly.

The same pass optionally emits the trapezoidal decomposition (vertical
walls through every vertex, stopped at the first piece hit), which the 3D
face machinery consumes.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from .geom import (IDENTICAL, Extent, Inf, Line2, NEG_INF, POS_INF, Piece,
                   Point2, Portion, intersect_lines, is_finite,
                   sort_portions)


@dataclass(frozen=True)
class ClipBox:
    xlo: mpq
    xhi: mpq
    ylo: mpq
    yhi: mpq


@dataclass(frozen=True)
class Trapezoid:
    """Region between two pieces (or box walls) over an x-interval.

    bottom/top are piece indices, None meaning the box floor/ceiling.
    """

    bottom: Optional[int]
    top: Optional[int]
    left_x: mpq
    right_x: mpq


@dataclass
class SweepResult:
    box: ClipBox
    # per piece: maximal stretches (x_from, x_to, depth), in x order
    profiles: list
    traps: list


def _chord(piece: Piece) -> tuple[mpq, mpq]:
    """Coefficients (A, B) of the carrier as y = A + B*x."""
    l = piece.carrier
    return (mpq(-l.c, l.b), mpq(-l.a, l.b))


def piece_x_extent(piece: Piece) -> tuple[Extent, Extent]:
    dx = piece.direction[0]
    ends = []
    for b in (piece.lo, piece.hi):
        if is_finite(b):
            ends.append(piece.point_at(b).x)
        else:
            ends.append(POS_INF if (b.sign > 0) == (dx > 0) else NEG_INF)
    return (ends[0], ends[1]) if ends[0] <= ends[1] else (ends[1], ends[0])


def compute_clip_box(pieces: Sequence[Piece]) -> ClipBox:
    """Box with every vertex strictly inside and no piece meeting the top
    or bottom wall.

    The y extent must be taken over the padded x range: a steep piece can
    rise far above every vertex before reaching the side walls, and the
    walls have to contain that, or clipped pieces would cross the lid.
    """
    xs, ys = [], []
    for p in pieces:
        for e in p.finite_endpoints():
            xs.append(e.x)
            ys.append(e.y)
        s = p.interior_sample()
        xs.append(s.x)
        ys.append(s.y)
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            hit = intersect_lines(pieces[i].carrier, pieces[j].carrier)
            if isinstance(hit, Point2):
                xi, xj = piece_x_extent(pieces[i]), piece_x_extent(pieces[j])
                if xi[0] <= hit.x <= xi[1] and xj[0] <= hit.x <= xj[1]:
                    xs.append(hit.x)
                    ys.append(hit.y)
    pad = max(mpq(1), max(xs) - min(xs))
    xlo, xhi = min(xs) - pad, max(xs) + pad
    for p in pieces:
        a, b = _chord(p)
        ext = piece_x_extent(p)
        for wx in (xlo, xhi):
            if ext[0] <= wx <= ext[1]:
                ys.append(a + b * wx)
    pady = max(mpq(1), max(ys) - min(ys))
    return ClipBox(xlo, xhi, min(ys) - pady, max(ys) + pady)


def sweep(pieces: Sequence[Piece], box: Optional[ClipBox] = None,
          collect_traps: bool = False) -> SweepResult:
    for p in pieces:
        if p.carrier.is_vertical():
            raise ValueError("levels are undefined for vertical pieces")
    if not pieces:
        b = box or ClipBox(mpq(-1), mpq(1), mpq(-1), mpq(1))
        traps = [Trapezoid(None, None, b.xlo, b.xhi)] if collect_traps else []
        return SweepResult(b, [], traps)
    if box is None:
        box = compute_clip_box(pieces)
    n = len(pieces)
    chords = [_chord(p) for p in pieces]

    def yat(i: int, x: mpq) -> mpq:
        a, b = chords[i]
        return a + b * x

    # clipped x ranges; endpoints are strictly inside the box, so a wall
    # value here always means the piece truly runs off that side
    cx0, cx1 = [], []
    for i, p in enumerate(pieces):
        ext = piece_x_extent(p)
        lo = box.xlo if isinstance(ext[0], Inf) else ext[0]
        hi = box.xhi if isinstance(ext[1], Inf) else ext[1]
        assert box.xlo <= lo < hi <= box.xhi
        cx0.append(lo)
        cx1.append(hi)

    # vertices: piece ends, clipped ends, and pairwise crossings
    verts: dict = {}

    def vertex(x, y):
        return verts.setdefault((x, y), ([], []))

    for i in range(n):
        vertex(cx0[i], yat(i, cx0[i]))[0].append(i)
        vertex(cx1[i], yat(i, cx1[i]))[1].append(i)
    for i in range(n):
        for j in range(i + 1, n):
            hit = intersect_lines(pieces[i].carrier, pieces[j].carrier)
            if isinstance(hit, Point2):
                if cx0[i] <= hit.x <= cx1[i] and cx0[j] <= hit.x <= cx1[j]:
                    vertex(hit.x, hit.y)

    order = sorted(verts.keys(), key=lambda v: (v[0], -v[1]))
    xs_distinct = sorted({v[0] for v in order})
    next_x = {}
    for a, b in zip(xs_distinct, xs_distinct[1:]):
        next_x[a] = b
    if xs_distinct:
        next_x[xs_distinct[-1]] = box.xhi

    active: list[int] = []
    gaps: list = [box.xlo]
    seg_start: dict = {}
    cur_depth: dict = {}
    profiles: list = [[] for _ in range(n)]
    traps: list = []

    def change_depth(i: int, x: mpq, nd: int) -> None:
        if cur_depth[i] == nd:
            return
        if seg_start[i] != x:
            profiles[i].append((seg_start[i], x, cur_depth[i]))
            seg_start[i] = x
        cur_depth[i] = nd

    for vx, vy in order:
        starters, enders = verts[(vx, vy)]
        lo_idx = bisect_left(active, vy, key=lambda i: yat(i, vx))
        hi_idx = bisect_right(active, vy, key=lambda i: yat(i, vx))
        run = active[lo_idx:hi_idx]
        ender_set = set(enders)
        assert ender_set <= set(run)
        through = [i for i in run if i not in ender_set]
        smr = (vx + next_x[vx]) / 2
        new_run = sorted(through + starters, key=lambda i: yat(i, smr))

        if collect_traps:
            for g in range(lo_idx, hi_idx + 1):
                if gaps[g] != vx:
                    traps.append(Trapezoid(
                        active[g - 1] if g > 0 else None,
                        active[g] if g < len(active) else None,
                        gaps[g], vx))

        for i in enders:
            if seg_start[i] != vx:
                profiles[i].append((seg_start[i], vx, cur_depth[i]))
            del seg_start[i], cur_depth[i]

        old_len = len(active)
        active[lo_idx:hi_idx] = new_run
        if collect_traps:
            gaps[lo_idx:hi_idx + 1] = [vx] * (len(new_run) + 1)
        total = len(active)
        starter_set = set(starters)
        for idx in range(lo_idx, lo_idx + len(new_run)):
            i = active[idx]
            nd = total - 1 - idx
            if i in starter_set:
                seg_start[i] = vx
                cur_depth[i] = nd
            else:
                change_depth(i, vx, nd)
        if total != old_len:
            for idx in range(lo_idx):
                change_depth(active[idx], vx, total - 1 - idx)

    assert not active, "pieces left active past their end events"
    if collect_traps:
        for g, left in enumerate(gaps):
            if left != box.xhi:
                traps.append(Trapezoid(None, None, left, box.xhi))
    return SweepResult(box, profiles, traps)


def _x_to_param(piece: Piece, x: mpq, box: ClipBox) -> Extent:
    """Parameter at a profile boundary; box walls mean true infinity."""
    dx = piece.direction[0]
    ext = piece_x_extent(piece)
    if x == box.xlo and isinstance(ext[0], Inf):
        return piece.lo if dx > 0 else piece.hi
    if x == box.xhi and isinstance(ext[1], Inf):
        return piece.hi if dx > 0 else piece.lo
    return (x - piece.origin.x) / dx


def _portions_from_sweep(pieces: Sequence[Piece], res: SweepResult,
                         k: int) -> list[Portion]:
    out = []
    for i, prof in enumerate(res.profiles):
        piece = pieces[i]
        start_x = None
        end_x = None
        runs = []
        for x0, x1, d in prof:
            if d <= k:
                if start_x is None:
                    start_x = x0
                end_x = x1
            else:
                if start_x is not None:
                    runs.append((start_x, end_x))
                start_x = None
        if start_x is not None:
            runs.append((start_x, end_x))
        for x0, x1 in runs:
            a = _x_to_param(piece, x0, res.box)
            b = _x_to_param(piece, x1, res.box)
            out.append(Portion(i, a, b) if a <= b else Portion(i, b, a))
    return sort_portions(out)


def upper_level_portions(pieces: Sequence[Piece], k: int,
                         res: Optional[SweepResult] = None) -> list[Portion]:
    """Portions of each piece with at most k other pieces strictly above.

    Portion parameters use each piece's own parametrization, and the output
    convention (closures of qualifying open runs, merged when touching)
    matches the brute-force oracle exactly.
    """
    if res is None:
        res = sweep(pieces)
    return _portions_from_sweep(pieces, res, k)


def mirror_piece(piece: Piece) -> Piece:
    """Reflect across the x-axis.  Parameters are preserved."""
    l = piece.carrier
    return Piece(Line2.of(l.a, -l.b, l.c),
                 Point2(piece.origin.x, -piece.origin.y),
                 (piece.direction[0], -piece.direction[1]),
                 piece.lo, piece.hi)


def lower_level_portions(pieces: Sequence[Piece], k: int,
                         res: Optional[SweepResult] = None) -> list[Portion]:
    """Portions with at most k other pieces strictly below: the upper-level
    computation on the mirrored arrangement, parameters unchanged."""
    if res is not None:
        return _portions_from_sweep([mirror_piece(p) for p in pieces], res, k)
    return upper_level_portions([mirror_piece(p) for p in pieces], k)


@dataclass
class TrapDecomp:
    """Trapezoidal decomposition with enough structure to walk it."""

    pieces: list
    box: ClipBox
    traps: list
    chords: list = field(default_factory=list)

    def __post_init__(self):
        if not self.chords:
            self.chords = [_chord(p) for p in self.pieces]

    def _side_y(self, side: Optional[int], x: mpq, wall: mpq) -> mpq:
        if side is None:
            return wall
        a, b = self.chords[side]
        return a + b * x

    def y_span(self, ti: int, x: mpq) -> tuple[mpq, mpq]:
        t = self.traps[ti]
        return (self._side_y(t.bottom, x, self.box.ylo),
                self._side_y(t.top, x, self.box.yhi))

    def corners(self, ti: int) -> list[Point2]:
        """The 3 or 4 distinct corner points, counterclockwise from the
        lower left."""
        t = self.traps[ti]
        b0, t0 = self.y_span(ti, t.left_x)
        b1, t1 = self.y_span(ti, t.right_x)
        pts = [Point2(t.left_x, b0), Point2(t.right_x, b1),
               Point2(t.right_x, t1), Point2(t.left_x, t0)]
        out = []
        for p in pts:
            if not out or p != out[-1]:
                out.append(p)
        if len(out) > 1 and out[0] == out[-1]:
            out.pop()
        return out

    def area(self, ti: int) -> mpq:
        t = self.traps[ti]
        b0, t0 = self.y_span(ti, t.left_x)
        b1, t1 = self.y_span(ti, t.right_x)
        return (t.right_x - t.left_x) * ((t0 - b0) + (t1 - b1)) / 2

    def locate(self, p: Point2) -> Optional[int]:
        """Trapezoid whose interior contains p, by linear scan."""
        for ti, t in enumerate(self.traps):
            if t.left_x < p.x < t.right_x:
                b, tp = self.y_span(ti, p.x)
                if b < p.y < tp:
                    return ti
        return None

    def piece_edges(self) -> list[tuple[int, int, int]]:
        """(below_trap, above_trap, piece) for every positive-length shared
        fragment of a piece."""
        above: dict[int, list[int]] = {}
        below: dict[int, list[int]] = {}
        for ti, t in enumerate(self.traps):
            if t.bottom is not None:
                above.setdefault(t.bottom, []).append(ti)
            if t.top is not None:
                below.setdefault(t.top, []).append(ti)
        out = []
        for j, ups in above.items():
            downs = below.get(j, [])
            ups = sorted(ups, key=lambda ti: self.traps[ti].left_x)
            downs = sorted(downs, key=lambda ti: self.traps[ti].left_x)
            di = 0
            for u in ups:
                tu = self.traps[u]
                while di < len(downs) and self.traps[downs[di]].right_x <= tu.left_x:
                    di += 1
                dj = di
                while dj < len(downs) and self.traps[downs[dj]].left_x < tu.right_x:
                    out.append((downs[dj], u, j))
                    dj += 1
        return out

    def wall_edges(self) -> list[tuple[int, int]]:
        """(left_trap, right_trap) across every positive-length piece-free
        wall segment."""
        by_left: dict = {}
        for ti, t in enumerate(self.traps):
            by_left.setdefault(t.left_x, []).append(ti)
        out = []
        for ti, t in enumerate(self.traps):
            for tj in by_left.get(t.right_x, ()):
                b1, t1 = self.y_span(ti, t.right_x)
                b2, t2 = self.y_span(tj, t.right_x)
                if max(b1, b2) < min(t1, t2):
                    out.append((ti, tj))
        return out

    def depth_by_walk(self, p: Point2) -> int:
        """Number of pieces strictly above p, by walking upward through
        trapezoids.  Slow, and p.x must avoid every vertex x so the chain
        of trapezoids over p is unique; used to cross-check the sweep's
        depth bookkeeping."""
        ti = self.locate(p)
        if ti is None:
            raise ValueError("point not interior to any trapezoid")
        count = 0
        edges = self.piece_edges()
        for _ in range(len(self.pieces) + 1):
            t = self.traps[ti]
            if t.top is None:
                return count
            nxt = None
            for lo, hi, j in edges:
                if lo == ti and j == t.top:
                    up = self.traps[hi]
                    if up.left_x < p.x < up.right_x:
                        nxt = hi
                        break
            assert nxt is not None, "no trapezoid above a non-ceiling top"
            count += 1
            ti = nxt
        raise AssertionError("upward walk failed to terminate")


def trapezoidal_decomposition(pieces: Sequence[Piece],
                              box: Optional[ClipBox] = None) -> TrapDecomp:
    res = sweep(pieces, box=box, collect_traps=True)
    return TrapDecomp(list(pieces), res.box, res.traps)
