"""Deterministic SVG rendering of 2D scenes and visible portions.

The viewport is an exact rational clip box framing every finite feature;
coordinates become floats only in the final serialization, rounded to six
decimals.  Obstacles are thin gray <line> elements, visible portions are
heavy red <path> elements (one per portion, so the <path> count equals the
portion count), and the query point is a marked circle.
"""

from __future__ import annotations

from typing import Optional, Sequence

from gmpy2 import mpq

from .geom import (Piece, Point2, Portion, is_finite, piece_pair_intersection,
                   rat)

CANVAS = 1000
PAD_FRACTION = mpq(1, 10)


def _foot(piece: Piece, q: Point2) -> Point2:
    l = piece.carrier
    e = l.eval(q)
    n2 = mpq(l.a * l.a + l.b * l.b)
    return Point2(q.x - l.a * e / n2, q.y - l.b * e / n2)


def viewport_box(pieces: Sequence[Piece], query: Point2,
                 portions: Sequence[Portion]) -> tuple[mpq, mpq, mpq, mpq]:
    pts = [query]
    for p in pieces:
        pts.extend(p.finite_endpoints())
        if not (is_finite(p.lo) and is_finite(p.hi)):
            pts.append(_foot(p, query))
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            hit = piece_pair_intersection(pieces[i], pieces[j])
            if isinstance(hit, Point2):
                pts.append(hit)
    for por in portions:
        piece = pieces[por.eid]
        for t in (por.lo, por.hi):
            if is_finite(t):
                pts.append(piece.point_at(t))
    xlo = min(p.x for p in pts)
    xhi = max(p.x for p in pts)
    ylo = min(p.y for p in pts)
    yhi = max(p.y for p in pts)
    padx = (xhi - xlo) * PAD_FRACTION + 1
    pady = (yhi - ylo) * PAD_FRACTION + 1
    return (xlo - padx, xhi + padx, ylo - pady, yhi + pady)


def _clip_piece(piece: Piece, box) -> Optional[tuple[mpq, mpq]]:
    """Parameter interval of the piece inside the box, or None."""
    xlo, xhi, ylo, yhi = box
    lo, hi = piece.lo, piece.hi
    ox, oy = piece.origin.x, piece.origin.y
    dx, dy = piece.direction
    # each box side gives ox + t*dx >= xlo etc.; intersect the four
    for base, d, bound, sign in ((ox, dx, xlo, 1), (ox, dx, xhi, -1),
                                 (oy, dy, ylo, 1), (oy, dy, yhi, -1)):
        # sign * (base + t*d - bound) >= 0
        a = sign * d
        b = sign * (base - bound)
        if a == 0:
            if b < 0:
                return None
            continue
        t = -mpq(b) / a
        if a > 0:
            if not is_finite(lo) or t > lo:
                lo = t
        else:
            if not is_finite(hi) or t < hi:
                hi = t
    if not (is_finite(lo) and is_finite(hi)) or lo > hi:
        return None
    return (mpq(lo), mpq(hi))


def _fmt(v: float) -> str:
    return f"{v:.6f}"


class _Mapper:
    def __init__(self, box):
        self.xlo, self.xhi, self.ylo, self.yhi = box

    def to_svg(self, p: Point2) -> tuple[str, str]:
        sx = (p.x - self.xlo) / (self.xhi - self.xlo) * CANVAS
        sy = CANVAS - (p.y - self.ylo) / (self.yhi - self.ylo) * CANVAS
        return _fmt(float(sx)), _fmt(float(sy))


def render_svg(pieces: Sequence[Piece], query: Point2,
               portions: Sequence[Portion]) -> str:
    box = viewport_box(pieces, query, portions)
    m = _Mapper(box)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" '
             f'height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">',
             f'<rect width="{CANVAS}" height="{CANVAS}" fill="#ffffff"/>',
             '<g stroke="#888888" stroke-width="2" stroke-linecap="round">']
    for p in pieces:
        span = _clip_piece(p, box)
        if span is None:
            continue
        (x1, y1), (x2, y2) = (m.to_svg(p.point_at(t)) for t in span)
        lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    lines.append("</g>")
    lines.append('<g class="vis" stroke="#d62728" stroke-width="5" '
                 'fill="none" stroke-linecap="round">')
    for por in portions:
        piece = pieces[por.eid]
        span = _clip_piece(piece.sub(por.lo, por.hi), box)
        if span is None:
            continue
        sub = piece.sub(por.lo, por.hi)
        (x1, y1), (x2, y2) = (m.to_svg(sub.point_at(t)) for t in span)
        lines.append(f'<path d="M {x1} {y1} L {x2} {y2}"/>')
    lines.append("</g>")
    qx, qy = m.to_svg(query)
    lines.append(f'<circle class="query" cx="{qx}" cy="{qy}" r="6" '
                 'fill="#1f77b4"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def portions_from_result(doc, pieces: Sequence[Piece]) -> list[Portion]:
    """Rebuild carrier-parameter portions from a serialized result."""
    out = []
    for entry in doc.get("portions", []):
        eid = entry["element"]
        piece = pieces[eid]
        kind = entry["kind"]
        eps = [Point2(rat(p[0]), rat(p[1])) for p in entry["endpoints"]]
        if kind == "segment":
            lo, hi = sorted((piece.param_of(eps[0]), piece.param_of(eps[1])))
            out.append(Portion(eid, lo, hi))
        elif kind == "ray":
            t = piece.param_of(eps[0])
            d = entry["dirs"][0]
            forward = (rat(d[0]), rat(d[1])) == piece.direction
            if forward:
                out.append(Portion(eid, t, piece.hi))
            else:
                out.append(Portion(eid, piece.lo, t))
        else:
            out.append(Portion(eid, piece.lo, piece.hi))
    return out
