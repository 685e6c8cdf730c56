"""k-crossing visibility on arrangements of planes, at desk scale.

A point w on plane h has depth equal to the number of other planes that
strictly separate it from the query point (sign test on plane equations;
grazing contact separates nothing, and the query must avoid all planes).
The k-visible part of h is the union of the arrangement faces, on h, whose
depth is at most k.

Each plane is handled in an exact two-dimensional chart: the other planes
cut it in lines, a trapezoidal decomposition of those lines is built, one
trapezoid's depth is evaluated directly, and the rest follow by flooding
across edges; crossing an induced line changes the count by exactly one per
plane inducing it, with a sign fixed by which side the query prefers.
Trapezoids of one face are glued back together across the decomposition's
vertical walls, so every reported face is a convex polygon of the
arrangement clipped to the chart's working box.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Optional, Sequence

from gmpy2 import mpq

from .geom import (Line2, Piece, Plane3, Point2, Point3, convex_hull, rsign)
from .levels import trapezoidal_decomposition
from .transform import map_plane3, map_point3, rotate_line, rotations
from .vis2d import SceneValidationError

MAX_PLANES = 64


@dataclass(frozen=True)
class Face:
    """Convex polygon on one plane whose interior has a constant depth."""
    plane: int
    depth: int
    vertices: tuple[Point3, ...]


def validate_planes(planes: Sequence[Plane3], query: Point3) -> None:
    if not planes:
        raise SceneValidationError("no planes in the scene")
    if len(planes) > MAX_PLANES:
        raise SceneValidationError(
            f"at most {MAX_PLANES} planes are supported")
    seen = set()
    for i, h in enumerate(planes):
        key = (h.a, h.b, h.c, h.d)
        if key in seen:
            raise SceneValidationError(f"plane {i} duplicates an earlier one")
        seen.add(key)
        if h.eval(query) == 0:
            raise SceneValidationError(f"query point lies on plane {i}")


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


_AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def plane_frame(h: Plane3) -> tuple[Point3, tuple, tuple]:
    """Exact affine chart of h: anchor point and two in-plane directions.

    The axis with the smallest normal component is never parallel to the
    normal, so both cross products below are nonzero.
    """
    n = (h.a, h.b, h.c)
    axis = min(range(3), key=lambda i: (abs(n[i]), i))
    u1 = _cross(n, _AXES[axis])
    u2 = _cross(n, u1)
    return h.anchor(), u1, u2


def frame_point(p0: Point3, u1, u2, s, t) -> Point3:
    return Point3(p0.x + s * u1[0] + t * u2[0],
                  p0.y + s * u1[1] + t * u2[1],
                  p0.z + s * u1[2] + t * u2[2])


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _chart_rotation(keys) -> tuple[mpq, mpq]:
    # a vertical induced line would stall the sweep; spin the chart until
    # every line has a nonzero y coefficient
    for c, s in islice(rotations(), 1024):
        if all(s * a + c * b != 0 for a, b in keys):
            return (c, s)
    raise SceneValidationError("no admissible chart rotation in the first 1024")


def _plane_faces(planes: Sequence[Plane3], hi: int, query: Point3,
                 k: int) -> list[Face]:
    h = planes[hi]
    p0, u1, u2 = plane_frame(h)
    sq = [rsign(e.eval(query)) for e in planes]
    para = 0
    groups: dict[tuple, list[tuple]] = {}
    for j, e in enumerate(planes):
        if j == hi:
            continue
        grad = (e.a, e.b, e.c)
        a, b = _dot(grad, u1), _dot(grad, u2)
        c = e.eval(p0)
        if a == 0 and b == 0:
            # e is parallel to h and contributes the same amount everywhere
            if sq[j] * rsign(c) < 0:
                para += 1
            continue
        carrier = Line2.of(a, b, c)
        groups.setdefault((carrier.a, carrier.b, carrier.c), []).append((j, a, b, c))
    keys = sorted(groups)
    cos, sin = _chart_rotation([(a, b) for a, b, _ in keys])
    pieces = [Piece.line(rotate_line(Line2.of(a, b, c), (cos, sin)))
              for a, b, c in keys]
    # depth jump per group when crossing its line upward: each member plane
    # flips its separation status, in the direction its rotated y
    # coefficient dictates
    deltas = []
    members_rot = []
    for key in keys:
        d = 0
        mem = []
        for j, a, b, c in groups[key]:
            br = sin * a + cos * b
            d += 1 if sq[j] * rsign(br) < 0 else -1
            mem.append((j, cos * a - sin * b, br, c))
        deltas.append(d)
        members_rot.append(mem)
    decomp = trapezoidal_decomposition(pieces)
    nt = len(decomp.traps)
    corners0 = decomp.corners(0)
    cx = sum(p.x for p in corners0) / len(corners0)
    cy = sum(p.y for p in corners0) / len(corners0)
    depth = [None] * nt
    d0 = para
    for mem in members_rot:
        for j, ar, br, c in mem:
            if sq[j] * rsign(ar * cx + br * cy + c) < 0:
                d0 += 1
    depth[0] = d0
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nt)]
    for lo, hi_t, pj in decomp.piece_edges():
        adj[lo].append((hi_t, deltas[pj]))
        adj[hi_t].append((lo, -deltas[pj]))
    uf = _UnionFind(nt)
    for l, r in decomp.wall_edges():
        adj[l].append((r, 0))
        adj[r].append((l, 0))
        uf.union(l, r)
    stack = [0]
    while stack:
        t = stack.pop()
        for u, d in adj[t]:
            if depth[u] is None:
                depth[u] = depth[t] + d
                stack.append(u)
    assert all(d is not None for d in depth), "decomposition not connected"
    cells: dict[int, list[int]] = {}
    for t in range(nt):
        cells.setdefault(uf.find(t), []).append(t)
    faces = []
    for root, traps in sorted(cells.items()):
        d = depth[traps[0]]
        assert all(depth[t] == d for t in traps)
        if d > k:
            continue
        pts = set()
        for t in traps:
            for p in decomp.corners(t):
                pts.add((p.x, p.y))
        hull = convex_hull([Point2(x, y) for x, y in pts])
        assert len(hull) >= 3
        ring = []
        for p in hull:
            # undo the chart rotation, then leave the chart
            s, t2 = cos * p.x + sin * p.y, -sin * p.x + cos * p.y
            ring.append(frame_point(p0, u1, u2, s, t2))
        faces.append(Face(hi, d, tuple(ring)))
    faces.sort(key=lambda f: tuple((v.x, v.y, v.z) for v in f.vertices))
    return faces


def vis_planes(planes: Sequence[Plane3], query: Point3, k: int,
               validate: bool = True) -> list[Face]:
    """All faces of depth at most k, per plane, clipped to working boxes.

    Output is deterministic: planes in input order, faces in a fixed
    geometric order within each plane.
    """
    if k < 0:
        raise SceneValidationError("k must be nonnegative")
    if validate:
        validate_planes(planes, query)
    faces: list[Face] = []
    for hi in range(len(planes)):
        faces.extend(_plane_faces(planes, hi, query, k))
    return faces


def face_complexity(faces: Sequence[Face]) -> int:
    """Total vertex count over all faces, the 3D output-size measure."""
    return sum(len(f.vertices) for f in faces)


def face_centroid(face: Face) -> Point3:
    n = len(face.vertices)
    return Point3(sum(v.x for v in face.vertices) / n,
                  sum(v.y for v in face.vertices) / n,
                  sum(v.z for v in face.vertices) / n)


def separates_from_origin(plane: Plane3, w: Point3) -> bool:
    """Does the plane strictly separate w from the origin?"""
    return rsign(plane.d) * rsign(plane.eval(w)) < 0


def point_visibility_pair(planes: Sequence[Plane3], w: Point3,
                          k: int) -> tuple[bool, bool]:
    """Is w k-visible from the origin, answered two independent ways?

    The first component counts strictly separating planes directly.  The
    second reads the same count off the transformed arrangement as the
    number of image planes strictly above (below) the image point.  Planes
    through the origin can never separate and are skipped in the image
    count (they have no image).  Requires w.z != 0.
    """
    if w.z == 0:
        raise ValueError("point on the z = 0 plane has no image")
    direct = sum(separates_from_origin(h, w) for h in planes)
    image = sum(separates_via_image(h, w) for h in planes if h.d != 0)
    return (direct <= k, image <= k)


def separates_via_image(plane: Plane3, w: Point3) -> bool:
    """The same separation test read off the transformed arrangement: the
    image plane passes strictly above the image point when w is in the
    upper half-space, strictly below when w is in the lower one.  Requires
    w.z != 0 and a plane that does not pass through the origin."""
    if plane.d == 0:
        raise ValueError("plane through the origin has no image")
    wi = map_point3(w)
    m = map_plane3(plane)
    zstar = -(m.a * wi.x + m.b * wi.y + m.d) / m.c
    return zstar > wi.z if w.z > 0 else zstar < wi.z
