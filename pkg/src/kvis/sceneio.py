"""Scene and result files.

Scenes and results are JSON documents whose numbers are exact rationals,
written as integers or "num/den" strings.  Floats are rejected on input
and never emitted.  Serialization is deterministic so identical inputs
give byte-identical files; writes go through a temp file and a rename.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from gmpy2 import mpq

from .geom import (Line2, Piece, Plane3, Point2, Point3, Portion, is_finite,
                   rat)
from .vis2d import SceneValidationError
from .vis3d import Face


class SceneParseError(ValueError):
    """Malformed scene or result document (structure or number syntax)."""


@dataclass
class Scene:
    dim: int
    k: int
    query: Union[Point2, Point3]
    kind: str  # "pieces" | "polygon" | "planes"
    pieces: list[Piece] = field(default_factory=list)
    vertices: list[Point2] = field(default_factory=list)
    planes: list[Plane3] = field(default_factory=list)


def rat_from_json(v) -> mpq:
    if isinstance(v, bool) or isinstance(v, float):
        raise SceneParseError(f"expected integer or \"num/den\" string, got {v!r}")
    if isinstance(v, int):
        return mpq(v)
    if isinstance(v, str):
        try:
            return rat(v)
        except ValueError as exc:
            raise SceneParseError(str(exc)) from exc
    raise SceneParseError(f"expected integer or \"num/den\" string, got {v!r}")


def _coords(v, n: int, what: str) -> list[mpq]:
    if not isinstance(v, list) or len(v) != n:
        raise SceneParseError(f"{what} must be a list of {n} rationals")
    return [rat_from_json(c) for c in v]


def _point2(v, what: str) -> Point2:
    x, y = _coords(v, 2, what)
    return Point2(x, y)


def _point3(v, what: str) -> Point3:
    x, y, z = _coords(v, 3, what)
    return Point3(x, y, z)


def _element_2d(obj, idx: int) -> Piece:
    t = obj.get("type")
    try:
        if t == "line":
            a, b, c = (rat_from_json(obj[f]) for f in ("a", "b", "c"))
            return Piece.line(Line2.of(a, b, c))
        if t == "segment":
            return Piece.segment(_point2(obj["p"], "segment endpoint"),
                                 _point2(obj["q"], "segment endpoint"))
        if t == "ray":
            o = _point2(obj["origin"], "ray origin")
            d = _coords(obj["dir"], 2, "ray dir")
            return Piece.ray(o, (d[0], d[1]))
    except KeyError as exc:
        raise SceneParseError(f"element {idx}: missing field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, SceneParseError):
            raise
        raise SceneValidationError(f"element {idx}: {exc}") from exc
    raise SceneParseError(f"element {idx}: unknown 2D type {t!r}")


def parse_scene(doc) -> Scene:
    if not isinstance(doc, dict):
        raise SceneParseError("scene must be a JSON object")
    dim = doc.get("dim")
    if dim not in (2, 3):
        raise SceneParseError("dim must be 2 or 3")
    k = doc.get("k")
    if isinstance(k, bool) or not isinstance(k, int):
        raise SceneParseError("k must be an integer")
    elements = doc.get("elements")
    if not isinstance(elements, list):
        raise SceneParseError("elements must be a list")
    if dim == 3:
        query = _point3(doc.get("query"), "query")
        planes = []
        for i, obj in enumerate(elements):
            if not isinstance(obj, dict) or obj.get("type") != "plane":
                raise SceneParseError(f"element {i}: dim 3 scenes hold planes only")
            try:
                a, b, c, d = (rat_from_json(obj[f]) for f in "abcd")
                planes.append(Plane3.of(a, b, c, d))
            except KeyError as exc:
                raise SceneParseError(f"element {i}: missing field {exc}") from exc
            except ValueError as exc:
                if isinstance(exc, SceneParseError):
                    raise
                raise SceneValidationError(f"element {i}: {exc}") from exc
        return Scene(3, k, query, "planes", planes=planes)
    query = _point2(doc.get("query"), "query")
    poly = [obj for obj in elements
            if isinstance(obj, dict) and obj.get("type") == "polygon"]
    if poly:
        if len(elements) != 1:
            raise SceneParseError("a polygon must be the only element")
        vs = poly[0].get("vertices")
        if not isinstance(vs, list):
            raise SceneParseError("polygon vertices must be a list")
        vertices = [_point2(v, "polygon vertex") for v in vs]
        return Scene(2, k, query, "polygon", vertices=vertices)
    pieces = []
    for i, obj in enumerate(elements):
        if not isinstance(obj, dict):
            raise SceneParseError(f"element {i}: must be an object")
        if obj.get("type") == "plane":
            raise SceneParseError(f"element {i}: planes need dim 3")
        pieces.append(_element_2d(obj, i))
    return Scene(2, k, query, "pieces", pieces=pieces)


def load_scene(path: str) -> Scene:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneParseError(f"invalid JSON: {exc}") from exc
    return parse_scene(doc)


# serialization


def rat_to_json(v) -> Union[int, str]:
    q = mpq(v)
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def _pt_json(p) -> list:
    if isinstance(p, Point3):
        return [rat_to_json(p.x), rat_to_json(p.y), rat_to_json(p.z)]
    return [rat_to_json(p.x), rat_to_json(p.y)]


def scene_to_doc(scene: Scene) -> dict:
    if scene.kind == "planes":
        els = [{"type": "plane", "a": int(h.a), "b": int(h.b),
                "c": int(h.c), "d": int(h.d)} for h in scene.planes]
    elif scene.kind == "polygon":
        els = [{"type": "polygon",
                "vertices": [_pt_json(v) for v in scene.vertices]}]
    else:
        els = []
        for p in scene.pieces:
            lo_f, hi_f = is_finite(p.lo), is_finite(p.hi)
            if lo_f and hi_f:
                els.append({"type": "segment", "p": _pt_json(p.point_at(p.lo)),
                            "q": _pt_json(p.point_at(p.hi))})
            elif lo_f or hi_f:
                if lo_f:
                    o, d = p.point_at(p.lo), p.direction
                else:
                    o, d = p.point_at(p.hi), (-p.direction[0], -p.direction[1])
                els.append({"type": "ray", "origin": _pt_json(o),
                            "dir": [rat_to_json(d[0]), rat_to_json(d[1])]})
            else:
                l = p.carrier
                els.append({"type": "line", "a": int(l.a), "b": int(l.b),
                            "c": int(l.c)})
        return {"dim": 2, "k": scene.k, "query": _pt_json(scene.query),
                "elements": els}
    return {"dim": scene.dim, "k": scene.k, "query": _pt_json(scene.query),
            "elements": els}


def portion_to_json(portion: Portion, piece: Piece) -> dict:
    lo_f, hi_f = is_finite(portion.lo), is_finite(portion.hi)
    d = piece.direction
    if lo_f and hi_f:
        kind = "segment"
        endpoints = [_pt_json(piece.point_at(portion.lo)),
                     _pt_json(piece.point_at(portion.hi))]
        dirs = []
    elif lo_f or hi_f:
        kind = "ray"
        if lo_f:
            endpoints = [_pt_json(piece.point_at(portion.lo))]
            dirs = [[rat_to_json(d[0]), rat_to_json(d[1])]]
        else:
            endpoints = [_pt_json(piece.point_at(portion.hi))]
            dirs = [[rat_to_json(-d[0]), rat_to_json(-d[1])]]
    else:
        kind = "line"
        endpoints = [_pt_json(piece.point_at(0))]
        dirs = [[rat_to_json(d[0]), rat_to_json(d[1])]]
    return {"element": portion.eid, "kind": kind,
            "endpoints": endpoints, "dirs": dirs}


def result_doc_2d(portions: Sequence[Portion], pieces: Sequence[Piece],
                  seed: int,
                  rotation: Optional[tuple[int, int]] = None) -> dict:
    n_end = sum(is_finite(p.lo) + is_finite(p.hi) for p in portions)
    meta: dict = {"seed": seed}
    meta["rotation"] = list(rotation) if rotation is not None else None
    return {"portions": [portion_to_json(p, pieces[p.eid]) for p in portions],
            "stats": {"portion_count": len(portions),
                      "endpoint_count": int(n_end)},
            "meta": meta}


def result_doc_3d(faces: Sequence[Face], seed: int) -> dict:
    return {"faces": [{"plane": f.plane, "depth": f.depth,
                       "vertices": [_pt_json(v) for v in f.vertices]}
                      for f in faces],
            "stats": {"face_count": len(faces),
                      "face_complexity": sum(len(f.vertices) for f in faces)},
            "meta": {"seed": seed}}


def dumps_doc(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
