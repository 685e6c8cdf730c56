"""Command line front end.

Subcommands: run (visibility query, optional oracle cross-check and SVG),
oracle (brute-force reference), gen (random scenes), complexity (growth
experiments, CSV + figure), render (SVG from a scene/result pair).

Exit codes: 0 success, 1 parse error, 2 validation error; errors go to
standard error as one-line JSON.  KVIS_SEED supplies the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional

from . import complexity as cx
from . import generate, sceneio, svg
from .geom import Piece
from .oracle import oracle_vis2d
from .sceneio import Scene, SceneParseError
from .vis2d import (SceneValidationError, kvis_scene, polygon_edges,
                    validate_polygon)
from .vis3d import vis_planes


def _default_seed() -> int:
    try:
        return int(os.environ.get("KVIS_SEED", "0"))
    except ValueError:
        return 0


def _emit(doc, out: Optional[str]) -> None:
    text = sceneio.dumps_doc(doc)
    if out:
        sceneio.atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _scene_pieces(scene: Scene):
    if scene.kind == "polygon":
        return validate_polygon(scene.vertices, scene.query)
    return scene.pieces


def _cmd_run(args) -> int:
    scene = sceneio.load_scene(args.scene)
    seed = args.seed if args.seed is not None else _default_seed()
    if scene.k < 0:
        raise SceneValidationError("k must be nonnegative")
    if scene.dim == 3:
        if args.oracle:
            raise SceneValidationError("oracle cross-check covers 2D scenes only")
        if args.svg:
            raise SceneValidationError("SVG rendering covers 2D scenes only")
        faces = vis_planes(scene.planes, scene.query, scene.k)
        _emit(sceneio.result_doc_3d(faces, seed), args.out)
        return 0
    pieces = _scene_pieces(scene)
    if args.oracle:
        portions = oracle_vis2d(pieces, scene.query, scene.k)
        rotation = None
    else:
        portions, rotation = kvis_scene(pieces, scene.query, scene.k,
                                        validate=(scene.kind != "polygon"))
    _emit(sceneio.result_doc_2d(portions, pieces, seed, rotation), args.out)
    if args.svg:
        sceneio.atomic_write_text(args.svg,
                                  svg.render_svg(pieces, scene.query, portions))
    return 0


def _cmd_oracle(args) -> int:
    scene = sceneio.load_scene(args.scene)
    seed = args.seed if args.seed is not None else _default_seed()
    if scene.k < 0:
        raise SceneValidationError("k must be nonnegative")
    if scene.dim == 3:
        raise SceneValidationError("oracle covers 2D scenes only")
    pieces = _scene_pieces(scene)
    portions = oracle_vis2d(pieces, scene.query, scene.k)
    _emit(sceneio.result_doc_2d(portions, pieces, seed, None), args.out)
    return 0


def _cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.n < 1:
        raise SceneValidationError("n must be at least 1")
    kind, dim = args.kind, args.dim
    if (kind == "planes") != (dim == 3):
        raise SceneValidationError(f"kind {kind} needs dim {3 if kind == 'planes' else 2}")
    if kind == "lines":
        lines, query = generate.gen_lines(seed, args.n)
        scene = Scene(2, args.k, query, "pieces",
                      pieces=[Piece.line(l) for l in lines])
    elif kind == "segments":
        pieces, query = generate.gen_segments(seed, args.n)
        scene = Scene(2, args.k, query, "pieces", pieces=pieces)
    elif kind == "polygon":
        vertices, query = generate.gen_polygon(seed, args.n)
        scene = Scene(2, args.k, query, "polygon", vertices=vertices)
    else:
        planes, query = generate.gen_planes(seed, args.n)
        scene = Scene(3, args.k, query, "planes", planes=planes)
    _emit(sceneio.scene_to_doc(scene), args.out)
    return 0


def _parse_int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise SceneParseError(f"bad integer list {text!r}") from exc
    if not vals:
        raise SceneParseError(f"empty integer list {text!r}")
    return vals


def _cmd_complexity(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    n_list = _parse_int_list(args.n_list)
    k_list = _parse_int_list(args.k_list)
    rows = cx.run_experiment(args.dim, n_list, k_list, args.trials, seed)
    text = cx.rows_to_csv(rows)
    if args.out:
        sceneio.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    fig = args.fig
    if fig is None and args.out:
        fig = os.path.splitext(args.out)[0] + ".png"
    if fig:
        d = os.path.dirname(os.path.abspath(fig)) or "."
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".png")
        os.close(fd)
        try:
            cx.make_figure(rows, tmp)
            os.replace(tmp, fig)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
    return 0


def _cmd_render(args) -> int:
    scene = sceneio.load_scene(args.scene)
    if scene.dim != 2:
        raise SceneValidationError("SVG rendering covers 2D scenes only")
    pieces = (polygon_edges(scene.vertices) if scene.kind == "polygon"
              else scene.pieces)
    try:
        with open(args.result, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SceneParseError(f"invalid JSON: {exc}") from exc
    try:
        portions = svg.portions_from_result(doc, pieces)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, SceneParseError):
            raise
        raise SceneParseError(f"bad result document: {exc}") from exc
    sceneio.atomic_write_text(args.svgpath,
                              svg.render_svg(pieces, scene.query, portions))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kvis",
        description="k-crossing visibility on arrangements and polygons")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compute visible portions of a scene")
    p.add_argument("scene")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--oracle", action="store_true",
                   help="answer with the brute-force oracle instead")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("oracle", help="brute-force reference answer")
    p.add_argument("scene")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("gen", help="deterministic random scene")
    p.add_argument("--dim", type=int, choices=(2, 3), required=True)
    p.add_argument("--kind", choices=("lines", "segments", "polygon", "planes"),
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("complexity", help="output-size growth experiment")
    p.add_argument("--dim", type=int, choices=(2, 3), required=True)
    p.add_argument("--n-list", required=True, help="comma-separated, e.g. 64,128")
    p.add_argument("--k-list", required=True, help="comma-separated, e.g. 0,2,8")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    p.add_argument("--fig", default=None,
                   help="figure path (defaults to the CSV path with .png)")
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("render", help="SVG from a scene/result pair")
    p.add_argument("scene")
    p.add_argument("result")
    p.add_argument("svgpath")
    p.set_defaults(func=_cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SceneParseError as exc:
        sys.stderr.write(json.dumps({"error": "parse", "message": str(exc)})
                         + "\n")
        return 1
    except SceneValidationError as exc:
        sys.stderr.write(json.dumps({"error": "validation",
                                     "message": str(exc)}) + "\n")
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "io", "message": str(exc)})
                         + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
