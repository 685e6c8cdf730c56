"""Scene/result round trips, CLI subcommands, exit codes, SVG output."""

import json

import pytest
from gmpy2 import mpq

from kvis.cli import main
from kvis.geom import Line2, Piece, Point2, Portion
from kvis.sceneio import (Scene, SceneParseError, dumps_doc, parse_scene,
                          rat_from_json, rat_to_json, scene_to_doc)
from kvis.svg import portions_from_result, render_svg


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def three_lines_doc(k=0):
    return {"dim": 2, "k": k, "query": [0, 0],
            "elements": [{"type": "line", "a": 0, "b": 1, "c": -1},
                         {"type": "line", "a": 0, "b": 1, "c": -2},
                         {"type": "line", "a": 0, "b": 1, "c": -3}]}


def test_rat_json_round_trip():
    for v in (mpq(3), mpq(-7, 2), mpq(0), mpq(10**12, 7)):
        assert rat_from_json(rat_to_json(v)) == v
    assert rat_to_json(mpq(4, 2)) == 2
    assert rat_to_json(mpq(1, 3)) == "1/3"


def test_rat_json_rejects_floats_and_bools():
    with pytest.raises(SceneParseError):
        rat_from_json(1.5)
    with pytest.raises(SceneParseError):
        rat_from_json(True)
    with pytest.raises(SceneParseError):
        rat_from_json("1/0")


def test_scene_round_trip():
    doc = {"dim": 2, "k": 1, "query": ["1/2", -3],
           "elements": [{"type": "segment", "p": [0, 0], "q": [1, "5/3"]},
                        {"type": "ray", "origin": [2, 2], "dir": [-1, 0]},
                        {"type": "line", "a": 1, "b": -1, "c": 4}]}
    scene = parse_scene(doc)
    doc2 = scene_to_doc(scene)
    assert parse_scene(doc2) == scene
    assert doc2["query"] == ["1/2", -3]


def test_parse_rejects_malformed():
    bad = [
        {"dim": 4, "k": 0, "query": [0, 0], "elements": []},
        {"dim": 2, "k": "x", "query": [0, 0], "elements": []},
        {"dim": 2, "k": 0, "query": [0], "elements": []},
        {"dim": 2, "k": 0, "query": [0, 0], "elements": [{"type": "blob"}]},
        {"dim": 2, "k": 0, "query": [0, 0],
         "elements": [{"type": "plane", "a": 1, "b": 0, "c": 0, "d": 0}]},
        {"dim": 2, "k": 0, "query": [0, 0],
         "elements": [{"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]},
                      {"type": "line", "a": 1, "b": 0, "c": 0}]},
        {"dim": 2, "k": 0, "query": [0.5, 0], "elements": []},
    ]
    for doc in bad:
        with pytest.raises(SceneParseError):
            parse_scene(doc)


def test_cli_three_lines(tmp_path, capsys):
    scene = write(tmp_path, "s.json", three_lines_doc())
    assert main(["run", scene]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["portions"] == [{"element": 0, "kind": "line",
                                "endpoints": [[0, 1]], "dirs": [[1, 0]]}]
    assert doc["stats"] == {"portion_count": 1, "endpoint_count": 0}


def test_cli_run_oracle_agree(tmp_path, capsys):
    scene = str(tmp_path / "s.json")
    assert main(["gen", "--dim", "2", "--kind", "segments", "--n", "10",
                 "--k", "2", "--seed", "11", "--out", scene]) == 0
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["run", scene, "--out", out1]) == 0
    assert main(["run", scene, "--oracle", "--out", out2]) == 0
    d1, d2 = (json.loads(open(p).read()) for p in (out1, out2))
    assert d1["portions"] == d2["portions"]
    assert d1["meta"]["rotation"] is not None


def test_cli_exit_codes(tmp_path, capsys):
    doc = three_lines_doc()
    doc["query"] = ["1/0", 0]
    scene = write(tmp_path, "bad.json", doc)
    assert main(["run", scene]) == 1
    err = capsys.readouterr().err
    assert "invalid rational" in err and json.loads(err)["error"] == "parse"

    doc = {"dim": 2, "k": 0, "query": [5, 5],
           "elements": [{"type": "segment", "p": [0, 0], "q": [2, 0]},
                        {"type": "segment", "p": [1, 0], "q": [3, 0]}]}
    scene = write(tmp_path, "overlap.json", doc)
    assert main(["run", scene]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "validation"

    doc = three_lines_doc(k=-1)
    scene = write(tmp_path, "negk.json", doc)
    assert main(["run", scene]) == 2
    capsys.readouterr()

    scene = write(tmp_path, "notjson.json", None)
    open(scene, "w").write("{nope")
    assert main(["run", scene]) == 1
    capsys.readouterr()


def test_cli_gen_deterministic(tmp_path):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    args = ["gen", "--dim", "2", "--kind", "lines", "--n", "3", "--seed", "7"]
    assert main(args + ["--out", a]) == 0
    assert main(args + ["--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_cli_gen_kind_dim_mismatch(tmp_path, capsys):
    assert main(["gen", "--dim", "2", "--kind", "planes", "--n", "4"]) == 2
    capsys.readouterr()


def test_cli_run_deterministic(tmp_path):
    scene = str(tmp_path / "s.json")
    assert main(["gen", "--dim", "2", "--kind", "lines", "--n", "12",
                 "--k", "3", "--seed", "9", "--out", scene]) == 0
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["run", scene, "--out", a]) == 0
    assert main(["run", scene, "--out", b]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_cli_3d_run(tmp_path, capsys):
    scene = str(tmp_path / "s.json")
    assert main(["gen", "--dim", "3", "--kind", "planes", "--n", "5",
                 "--k", "1", "--seed", "4", "--out", scene]) == 0
    assert main(["run", scene]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["stats"]["face_complexity"] == sum(
        len(f["vertices"]) for f in doc["faces"])
    assert all(f["depth"] <= 1 for f in doc["faces"])
    # oracle and svg refuse 3D
    assert main(["run", scene, "--oracle"]) == 2
    capsys.readouterr()


def test_kvis_seed_env(tmp_path, capsys, monkeypatch):
    scene = write(tmp_path, "s.json", three_lines_doc())
    monkeypatch.setenv("KVIS_SEED", "42")
    assert main(["run", scene]) == 0
    assert json.loads(capsys.readouterr().out)["meta"]["seed"] == 42
    monkeypatch.setenv("KVIS_SEED", "junk")
    assert main(["run", scene]) == 0
    assert json.loads(capsys.readouterr().out)["meta"]["seed"] == 0


def test_svg_empty_result_paths():
    pieces = [Piece.line(Line2.of(0, 1, -1))]
    q = Point2(mpq(0), mpq(0))
    text = render_svg(pieces, q, [])
    assert text.count("<path") == 0
    assert text.count("<line") == 1
    assert text.count("circle") == 1


def test_svg_path_count_matches_portions(tmp_path, capsys):
    scene = str(tmp_path / "s.json")
    assert main(["gen", "--dim", "2", "--kind", "polygon", "--n", "16",
                 "--k", "1", "--seed", "13", "--out", scene]) == 0
    out, sv = str(tmp_path / "r.json"), str(tmp_path / "r.svg")
    assert main(["run", scene, "--out", out, "--svg", sv]) == 0
    doc = json.loads(open(out).read())
    text = open(sv).read()
    assert text.count("<path") == doc["stats"]["portion_count"]
    assert "1000" in text.splitlines()[0]
    # no raw floats beyond 6 decimals
    import re
    for m in re.finditer(r"\d+\.(\d+)", text):
        assert len(m.group(1)) <= 6


def test_render_matches_run_svg(tmp_path):
    scene = str(tmp_path / "s.json")
    assert main(["gen", "--dim", "2", "--kind", "segments", "--n", "7",
                 "--k", "1", "--seed", "21", "--out", scene]) == 0
    out, sv1, sv2 = (str(tmp_path / n) for n in ("r.json", "a.svg", "b.svg"))
    assert main(["run", scene, "--out", out, "--svg", sv1]) == 0
    assert main(["render", scene, out, sv2]) == 0
    assert open(sv1).read() == open(sv2).read()


def test_portions_from_result_round_trip(tmp_path):
    from kvis.sceneio import result_doc_2d
    pieces = [Piece.line(Line2.of(1, -1, 0)),
              Piece.segment(Point2(mpq(0), mpq(2)), Point2(mpq(4), mpq(2))),
              Piece.ray(Point2(mpq(3), mpq(0)), (mpq(0), mpq(1)))]
    portions = [Portion(0, pieces[0].lo, pieces[0].hi),
                Portion(1, mpq(1, 4), mpq(3, 4)),
                Portion(2, mpq(1), pieces[2].hi),
                Portion(2, pieces[2].lo, mpq(1, 2))]
    doc = result_doc_2d(portions, pieces, 0, (1, 0))
    back = portions_from_result(doc, pieces)
    assert back == portions


def test_complexity_csv(tmp_path):
    out = str(tmp_path / "c.csv")
    fig = str(tmp_path / "c.png")
    assert main(["complexity", "--dim", "2", "--n-list", "4,8",
                 "--k-list", "0,1", "--trials", "2", "--seed", "3",
                 "--out", out, "--fig", fig]) == 0
    rows = open(out).read().splitlines()
    assert rows[0] == ("dim,n,k,trial,portion_count,endpoint_count,"
                       "face_complexity,runtime_ms")
    assert len(rows) == 1 + 2 * 2 * 2
    import os
    assert os.path.getsize(fig) > 0


def test_complexity_fixed_instance():
    # three horizontal lines, k=0: one unbounded portion, no endpoints
    from kvis.vis2d import kvis_lines
    lines = [Line2.of(0, 1, -i) for i in (1, 2, 3)]
    portions = kvis_lines(lines, Point2(mpq(0), mpq(0)), 0)
    assert len(portions) == 1
    from kvis.vis2d import endpoint_count
    assert endpoint_count(portions) == 0
