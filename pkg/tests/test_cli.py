import json
import xml.etree.ElementTree as ET


import pytest

from kcross import fileio
from kcross.cli import main
from kcross.graph import complete_graph, convex_polygon_points


@pytest.fixture()
def k16_file(tmp_path):
    path = tmp_path / "k16.txt"
    fileio.save_graph(complete_graph(convex_polygon_points(16)), path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


class TestGen:
    def test_writes_deterministic_graph(self, tmp_path, capsys):
        out = tmp_path / "g.txt"
        code, _ = run(capsys, "--seed", 3, "gen", "--kind", "uniform-square",
                      "--n", 18, "--density", "1/2", "--out", out)
        assert code == 0
        first = out.read_bytes()
        code, _ = run(capsys, "--seed", 3, "gen", "--kind", "uniform-square",
                      "--n", 18, "--density", "1/2", "--out", out)
        assert code == 0 and out.read_bytes() == first

    def test_summary_json(self, tmp_path, capsys):
        code, out = run(capsys, "--out-dir", tmp_path, "gen", "--n", 10, "--density", "0.5")
        data = json.loads(out)
        assert data["n"] == 10 and data["m"] == 23  # ceil(45/2)


class TestCrossings:
    def test_convex_count(self, k16_file, capsys):
        code, out = run(capsys, "crossings", "--graph", k16_file)
        assert code == 0
        assert json.loads(out)["crossings"] == 1820  # C(16,4)

    def test_csv_format(self, k16_file, capsys):
        code, out = run(capsys, "--format", "csv", "crossings", "--graph", k16_file)
        lines = out.strip().splitlines()
        assert lines[0].split(",") == ["n", "m", "crossings"]
        assert lines[1].split(",") == ["16", "120", "1820"]

    def test_pairs_listing(self, tmp_path, capsys):
        gpath = tmp_path / "k5.txt"
        fileio.save_graph(complete_graph(convex_polygon_points(5)), gpath)
        code, out = run(capsys, "crossings", "--graph", gpath, "--pairs")
        data = json.loads(out)
        assert data["crossings"] == 5 and len(data["pairs"]) == 5

    def test_svg_format_writes_drawing(self, k16_file, tmp_path, capsys):
        code, out = run(capsys, "--out-dir", tmp_path, "--format", "svg",
                        "crossings", "--graph", k16_file)
        assert code == 0
        root = ET.parse(tmp_path / "drawing.svg").getroot()
        lines = [el for el in root.iter() if el.tag.endswith("line")]
        assert len(lines) == 120


class TestColor:
    def test_greedy_meets_bound(self, k16_file, tmp_path, capsys):
        out_file = tmp_path / "c.txt"
        code, out = run(capsys, "--out-dir", tmp_path, "color", "--graph", k16_file,
                        "--strategy", "greedy", "--k", 4, "--out", out_file)
        assert code == 0
        data = json.loads(out)
        assert data["mono"] * 4 <= data["crs"]
        g = fileio.load_graph(k16_file)
        coloring = fileio.load_coloring(g, out_file, k=4)
        assert len(coloring.colors) == g.m

    def test_bundle_strategy_builds_when_missing(self, k16_file, tmp_path, capsys):
        code, out = run(capsys, "--out-dir", tmp_path, "color", "--graph", k16_file,
                        "--strategy", "bundle", "--k", 2)
        assert code == 0
        data = json.loads(out)
        assert data["ratio"]["decimal"] < 0.5

    def test_random_strategy_reproducible(self, k16_file, tmp_path, capsys):
        out1 = tmp_path / "c1.txt"
        out2 = tmp_path / "c2.txt"
        run(capsys, "--seed", 11, "--out-dir", tmp_path, "color", "--graph", k16_file,
            "--strategy", "random", "--k", 3, "--out", out1)
        run(capsys, "--seed", 11, "--out-dir", tmp_path, "color", "--graph", k16_file,
            "--strategy", "random", "--k", 3, "--out", out2)
        assert out1.read_bytes() == out2.read_bytes()


class TestBundlesAndVerify:
    def test_round_trip_verifies(self, k16_file, tmp_path, capsys):
        bpath = tmp_path / "b.json"
        code, _ = run(capsys, "--out-dir", tmp_path, "bundles", "--graph", k16_file,
                      "--k", 2, "--out", bpath)
        assert code == 0
        code, out = run(capsys, "verify", "--graph", k16_file, "--bundles", bpath)
        assert code == 0
        data = json.loads(out)
        assert data["passed"] and all(c["passed"] for c in data["conditions"])

    def test_corrupted_bundles_exit_2(self, k16_file, tmp_path, capsys):
        bpath = tmp_path / "b.json"
        run(capsys, "--out-dir", tmp_path, "bundles", "--graph", k16_file,
            "--k", 2, "--out", bpath)
        data = json.loads(bpath.read_text())
        data["bundles"][0]["edges"] = data["bundles"][0]["edges"][:-1]
        bpath.write_text(json.dumps(data))
        code, out = run(capsys, "verify", "--graph", k16_file, "--bundles", bpath)
        assert code == 2

    def test_impossible_instance_exit_3(self, tmp_path, capsys):
        from kcross.geometry import PointSet
        from kcross.graph import GeometricGraph

        ps = PointSet.from_coords([(0, 0), (10, 10), (0, 10), (10, 1)])
        g = GeometricGraph(ps, ((0, 1), (2, 3)))
        gpath = tmp_path / "x.txt"
        fileio.save_graph(g, gpath)
        code = main(["--out-dir", str(tmp_path), "bundles", "--graph", str(gpath), "--k", "3"])
        assert code == 3


class TestRegularity:
    def test_reports_partition(self, tmp_path, capsys):
        gpath = tmp_path / "g.txt"
        fileio.save_graph(complete_graph(convex_polygon_points(12)), gpath)
        code, out = run(capsys, "regularity", "--graph", gpath, "--r", 3, "--eps", "1/8")
        assert code == 0
        data = json.loads(out)
        assert data["succeeded"] and data["boxes"] == 1  # complete graph: one regular box


class TestSametype:
    def test_check_and_refine(self, tmp_path, capsys):
        ppath = tmp_path / "pts.txt"
        fileio.save_point_set(convex_polygon_points(12), ppath)
        parts = "0,1,2,3;4,5,6,7;8,9,10,11"
        code, out = run(capsys, "sametype", "--points", ppath, "--parts", parts, "--check")
        assert code == 0
        checked = json.loads(out)
        code, out = run(capsys, "sametype", "--points", ppath, "--parts", parts, "--refine")
        assert code == 0
        refined = json.loads(out)
        assert 0 < refined["beta"]["decimal"] <= 1
        if checked["same_type"]:
            assert refined["beta"]["decimal"] == 1


class TestReport:
    def test_full_theorem_svg_and_files(self, k16_file, tmp_path, capsys):
        code, out = run(capsys, "--out-dir", tmp_path, "--format", "svg", "report",
                        "--graph", k16_file, "--pipeline", "full-theorem", "--k", 2)
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "ok"
        assert data["certificate"]["margin"]["num"] > 0
        assert (tmp_path / "report.json").exists()
        assert (tmp_path / "summary.csv").exists()
        assert (tmp_path / "drawing.png").exists()
        root = ET.parse(tmp_path / "drawing.svg").getroot()
        lines = [el for el in root.iter() if el.tag.endswith("line")]
        assert len(lines) == 120

    def test_generated_instance(self, tmp_path, capsys):
        code, out = run(capsys, "--out-dir", tmp_path, "--seed", 2, "report",
                        "--pipeline", "greedy", "--k", 3, "--kind", "convex-position",
                        "--n", 10, "--no-figures")
        assert code == 0
        data = json.loads(out)
        assert data["stats"]["mono"] * 3 <= data["stats"]["crs"]

    def test_failure_exit_code(self, tmp_path, capsys):
        from kcross.geometry import PointSet
        from kcross.graph import GeometricGraph

        ps = PointSet.from_coords([(0, 0), (10, 10), (0, 10), (10, 1)])
        gpath = tmp_path / "x.txt"
        fileio.save_graph(GeometricGraph(ps, ((0, 1), (2, 3))), gpath)
        code, out = run(capsys, "--out-dir", tmp_path, "report", "--graph", gpath,
                        "--pipeline", "full-theorem", "--k", 3, "--no-figures")
        assert code == 3
        assert json.loads(out)["failed_stage"] == "find_pairwise_crossing_edges"
