import json
import re
from fractions import Fraction as F

import pytest
from hypothesis import given

from conftest import surfaces
from halfplane.analytic import planar_end_model, truncation_polygon
from halfplane.builders import (
    from_metric_tree,
    interval_exchange_surface,
    monomial_surface,
    segment_tree,
    standard_plane as example0,
    zigzag_tree,
)
from halfplane.cli import main
from halfplane.errors import HpsSyntaxError, NotInvolution, SelfInfiniteGluing, UnrenderableTarget
from halfplane.flat import truncation_complex, single_rectangle
from halfplane.hpsformat import (
    complex_from_json,
    complex_to_json,
    emit_hps,
    parse_hps,
    parse_hps_document,
)
from halfplane.render import render_svg
from halfplane.report import report, report_text


class TestFormat:
    @given(surfaces())
    def test_round_trip(self, s):
        text = emit_hps(s)
        assert emit_hps(parse_hps(text)) == text

    def test_comments_and_metadata(self):
        doc = parse_hps_document(
            "# a sphere\nhps 1\nmeta name two planes\nplane 0: []   # full line\nplane 1: []\n"
            "glue (0,F) (1,F)\nexpect genus 0\nexpect poles 4\n"
        )
        assert doc.metadata == {"name": "two planes"}
        assert doc.check_expectations() == []

    def test_failed_expectation(self):
        doc = parse_hps_document(emit_hps(example0()) + "expect genus 1\n")
        assert doc.check_expectations() == ["expected genus 1, found 0"]

    def test_rationals(self):
        text = emit_hps(from_metric_tree(segment_tree(F(3, 4))))
        assert "plane 1: [0 3/4]" in text
        assert report(parse_hps(text))["ends"][0]["residue"] == "3/2"

    def test_genus_one_document(self):
        text = emit_hps(interval_exchange_surface([1, 2], [1, 0]))
        doc = parse_hps_document(text + "expect genus 1\nexpect zeros 4\nexpect poles 4\n")
        assert doc.check_expectations() == []

    def test_self_infinite_line_number(self):
        text = "hps 1\nplane 0: [0 1]\nplane 1: [0 1]\n\nglue (0,L) (0,R)\nglue (0,0) (1,0)\nglue (1,L) (1,R)\n"
        with pytest.raises(SelfInfiniteGluing) as info:
            parse_hps(text)
        assert info.value.line == 5 and str(info.value).startswith("line 5:")

    def test_unglued_slot(self):
        with pytest.raises(NotInvolution):
            parse_hps("hps 1\nplane 0: []\nplane 1: []\n")

    @pytest.mark.parametrize(
        "text,line,col",
        [
            ("", 1, 1),
            ("hps 2\n", 1, 5),
            ("hps 1\nplane 0: [0 x]\n", 2, 13),
            ("hps 1\nplane 0: [1 0]\n", 2, 11),
            ("hps 1\n  glue (0,L)\n", 2, 13),
            ("hps 1\nplane 0: []\nbogus\n", 3, 1),
            ("hps 1\nplane 0: []\nglue (0,L) (1,R)\n", 3, 1),
            ("hps 1\nplane 0: [1/0]\n", 2, 11),
        ],
    )
    def test_syntax_positions(self, text, line, col):
        with pytest.raises(HpsSyntaxError) as info:
            parse_hps(text)
        assert (info.value.line, info.value.column) == (line, col)
        assert str(info.value).startswith(f"line {line}, column {col}:")

    def test_complex_json(self):
        cx = truncation_complex(4, 10, F(1, 2))
        data = json.loads(json.dumps(complex_to_json(cx)))
        assert data["schema"] == "hps-complex/1"
        assert complex_from_json(data) == cx
        assert complex_from_json(json.dumps({"complex": data})) == cx


class TestReport:
    def test_monomial(self):
        r = report(monomial_surface(1))
        assert r["zeros"] == [1] and [e["order"] for e in r["ends"]] == [5]
        assert r["gauss_bonnet"] == {"lhs": -4, "rhs": -4, "ok": True}
        assert r["schema"] == "hps-report/1"

    def test_segment(self):
        (end,) = report(from_metric_tree(segment_tree(F(3, 2))))["ends"]
        assert (end["order"], end["residue"], end["residue_decimal"]) == (6, "3", 3.0)
        assert end["holonomy"]["sign"] == 1

    def test_example0(self):
        r = report(example0())
        assert [(e["order"], e["residue"]) for e in r["ends"]] == [(4, "0")]
        assert r["genus"] == 0 and r["edge_count"] == {"finite": 0, "infinite": 1, "total": 1}

    def test_text(self):
        text = report_text(report(from_metric_tree(zigzag_tree(1, 2, 4))))
        assert "order 8, residue 6" in text and "(ok)" in text


class TestRender:
    def test_deterministic(self):
        s = from_metric_tree(zigzag_tree(1, 2, 3))
        assert render_svg(s) == render_svg(s)
        assert "Date" not in render_svg(s)

    def test_polygon_segments(self):
        svg = render_svg(truncation_polygon(3, 0, 10))
        block = re.search(r'<g id="truncation-boundary">.*?</g>', svg, re.S).group(0)
        path = re.search(r' d="([^"]+)"', block).group(1)
        assert path.count("L") == 6

    def test_monomial_spine(self):
        svg = render_svg(monomial_surface(2))
        assert len(re.findall(r'<g id="vertex-', svg)) == 1
        assert len(re.findall(r'<g id="ray-v0.0-', svg)) == 4
        assert len(re.findall(r'<g id="edge-', svg)) == 0

    def test_tree_spine_edges(self):
        s = from_metric_tree(zigzag_tree(1, 2, 3))
        svg = render_svg(s)
        assert len(re.findall(r'<g id="edge-', svg)) == 3

    def test_full_line(self):
        assert render_svg(example0()).startswith("<?xml")

    def test_end_model(self):
        svg = render_svg(planar_end_model(4, 0.0, 20.0))
        assert 'id="end-boundary"' in svg

    def test_unrenderable(self):
        with pytest.raises(UnrenderableTarget):
            render_svg(single_rectangle(1, 1))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


class TestCli:
    def test_example_validate_report(self, tmp_path, capsys):
        f = tmp_path / "m.hps"
        assert main(["example", "monomial", "3", "--out", str(f)]) == 0
        code, out = run(capsys, "validate", f)
        assert code == 0 and json.loads(out)["valid"]
        code, out = run(capsys, "report", f, "--figures", tmp_path)
        assert code == 0 and json.loads(out)["zeros"] == [3]
        assert (tmp_path / "m-spine.svg").read_text().startswith("<?xml")

    def test_failed_expectation_exit(self, tmp_path, capsys):
        f = tmp_path / "e.hps"
        f.write_text(emit_hps(example0()) + "expect genus 2\n")
        code, out = run(capsys, "validate", f)
        assert code == 1 and json.loads(out)["problems"]

    def test_bad_file_exit(self, tmp_path, capsys):
        f = tmp_path / "bad.hps"
        f.write_text("hps 1\nplane 0: [0 x]\n")
        assert main(["validate", str(f)]) == 2
        assert main(["report", str(tmp_path / "missing.hps")]) == 2

    def test_truncate_glue_quadruple(self, tmp_path, capsys):
        cx = tmp_path / "cx.json"
        assert main(["truncate", "3", "1", "10", "--out", str(cx)]) == 0
        code, out = run(capsys, "cylinders", cx)
        assert code == 2
        code, out = run(capsys, "quadruple", cx)
        assert code == 0
        data = json.loads(out)
        assert sorted(map(tuple, data["cylinders"])) == [("20", "10"), ("20", "10"), ("22", "10")]
        assert main(["truncate", "4", "0", "10", "--out", str(cx)]) == 0
        code, out = run(capsys, "glue-end", cx, 0, 10, 0)
        assert code == 0 and json.loads(out)["ends"][0]["order"] == 6

    def test_collapse(self, tmp_path, capsys):
        f = tmp_path / "z.hps"
        f.write_text(emit_hps(from_metric_tree(zigzag_tree(5, F(1, 100), 11))))
        mid = next(e.id for e in __import__("halfplane").spine(parse_hps(f.read_text())).finite_edges if e.length == F(1, 100))
        code, out = run(capsys, "collapse", f, "--edges", mid, "--format", "text")
        assert code == 0 and "plane" in out

    def test_analytic(self, capsys):
        code, out = run(capsys, "analytic", "residue", "--n", 6, "--alpha", 1)
        assert code == 0
        assert json.loads(out)["residue"] == pytest.approx(3.141592653589793, abs=1e-6)

    def test_render(self, tmp_path, capsys):
        spec = tmp_path / "p.json"
        spec.write_text(json.dumps({"n": 4, "a": 1, "H": 10}))
        svg = tmp_path / "p.svg"
        assert main(["render", str(spec), "--kind", "polygon", "--out", str(svg)]) == 0
        assert 'id="truncation-boundary"' in svg.read_text()

    def test_search(self, capsys):
        code, out = run(capsys, "search-exchange", "--genus", 1, "--zero-order", 2, "--max-intervals", 4)
        assert code == 0 and json.loads(out)
