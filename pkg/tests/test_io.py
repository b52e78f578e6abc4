import json
import math

import numpy as np
import pytest
from hypothesis import given

from selective_rips.homology import Barcode, persistence
from selective_rips.io import (ParseError, barcode_ascii, barcode_csv, barcode_svg,
                               barcode_to_dict, complex_from_dict, complex_to_dict, dumps,
                               format_complex, format_matrix, parse_barcode_csv, parse_complex,
                               parse_matrix_text, read_cloud, read_matrix, write_json,
                               write_matrix)
from selective_rips.sampling import SampleSpec, sample
from selective_rips.srips import ScaleSequence, build_complex, build_filtration

from conftest import planar_spaces


class TestMatrixText:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_round_trip(self, n):
        s = sample(SampleSpec("circle", n))
        assert np.array_equal(parse_matrix_text(format_matrix(s)), s.dist)

    @given(planar_spaces(1, 8))
    def test_round_trip_random(self, s):
        assert np.array_equal(parse_matrix_text(format_matrix(s)), s.dist)

    def test_layouts_agree(self):
        expected = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]], dtype=float)
        for text in ("1\n2,1\n", "0\n1,0\n2,1,0\n", "0 1 2\n1 0 1\n2 1 0\n"):
            assert np.array_equal(parse_matrix_text(text), expected)

    def test_format(self):
        s = sample(SampleSpec("interval", 3, length=2.0))
        assert format_matrix(s) == "# n=3\n1.0\n2.0,1.0\n"

    @pytest.mark.parametrize("text", ["", "# nothing\n", "1,2\n3\n", "0 1\n1 x\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_matrix_text(text)

    def test_header_mismatch(self):
        with pytest.raises(ParseError):
            parse_matrix_text("# n=5\n1\n2,1\n")

    def test_files(self, tmp_path):
        s = sample(SampleSpec("circle", 6))
        for name in ("d.txt", "d.json"):
            write_matrix(s, tmp_path / name)
            assert np.allclose(read_matrix(tmp_path / name).dist, s.dist)
        (tmp_path / "bad.json").write_text("{")
        with pytest.raises(ParseError):
            read_matrix(tmp_path / "bad.json")


class TestCloud:
    def test_euclidean(self, tmp_path):
        (tmp_path / "p.csv").write_text("0,0\n3,4\n")
        assert read_cloud(tmp_path / "p.csv").dist[0, 1] == 5

    def test_circle_angles_and_points(self, tmp_path):
        (tmp_path / "a.csv").write_text(f"0\n{math.pi / 2}\n")
        (tmp_path / "b.csv").write_text("1,0\n0,1\n")
        for name in ("a.csv", "b.csv"):
            s = read_cloud(tmp_path / name, "circle")
            assert s.dist[0, 1] == pytest.approx(math.pi / 2)

    def test_torus_wraps(self, tmp_path):
        (tmp_path / "t.csv").write_text("0.1,0.5\n0.9,0.5\n")
        s = read_cloud(tmp_path / "t.csv", "flat_torus", sides=(1, 1))
        assert s.dist[0, 1] == pytest.approx(0.2)

    def test_errors(self, tmp_path):
        (tmp_path / "r.csv").write_text("0,0\n1\n")
        with pytest.raises(ParseError):
            read_cloud(tmp_path / "r.csv")
        with pytest.raises(ParseError):
            read_cloud(tmp_path / "r.csv", "hyperbolic")


class TestComplexText:
    def test_round_trip(self):
        k = build_complex(sample(SampleSpec("circle", 6)), ScaleSequence((1.1,)), 2)
        text = format_complex(k)
        assert text.splitlines()[6] == "1 0 1"
        back, births = parse_complex(text)
        assert back == k and births is None

    def test_round_trip_with_births(self):
        f = build_filtration(sample(SampleSpec("circle", 5)), ScaleSequence((1.0,)), 2)
        births = dict(f.ordered())
        text = format_complex(f.sublevel(10), births)
        assert parse_complex(text)[1] == births

    def test_json(self):
        k = build_complex(sample(SampleSpec("circle", 8)), ScaleSequence((0.9, 0.8)), 2)
        assert complex_from_dict(json.loads(json.dumps(complex_to_dict(k)))) == k

    @pytest.mark.parametrize("text", ["", "1 0\n", "x 0\n", "0 1 2 3\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_complex(text)


class TestBarcodeOutput:
    @pytest.fixture
    def barcode(self):
        f = build_filtration(sample(SampleSpec("circle", 12)), ScaleSequence((1.0,)), 2)
        return persistence(f, 1)

    def test_csv_round_trip(self, barcode):
        text = barcode_csv(barcode)
        assert text.startswith("dim,birth,death\n") and ",inf\n" in text
        assert parse_barcode_csv(text) == barcode

    def test_csv_header_required(self):
        with pytest.raises(ParseError):
            parse_barcode_csv("0,0,1\n")

    def test_dict_and_json(self, barcode, tmp_path):
        d = barcode_to_dict(barcode)
        assert set(d) == {"0", "1"}
        write_json({"bars": d, "x": np.float64(1.5), "s": {2, 1}}, tmp_path / "b.json")
        back = json.loads((tmp_path / "b.json").read_text())
        assert back["bars"]["0"][-1][1] == "inf" and back["x"] == 1.5 and back["s"] == [1, 2]

    def test_ascii(self, barcode):
        text = barcode_ascii(barcode)
        assert text.count("\n") == len(barcode.rows()) + 3
        assert ">" in text

    def test_svg(self, barcode):
        svg = barcode_svg(barcode)
        assert svg.startswith("<svg") and svg.count("<rect") == len(barcode.rows())

    def test_single_point(self):
        text = barcode_ascii(Barcode({0: [(0.0, math.inf)]}))
        assert "[0, inf)" in text

    def test_dumps_is_stable(self):
        assert dumps({"b": 1, "a": [1.0, math.inf]}) == dumps({"b": 1, "a": [1.0, math.inf]})
