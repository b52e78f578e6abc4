import json

import pytest

from selective_rips.cli import main
from selective_rips.io import parse_barcode_csv, parse_matrix_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.startswith("{") else out)


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("SRIPS_OUT", str(tmp_path))
    return tmp_path


class TestComplex:
    def test_circle_counts(self, capsys):
        code, out = run(capsys, "complex", "--sample", "circle:r=1,n=60", "--scales", "0.6,0.4",
                        "--dim-cap", "2")
        assert code == 0 and out["counts"] == [60, 300, 600]

    def test_rips_equals_constant_scales(self, capsys):
        _, a = run(capsys, "complex", "--sample", "circle:n=20", "--rips", "0.8")
        _, b = run(capsys, "complex", "--sample", "circle:n=20", "--scales", "0.8")
        assert a["counts"] == b["counts"]

    def test_both_scale_options(self, capsys):
        assert main(["complex", "--sample", "circle:n=5", "--rips", "1", "--scales", "1"]) == 2

    def test_empty_file(self, tmp_path, capsys):
        (tmp_path / "empty.txt").write_text("")
        assert main(["complex", "--matrix", str(tmp_path / "empty.txt"), "--rips", "1"]) == 2
        assert "srips: error" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["betti", "--matrix", str(tmp_path / "nope.txt"), "--rips", "1"]) == 2

    def test_writes_text(self, capsys, outdir):
        code, out = run(capsys, "complex", "--sample", "circle:n=6", "--rips", "1.1",
                        "--out", "k.txt", "--dim-cap", "1")
        assert code == 0 and (outdir / "k.txt").read_text().startswith("0 0\n")


class TestBetti:
    def test_hollow_tetrahedron(self, tmp_path, capsys):
        (tmp_path / "d.txt").write_text("0.08\n0.16,0.08\n0.24,0.16,0.08\n")
        code, out = run(capsys, "betti", "--matrix", str(tmp_path / "d.txt"),
                        "--scales", "1,0.3,0.07,0.01")
        assert code == 0 and out["betti"] == [1, 0, 1, 0]

    def test_cloud_input(self, tmp_path, capsys):
        (tmp_path / "p.csv").write_text("0,0\n1,0\n1,1\n0,1\n")
        code, out = run(capsys, "betti", "--cloud", str(tmp_path / "p.csv"), "--rips", "1.1",
                        "--dim-cap", "1")
        assert out["betti"] == [1, 1]


class TestBarcode:
    def test_files(self, capsys, outdir):
        code, out = run(capsys, "barcode", "--sample", "circle:n=12", "--dim-cap", "1",
                        "--out", "bars", "--format", "csv,svg")
        assert code == 0 and len(out["outputs"]) == 2
        bc = parse_barcode_csv((outdir / "bars.csv").read_text())
        assert len(bc.bars(1)) == 1
        assert (outdir / "bars.svg").read_text().startswith("<svg")

    def test_single_point(self, tmp_path, capsys):
        (tmp_path / "one.txt").write_text("# n=1\n")
        code, out = run(capsys, "barcode", "--matrix", str(tmp_path / "one.txt"))
        assert code == 0 and out["bars"]["0"] == [[0.0, "inf"]]

    def test_bad_format(self, capsys):
        assert main(["barcode", "--sample", "circle:n=5", "--format", "png"]) == 2


class TestCrush:
    def test_interval(self, capsys):
        code, out = run(capsys, "crush", "--sample", "interval:length=10,n=11", "--scales", "2.5",
                        "--strategy", "exhaustive-elementary")
        assert code == 0 and out["success"] and out["n_steps"] == 10

    def test_failure_exits_one(self, tmp_path, capsys):
        (tmp_path / "d.txt").write_text("0.08\n0.16,0.08\n0.24,0.16,0.08\n")
        code, out = run(capsys, "crush", "--matrix", str(tmp_path / "d.txt"),
                        "--scales", "1,0.3,0.07,0.01")
        assert code == 1 and not out["success"] and "reason" in out


class TestOtherCommands:
    def test_counterexample(self, capsys):
        code, out = run(capsys, "counterexample", "--n", "3")
        assert code == 0 and out["betti"][2] == 1

    def test_counterexample_bad_scales(self, capsys):
        code, out = run(capsys, "counterexample", "--n", "3", "--scales", "1,0.4,0.07,0.01")
        assert code == 1 and "reason" in out

    def test_reconstruct(self, capsys):
        code, out = run(capsys, "reconstruct")
        assert code == 0 and out["ok"] and out["betti_target"][:2] == [1, 1]

    def test_reconstruct_large_jitter(self, capsys):
        code, out = run(capsys, "reconstruct", "--jitter", "0.1")
        assert code == 1 and "(ii)" in out["reason"]

    def test_nerve_check(self, capsys):
        code, out = run(capsys, "nerve-check", "--sample", "interval:length=10,n=11",
                        "--alpha", "3.5", "--centers", "0,5,10", "--size-cap", "3")
        assert code == 0 and out["nerve_counts"] == [3, 2] and out["lebesgue_number"] == 1.5

    def test_nerve_check_not_covering(self, capsys):
        code, out = run(capsys, "nerve-check", "--sample", "interval:length=10,n=11",
                        "--alpha", "2", "--centers", "0,5,10")
        assert code == 1 and not out["covering"]

    def test_sample_to_stdout(self, capsys):
        code, text = run(capsys, "sample", "--sample", "circle:n=5")
        assert code == 0 and parse_matrix_text(text).shape == (5, 5)

    def test_sample_to_json(self, capsys, outdir):
        code, out = run(capsys, "sample", "--sample", "disk:n=4", "--out", "d.json")
        assert code == 0 and len(json.loads((outdir / "d.json").read_text())["distances"]) == out["n_points"]


def test_deterministic(capsys):
    argv = ["barcode", "--sample", "disk:n=2,seed=1", "--dim-cap", "1", "--profile", "1,0.7",
            "--max-birth", "0.8"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b and a["max_birth"] == 0.8
