import json
import subprocess
import sys

import pytest

from threadrep.cli import main
from threadrep.document import parse_document, parse_module
from threadrep.rep import validate

from helpers import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decompose_reports_eight_cells(capsys):
    code, out, _ = run(capsys, "decompose", fixture_path("d4_staircase"))
    assert code == 0
    assert out.startswith("partition: 8 cells\n")
    assert "summands: 2" in out


def test_hom_on_the_two_cycle_exits_with_the_error_name(capsys):
    code, _, err = run(capsys, "hom", "x", "y", fixture_path("two_cycle"))
    assert code == 2
    assert "NotHomFinite" in err


def test_classify_kronecker(capsys):
    code, out, _ = run(capsys, "classify", fixture_path("kronecker_threaded"))
    assert code == 0
    assert out.splitlines()[0] == "VirtuallyTame (Euclidean Ã family)"
    assert "essential type: out of scope" in out


def test_projres_and_ext(capsys):
    code, out, _ = run(capsys, "projres", "S0", fixture_path("a2_gap_half"), "--json")
    assert code == 0
    assert json.loads(out)["terms"] == [["[0,·)"], ["(0,·]"], ["[1/2,·)"], ["(1/2,·]"], ["[1,1]"]]
    code, out, _ = run(capsys, "ext", "M3", "S1", "1", fixture_path("a2_open"))
    assert out.strip() == "dim Ext^1(M3, S1) = 1"


def test_parse_errors_exit_one(capsys, tmp_path):
    code, _, err = run(capsys, "partition", str(tmp_path / "missing.json"))
    assert code == 1 and "ParseError" in err
    code, _, err = run(capsys, "projres", "nope", fixture_path("a2_gap_half"))
    assert code == 1


def test_json_modules_round_trip(capsys):
    code, out, _ = run(capsys, "decompose", "--json", fixture_path("d4_staircase"))
    data = json.loads(out)
    doc = parse_document(json.load(open(fixture_path("d4_staircase"))))
    for s in data["summands"]:
        m = parse_module(doc, s["module"])
        assert validate(m).ok


@pytest.mark.parametrize("argv", [
    ["partition", "d4_staircase"], ["sample", "d4_staircase"], ["restrict", "d4_staircase"],
    ["barcode", "--module", "M2", "a2_open"], ["qbounded", "two_cycle"], ["check", "a2_gap_half"],
    ["classify", "--depth", "3", "d4_threading_3"], ["hom", "x", "y", "d4_rect_ideal"],
])
def test_output_is_deterministic(capsys, argv):
    argv = argv[:-1] + [fixture_path(argv[-1])]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[0] == 0


def test_barcode_svg(capsys, tmp_path):
    out = tmp_path / "bars.svg"
    code, text, _ = run(capsys, "barcode", "--module", "M2", "--svg", str(out), fixture_path("a2_open"))
    assert code == 0 and text.strip() == "a:(1/2,1) x1"
    assert out.read_text().startswith("<svg")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "threadrep.cli", "partition", fixture_path("d4_staircase")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "8 cells"
    assert proc.stdout.splitlines()[-1] == "sampled quiver: Euclidean (Ẽ7)"
