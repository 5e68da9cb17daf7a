from __future__ import annotations

import json
import subprocess
import sys

import pytest

from scheme_lab import catalog
from scheme_lab.cli import encode_label_row, load_document, main, _decode_label_row
from scheme_lab.errors import InputError
from scheme_lab.verdict import Report


def doc(kind: str, payload, **extra) -> str:
    return json.dumps({"format": 1, "kind": kind, "payload": payload, **extra}, indent=1)


def run(argv, capsys) -> tuple[int, str, str]:
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def matrix_strings(m) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.tolist()]


def test_check_441_is_infeasible(tmp_path, capsys):
    path = tmp_path / "q441.json"
    path.write_text(doc("Q", matrix_strings(catalog.primitive_441().Q), label="441"))
    code, out, _ = run(["check", path, "--format", "json"], capsys)
    assert code == 1
    report = json.loads(out)
    failing = [v for v in report["verdicts"] if v["status"] == "fail"]
    assert any(v["test_id"].startswith("Schoenberg") and v["witness"][:2] == ["5", "0"] for v in failing)


def test_check_octahedron_is_feasible(tmp_path, capsys):
    path = tmp_path / "oct.json"
    path.write_text(doc("Q", matrix_strings(catalog.octahedron().Q)))
    code, out, _ = run(["check", path], capsys)
    assert code == 0 and "feasible" in out


def test_irrational_spectrum_is_inconclusive(tmp_path, capsys):
    out_file = tmp_path / "c8.json"
    assert run(["build", "cycle", "n=8", "--out", out_file], capsys)[0] == 0
    code, _, _ = run(["check", out_file], capsys)
    assert code == 2


def test_malformed_fraction(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(doc("P", [["1", "3//4"], ["1", "-1"]]))
    code, _, err = run(["check", path], capsys)
    assert code == 64 and "3//4" in err and "line" in err


def test_float_rejected_with_position():
    text = '{"format": 1,\n "kind": "P",\n "payload": [[1, 0.5], [1, -1]]}'
    with pytest.raises(InputError) as info:
        load_document(text)
    assert (info.value.line, info.value.column) == (3, 18)


@pytest.mark.parametrize("text", [
    "not json",
    '[1, 2]',
    '{"kind": "P", "payload": []}',
    '{"format": 2, "kind": "P", "payload": []}',
    '{"format": 1, "kind": "X", "payload": []}',
    '{"format": 1, "kind": "P"}',
])
def test_document_envelope_errors(text):
    with pytest.raises(InputError):
        load_document(text)


def test_missing_file_is_usage_error(capsys):
    assert run(["derive", "/nonexistent/file.json"], capsys)[0] == 64
    assert run(["check", "/nonexistent/file.json"], capsys)[0] == 64


def test_usage_errors(capsys):
    assert run(["nosuch"], capsys)[0] == 64
    assert run(["check"], capsys)[0] == 64
    assert run(["lines", "--lssd", "1,2"], capsys)[0] == 64
    assert run(["connectivity", "--scheme", "unknown-scheme"], capsys)[0] == 64


def test_check_named_and_jobs(tmp_path, capsys):
    assert run(["check", "--named", "k33"], capsys)[0] == 0
    files = []
    for name in ("k33", "octahedron", "primitive-441"):
        p = tmp_path / f"{name}.json"
        p.write_text(doc("P", matrix_strings(catalog.NAMED[name]().P), label=name))
        files.append(p)
    code, out, _ = run(["check", *files, "--jobs", "2"], capsys)
    assert code == 1
    assert out.count("feasible") >= 3


def test_krein_array_input(tmp_path, capsys):
    path = tmp_path / "ka.json"
    path.write_text(doc("krein_array", {"b_star": ["4", "3"], "c_star": ["1", "4"]}))
    code, out, _ = run(["derive", path, "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["multiplicities"] == ["1", "4", "3"]


def test_build_round_trip(tmp_path, capsys):
    out_file = tmp_path / "cube.json"
    code, out, _ = run(["build", "hypercube", "--n", "3", "--out", out_file, "--format", "json"], capsys)
    assert code == 0
    built = json.loads(out)
    code, out, _ = run(["derive", out_file, "--format", "json"], capsys)
    derived = json.loads(out)
    assert code == 0
    assert derived["data"]["intersection_numbers"] == built["data"]["intersection_numbers"]
    assert derived["data"]["p_orderings"] == [["0", "1", "2", "3"]]


@pytest.mark.parametrize("oa, h", [("worked16x3", "worked4"), ("paper16x3", "paper4")])
def test_build_worked_lssd(oa, h, capsys):
    code, out, _ = run(["build", "lssd-oa", "--oa", oa, "--h", h, "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["vertices"] == "48"
    assert run(["build", "lssd-oa", "--oa", "other"], capsys)[0] == 64


def test_lines_mub(capsys):
    code, out, _ = run(["lines", "--lssd", "16,10,6,3", "--mub", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["beta"] == ["+-1/4"]


def test_lines_named_coeffs(capsys):
    code, out, _ = run(["lines", "--named", "halved-7-cube", "--coeffs", "0,1,1,0", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["tag"] == "optimal"


def test_families_range(capsys):
    code, out, _ = run(["families", "6", "--t", "2..50"], capsys)
    assert code == 0 and "feasible for all 49 instances" in out


def test_families_comma_lists(capsys):
    code, out, _ = run(["families", "12", "--q", "2,3", "--d", "1", "--m", "1..2", "--vmax", "1000000000",
                        "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["instance_count"] == "4"
    assert run(["families", "6", "--t", "2,x"], capsys)[0] == 64


def test_connectivity_cube(capsys):
    code, out, _ = run(["connectivity", "--scheme", "3cube", "--relation", "1", "--format", "json"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["verdicts"][0]["witness"] == [True, True, True, True]


def test_report_round_trip(capsys):
    run(["check", "--named", "qbipartite-594", "--format", "json"], capsys)
    code = main(["check", "--named", "qbipartite-594", "--format", "json"])
    text = capsys.readouterr().out
    report = Report.from_json(json.loads(text))
    assert json.loads(json.dumps(report.to_json())) == json.loads(text)
    assert code == 1


@pytest.mark.parametrize("row", [[0, 0, 1, 2, 2, 2], [3], [1, 0, 1, 0]])
def test_run_length_rows(row):
    assert _decode_label_row(encode_label_row(row), len(row)) == row
    assert _decode_label_row("".join(map(str, row)), None) == row


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "scheme_lab", "check", "--named", "octahedron"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
