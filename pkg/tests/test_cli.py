import io
import os

import pandas as pd

from conftest import model_path
from cli.main import build_parser, main
from cli.report_exporter import Report, export_to_csv, parse_records, render_records, render_text

GOLDEN_MTC = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden", "mtc_nonformal_wedge.records")


def _run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    status = main(list(argv), stdout=stdout, stderr=stderr)
    return status, stdout.getvalue(), stderr.getvalue()


def test_check_passes_on_example():
    status, out, _ = _run("check", model_path("nonformal_wedge"), "--max-degree", "10")
    assert status == 0
    assert "ideal is d-stable" in out


def test_check_reports_broken_model():
    status, out, _ = _run("check", model_path("broken"), "--max-degree", "8")
    assert status == 3
    assert "d^2(u)" in out


def test_cohomology_betti_line():
    status, out, _ = _run("cohomology", model_path("nonformal_wedge"), "--max-degree", "8")
    assert status == 0
    assert "Betti 1,0,0,2,0,0,0,0,2" in out
    assert "[degree]" in out


def test_parse_error_is_located(tmp_path):
    path = tmp_path / "bad.model"
    path.write_text("generator a 3\nd a = b\n", encoding="utf-8")
    status, out, err = _run("check", str(path))
    assert status == 2
    assert out == ""
    assert err.strip() == f"parse error: {path}:2:7: undeclared symbol 'b'"


def test_invalid_utf8_is_a_located_parse_error(tmp_path):
    path = tmp_path / "binary.model"
    path.write_bytes(b"generator a 3\n\xff\xfe\n")
    status, out, err = _run("check", str(path))
    assert status == 2
    assert out == ""
    assert err.startswith(f"parse error: {path}:2:1: ")


def test_bad_arguments_are_usage_errors():
    assert _run("mtc")[0] == 1
    assert _run("frobnicate", model_path("odd_sphere"))[0] == 1
    assert _run("check", model_path("odd_sphere"), "--max-degree", "0")[0] == 1
    assert _run("check", "no/such/file.model")[0] == 1


def test_integrity_error_exit_status():
    status, _, err = _run("mtc", model_path("broken"), "--max-degree", "8")
    assert status == 3
    assert err.startswith("integrity error:")


def test_records_format():
    status, out, _ = _run("nil-ker-mu", model_path("nonformal_wedge"), "--max-degree", "12", "--format", "records")
    assert status == 0
    (record,) = parse_records(out)
    assert record["record"] == "command"
    assert record["command"] == "nil-ker-mu"
    assert record["model"] == "nonformal_wedge"
    assert record["value"] == "3"
    assert record["witness"] == "a b u"


def test_mtc_on_odd_sphere_is_conclusive():
    status, out, _ = _run("mtc", model_path("odd_sphere"), "--max-degree", "8", "--require-conclusive")
    assert status == 0
    assert "MTC = 1" in out


def test_mtc_records_match_golden_file():
    status, out, _ = _run("mtc", model_path("nonformal_wedge"), "--max-n", "3", "--max-degree", "12",
                          "--format", "records", "--require-conclusive")
    assert status == 0
    records = parse_records(out)
    with open(GOLDEN_MTC, encoding="utf-8") as handle:
        expected = parse_records(handle.read())
    assert [{k: v for k, v in r.items() if k != "witness"} for r in records] == expected
    h_failure = [r for r in records if r.get("kind") == "lower(H-injectivity)"]
    assert h_failure[0]["witness"].startswith("witness=")
    assert all(r["witness"] != "-" for r in records if r["record"] == "level")


def test_inconclusive_status():
    status, _, _ = _run("nil-ker-mu", model_path("nonformal_wedge"), "--max-degree", "12", "--max-n", "1",
                        "--require-conclusive")
    assert status == 4


def test_join_dump():
    status, out, _ = _run("join", model_path("odd_sphere"), "--n", "1", "--max-degree", "6", "--dump",
                          "--format", "records")
    assert status == 0
    records = parse_records(out)
    generators = [r for r in records if r["record"] == "generator"]
    assert [r["generator"] for r in generators] == ["s-1[abar|abar]"]
    assert generators[0]["degree"] == "5"


def test_pathfib_reports_minimal_module():
    status, out, _ = _run("pathfib", model_path("nonformal_wedge"), "--max-degree", "12", "--format", "records")
    assert status == 0
    records = parse_records(out)
    assert records[0]["minimal"] == "yes"
    assert [r["generator"] for r in records[1:]] == ["abar", "bbar", "ubar"]


def test_csv_export(tmp_path):
    target = tmp_path / "ring.csv"
    status, _, err = _run("ring", model_path("nonformal_wedge"), "--max-degree", "10", "--csv", str(target))
    assert status == 0
    assert f"CSV written: {target}" in err
    classes = pd.read_csv(target)
    assert list(classes.columns) == ["model", "class", "degree", "representative"]
    assert list(classes["degree"]) == [0, 3, 3, 8, 8]
    assert (tmp_path / "ring_product.csv").exists()


def test_report_rendering():
    report = Report("demo", "m", 4, summary=["hello"], facts={"exact": True, "upper": None})
    report.add_table("rows", [{"n": 0, "note": "two words"}])
    text = render_text(report)
    assert "  exact: yes" in text
    assert "  upper: -" in text
    assert "[rows]" in text
    records = parse_records(render_records(report))
    assert records[0]["upper"] == "-"
    assert records[1] == {"record": "rows", "n": "0", "note": "two words"}


def test_export_with_empty_table(tmp_path):
    report = Report("demo", "m", 4)
    report.add_table("rows", [])
    (path,) = export_to_csv(report, str(tmp_path / "out.csv"))
    assert path.endswith("out.csv")


def test_parser_defaults():
    args = build_parser().parse_args(["mtc", "x.model"])
    assert args.max_n == 3
    assert args.max_degree == 16
    assert args.format == "text"
    assert args.csv is None


def test_empty_model_is_the_ground_field(tmp_path):
    path = tmp_path / "point.model"
    path.write_text("# no generators\n", encoding="utf-8")
    status, out, _ = _run("cohomology", str(path), "--max-degree", "4")
    assert status == 0
    assert "Betti 1,0,0,0,0" in out
    status, out, _ = _run("mtc", str(path), "--max-degree", "4", "--require-conclusive")
    assert status == 0
    assert "MTC = 0" in out
