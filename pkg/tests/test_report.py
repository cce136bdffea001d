import csv

from bdlogic.bridge import compare_semantics
from bdlogic.report import TSV_HEADER, write_report


def test_report_files(tmp_path):
    rep = compare_semantics("dunn", "four", 2)
    paths = write_report(rep, tmp_path)
    assert paths["tsv"].name == "compare_dunn_four.tsv"
    rows = list(csv.reader(paths["tsv"].open(), delimiter="\t"))
    assert tuple(rows[0]) == TSV_HEADER
    assert len(rows) - 1 == len(rep.rows)
    assert {r[4] for r in rows[1:]} <= {"hard", "tie"}
    assert paths["summary"].read_text().startswith("compare dunn vs four")
    assert paths["chart"].read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_is_byte_identical(tmp_path):
    rep = compare_semantics("bdi3", "dn3+i3", 2)
    a = write_report(rep, tmp_path / "a")
    b = write_report(compare_semantics("bdi3", "dn3+i3", 2), tmp_path / "b")
    for key in ("tsv", "summary", "chart"):
        assert a[key].read_bytes() == b[key].read_bytes()
    assert a["tsv"].name == "compare_bdi3_dn3pi3.tsv"
