# tests/test_storage.py
import io
import json

import pytest

from bmpoisson.errors import StorageError, UsageError
from bmpoisson.poly import parse_polynomial
from bmpoisson.storage import (
    dumps_csv,
    dumps_json,
    emit_report,
    get_encoding,
    read_leaf_csv,
    sidecar_path,
    write_leaf_csv,
)


class _Report:
    def to_json(self):
        return {"casimir": parse_polynomial("x1^2 + x2^2"), "h": (1, 0)}

    def to_rows(self):
        return [["model", "h0"], ["c0-i0", 1], ["c1-i0", None]]

    def to_text(self):
        return "two rows"


def test_emit_report_to_stream_in_each_format():
    buf = io.StringIO()
    text = emit_report(_Report(), "json", stream=buf)
    assert json.loads(buf.getvalue()) == {"casimir": "1*x1^2 + 1*x2^2", "h": [1, 0]}
    assert text == buf.getvalue().rstrip("\n")

    buf = io.StringIO()
    emit_report(_Report(), "csv", stream=buf)
    assert buf.getvalue() == "model,h0\nc0-i0,1\nc1-i0,\n"

    buf = io.StringIO()
    emit_report(_Report(), None, stream=buf)
    assert buf.getvalue() == "two rows\n"


def test_emit_report_to_file(tmp_path):
    out = tmp_path / "nested" / "report.json"
    emit_report(_Report(), "json", out)
    assert json.loads(out.read_text(encoding="utf-8"))["h"] == [1, 0]


def test_unknown_format_is_a_usage_error():
    with pytest.raises(UsageError, match="Unknown output format"):
        get_encoding("xml")


def test_json_is_sorted_and_nan_becomes_null():
    assert dumps_json({"b": 1, "a": float("nan")}).splitlines()[1] == '  "a": null,'
    assert dumps_csv([["a", "b"], [1, None]]) == "a,b\n1,\n"


def test_leaf_csv_with_sidecar(tmp_path):
    path = tmp_path / "leaf.csv"
    points = [(1.0, 0.0, 0.0, 0.5), (0.1, 0.995, 0.0, 0.5)]
    side = write_leaf_csv(path, points, {"model": "c0-i0", "hamiltonians": ["x3"]})
    assert side == sidecar_path(path) == tmp_path / "leaf.json"
    assert path.read_text(encoding="utf-8").splitlines()[0] == "x1,x2,x3,t"
    assert read_leaf_csv(path) == points
    assert json.loads(side.read_text(encoding="utf-8"))["model"] == "c0-i0"


def test_leaf_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c,d\n1,2,3,4\n", encoding="utf-8")
    with pytest.raises(StorageError, match="unexpected header"):
        read_leaf_csv(path)
