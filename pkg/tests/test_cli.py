# tests/test_cli.py
import json

import pytest

from bmpoisson.cli.main import main
from bmpoisson.storage import read_leaf_csv


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    home = tmp_path / "home"
    home.mkdir()
    work = tmp_path / "work"
    work.mkdir()
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.delenv("XDG_CONFIG_HOME", raising=False)
    monkeypatch.delenv("BMPOISSON_CONFIG", raising=False)
    monkeypatch.chdir(work)
    return work


def test_model_json(capsys):
    assert main(["model", "c0-i0", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["id"] == "c0-i0"
    assert data["lie_class"] == "so3"
    assert data["casimirs"][0] == "1*x1^2 + 1*x2^2 + 1*x3^2"


def test_unknown_model_is_usage_error():
    assert main(["model", "zz-i9"]) == 2


def test_bad_format_choice_is_usage_error():
    assert main(["model", "c0-i0", "--format", "xml"]) == 2


def test_trace_writes_csv_and_sidecar(isolated, capsys):
    out = isolated / "leaf.csv"
    code = main(["trace", "c0-i0", "--start", "1,0,0,0", "--step", "0.01", "--n", "20", "--out", str(out)])
    assert code == 0
    points = read_leaf_csv(out)
    assert len(points) == 21
    assert points[0] == (1.0, 0.0, 0.0, 0.0)
    side = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
    assert side["model"] == "c0-i0"
    assert side["n_steps"] == 20
    assert "leaf trace" in capsys.readouterr().out


def test_trace_from_singular_point_fails():
    assert main(["trace", "c0-i0", "--start", "0,0,0,0", "--n", "5"]) == 1


def test_trace_malformed_start():
    assert main(["trace", "c0-i0", "--start", "1,0,0", "--n", "5"]) == 2


def test_fr_uses_configured_second_casimir(capsys):
    assert main(["fr", "--c1", "x1^2 + x2^2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["casimirs"] == ["1*x1^2 + 1*x2^2", "1*t"]
    assert data["is_poisson"] is True
    assert data["annihilates_casimirs"] == [True, True]


def test_tables_exit_zero_when_cells_match():
    assert main(["tables", "2"]) == 0


def test_config_json_shows_effective_sections(capsys):
    assert main(["config", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["effective"]["trace"]["n_steps"] == 6284
    assert data["project_config"] is None


def test_verify_single_suite(capsys):
    assert main(["verify", "lie"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("OK")


def test_cohomology_json(capsys):
    assert main(["cohomology", "c0-i0", "--degrees", "0", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["model"] == "c0-i0"
    assert data["grid"][0]["degree"] == 0
    assert data["grid"][0]["dims"] == [1, 0, 0, 1]


def test_tables_all_json_covers_every_table(capsys):
    assert main(["tables", "all", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    entries = data["discrepancies"]
    locations = [e["location"] for e in entries]
    assert len(set(locations)) == len(locations)
    for n in range(2, 9):
        assert any(loc.startswith(f"table {n} /") for loc in locations), n
    assert any(loc.startswith("lie list") for loc in locations)
    assert any(loc.startswith("leaf form /") for loc in locations)
    assert {e["verdict"] for e in entries} <= {"matches", "proportional", "mismatch", "ambiguous"}
    assert any(loc.endswith("/ Lie algebra") for loc in locations)


def test_unexpected_handler_error_is_logged_and_exits_one(monkeypatch, caplog):
    import logging

    import bmpoisson.cli.service_cli as svc

    def broken(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(svc, "describe_model", broken)
    logger = logging.getLogger("bmpoisson")
    logger.addHandler(caplog.handler)
    try:
        assert main(["model", "c0-i0"]) == 1
    finally:
        logger.removeHandler(caplog.handler)
    errors = [r for r in caplog.records if r.levelno == logging.ERROR]
    assert any("RuntimeError: boom" in r.getMessage() for r in errors)
