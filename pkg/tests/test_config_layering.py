# tests/test_config_layering.py
from pathlib import Path
import argparse

import pytest

import bmpoisson.cli.config_cli as cfg
from bmpoisson.errors import ConfigError


class _DummyFiles:
    def __init__(self, text: str):
        self._text = text

    def joinpath(self, name: str):
        return self

    def read_text(self, encoding: str = "utf-8") -> str:
        return self._text


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


@pytest.fixture
def isolated_home(tmp_path, monkeypatch):
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.delenv("XDG_CONFIG_HOME", raising=False)
    monkeypatch.delenv(cfg.CONFIG_ENV, raising=False)
    return home


def test_layering_packaged_user_project(tmp_path, monkeypatch):
    packaged = """
[defaults]
seed = 1
format = "text"
[glue]
h = 1e-4
r0 = 0.5
"""
    monkeypatch.setattr(cfg.ir, "files", lambda pkg: _DummyFiles(packaged))

    xdg_home = tmp_path / "xdg"
    monkeypatch.setenv("XDG_CONFIG_HOME", str(xdg_home))
    monkeypatch.delenv(cfg.CONFIG_ENV, raising=False)
    _write(
        xdg_home / "bmpoisson" / "config.toml",
        """
[defaults]
format = "json"      # overrides packaged default
[glue]
r0 = 0.4             # overrides packaged [glue].r0
""",
    )

    proj = tmp_path / "proj"
    local_cfg = _write(
        proj / ".bmpoisson" / "config.toml",
        """
[glue]
r0 = 0.3             # overrides the user-level value
""",
    )

    ctx = cfg.load_layered_config(start=proj)
    eff = cfg.effective_section(ctx, "glue")

    assert eff["r0"] == 0.3
    assert eff["format"] == "json"
    assert eff["h"] == 1e-4
    assert eff["seed"] == 1
    assert ctx.source_path == local_cfg
    assert ctx.anchor == proj.resolve()


def test_apply_config_fills_namespace_from_yaml_user_config(tmp_path, monkeypatch, isolated_home):
    packaged = """
[defaults]
format = "text"
[trace]
step = 0.001
n_steps = 10
"""
    monkeypatch.setattr(cfg.ir, "files", lambda pkg: _DummyFiles(packaged))
    _write(
        isolated_home / ".config" / "bmpoisson" / "config.yaml",
        """
defaults:
  format: csv
trace:
  n_steps: "25"
  hamiltonians: x3
""",
    )
    proj = tmp_path / "proj2"
    proj.mkdir()

    ns = argparse.Namespace(step=0.5)
    ctx = cfg.load_layered_config(start=proj)
    cfg.apply_effective_to_args("trace", ctx, ns)

    assert ns.step == 0.5
    assert ns.n_steps == 25
    assert ns.hamiltonians == ["x3"]
    assert ns.format == "csv"
    assert ctx.source_path is None


def test_packaged_defaults_cover_every_command(tmp_path, isolated_home):
    proj = tmp_path / "empty"
    proj.mkdir()
    ctx = cfg.load_layered_config(start=proj)
    eff = cfg.effective_config(ctx)

    assert set(eff) == set(cfg.SECTIONS)
    assert eff["verify"]["seed"] == 20240601
    assert eff["verify"]["grid"] == "-1:1:21"
    assert eff["glue"]["kappa"] == "2 + x1^2"
    assert eff["trace"]["hamiltonians"] == ["x3"]
    assert eff["cohomology"]["degrees"] == [0, 1, 2, 3]
    assert eff["fr"]["c2"] == "t"


def test_malformed_project_toml_raises_config_error(tmp_path, isolated_home):
    proj = tmp_path / "bad"
    _write(proj / ".bmpoisson" / "config.toml", "[glue\nr0 = ")
    with pytest.raises(ConfigError, match="malformed TOML"):
        cfg.load_layered_config(start=proj)


def test_non_table_top_level_key_raises_config_error(tmp_path, isolated_home):
    proj = tmp_path / "flat"
    _write(proj / ".bmpoisson" / "config.toml", 'seed = 3\n')
    with pytest.raises(ConfigError, match="section table"):
        cfg.load_layered_config(start=proj)


def test_bad_value_type_raises_config_error(tmp_path, isolated_home):
    proj = tmp_path / "typo"
    _write(proj / ".bmpoisson" / "config.toml", '[verify]\nsamples = "many"\n')
    ctx = cfg.load_layered_config(start=proj)
    with pytest.raises(ConfigError, match="bad config value"):
        cfg.effective_section(ctx, "verify")


def test_debug_report_lists_effective_sections(tmp_path, isolated_home):
    proj = tmp_path / "dbg"
    _write(proj / ".bmpoisson" / "config.yaml", "glue:\n  eps: 0.2\n")
    ctx = cfg.load_layered_config(start=proj)
    text = cfg.render_config_debug_report(ctx)

    assert text.startswith("=== bmpoisson CONFIG DEBUG REPORT ===")
    assert "project_config_found" in text
    assert "eps=0.2" in text
