# tests/test_config_discovery_and_layering.py
from __future__ import annotations
from pathlib import Path
import textwrap

import bmpoisson.cli.config_cli as cfg


# -------- Helpers --------


def _write(p: Path, s: str) -> Path:
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(textwrap.dedent(s).strip() + "\n", encoding="utf-8")
    return p


def _touch(p: Path) -> Path:
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text("# dummy\n", encoding="utf-8")
    return p


# -------- User/local discovery --------


def test_find_user_config_precedence(tmp_path, monkeypatch):
    """
    _find_user_config must prefer:
      BMPOISSON_CONFIG > XDG_CONFIG_HOME > ~/.config > ~/.bmpoisson
    """
    home = tmp_path / "home"
    home.mkdir()
    xdg = tmp_path / "xdg"
    xdg.mkdir()
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.setenv("XDG_CONFIG_HOME", str(xdg))
    monkeypatch.delenv("BMPOISSON_CONFIG", raising=False)

    legacy = _touch(home / ".bmpoisson" / "config.toml")
    assert cfg._find_user_config() == legacy

    home_cfg = _touch(home / ".config" / "bmpoisson" / "config.toml")
    assert cfg._find_user_config() == home_cfg

    xdg_cfg = _touch(xdg / "bmpoisson" / "config.toml")
    assert cfg._find_user_config() == xdg_cfg

    explicit = _touch(tmp_path / "elsewhere" / "mycfg.toml")
    monkeypatch.setenv("BMPOISSON_CONFIG", str(explicit))
    assert cfg._find_user_config() == explicit


def test_missing_env_path_falls_through(tmp_path, monkeypatch):
    home = tmp_path / "home"
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.delenv("XDG_CONFIG_HOME", raising=False)
    monkeypatch.setenv("BMPOISSON_CONFIG", str(tmp_path / "nope.toml"))
    home_cfg = _touch(home / ".config" / "bmpoisson" / "config.yml")
    assert cfg._find_user_config() == home_cfg


def test_find_project_config_walks_up(tmp_path):
    parent = tmp_path / "parent"
    proj = parent / "proj"
    deep = proj / "a" / "b"
    nearest = _touch(proj / ".bmpoisson" / "config.toml")
    _touch(parent / ".bmpoisson" / "config.toml")
    deep.mkdir(parents=True, exist_ok=True)

    assert cfg._find_project_config(deep) == nearest


def test_project_config_prefers_toml_over_yaml(tmp_path):
    proj = tmp_path / "proj"
    toml_cfg = _touch(proj / ".bmpoisson" / "config.toml")
    _touch(proj / ".bmpoisson" / "config.yaml")
    assert cfg._find_project_config(proj) == toml_cfg


# -------- Anchor and layers --------


def test_without_project_config_only_packaged_layer(tmp_path, monkeypatch):
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.delenv("XDG_CONFIG_HOME", raising=False)
    monkeypatch.delenv("BMPOISSON_CONFIG", raising=False)

    repo = tmp_path / "repo"
    (repo / ".git").mkdir(parents=True)
    _touch(repo / "pyproject.toml")
    work = repo / "src" / "pkg"
    work.mkdir(parents=True)

    ctx = cfg.load_layered_config(start=work)
    assert ctx.source_path is None
    assert ctx.user_path is None
    assert ctx.anchor == work.resolve()
    assert [layer.name for layer in ctx.layers] == ["packaged"]
    assert any(e["kind"] == "project_config_not_found" for e in ctx.debug)


def test_layers_are_recorded_in_merge_order(tmp_path, monkeypatch):
    home = tmp_path / "home"
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.delenv("XDG_CONFIG_HOME", raising=False)
    monkeypatch.delenv("BMPOISSON_CONFIG", raising=False)
    user_cfg = _write(home / ".bmpoisson" / "config.toml", "[defaults]\nseed = 3\n")
    proj = tmp_path / "proj"
    proj_cfg = _write(proj / ".bmpoisson" / "config.toml", "[defaults]\nseed = 4\n")
    sub = proj / "sub"
    sub.mkdir()

    ctx = cfg.load_layered_config(start=sub)
    assert [layer.name for layer in ctx.layers] == ["packaged", "user", "project"]
    assert ctx.user_path == user_cfg
    assert ctx.source_path == proj_cfg
    assert ctx.anchor == sub.resolve()
    assert cfg.effective_section(ctx, "model")["seed"] == 4

    report = cfg.render_config_debug_report(ctx)
    assert "packaged <- user" in report
    assert f"anchor       : {sub.resolve()}" in report


def test_user_then_project_yaml_layering(tmp_path, monkeypatch):
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.delenv("XDG_CONFIG_HOME", raising=False)
    monkeypatch.delenv("BMPOISSON_CONFIG", raising=False)
    _write(
        home / ".bmpoisson" / "config.toml",
        """
        [defaults]
        seed = 7
        [cohomology]
        degrees = [0, 1]
        """,
    )
    proj = tmp_path / "proj"
    _write(
        proj / ".bmpoisson" / "config.yaml",
        """
        cohomology:
          degrees: 2
        """,
    )

    ctx = cfg.load_layered_config(start=proj)
    eff = cfg.effective_section(ctx, "cohomology")
    assert eff["degrees"] == [2]
    assert eff["seed"] == 7
    assert ctx.user_path == home / ".bmpoisson" / "config.toml"
