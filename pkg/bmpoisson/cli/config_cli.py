# bmpoisson/cli/config_cli.py
"""
Layered configuration for the command line.

Three layers are merged, later ones winning key by key:

    packaged   bmpoisson/default_config.toml
    user       $BMPOISSON_CONFIG, $XDG_CONFIG_HOME/bmpoisson, ~/.config/bmpoisson, ~/.bmpoisson
    project    nearest .bmpoisson/config.{toml,yaml,yml} above the anchor directory

Every file holds one table per command plus ``[defaults]``; a command sees its
own table merged over ``[defaults]`` with known keys coerced to stable types.
Flags typed on the command line are never overwritten.
"""
from __future__ import annotations

import hashlib
import importlib.resources as ir
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional

from ..errors import ConfigError

_log = logging.getLogger("bmpoisson.cli.config")

CONFIG_DIRNAME = ".bmpoisson"
CONFIG_ENV = "BMPOISSON_CONFIG"
DEBUG_ENV = "BMPOISSON_DEBUG_CONFIG"
SECTIONS = ("defaults", "model", "verify", "tables", "trace", "glue", "cohomology", "fr")
_FILENAMES = ("config.toml", "config.yaml", "config.yml")
_PACKAGED = "bmpoisson/default_config.toml"


def debug_requested() -> bool:
    return os.getenv(DEBUG_ENV, "").strip().lower() in ("1", "true", "yes", "on")


# ---------- discovery trace ----------


class _Trace:
    """Structured discovery events, rendered by ``bmpoisson config`` and under BMPOISSON_DEBUG_CONFIG."""

    def __init__(self) -> None:
        self.events: List[Dict[str, Any]] = []

    def note(self, kind: str, **details: Any) -> None:
        self.events.append({"kind": kind, **details})


_NULL_TRACE = _Trace()


# ---------- layers and context ----------


@dataclass(frozen=True)
class ConfigLayer:
    name: str                  # "packaged", "user" or "project"
    path: Optional[Path]       # None for the packaged defaults
    data: Mapping[str, Any]


@dataclass(frozen=True)
class ConfigContext:
    raw: Dict[str, Any]                      # merged sections
    anchor: Path                             # directory the project search started from
    layers: tuple[ConfigLayer, ...] = ()
    debug: List[Dict[str, Any]] = field(default_factory=list)

    def _layer_path(self, name: str) -> Optional[Path]:
        return next((layer.path for layer in self.layers if layer.name == name), None)

    @property
    def user_path(self) -> Optional[Path]:
        return self._layer_path("user")

    @property
    def source_path(self) -> Optional[Path]:
        """Project-level config file, if one was found."""
        return self._layer_path("project")


# ---------- file discovery ----------


def _first_file(base: Path) -> Optional[Path]:
    return next((base / n for n in _FILENAMES if (base / n).is_file()), None)


def _find_project_config(start: Path, trace: _Trace = _NULL_TRACE) -> Optional[Path]:
    """Nearest ``.bmpoisson/config.*`` at or above *start*; TOML wins over YAML in one directory."""
    here = start.resolve()
    trace.note("project_search_start", start=str(here))
    for directory in (here, *here.parents):
        found = _first_file(directory / CONFIG_DIRNAME)
        if found:
            trace.note("project_config_found", path=str(found))
            _log.info("project config: %s", found)
            return found
    trace.note("project_config_not_found")
    return None


def _user_config_dirs() -> List[Path]:
    dirs = []
    xdg = os.getenv("XDG_CONFIG_HOME")
    if xdg:
        dirs.append(Path(xdg) / "bmpoisson")
    dirs.append(Path.home() / ".config" / "bmpoisson")
    dirs.append(Path.home() / CONFIG_DIRNAME)
    return dirs


def _find_user_config(trace: _Trace = _NULL_TRACE) -> Optional[Path]:
    """``$BMPOISSON_CONFIG`` when it names an existing file, else the first user directory holding a config."""
    explicit = os.getenv(CONFIG_ENV)
    if explicit:
        path = Path(explicit).expanduser()
        trace.note("user_env_candidate", value=explicit, exists=path.is_file())
        if path.is_file():
            _log.info("user config via %s=%s", CONFIG_ENV, path)
            return path
    for directory in _user_config_dirs():
        found = _first_file(directory)
        trace.note("user_dir_checked", dir=str(directory), found=str(found) if found else None)
        if found:
            _log.info("user config: %s", found)
            return found
    trace.note("user_config_not_found")
    return None


# ---------- parsing ----------


def _parse_toml(text: str, origin: str) -> Dict[str, Any]:
    try:
        import tomllib as toml_lib  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as toml_lib
    try:
        return toml_lib.loads(text)
    except toml_lib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML in {origin}: {exc}") from exc


def _parse_yaml(text: str, origin: str) -> Dict[str, Any]:
    import yaml

    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {origin}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"YAML root of {origin} is not a mapping")
    return data


_PARSERS: Dict[str, Callable[[str, str], Dict[str, Any]]] = {
    ".toml": _parse_toml,
    ".yaml": _parse_yaml,
    ".yml": _parse_yaml,
}


def _read_layer(name: str, path: Path, trace: _Trace) -> ConfigLayer:
    parser = _PARSERS.get(path.suffix.lower())
    if parser is None:
        raise ConfigError(f"unknown config extension {path.suffix!r} for {path}")
    try:
        blob = path.read_bytes()
        text = blob.decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    trace.note("config_read", layer=name, path=str(path), size=len(blob), sha256=hashlib.sha256(blob).hexdigest())
    data = parser(text, str(path))
    bad = [k for k, v in data.items() if not isinstance(v, dict)]
    if bad:
        raise ConfigError(f"{path}: top-level key {bad[0]!r} must be a section table")
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        _log.warning("%s: ignoring unknown sections %s", path, unknown)
    return ConfigLayer(name, path, data)


# ---------- merging & coercion ----------


def _merge(under: Mapping[str, Any], over: Mapping[str, Any]) -> Dict[str, Any]:
    out = dict(under)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _int_list(v: Any) -> List[int]:
    return [int(v)] if isinstance(v, (int, str)) else [int(x) for x in v]


def _str_list(v: Any) -> List[str]:
    return [v] if isinstance(v, str) else [str(x) for x in v]


# polynomial-valued keys (k, k_s, kappa, c1, c2) stay text for the polynomial parser
_COERCE: Dict[str, Callable[[Any], Any]] = {
    **dict.fromkeys(("seed", "samples", "triples", "n_steps"), int),
    **dict.fromkeys(("h", "step", "r0", "r1", "eps", "exclude", "tol"), float),
    **dict.fromkeys(("grid", "k", "k_s", "kappa", "c1", "c2", "format", "which", "suite", "model"), str),
    "degrees": _int_list,
    "hamiltonians": _str_list,
    "out": lambda v: Path(v).expanduser(),
}


def _coerce(section: Mapping[str, Any]) -> Dict[str, Any]:
    out = dict(section)
    for key, value in section.items():
        convert = _COERCE.get(key)
        if convert is None or value is None:
            continue
        try:
            out[key] = convert(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config value for {key!r}: {value!r} ({exc})") from exc
    return out


def _is_emptyish(v: Any) -> bool:
    return v is None or (isinstance(v, (str, list, dict)) and len(v) == 0)


# ---------- public API ----------


def load_layered_config(start: Optional[Path] = None) -> ConfigContext:
    """
    Merge packaged, user and project configuration.

    ``start=None`` anchors the project search on the process CWD. A file that
    exists but does not parse raises :class:`~bmpoisson.errors.ConfigError`.
    """
    trace = _Trace()
    text = ir.files("bmpoisson").joinpath("default_config.toml").read_text(encoding="utf-8")
    layers = [ConfigLayer("packaged", None, _parse_toml(text, _PACKAGED))]
    trace.note("packaged_defaults", path=_PACKAGED, size=len(text))

    user = _find_user_config(trace)
    if user:
        layers.append(_read_layer("user", user, trace))

    anchor = Path.cwd().resolve() if start is None else Path(start).resolve()
    project = _find_project_config(anchor, trace)
    if project:
        layers.append(_read_layer("project", project, trace))

    raw: Dict[str, Any] = {}
    for layer in layers:
        raw = _merge(raw, layer.data)
        trace.note("layer_merged", layer=layer.name, sections=sorted(layer.data))
    return ConfigContext(raw=raw, anchor=anchor, layers=tuple(layers), debug=trace.events)


def effective_section(ctx: ConfigContext, section: str) -> Dict[str, Any]:
    merged = _merge(ctx.raw.get("defaults") or {}, ctx.raw.get(section) or {})
    eff = _coerce(merged)
    _log.debug("effective config for [%s]: %s", section, eff or "{}")
    return eff


def apply_effective_to_args(section: str, ctx: ConfigContext, args) -> None:
    """Fill argparse fields the user did not type (absent or emptyish) from the effective section."""
    box = vars(args)
    for key, value in effective_section(ctx, section).items():
        if key not in box or _is_emptyish(box[key]):
            box[key] = value
            _log.debug("  -> filled '%s' from config: %r", key, value)


def effective_config(ctx: ConfigContext) -> Dict[str, Dict[str, Any]]:
    """Every known section merged over ``[defaults]``, as commands see them."""
    return {sec: effective_section(ctx, sec) for sec in SECTIONS}


def render_config_debug_report(ctx: ConfigContext) -> str:
    """Layers, discovery events and the effective sections."""
    lines = [
        "=== bmpoisson CONFIG DEBUG REPORT ===",
        f"anchor       : {ctx.anchor}",
        f"user_config  : {ctx.user_path or '<none>'}",
        f"config_source: {ctx.source_path or '<none>'}",
        "",
        "Layers (later wins): " + " <- ".join(
            layer.name if layer.path is None else f"{layer.name} ({layer.path})" for layer in ctx.layers
        ),
        "Events:",
    ]
    for event in ctx.debug:
        details = {k: v for k, v in event.items() if k != "kind"}
        lines.append(f"- {event['kind']}")
        lines.extend(f"    {k}: {details[k]}" for k in sorted(details))
    lines.append("")
    for sec, eff in effective_config(ctx).items():
        body = ", ".join(f"{k}={eff[k]!r}" for k in sorted(eff)) if eff else "<empty>"
        lines.append(f"Effective [{sec}]: {body}")
    return "\n".join(lines)
