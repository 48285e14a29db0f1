from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence

from ..errors import UsageError
from .config_cli import (
    apply_effective_to_args,
    debug_requested,
    load_layered_config,
    render_config_debug_report,
)

__all__ = [
    "emptyish",
    "load_ctx_and_fill",
    "parse_point",
    "parse_int_list",
    "require_arg",
]


def emptyish(x) -> bool:
    """None, '', [], {} -> True (for CLI args and config values)."""
    return x is None or (isinstance(x, (str, list, dict)) and len(x) == 0)


def require_arg(args, name: str, flag: str, section: str) -> Any:
    """Return ``args.<name>`` or raise a usage error naming the flag and config key."""
    value = getattr(args, name, None)
    if emptyish(value):
        raise UsageError(f"missing {flag} (or [{section}].{name} in config)")
    return value


def parse_point(text: "str | Sequence[float]", *, dim: int = 4) -> tuple[float, ...]:
    """``"1,0,0,0"`` -> ``(1.0, 0.0, 0.0, 0.0)``; sequences pass through."""
    if isinstance(text, str):
        parts = [p for p in text.replace(" ", "").split(",") if p]
    else:
        parts = list(text)
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"malformed point {text!r}: {exc}") from exc
    if len(values) != dim:
        raise UsageError(f"a point has {dim} coordinates, got {len(values)} in {text!r}")
    return values


def parse_int_list(values: "str | int | Sequence[Any]") -> List[int]:
    """``"0,1,2"``, ``[0, 1]`` or ``2`` -> list of ints."""
    if isinstance(values, int):
        return [values]
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"expected a list of integers, got {values!r}") from exc


def load_ctx_and_fill(
    section: str,
    args,
    start_getter: Callable[[object], Optional[Path]],
    logger: Optional[logging.Logger] = None,
):
    start = start_getter(args)
    ctx = load_layered_config(start=start)
    apply_effective_to_args(section, ctx, args)
    if debug_requested() and logger is not None:
        logger.info("\n%s", render_config_debug_report(ctx))
    return ctx
