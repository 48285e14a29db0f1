# bmpoisson/cli/_common.py
from __future__ import annotations
import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from ..logconf import configure_logger
from ..storage import emit_report
from ..typing_defs import Reportable
from .config_cli import effective_section
from ._cli_utils import load_ctx_and_fill

FORMAT_CHOICES = ("json", "csv", "text")


def make_logger(cmd: str) -> logging.Logger:
    return configure_logger(name=f"bmpoisson.cli.{cmd}")


def load_ctx_anchored(section: str, args: argparse.Namespace, anchor: Path | str | None, logger=None):
    return load_ctx_and_fill(section, args, lambda _a: anchor, logger)


def eff(ctx, section: str) -> Dict[str, Any]:
    return effective_section(ctx, section) or {}


def emit(report: Reportable, args: argparse.Namespace) -> str:
    """Write *report* in ``args.format`` to ``args.out`` or stdout."""
    return emit_report(report, getattr(args, "format", None), getattr(args, "out", None))


def add_opt_format(p: argparse.ArgumentParser):
    return p.add_argument("--format", choices=FORMAT_CHOICES, default=argparse.SUPPRESS,
                          help="output encoding (default from config: text)")


def add_opt_out(p: argparse.ArgumentParser, *, help: str = "write the report to this file instead of stdout"):
    return p.add_argument("-o", "--out", type=Path, default=argparse.SUPPRESS, help=help)


def add_opt_seed(p: argparse.ArgumentParser):
    return p.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                          help="seed of randomized checks (printed in the report header)")


def add_global_opts(p: argparse.ArgumentParser, *, out_help: str | None = None):
    """``--seed``, ``--out`` and ``--format``, accepted by every subcommand."""
    add_opt_seed(p)
    if out_help:
        add_opt_out(p, help=out_help)
    else:
        add_opt_out(p)
    add_opt_format(p)


def add_opt_k(p: argparse.ArgumentParser, *, dest: str = "k", flag: str = "--k", what: str = "conformal factor k"):
    return p.add_argument(flag, dest=dest, default=argparse.SUPPRESS,
                          help=f"{what}, a nonvanishing polynomial such as '2 + x1^2'")


def add_opt_model(p: argparse.ArgumentParser, *, optional: bool = False):
    if optional:
        return p.add_argument("model", nargs="?", default=argparse.SUPPRESS,
                              help="model id such as c0-i0 (default from config)")
    return p.add_argument("model", help="model id such as c0-i0, s1-i1")
