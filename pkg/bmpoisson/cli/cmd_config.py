# bmpoisson/cli/cmd_config.py
from __future__ import annotations

import argparse

from . import service_cli as svc
from ._common import add_global_opts, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("config")
    ctx = load_ctx_anchored("defaults", args, anchor=None)
    emit(svc.config_dump(ctx), args)
    log.debug("config source: %s", ctx.source_path or "<none>")
    return 0


def add_config_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("config", help="show the layered configuration and how it was found")
    add_global_opts(p)
    p.set_defaults(handler=_handle)
