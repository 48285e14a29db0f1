# bmpoisson/cli/cmd_tables.py
from __future__ import annotations

import argparse

from . import service_cli as svc
from ._common import add_global_opts, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("tables")
    load_ctx_anchored("tables", args, anchor=None, logger=log)
    report = svc.render_tables(args.which, logger=log)
    emit(report, args)
    return 0


def add_tables_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("tables", help="recompute a table and judge every transcribed cell")
    p.add_argument("which", nargs="?", default=argparse.SUPPRESS,
                   help="2..8, lie, leaf, or all for the complete discrepancy report")
    add_global_opts(p)
    p.set_defaults(handler=_handle)
