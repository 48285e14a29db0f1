# bmpoisson/cli/cmd_fr.py
from __future__ import annotations

import argparse

from . import service_cli as svc
from ._cli_utils import require_arg
from ._common import add_global_opts, add_opt_k, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("fr")
    load_ctx_anchored("fr", args, anchor=None, logger=log)
    doc = svc.fr_bivector(
        require_arg(args, "c1", "--c1", "fr"),
        require_arg(args, "c2", "--c2", "fr"),
        k=getattr(args, "k", "1"),
        logger=log,
    )
    emit(doc, args)
    return 0


def add_fr_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("fr", help="determinant bivector built from two Casimirs")
    p.add_argument("--c1", default=argparse.SUPPRESS, help="first Casimir, e.g. 'x1^2 + x2^2'")
    p.add_argument("--c2", default=argparse.SUPPRESS, help="second Casimir (default from config)")
    add_opt_k(p)
    add_global_opts(p)
    p.set_defaults(handler=_handle)
