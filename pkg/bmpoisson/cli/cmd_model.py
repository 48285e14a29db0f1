# bmpoisson/cli/cmd_model.py
from __future__ import annotations

import argparse

from . import service_cli as svc
from ._common import add_global_opts, add_opt_k, add_opt_model, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("model")
    load_ctx_anchored("model", args, anchor=None, logger=log)
    doc = svc.describe_model(args.model, k=getattr(args, "k", "1"), logger=log)
    emit(doc, args)
    return 0


def add_model_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("model", help="dump a local model: Casimirs, bivectors, Lie class")
    add_opt_model(p)
    add_opt_k(p)
    add_global_opts(p)
    p.set_defaults(handler=_handle)
