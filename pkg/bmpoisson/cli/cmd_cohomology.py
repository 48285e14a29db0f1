# bmpoisson/cli/cmd_cohomology.py
from __future__ import annotations

import argparse

from . import service_cli as svc
from ._cli_utils import parse_int_list
from ._common import add_global_opts, add_opt_model, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("cohomology")
    load_ctx_anchored("cohomology", args, anchor=None, logger=log)
    report = svc.cohomology_report(args.model, degrees=parse_int_list(args.degrees), logger=log)
    emit(report, args)
    return 0


def add_cohomology_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("cohomology", help="Poisson cohomology dimensions of a model's linear normal form")
    add_opt_model(p)
    p.add_argument("--degrees", default=argparse.SUPPRESS,
                   help="comma-separated coefficient degrees (default: 0,1,2,3)")
    add_global_opts(p)
    p.set_defaults(handler=_handle)
