# bmpoisson/cli/cmd_verify.py
from __future__ import annotations

import argparse

from ..suites import SuiteOptions, suite_names
from . import service_cli as svc
from ._common import add_global_opts, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("verify")
    load_ctx_anchored("verify", args, anchor=None, logger=log)
    opts = SuiteOptions(
        seed=int(args.seed),
        samples=int(args.samples),
        triples=int(args.triples),
        grid=str(args.grid),
        h=float(args.h),
        exclude=float(args.exclude),
    )
    report = svc.run_verify(args.suite, opts=opts, logger=log)
    emit(report, args)
    return 0 if report.ok else 1


def add_verify_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("verify", help="run the property suites; exit 1 on any failed check")
    p.add_argument("suite", nargs="?", default=argparse.SUPPRESS,
                   help=f"suite to run: {', '.join(suite_names())} (default: all)")
    p.add_argument("--samples", type=int, default=argparse.SUPPRESS, help="random points per model")
    p.add_argument("--triples", type=int, default=argparse.SUPPRESS, help="random multivector triples")
    p.add_argument("--grid", default=argparse.SUPPRESS,
                   help="glue grid 'lo:hi:n' (write --grid=-1:1:21 for negative bounds)")
    p.add_argument("--h", dest="h", type=float, default=argparse.SUPPRESS, help="finite-difference step")
    p.add_argument("--exclude", type=float, default=argparse.SUPPRESS,
                   help="radius around the singular set left out of the Jacobiator check")
    add_global_opts(p)
    p.set_defaults(handler=_handle)
