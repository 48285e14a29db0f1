# bmpoisson/cli/cmd_trace.py
from __future__ import annotations

import argparse
from pathlib import Path

from ..storage import emit_report
from . import service_cli as svc
from ._cli_utils import emptyish, parse_point, require_arg
from ._common import add_global_opts, add_opt_k, add_opt_model, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("trace")
    load_ctx_anchored("trace", args, anchor=None, logger=log)
    start = parse_point(require_arg(args, "start", "--start", "trace"))
    out = getattr(args, "out", None)
    if emptyish(out):
        out = Path(f"leaf-{args.model}.csv")
    result = svc.trace_to_csv(
        args.model,
        hamiltonians=list(args.hamiltonians),
        start=start,
        step=float(args.step),
        n_steps=int(args.n_steps),
        out=Path(out),
        k=getattr(args, "k", "1"),
        logger=log,
    )
    # --out names the CSV; the summary goes to stdout
    emit_report(result, getattr(args, "format", None))
    return 0


def add_trace_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("trace", help="integrate Hamiltonian flows along a leaf and write a CSV")
    add_opt_model(p)
    p.add_argument("--h", dest="hamiltonians", action="append", default=argparse.SUPPRESS,
                   help="Hamiltonian polynomial; repeat to concatenate flows (default: x3)")
    p.add_argument("--start", default=argparse.SUPPRESS, help="start point x1,x2,x3,t")
    p.add_argument("--step", type=float, default=argparse.SUPPRESS, help="RK4 step")
    p.add_argument("--n", dest="n_steps", type=int, default=argparse.SUPPRESS, help="steps per Hamiltonian")
    add_opt_k(p)
    add_global_opts(p, out_help="CSV path (default: leaf-<model>.csv); a .json sidecar is written next to it")
    p.set_defaults(handler=_handle)
