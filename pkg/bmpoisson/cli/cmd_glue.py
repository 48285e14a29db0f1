# bmpoisson/cli/cmd_glue.py
from __future__ import annotations

import argparse

from ..suites import GLUE_JACOBIATOR_TOL
from . import service_cli as svc
from ._common import add_global_opts, add_opt_k, add_opt_model, emit, load_ctx_anchored, make_logger


def _handle(args: argparse.Namespace) -> int:
    log = make_logger("glue")
    load_ctx_anchored("glue", args, anchor=None, logger=log)
    outcome = svc.glue_diagnostics(
        args.model,
        grid=str(args.grid),
        h=float(args.h),
        r0=float(args.r0),
        r1=float(args.r1),
        eps=float(args.eps),
        k_s=args.k_s,
        kappa=args.kappa,
        exclude=float(args.exclude),
        tolerance=float(getattr(args, "tol", GLUE_JACOBIATOR_TOL)),
        logger=log,
    )
    emit(outcome, args)
    if not outcome.ok:
        log.error("glued structure fails the Jacobi identity: %.3e", outcome.report.max_jacobiator)
        return 1
    return 0


def add_glue_subparser(subparsers: argparse._SubParsersAction) -> None:
    p = subparsers.add_parser("glue", help="glue a local model into a regular structure and check it on a grid")
    add_opt_model(p, optional=True)
    p.add_argument("--grid", default=argparse.SUPPRESS,
                   help="'lo:hi:n' per axis or four comma-separated specs (write --grid=-1:1:21)")
    p.add_argument("--h", dest="h", type=float, default=argparse.SUPPRESS, help="finite-difference step")
    p.add_argument("--r0", type=float, default=argparse.SUPPRESS, help="inner tube radius")
    p.add_argument("--r1", type=float, default=argparse.SUPPRESS, help="outer tube radius")
    p.add_argument("--eps", type=float, default=argparse.SUPPRESS, help="tube overlap margin")
    add_opt_k(p, dest="k_s", flag="--k-s", what="factor of the singular part")
    add_opt_k(p, dest="kappa", flag="--kappa", what="factor of the regular part")
    p.add_argument("--exclude", type=float, default=argparse.SUPPRESS,
                   help="radius around the singular set left out of the Jacobiator check")
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="Jacobiator tolerance (default 1e-6)")
    add_global_opts(p)
    p.set_defaults(handler=_handle)
