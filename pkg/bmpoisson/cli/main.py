# bmpoisson/cli/main.py
from __future__ import annotations

import argparse
from typing import Optional, Sequence

from ..errors import BMPoissonError, UsageError
from ..logconf import configure_logger
from .cmd_cohomology import add_cohomology_subparser
from .cmd_config import add_config_subparser
from .cmd_fr import add_fr_subparser
from .cmd_glue import add_glue_subparser
from .cmd_model import add_model_subparser
from .cmd_tables import add_tables_subparser
from .cmd_trace import add_trace_subparser
from .cmd_verify import add_verify_subparser

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmpoisson",
        description="Poisson structures on Bott-Morse foliations: local models, checks and tables.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    add_model_subparser(subparsers)
    add_verify_subparser(subparsers)
    add_tables_subparser(subparsers)
    add_trace_subparser(subparsers)
    add_glue_subparser(subparsers)
    add_cohomology_subparser(subparsers)
    add_fr_subparser(subparsers)
    add_config_subparser(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Exit codes: 0 pass, 1 domain failure or unexpected error, 2 usage error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return int(args.handler(args) or EXIT_OK)
    except UsageError as exc:
        configure_logger(name="bmpoisson").error("%s", exc)
        return EXIT_USAGE
    except BMPoissonError as exc:
        configure_logger(name="bmpoisson").error("%s", exc)
        return EXIT_FAILURE
    except Exception as exc:
        log = configure_logger(name="bmpoisson")
        log.error("unexpected %s: %s", type(exc).__name__, exc)
        log.debug("traceback", exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
