#!/usr/bin/env python3
"""
Semilattice Workbench - Entry point
Minimal launcher that parses the command line and runs one verb.
"""

__version__ = "1.0.0"
__license__ = "GPL-3.0"

import argparse
import logging
import sys
from typing import List, Optional

from cli import Workbench, add_subcommands, dispatch
from config import WorkbenchConfig
from core.errors import WorkbenchError
from core.preferences import PreferencesService

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semilattice-workbench",
        description="Finite join-semilattice workbench",
    )
    parser.add_argument("--version", action="version", version=f"Semilattice Workbench {__version__}")
    parser.add_argument("--debug", action="store_true", help="Enable debug output")
    add_subcommands(parser)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    prefs = PreferencesService(WorkbenchConfig())
    debug = args.debug or prefs.get("advanced.enable_debug_logging")
    logging.basicConfig(level=logging.DEBUG if debug else logging.WARNING, format=LOG_FORMAT, force=True)

    try:
        return dispatch(args, Workbench(prefs))
    except WorkbenchError as e:
        witness = f" (witness {e.witness})" if e.witness is not None else ""
        print(f"error: {e}{witness}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
