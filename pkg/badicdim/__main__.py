"""
BadicDim - finite-scale Assouad and lower dimensions on b-adic cube trees

Copyright (C) 2026  The BadicDim developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with this program. If not, see <https://www.gnu.org/licenses/>.
"""

import argparse
import logging
import sys
from logging.handlers import RotatingFileHandler
from os import path
from typing import List, Optional

from badicdim import __version__
from badicdim.components.commands import EstimateCommand, ExtractCommand, GenCommand, InfoCommand, VerifyCommand
from badicdim.components.config_handler import get_project_dir
from badicdim.components.definitions import LOGGER_NAME, FAMILIES, FAMILY_ALIASES, REPORT_KINDS
from badicdim.components.errors import BadicError, SetFileError
from badicdim.components.helpers import to_fraction

logger = logging.getLogger(LOGGER_NAME)

VERIFY_CHECKS = ["h-star", "packing-sandwich", "prune-bound", "ball-cube", "random-prune", "lemma21"]


def setup_logging():
    logger.setLevel('INFO')
    if any(isinstance(handler, RotatingFileHandler) for handler in logger.handlers):
        return
    if (project_dir := get_project_dir()) is not None:
        file_handler = RotatingFileHandler(path.join(project_dir, "badicdim.log"),
                                           maxBytes=2000000,
                                           backupCount=3,
                                           errors='replace')
        file_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
        logger.addHandler(file_handler)


def _fraction(text: str):
    try:
        return to_fraction(text)
    except BadicError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="badicdim",
                                     description="Finite-scale Assouad and lower dimensions of b-adic cube trees")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True)

    gen = verbs.add_parser("gen", help="generate a set from a known family")
    gen.add_argument("family", choices=FAMILIES + list(FAMILY_ALIASES))
    gen.add_argument("--base", type=int, default=2)
    gen.add_argument("--dim", type=int, default=1)
    gen.add_argument("--depth", type=int, default=8)
    gen.add_argument("--digits", help="allowed digits, e.g. 0,2 (or 00,22 for d=2)")
    gen.add_argument("--lattice-digits", help="allowed base-M digits of the integer windows")
    gen.add_argument("--side-exp", type=int, default=6, help="window side exponent m")
    gen.add_argument("--resolution", type=int, default=4, help="levels below the unit scale")
    gen.add_argument("--windows", type=int, default=1)
    gen.add_argument("--count", type=int, default=64, help="K for one-over-k")
    gen.add_argument("--max-children", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")

    estimate = verbs.add_parser("estimate", help="finite-scale dimension report")
    estimate.add_argument("--in", dest="in_path", required=True)
    estimate.add_argument("--kind", choices=REPORT_KINDS)
    estimate.add_argument("--k-max", type=int)
    estimate.add_argument("--workers", type=int)
    estimate.add_argument("--decimals", type=int)
    estimate.add_argument("--report")

    extract = verbs.add_parser("extract", help="extract a subset with a prescribed dimension")
    targets = extract.add_subparsers(dest="target", required=True)
    for name in ("assouad", "assouad-global"):
        sub = targets.add_parser(name)
        sub.add_argument("--alpha", type=_fraction, required=True)
        sub.add_argument("--eps", type=_fraction, required=True)
        sub.add_argument("--M", type=int, required=True)
        sub.add_argument("--strategy", help="greedy or random:<seed>")
        sub.add_argument("--cap", type=int, help="override the branching cap N")
        sub.add_argument("--strict", action="store_true", help="raise on unmet large-M conditions")
        sub.add_argument("--in", dest="in_path", required=True)
        sub.add_argument("--out")
        sub.add_argument("--trace")
        if name == "assouad":
            sub.add_argument("--stages", type=int)
        else:
            sub.add_argument("--offset-bits", type=int)
    ladder = targets.add_parser("ladder")
    ladder.add_argument("--alpha", type=_fraction, required=True)
    ladder.add_argument("--levels", type=int, default=2)
    ladder.add_argument("--M", type=int, required=True)
    ladder.add_argument("--strategy")
    ladder.add_argument("--in", dest="in_path", required=True)
    ladder.add_argument("--out-a")
    ladder.add_argument("--out-b")
    ladder.add_argument("--trace")
    lower = targets.add_parser("lower")
    lower.add_argument("--alpha", type=_fraction, required=True, help="rational p/q")
    lower.add_argument("--M", type=int, required=True)
    lower.add_argument("--depth", type=int, required=True)
    lower.add_argument("--r0", type=_fraction, default=1)
    lower.add_argument("--eps", type=_fraction, default=0, help="margin in the admissibility condition")
    lower.add_argument("--strict", action="store_true", help="raise on unmet admissibility conditions")
    lower.add_argument("--samples", type=int)
    lower.add_argument("--in", dest="in_path", required=True)
    lower.add_argument("--out")
    lower.add_argument("--report")

    verify = verbs.add_parser("verify", help="run a property check, exit 1 on any violation")
    verify.add_argument("check", choices=VERIFY_CHECKS)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trees", type=int)
    verify.add_argument("--samples", type=int)
    verify.add_argument("--runs", type=int)
    verify.add_argument("--report")

    info = verbs.add_parser("info", help="header, leaf count and per-level counts")
    info.add_argument("--in", dest="in_path", required=True)
    return parser


COMMANDS = {"gen": GenCommand, "estimate": EstimateCommand, "extract": ExtractCommand,
            "verify": VerifyCommand, "info": InfoCommand}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    setup_logging()
    command = COMMANDS[args.verb](args)
    try:
        return command.run()
    except SetFileError as e:
        logger.error(f"{command.command_name}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        logger.error(f"{command.command_name}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BadicError as e:
        logger.error(f"{command.command_name}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        logger.critical(f"Unexpected failure in {command.command_name}: {repr(e)}", exc_info=True)
        print(f"error: {repr(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
