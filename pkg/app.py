#!/usr/bin/env python3
"""Application entry point."""

import argparse
import logging
import sys
from typing import List, Optional

from commands import (
    EXIT_FORMAT,
    EXIT_GENERATION,
    EXIT_USAGE,
    EXIT_VERIFICATION,
    cmd_bound,
    cmd_pack,
    cmd_slice,
    cmd_table,
    cmd_verify,
    init_slice_command,
    status,
)
from geometry import (
    AngleExceedsAlpha0,
    ConfigError,
    ContainerTooSmall,
    CylpackError,
    PackingFormatError,
    VerificationFailure,
)
from packing import GeneratorFactory
from services.plot_service import PlotService
from services.verify_service import SUITES
from settings import build_config

HANDLERS = {
    "bound": cmd_bound,
    "table": cmd_table,
    "pack": cmd_pack,
    "slice": cmd_slice,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file with run settings")
    common.add_argument("--seed", type=int, help="seed (default: CYLPACK_SEED or 0)")
    common.add_argument("--jobs", type=int, help="worker threads")
    common.add_argument("--format", choices=["json", "csv", "svg"])
    common.add_argument("--area-tol", dest="area_tol", type=float)
    common.add_argument("--membership-tol", dest="membership_tol", type=float)
    common.add_argument("--event-tol", dest="event_tol", type=float)
    common.add_argument("--n-theta", dest="n_theta", type=int)
    common.add_argument("--output-dir", dest="output_dir")
    common.add_argument("--reproducible", action="store_true", default=None,
                        help="omit timestamps and figure annotations")
    common.add_argument("--no-progress", dest="progress", action="store_false", default=None)
    common.add_argument("--verbose", "-v", action="store_true", default=None)

    parser = argparse.ArgumentParser(
        prog="cylpack",
        description="Density bounds and Dirichlet-slice verification for packings of long cylinders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bound = sub.add_parser("bound", parents=[common], help="evaluate a closed-form density bound")
    bound.add_argument("--t", type=float, help="length-to-radius ratio")
    bound.add_argument("--shape", choices=["capped", "uncapped", "mixed"], default="uncapped")
    bound.add_argument("--lengths", help="comma-separated cylinder lengths for --shape mixed")
    bound.add_argument("--variant", choices=["average", "infimum"], default="average")

    table = sub.add_parser("table", parents=[common], help="bounds for the reference items")
    table.add_argument("--extended", action="store_true")

    pack = sub.add_parser("pack", parents=[common], help="generate and save a packing")
    pack.add_argument("generator", choices=GeneratorFactory.supported())
    pack.add_argument("--t", type=float)
    pack.add_argument("--R", type=float)
    pack.add_argument("--eps", type=float, default=0.0, help="laminate perturbation size")
    pack.add_argument("--n", type=int, help="cylinder count for the random generator")
    pack.add_argument("--uncapped", action="store_true", help="flat-ended cylinders")
    pack.add_argument("--out", help="packing file to write")
    pack.add_argument("--validate", action=argparse.BooleanOptionalAction, default=True)

    slc = sub.add_parser("slice", parents=[common], help="compute and draw a Dirichlet slice")
    slc.add_argument("file", help="packing JSON file")
    slc.add_argument("--index", "-i", type=int, default=0)
    slc.add_argument("--s", type=float, default=0.5, help="axis parameter in [0, 1]")
    slc.add_argument("--out", help="SVG path; samples go next to it as .json")

    verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("suite", choices=list(SUITES) + ["all"])
    verify.add_argument("--cases", type=int, help="override the number of random cases")
    verify.add_argument("--samples", type=int, help="Monte Carlo samples for the identity suite")
    verify.add_argument("--witness", help="file for the first failing witness")

    return parser


def _flags(args: argparse.Namespace) -> dict:
    keys = (
        "seed", "jobs", "format", "area_tol", "membership_tol", "event_tol",
        "n_theta", "output_dir", "reproducible", "progress", "verbose",
    )
    return {k: getattr(args, k, None) for k in keys}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = build_config(_flags(args), args.config)
    except ConfigError as exc:
        status(f"❌ {exc}")
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    init_slice_command(PlotService())

    try:
        return HANDLERS[args.command](args, config)
    except (VerificationFailure, AngleExceedsAlpha0) as exc:
        status(f"❌ {exc}")
        return EXIT_VERIFICATION
    except ContainerTooSmall as exc:
        status(f"❌ {exc}")
        return EXIT_GENERATION
    except PackingFormatError as exc:
        status(f"❌ {exc}")
        return EXIT_FORMAT
    except (CylpackError, ValueError) as exc:
        status(f"❌ {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
