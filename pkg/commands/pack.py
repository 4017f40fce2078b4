import os
from argparse import Namespace

from geometry import PreconditionError, VerificationFailure
from packing import BOUND_PARAMS, GeneratorFactory, density, is_valid_packing, save_packing
from settings import RunConfig

from . import EXIT_OK, emit_json, status

DEFAULT_T = 20.0
DEFAULT_R = 40.0


def _params(args: Namespace, config: RunConfig) -> dict:
    params = {
        "t": args.t,
        "R": args.R,
        "capped": not args.uncapped,
        "seed": args.seed if args.seed is not None else config.seed,
    }
    if args.generator != "random":
        params["t"] = DEFAULT_T if args.t is None else args.t
        params["R"] = DEFAULT_R if args.R is None else args.R
    if args.generator == "laminate":
        params["eps"] = args.eps
    if args.generator == "random" and args.n is not None:
        params["n"] = args.n
    return params


def _default_path(generator, config: RunConfig) -> str:
    return os.path.join(config.output_dir, f"{generator.generator_name}_t{generator.t:g}_R{generator.R:g}.json")


def cmd_pack(args: Namespace, config: RunConfig) -> int:
    """Generate a packing, optionally validate it, save it and print its densities."""
    generator = GeneratorFactory.create(args.generator, **_params(args, config))
    shape = "capped" if generator.capped else "uncapped"
    if shape not in generator.supported_shapes:
        raise PreconditionError(f"{generator.generator_name} generator does not build {shape} packings")
    status(f"🚀 Generating {generator.generator_name} packing (t={generator.t:g}, R={generator.R:g})")
    p = generator.generate()

    report = None
    if args.validate:
        report = is_valid_packing(p)
        if not report:
            raise VerificationFailure(
                f"generated packing overlaps or leaves the container "
                f"({len(report.overlapping)} pairs, {len(report.uncontained)} cylinders)",
                witness=report.to_dict(),
            )

    path = args.out or _default_path(generator, config)
    summary = save_packing(p, path)
    status(f"💾 Saved {p.n} cylinders to {path}")

    inner = p.R - BOUND_PARAMS.r_hex
    summary.update({
        "generator": generator.describe(),
        "valid": None if report is None else report.valid,
        "density": density(p, p.R, p.R),
        "density_inner": density(p, inner, p.R) if inner > 0.0 else None,
    })
    emit_json(summary)
    status(f"✅ density {summary['density']:.6f}")
    return EXIT_OK
