import json
import os
from argparse import Namespace

from services.verify_service import IDENTITY_SAMPLES, VerifyService
from settings import RunConfig

from . import EXIT_OK, EXIT_VERIFICATION, emit_json, status


def cmd_verify(args: Namespace, config: RunConfig) -> int:
    service = VerifyService(
        seed=config.seed,
        jobs=config.jobs,
        cases=args.cases,
        progress=config.show_progress,
        slice_settings=config.slice_settings(),
        identity_samples=args.samples or IDENTITY_SAMPLES,
    )
    status(f"🚀 Running verify {args.suite} (seed {config.seed}, jobs {config.jobs})")
    report = service.run(args.suite)

    for check in report.checks:
        mark = "✅" if check.passed else "❌"
        status(f"{mark} {check.name}: margin {check.margin:.3e} over {check.cases} case(s)")

    emit_json(report.to_dict(timestamps=not config.reproducible))

    if report.passed:
        status(f"✅ {len(report.checks)} checks passed")
        return EXIT_OK

    if args.witness:
        folder = os.path.dirname(args.witness)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(args.witness, "w") as f:
            json.dump({"check": report.failures[0].name, "witness": report.witness}, f, indent=2)
        status(f"💾 Saved failing witness to {args.witness}")
    status(f"❌ {len(report.failures)} of {len(report.checks)} checks failed")
    return EXIT_VERIFICATION
