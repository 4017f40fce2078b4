import json
import os
from argparse import Namespace

import numpy as np

from dirichlet import Slicer, has_end_near, slice_export, truncate_rearrange
from geometry import AngleExceedsAlpha0, PreconditionError
from packing import BOUND_PARAMS, load_packing
from services.plot_service import PlotService
from settings import RunConfig

from . import EXIT_OK, emit_json, status

plot_service: PlotService  # injected by init_slice_command


def init_slice_command(service: PlotService) -> None:
    global plot_service
    plot_service = service


def _samples_path(svg_path: str) -> str:
    stem, _ = os.path.splitext(svg_path)
    return stem + ".json"


def cmd_slice(args: Namespace, config: RunConfig) -> int:
    """Slice cylinder ``index`` at axis parameter ``s``; write SVG and sample JSON."""
    p = load_packing(args.file)
    if not 0 <= args.index < p.n:
        raise PreconditionError(f"cylinder index {args.index} out of range [0, {p.n})")
    if not 0.0 <= args.s <= 1.0:
        raise PreconditionError(f"axis parameter s must lie in [0, 1], got {args.s}")

    x = p.p0[args.index] + args.s * (p.p1[args.index] - p.p0[args.index])
    settings = config.slice_settings()
    s = Slicer(p, settings).compute(args.index, x)
    hex_area = BOUND_PARAMS.hex_area
    qualified = bool(s.area - hex_area > settings.area_tol * hex_area)
    end_near = has_end_near(p, x)

    rearrangement = None
    protected = p.capped and not end_near and float(np.linalg.norm(x)) <= p.R - BOUND_PARAMS.r_hex
    if protected:
        try:
            rearrangement = truncate_rearrange(s, settings.contact_tol, settings.event_tol, settings.area_tol).to_dict()
        except AngleExceedsAlpha0 as exc:
            status(f"❌ {exc}")
            raise

    out = args.out or os.path.join(config.output_dir, f"slice_{args.index}_{args.s:g}.svg")
    samples = _samples_path(out)
    folder = os.path.dirname(samples)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(samples, "w") as f:
        json.dump(slice_export(s), f, indent=2)
        f.write("\n")
    svg = plot_service.write_svg(s, out, reproducible=config.reproducible)
    if svg:
        status(f"💾 Saved slice figure to {svg}")
    else:
        status("⚠️ SVG export unavailable; wrote samples only")

    emit_json({
        "owner": args.index,
        "x": x.tolist(),
        "area": s.area,
        "qualified": qualified,
        "has_end_near": end_near,
        "contains_unit_disc": s.contains_unit_disc,
        "events": len(s.events),
        "rearrangement": rearrangement,
        "svg": svg,
        "samples": samples,
    })
    return EXIT_OK
