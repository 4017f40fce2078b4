from argparse import Namespace

from bounds import (
    capped_bound,
    conjectured_density,
    mixed_length_bound_from_lengths,
    rule_of_thumb,
    uncapped_bound,
)
from geometry import DomainError
from settings import RunConfig

from . import EXIT_OK, emit_json


def _parse_lengths(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise DomainError(f"--lengths must be a comma-separated list of numbers, got {text!r}") from exc


def cmd_bound(args: Namespace, config: RunConfig) -> int:
    """Evaluate one closed-form bound and print it as JSON."""
    if args.shape == "mixed":
        if not args.lengths:
            raise DomainError("--shape mixed needs --lengths")
        result = mixed_length_bound_from_lengths(_parse_lengths(args.lengths), args.variant)
    else:
        if args.t is None:
            raise DomainError("--t is required")
        fn = capped_bound if args.shape == "capped" else uncapped_bound
        result = fn(args.t)

    emit_json({
        "t": result.t,
        "shape": result.shape,
        "bound": result.bound,
        "trivial": result.trivial,
        "rule_of_thumb": rule_of_thumb(result.t),
        "conjectured": conjectured_density(result.t),
        "formula_id": result.formula_id,
        "raw": result.raw,
    })
    return EXIT_OK
