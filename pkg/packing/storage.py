"""Packing file storage (canonical JSON, version 1)"""

import json
import os
from typing import Any, Dict

from geometry import PackingFormatError, PreconditionError

from .models import FORMAT_VERSION, Packing

REQUIRED_KEYS = ("version", "capped", "t", "R", "cylinders")


def packing_from_payload(payload: Any) -> Packing:
    if not isinstance(payload, dict):
        raise PackingFormatError("packing file must hold a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in payload]
    if missing:
        raise PackingFormatError(f"missing keys: {', '.join(missing)}")
    if payload["version"] != FORMAT_VERSION:
        raise PackingFormatError(f"unsupported packing version {payload['version']!r}")
    for key in ("capped", "mixed"):
        if key in payload and not isinstance(payload[key], bool):
            raise PackingFormatError(f"'{key}' must be true or false, got {payload[key]!r}")
    cylinders = payload["cylinders"]
    if not isinstance(cylinders, list):
        raise PackingFormatError("'cylinders' must be a list")
    for k, c in enumerate(cylinders):
        if not isinstance(c, dict) or "p0" not in c or "p1" not in c:
            raise PackingFormatError(f"cylinder {k} needs 'p0' and 'p1'")
        for key in ("p0", "p1"):
            value = c[key]
            if not isinstance(value, list) or len(value) != 3:
                raise PackingFormatError(f"cylinder {k}: '{key}' must be a 3-element list")
    try:
        return Packing.from_dict(payload)
    except (PreconditionError, TypeError, ValueError) as exc:
        raise PackingFormatError(str(exc)) from exc


def load_packing(path: str) -> Packing:
    """Read and validate a packing file."""
    if not os.path.exists(path):
        raise PackingFormatError(f"packing file not found: {path}")
    try:
        with open(path, "r") as f:
            payload = json.load(f)
    except json.JSONDecodeError as exc:
        raise PackingFormatError(f"{path}: invalid JSON ({exc})") from exc
    return packing_from_payload(payload)


def dump_packing(p: Packing) -> str:
    return json.dumps(p.to_dict(), indent=2)


def save_packing(p: Packing, path: str) -> Dict[str, Any]:
    """Write the packing and return a small summary of what was written."""
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w") as f:
        f.write(dump_packing(p))
        f.write("\n")
    return {"path": path, "cylinders": p.n, "capped": p.capped, "t": p.t, "R": p.R}
