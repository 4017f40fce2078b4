"""
Subcommand handlers for the command-line front end
"""

import json
import sys
from typing import Any

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_GENERATION = 3
EXIT_FORMAT = 4


def status(message: str) -> None:
    """Human-facing status line; stdout stays reserved for machine output."""
    print(message, file=sys.stderr)


def emit_json(payload: Any, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(payload, indent=2))
    out.write("\n")


from .bound import cmd_bound  # noqa: E402
from .pack import cmd_pack  # noqa: E402
from .slice import cmd_slice, init_slice_command  # noqa: E402
from .table import cmd_table  # noqa: E402
from .verify import cmd_verify  # noqa: E402

__all__ = [
    'EXIT_OK', 'EXIT_VERIFICATION', 'EXIT_USAGE', 'EXIT_GENERATION', 'EXIT_FORMAT',
    'status', 'emit_json',
    'cmd_bound', 'cmd_pack', 'cmd_slice', 'cmd_table', 'cmd_verify', 'init_slice_command',
]
