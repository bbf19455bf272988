"""Numerical Finsler geometry: metrics, Cartan connection, flag curvature."""

import json

from ._finsler import (
    FinslerError,
    Structure,
    acceptance,
    builtin,
    builtin_spec,
    builtins,
    cli,
    constancy_scan,
)
from ._finsler import instantiate as _instantiate


def instantiate(spec):
    """Build a structure from a spec given as a dict or a JSON string."""
    if not isinstance(spec, str):
        spec = json.dumps(spec)
    return _instantiate(spec)


__all__ = [
    "FinslerError",
    "Structure",
    "acceptance",
    "builtin",
    "builtin_spec",
    "builtins",
    "cli",
    "constancy_scan",
    "instantiate",
]
