"""Size guards shared by generators and exponential solvers.

``MINSAT_SIZE_GUARD`` overrides them: ``off`` (or ``0``) disables every guard,
an integer N allows generated instances of up to N points.
"""

from __future__ import annotations

import os


class SizeGuardError(ValueError):
    """Refusal to build or solve an instance above a configured size."""


def _env() -> str | None:
    v = os.environ.get("MINSAT_SIZE_GUARD")
    return v.strip().lower() if v else None


def guards_off() -> bool:
    return _env() in ("off", "0", "false", "no", "none")


def limit(name: str, default: float) -> float:
    return float("inf") if guards_off() else default


def check_generated(points: int, default_ok: bool, what: str, override: bool = False) -> None:
    """Raise unless the generator parameters are within the default guard or overridden."""
    if default_ok or override or guards_off():
        return
    v = _env()
    if v is not None and v.isdigit() and points <= int(v):
        return
    raise SizeGuardError(
        f"{what} would have {points} points; pass override=True or set MINSAT_SIZE_GUARD"
    )
