"""Size guards for exhaustive searches."""

from __future__ import annotations

import os

ENV_VAR = "CONDORCET_LAB_GUARD"
DEFAULT_GUARD = 10**6


class GuardExceeded(RuntimeError):
    """An exact search was refused because its input is too large."""


def guard_limit(override: int | None = None) -> int:
    """The active guard: explicit override, then the environment, then the default."""
    if override is not None:
        return override
    raw = os.environ.get(ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    return DEFAULT_GUARD


def check_guard(size: int, what: str, override: int | None = None) -> None:
    limit = guard_limit(override)
    if size > limit:
        raise GuardExceeded(f"{what}: search space {size} exceeds guard {limit}")
