"""Resource guards.

Defaults can be overridden per call site with :func:`limits`::

    with limits(oracle_atoms=24):
        ...

The oracle cap also honours the ``INTERP_ORACLE_LIMIT`` environment
variable, read when no explicit override is active.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os

from .errors import ResourceLimitError


@dataclasses.dataclass(frozen=True)
class Limits:
    oracle_atoms: int = 20
    clauses: int = 1_000_000
    resolvents: int = 100_000
    tableau_nodes: int = 100_000
    expansion_nodes: int = 1_000_000


_override: contextvars.ContextVar[Limits | None] = contextvars.ContextVar("propinterp_limits", default=None)


def current() -> Limits:
    lim = _override.get()
    if lim is not None:
        return lim
    env = os.environ.get("INTERP_ORACLE_LIMIT")
    if env:
        try:
            return Limits(oracle_atoms=int(env))
        except ValueError:
            raise ResourceLimitError(f"INTERP_ORACLE_LIMIT is not an integer: {env!r}") from None
    return Limits()


@contextlib.contextmanager
def limits(**overrides):
    lim = dataclasses.replace(current(), **overrides)
    token = _override.set(lim)
    try:
        yield lim
    finally:
        _override.reset(token)
