"""Uniform entry points that dispatch on the interpolation method."""
from __future__ import annotations

from collections.abc import Iterable

from .errors import NotEntailedError, PreconditionError, SatisfiableError
from .formula import Formula, Not, nnf
from .normal_forms import cnf_to_formula

INTERPOLANT_METHODS = ("qe", "dnf", "resolution", "resolution-mcmillan", "tableau", "definition")
UNIFORM_METHODS = ("qe", "dnf", "resolution")


def _check(method, allowed):
    if method not in allowed:
        raise PreconditionError(f"unknown method {method!r}; choose from {', '.join(allowed)}")


def separate(phi: Formula, psi: Formula, method: str = "qe") -> Formula:
    """Craig separator for unsatisfiable ``phi & psi``."""
    _check(method, INTERPOLANT_METHODS)
    if method == "dnf":
        from .dnf import separator_dnf
        return separator_dnf(phi, psi)
    if method in ("resolution", "resolution-mcmillan"):
        from .resolution import separator_resolution
        return separator_resolution(phi, psi, "mcmillan" if method.endswith("mcmillan") else "huang")
    if method == "tableau":
        from .tableau import separator_tableau
        return separator_tableau(phi, psi)
    try:
        return interpolate(phi, nnf(Not(psi)), method)
    except NotEntailedError as e:
        raise SatisfiableError(e.model) from None


def interpolate(phi: Formula, psi: Formula, method: str = "qe") -> Formula:
    """Craig interpolant for ``phi |= psi`` computed by ``method``."""
    _check(method, INTERPOLANT_METHODS)
    if method == "qe":
        from .qbf import strongest_interpolant
        return strongest_interpolant(phi, psi)
    if method == "definition":
        from .definability import interpolant_via_definition
        return interpolant_via_definition(phi, psi)
    try:
        return separate(phi, nnf(Not(psi)), method)
    except SatisfiableError as e:
        raise NotEntailedError(e.model) from None


def uniform(phi: Formula, keep: Iterable[str], method: str = "qe") -> Formula:
    """Uniform interpolant of ``phi`` over the kept atoms."""
    _check(method, UNIFORM_METHODS)
    keep = frozenset(keep)
    if method == "qe":
        from .qbf import uniform_keep_qe
        return uniform_keep_qe(phi, keep)
    if method == "dnf":
        from .dnf import uniform_dnf
        return uniform_dnf(phi, keep)
    from .resolution import uniform_resolution
    return cnf_to_formula(uniform_resolution(phi, keep))
