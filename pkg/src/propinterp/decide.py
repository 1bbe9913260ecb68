"""Entailment and satisfiability at any scale.

Small signatures go to the truth-table oracle; larger ones to resolution on
a Tseitin encoding.
"""
from __future__ import annotations

from . import limits, oracle
from .errors import NotEntailedError
from .formula import And, Formula, Not, sig


def find_model(phi: Formula) -> dict[str, bool] | None:
    if len(sig(phi)) <= limits.current().oracle_atoms:
        return oracle.find_model(phi)
    from .normal_forms import tseitin_cnf
    from .resolution import SatWitness, refute
    clauses, _ = tseitin_cnf(phi)
    res = refute(clauses)
    if isinstance(res, SatWitness):
        names = sig(phi)
        return {a: res.model.get(a, False) for a in sorted(names)}
    return None


def countermodel(phi: Formula, psi: Formula) -> dict[str, bool] | None:
    if len(sig(phi) | sig(psi)) <= limits.current().oracle_atoms:
        return oracle.countermodel(phi, psi)
    return find_model(And(phi, Not(psi)))


def entails(phi: Formula, psi: Formula) -> bool:
    return countermodel(phi, psi) is None


def require_entailment(phi: Formula, psi: Formula):
    m = countermodel(phi, psi)
    if m is not None:
        raise NotEntailedError(m)
