"""Interpolation on disjunctive normal forms by dropping literals."""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .errors import NotEntailedError, PreconditionError, SatisfiableError
from .formula import Formula, Not, disj, nnf, sig
from .normal_forms import (
    Literal, clauses_sig, dnf_to_formula, is_tautological, sorted_clauses, sorted_literals, to_dnf,
)


def _check_clean(ds, what="formula"):
    for d in ds:
        if is_tautological(d):
            raise PreconditionError(f"{what} has a conjunctive clause with complementary literals")


def drop_atoms_dnf(ds, keep: Iterable[str]) -> frozenset:
    """Keep only literals over ``keep`` in every conjunctive clause.

    The result is equivalent to existentially quantifying the other atoms.
    """
    keep = frozenset(keep)
    _check_clean(ds)
    extra = keep - clauses_sig(ds)
    if extra:
        raise PreconditionError(f"kept atoms {sorted(extra)} do not occur in the formula")
    return frozenset(frozenset(l for l in d if l.atom in keep) for d in ds)


def uniform_dnf(phi: Formula, keep: Iterable[str]) -> Formula:
    keep = frozenset(keep)
    extra = keep - sig(phi)
    if extra:
        raise PreconditionError(f"kept atoms {sorted(extra)} do not occur in the formula")
    ds = to_dnf(phi)
    return dnf_to_formula(frozenset(frozenset(l for l in d if l.atom in keep) for d in ds))


@dataclass(frozen=True)
class PairChoice:
    left: int  # index into the sorted left clauses
    right: int
    literal: Literal  # the left literal; the right one is its complement


def choose_pairs(left, right) -> tuple[list, list, list[PairChoice]]:
    """One complementary pair per clause pair, smallest (atom, left sign) first."""
    _check_clean(left, "left formula")
    _check_clean(right, "right formula")
    lc, rc = sorted_clauses(left), sorted_clauses(right)
    pairs = []
    for i, d in enumerate(lc):
        for j, e in enumerate(rc):
            hits = [l for l in sorted_literals(d) if l.complement() in e]
            if not hits:
                model = {l.atom: l.positive for l in d | e}
                names = sorted(clauses_sig(left) | clauses_sig(right))
                raise SatisfiableError({a: model.get(a, False) for a in names},
                                       witness=(d, e))
            # sorted_literals orders by (atom, negative), so positive comes first
            pairs.append(PairChoice(i, j, hits[0]))
    return lc, rc, pairs


def dnf_separator(left, right, pairs: Iterable[PairChoice] | None = None) -> Formula:
    """Craig-Lyndon separator from a complementary-pair collection.

    For every left clause, the left literals chosen for it are conjoined; the
    result is the disjunction of these conjunctions.  ``pairs`` may be given
    explicitly (indices refer to the sorted clause order).
    """
    lc, rc, chosen = choose_pairs(left, right)
    if pairs is not None:
        chosen = list(pairs)
        for pc in chosen:
            if pc.literal not in lc[pc.left] or pc.literal.complement() not in rc[pc.right]:
                raise PreconditionError(f"pair {pc} is not complementary")
        if {(pc.left, pc.right) for pc in chosen} != {(i, j) for i in range(len(lc)) for j in range(len(rc))}:
            raise PreconditionError("need exactly one pair per clause pair")
    per_clause: dict[int, set] = {i: set() for i in range(len(lc))}
    for pc in chosen:
        per_clause[pc.left].add(pc.literal)
    return dnf_to_formula(frozenset(frozenset(v) for v in per_clause.values()))


def separator_dnf(phi: Formula, psi: Formula) -> Formula:
    return dnf_separator(to_dnf(phi), to_dnf(psi))


def interpolant_dnf(phi: Formula, psi: Formula) -> Formula:
    try:
        return dnf_separator(to_dnf(phi), to_dnf(nnf(Not(psi))))
    except SatisfiableError as e:
        raise NotEntailedError(e.model) from None


def literal_disjunction(lits) -> Formula:
    return disj(l.to_formula() for l in sorted_literals(lits))
