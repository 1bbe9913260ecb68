"""Seeded random instances for tests and benchmarks."""
from __future__ import annotations

import random
from collections.abc import Sequence

from .formula import BOT, TOP, And, Atom, Formula, Not, Or, implies, literal, nnf, sig
from .normal_forms import Literal


def atom_names(n: int, prefix: str = "p") -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def random_formula(rng: random.Random, names: Sequence[str], depth: int = 4,
                   derived: bool = True, constants: bool = False) -> Formula:
    """Random formula of depth at most ``depth`` over ``names``."""
    if depth <= 0 or rng.random() < 0.25:
        if constants and rng.random() < 0.05:
            return rng.choice((TOP, BOT))
        a = Atom(rng.choice(names))
        return Not(a) if rng.random() < 0.4 else a
    r = rng.random()
    if r < 0.15:
        return Not(random_formula(rng, names, depth - 1, derived, constants))
    a = random_formula(rng, names, depth - 1, derived, constants)
    b = random_formula(rng, names, depth - 1, derived, constants)
    if derived and r > 0.85:
        # -> and <-> expand into the core connectives, so they cost a level
        return implies(a, b) if r < 0.95 or depth < 2 else Or(And(a, b), And(Not(a), Not(b)))
    return And(a, b) if r < 0.5 else Or(a, b)


def random_clause(rng: random.Random, names: Sequence[str], width: int) -> frozenset:
    chosen = rng.sample(list(names), min(width, len(names)))
    return frozenset(Literal(a, rng.random() < 0.5) for a in chosen)


def random_cnf(rng: random.Random, names: Sequence[str], n_clauses: int, max_width: int = 3) -> frozenset:
    return frozenset(random_clause(rng, names, rng.randint(1, max_width)) for _ in range(n_clauses))


def _split_atoms(rng: random.Random, n_atoms: int):
    names = atom_names(n_atoms)
    rng.shuffle(names)
    k = rng.randint(1, max(1, min(4, n_atoms - 2)))
    shared, rest = names[:k], names[k:]
    cut = rng.randint(0, len(rest))
    return sorted(shared), sorted(rest[:cut]), sorted(rest[cut:])


def entailment_pair(rng: random.Random, n_atoms: int = 8, depth: int = 5) -> tuple[Formula, Formula]:
    """A pair with ``phi |= psi`` by construction, at most four shared atoms.

    Either ``phi = chi & alpha`` and ``psi = chi | beta`` for a random
    ``chi`` over the shared atoms, or ``psi`` weakens a projection of
    ``phi`` onto the shared atoms (computed with truth tables).
    """
    shared, left, right = _split_atoms(rng, n_atoms)
    if rng.random() < 0.5:
        chi = random_formula(rng, shared, depth - 1)
        alpha = random_formula(rng, shared + left or shared, depth - 1)
        beta = random_formula(rng, shared + right or shared, depth - 1)
        return And(chi, alpha), Or(chi, beta)
    from .oracle import projection
    phi = random_formula(rng, shared + left or shared, depth)
    keep = sorted(sig(phi) & set(shared))
    proj = projection(phi, keep).to_formula()
    beta = random_formula(rng, shared + right or shared, max(1, depth - 2))
    return phi, Or(proj, beta)


def unsat_pair(rng: random.Random, n_atoms: int = 8, depth: int = 5) -> tuple[Formula, Formula]:
    """An NNF pair whose conjunction is unsatisfiable."""
    phi, psi = entailment_pair(rng, n_atoms, depth)
    return nnf(phi), nnf(Not(psi))


def random_dnf(rng: random.Random, names: Sequence[str], n_terms: int, max_width: int = 3) -> frozenset:
    return frozenset(random_clause(rng, names, rng.randint(1, max_width)) for _ in range(n_terms))


def random_theory(rng: random.Random, n_atoms: int = 5) -> list[Formula]:
    """A small theory that often splits: independent chunks over disjoint atoms."""
    names = atom_names(n_atoms, "a")
    rng.shuffle(names)
    chunks, i = [], 0
    while i < len(names):
        size = rng.randint(1, 3)
        chunks.append(names[i:i + size])
        i += size
    out = []
    for chunk in chunks:
        f = random_formula(rng, chunk, 3)
        out.append(f)
    if rng.random() < 0.3 and len(names) >= 2:
        a, b = rng.sample(names, 2)
        out.append(Or(literal(a, rng.random() < 0.5), literal(b, rng.random() < 0.5)))
    return out
