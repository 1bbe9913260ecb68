"""Implicit and explicit definability, parallel interpolants and theory splittings."""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

from . import decide, limits
from .engines import interpolate
from .errors import NotDefinableError, PreconditionError, ResourceLimitError
from .formula import Atom, Formula, And, conj, fresh_name, iff, implies, rename_fresh, sig
from .qbf import simplify_constants, uniform_keep_qe


def _primed(phi: Formula, sigma: frozenset, p: str):
    if p in sigma:
        raise PreconditionError(f"atom {p!r} must not be in sigma")
    return rename_fresh(phi, sigma, also=(p,), used=sigma)


def _split_models(model: dict, renaming: dict, names) -> tuple[dict, dict]:
    m1 = {a: model.get(a, False) for a in sorted(names)}
    m2 = {a: model.get(renaming.get(a, a), False) for a in sorted(names)}
    return m1, m2


def implicitly_definable(phi: Formula, sigma: Iterable[str], p: str) -> bool:
    """Do any two models of ``phi`` that agree on ``sigma`` agree on ``p``?"""
    sigma = frozenset(sigma)
    primed, ren = _primed(phi, sigma, p)
    return decide.entails(And(phi, primed), iff(Atom(p), Atom(ren[p])))


def explicit_definition(phi: Formula, sigma: Iterable[str], p: str, engine: str = "qe") -> Formula:
    """A formula over ``sigma`` equivalent to ``p`` under ``phi``.

    Computed as an interpolant for ``phi & p |= phi' -> p'`` where ``phi'``
    renames every atom outside ``sigma`` apart.
    """
    sigma = frozenset(sigma)
    primed, ren = _primed(phi, sigma, p)
    goal = iff(Atom(p), Atom(ren[p]))
    cm = decide.countermodel(And(phi, primed), goal)
    if cm is not None:
        m1, m2 = _split_models(cm, ren, sig(phi) | sigma | {p})
        raise NotDefinableError(m1, m2, p)
    return interpolate(And(phi, Atom(p)), implies(primed, Atom(ren[p])), engine)


def interpolant_via_definition(phi: Formula, psi: Formula, engine: str = "qe") -> Formula:
    """Interpolant as a shared-signature definition of ``psi`` under ``psi -> phi``."""
    if engine == "definition":
        raise PreconditionError("the definition route needs a different inner engine")
    decide.require_entailment(phi, psi)
    d = fresh_name("d", sig(phi) | sig(psi))
    theory = And(implies(psi, phi), iff(Atom(d), psi))
    return explicit_definition(theory, sig(phi) & sig(psi), d, engine)


def parallel_interpolants(phis: Sequence[Formula], psi: Formula, engine: str = "qe") -> list[Formula]:
    """``chi_i`` with ``phi_i |= chi_i``, ``sig(chi_i)`` within ``sig(phi_i) & sig(psi)``, and ``/\\ chi_i |= psi``.

    The ``phi_i`` must have pairwise disjoint signatures.  Interpolants are
    computed one at a time, each against the earlier ``chi`` and later ``phi``.
    """
    phis = list(phis)
    for (i, a), (j, b) in combinations(enumerate(phis), 2):
        if sig(a) & sig(b):
            raise PreconditionError(f"formulas {i} and {j} share atoms {sorted(sig(a) & sig(b))}")
    if not decide.entails(conj(phis), psi):
        raise PreconditionError("the conjunction does not entail the right-hand side")
    chis: list[Formula] = []
    for i, f in enumerate(phis):
        rest = conj(chis + phis[i + 1:])
        chis.append(interpolate(f, implies(rest, psi), engine))
    return chis


@dataclass(frozen=True)
class Splitting:
    partition: tuple[frozenset, ...]
    axioms: tuple[Formula, ...]


def _theory(T) -> Formula:
    return T if isinstance(T, Formula) else conj(T)


def _check_partition(T: Formula, partition):
    blocks = [frozenset(b) for b in partition]
    seen: set = set()
    for b in blocks:
        if not b:
            raise PreconditionError("partition has an empty block")
        if b & seen:
            raise PreconditionError("partition blocks overlap")
        seen |= b
    if seen != sig(T):
        raise PreconditionError("partition does not cover exactly the signature of the theory")
    return blocks


def is_splitting(T, partition) -> tuple[bool, list[Formula] | None]:
    """Check a partition by projecting the theory onto every block."""
    theory = _theory(T)
    blocks = _check_partition(theory, partition)
    axioms = [uniform_keep_qe(theory, b) for b in blocks]
    if decide.entails(conj(axioms), theory):
        return True, axioms
    return False, None


def _order(blocks):
    return sorted(blocks, key=lambda b: sorted(b))


def finest_splitting(T) -> Splitting:
    """Unique finest splitting, by greedy bipartition of blocks until none splits."""
    theory = _theory(T)
    names = sig(theory)
    if len(names) > limits.current().oracle_atoms:
        raise ResourceLimitError(f"splitting search limited to {limits.current().oracle_atoms} atoms")
    if not names:
        return Splitting((frozenset(),), (simplify_constants(theory),))
    blocks = [frozenset(names)]
    changed = True
    while changed:
        changed = False
        for k, b in enumerate(blocks):
            if len(b) < 2:
                continue
            members = sorted(b)
            first, rest = members[0], members[1:]
            for r in range(0, len(rest)):
                for extra in combinations(rest, r):
                    b1 = frozenset((first,) + extra)
                    trial = blocks[:k] + [b1, b - b1] + blocks[k + 1:]
                    if is_splitting(theory, trial)[0]:
                        blocks = _order(trial)
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    ok, axioms = is_splitting(theory, blocks)
    assert ok
    return Splitting(tuple(blocks), tuple(axioms))
