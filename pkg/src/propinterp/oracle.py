"""Brute-force semantic ground truth.

A truth table over ``atoms`` is stored as a Python int of ``2**n`` bits: bit
``i`` holds the value under the ``i``-th valuation, valuations ordered
lexicographically over ``atoms`` with 0 < 1 (the first atom is the most
significant position).  Connectives become word-parallel bit operations, so a
20-atom table is a handful of big-int operations per formula node.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from collections.abc import Iterable, Sequence

from . import limits
from .errors import NotEntailedError, PreconditionError, ResourceLimitError
from .formula import (
    Atom, Bottom, Formula, Not, And, Or, Top, fresh_name, polarity_sig,
    postorder, rename, sig,
)

MAX_ENUM_SHARED = 4


@dataclass(frozen=True)
class TruthTable:
    atoms: tuple[str, ...]
    bits: int

    @property
    def rows(self) -> int:
        return 1 << len(self.atoms)

    def __str__(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.rows))

    def _same(self, other):
        if self.atoms != other.atoms:
            raise PreconditionError("truth tables over different atom orders")

    def __and__(self, other):
        self._same(other)
        return TruthTable(self.atoms, self.bits & other.bits)

    def __or__(self, other):
        self._same(other)
        return TruthTable(self.atoms, self.bits | other.bits)

    def __invert__(self):
        return TruthTable(self.atoms, ~self.bits & _full(len(self.atoms)))

    def entails(self, other) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def row(self, i: int) -> dict[str, bool]:
        n = len(self.atoms)
        return {a: bool((i >> (n - 1 - k)) & 1) for k, a in enumerate(self.atoms)}

    def models(self) -> Iterable[dict[str, bool]]:
        for i in range(self.rows):
            if (self.bits >> i) & 1:
                yield self.row(i)

    def to_formula(self) -> Formula:
        """Canonical DNF over ``atoms`` (one minterm per true row)."""
        from .formula import conj, disj, literal
        return disj(conj(literal(a, v) for a, v in m.items()) for m in self.models())


@functools.lru_cache(maxsize=64)
def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


@functools.lru_cache(maxsize=1024)
def _column(n: int, k: int) -> int:
    stride = 1 << (n - 1 - k)
    block = ((1 << stride) - 1) << stride
    period = 2 * stride
    reps = (1 << n) // period
    return block * (((1 << (period * reps)) - 1) // ((1 << period) - 1))


def _check_limit(n: int):
    cap = limits.current().oracle_atoms
    if n > cap:
        raise ResourceLimitError(f"oracle limited to {cap} atoms, got {n}; use a refutation engine instead")


def _bits(f: Formula, order: tuple[str, ...]) -> int:
    n = len(order)
    full = _full(n)
    index = {a: k for k, a in enumerate(order)}
    val: dict[Formula, int] = {}
    for node in postorder(f, into_quantifiers=False):
        if isinstance(node, Atom):
            try:
                val[node] = _column(n, index[node.name])
            except KeyError:
                raise PreconditionError(f"atom {node.name!r} missing from atom order") from None
        elif isinstance(node, Top):
            val[node] = full
        elif isinstance(node, Bottom):
            val[node] = 0
        elif isinstance(node, Not):
            val[node] = full ^ val[node.arg]
        elif isinstance(node, And):
            val[node] = val[node.left] & val[node.right]
        elif isinstance(node, Or):
            val[node] = val[node.left] | val[node.right]
        else:
            body, var = node.body, node.var
            if var in index:
                fresh = fresh_name(var, set(order) | sig(body))
                body, var = rename(body, {var: fresh}), fresh
            _check_limit(n + 1)
            t = _bits(body, (var,) + order)
            half = 1 << n
            val[node] = (t & full) | (t >> half)
    return val[f]


def truth_table(f: Formula, atom_order: Sequence[str] | None = None) -> TruthTable:
    order = tuple(sorted(sig(f))) if atom_order is None else tuple(atom_order)
    if len(set(order)) != len(order):
        raise PreconditionError("duplicate atoms in atom order")
    missing = sig(f) - set(order)
    if missing:
        raise PreconditionError(f"atom order misses {sorted(missing)}")
    _check_limit(len(order))
    return TruthTable(order, _bits(f, order))


def joint_order(*fs: Formula) -> tuple[str, ...]:
    names = set()
    for f in fs:
        names |= sig(f)
    return tuple(sorted(names))


def tables(*fs: Formula) -> list[TruthTable]:
    order = joint_order(*fs)
    _check_limit(len(order))
    return [TruthTable(order, _bits(f, order)) for f in fs]


def entails(phi: Formula, psi: Formula) -> bool:
    """phi |= psi, by exhaustive enumeration over sig(phi) | sig(psi)."""
    a, b = tables(phi, psi)
    return a.entails(b)


def equivalent(phi: Formula, psi: Formula) -> bool:
    a, b = tables(phi, psi)
    return a.bits == b.bits


def is_satisfiable(phi: Formula) -> bool:
    return truth_table(phi).bits != 0


def is_valid(phi: Formula) -> bool:
    t = truth_table(phi)
    return t.bits == _full(len(t.atoms))


def find_model(phi: Formula) -> dict[str, bool] | None:
    t = truth_table(phi)
    if not t.bits:
        return None
    return t.row((t.bits & -t.bits).bit_length() - 1)


def countermodel(phi: Formula, psi: Formula) -> dict[str, bool] | None:
    """A valuation satisfying phi and falsifying psi, or None if phi |= psi."""
    a, b = tables(phi, psi)
    bad = a.bits & ~b.bits
    if not bad:
        return None
    return a.row((bad & -bad).bit_length() - 1)


def require_entailment(phi: Formula, psi: Formula):
    m = countermodel(phi, psi)
    if m is not None:
        raise NotEntailedError(m)


def _flip(pol):
    return frozenset((a, "-" if s == "+" else "+") for a, s in pol)


def check_interpolant(phi: Formula, psi: Formula, chi: Formula) -> bool:
    if not sig(chi) <= sig(phi) & sig(psi):
        return False
    return entails(phi, chi) and entails(chi, psi)


def check_separator(phi: Formula, psi: Formula, chi: Formula) -> bool:
    if not sig(chi) <= sig(phi) & sig(psi):
        return False
    return entails(phi, chi) and not is_satisfiable(And(chi, psi))


def check_lyndon(phi: Formula, psi: Formula, chi: Formula) -> bool:
    """Craig-Lyndon interpolant: interpolant whose signed atoms occur with that sign on both sides."""
    return check_interpolant(phi, psi, chi) and polarity_sig(chi) <= polarity_sig(phi) & polarity_sig(psi)


def check_lyndon_separator(phi: Formula, psi: Formula, chi: Formula) -> bool:
    return (check_separator(phi, psi, chi)
            and polarity_sig(chi) <= polarity_sig(phi) & _flip(polarity_sig(psi)))


def _project(t: TruthTable, keep: tuple[str, ...], universal: bool) -> int:
    """Bits over ``keep`` of exists/forall (atoms - keep). ``t.atoms`` must start with ``keep``."""
    k = len(keep)
    m = len(t.atoms) - k
    block = (1 << (1 << m)) - 1
    out = 0
    for s in range(1 << k):
        chunk = (t.bits >> (s << m)) & block
        if (chunk == block) if universal else chunk:
            out |= 1 << s
    return out


def projection(phi: Formula, keep: Iterable[str], universal: bool = False) -> TruthTable:
    """Truth table over sorted ``keep`` of exists (or forall) of the other atoms of phi."""
    keep = tuple(sorted(keep))
    rest = tuple(sorted(sig(phi) - set(keep)))
    _check_limit(len(keep) + len(rest))
    t = TruthTable(keep + rest, _bits(phi, keep + rest))
    return TruthTable(keep, _project(t, keep, universal))


def check_uniform_interpolant(phi: Formula, keep: Iterable[str], chi: Formula) -> bool:
    keep = frozenset(keep)
    if not sig(chi) <= keep:
        return False
    target = projection(phi, keep)
    return truth_table(chi, target.atoms).bits == target.bits


def enumerate_interpolants(phi: Formula, psi: Formula) -> set[TruthTable]:
    """Every boolean function f over sig(phi) & sig(psi) with phi |= f |= psi."""
    shared = tuple(sorted(sig(phi) & sig(psi)))
    if len(shared) > MAX_ENUM_SHARED:
        raise ResourceLimitError(f"enumeration limited to {MAX_ENUM_SHARED} shared atoms, got {len(shared)}")
    lower = projection(phi, shared).bits
    upper = projection(psi, shared, universal=True).bits
    out = set()
    for f in range(1 << (1 << len(shared))):
        if f & lower == lower and f & ~upper == 0:
            out.add(TruthTable(shared, f))
    return out
