"""Clauses, CNF/DNF conversion, Tseitin encoding and DIMACS I/O."""
from __future__ import annotations

from collections.abc import Iterable
from typing import NamedTuple

from . import limits
from .errors import ParseError, ResourceLimitError
from .formula import (
    BOT, TOP, Atom, And, Bottom, Formula, Not, Top, conj, disj, fresh_name, literal,
    nnf, postorder, sig,
)
from .qbf import simplify_constants


class Literal(NamedTuple):
    atom: str
    positive: bool = True

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def to_formula(self) -> Formula:
        return literal(self.atom, self.positive)

    def __str__(self):
        return self.atom if self.positive else "~" + self.atom

    @classmethod
    def parse(cls, text: str) -> "Literal":
        text = text.strip()
        if text.startswith("~"):
            return cls(Atom(text[1:].strip()).name, False)
        return cls(Atom(text).name, True)


# A clause (disjunction) and a conjunctive clause are both frozensets of
# literals; the empty clause is false, the empty conjunctive clause is true.
Clause = frozenset
ClauseSet = frozenset


def clause(*lits: str) -> frozenset[Literal]:
    """``clause("~d", "~e")`` -> {~d, ~e}."""
    return frozenset(Literal.parse(t) for t in lits)


def clause_set(*clauses: Iterable[str]) -> frozenset[frozenset[Literal]]:
    return frozenset(clause(*c) for c in clauses)


def lit_key(lit: Literal):
    return (lit.atom, not lit.positive)


def sorted_literals(c) -> list[Literal]:
    return sorted(c, key=lit_key)


def clause_key(c):
    return (len(c), [lit_key(l) for l in sorted_literals(c)])


def sorted_clauses(cs) -> list[frozenset[Literal]]:
    return sorted(cs, key=clause_key)


def is_tautological(c) -> bool:
    return any(l.complement() in c for l in c)


def clause_atoms(c) -> frozenset[str]:
    return frozenset(l.atom for l in c)


def clauses_sig(cs) -> frozenset[str]:
    return frozenset(l.atom for c in cs for l in c)


def clause_to_formula(c) -> Formula:
    return disj(l.to_formula() for l in sorted_literals(c))


def conj_clause_to_formula(c) -> Formula:
    return conj(l.to_formula() for l in sorted_literals(c))


def cnf_to_formula(cs) -> Formula:
    if frozenset() in cs:
        return BOT
    return conj(clause_to_formula(c) for c in sorted_clauses(cs))


def dnf_to_formula(ds) -> Formula:
    if frozenset() in ds:
        return TOP
    return disj(conj_clause_to_formula(c) for c in sorted_clauses(ds))


def clause_str(c) -> str:
    return " | ".join(map(str, sorted_literals(c))) if c else "false"


def _product(a, b, cap):
    if len(a) * len(b) > cap:
        out = set()
        for x in a:
            for y in b:
                u = x | y
                if not is_tautological(u):
                    out.add(u)
                    if len(out) > cap:
                        raise ResourceLimitError(f"normal form exceeds {cap} clauses")
        return frozenset(out)
    return frozenset(u for x in a for y in b if not is_tautological(u := x | y))


def _normal_form(phi: Formula, cnf: bool):
    cap = limits.current().clauses
    f = nnf(phi)
    memo = {}
    unit, zero = frozenset(), frozenset([frozenset()])
    if not cnf:
        unit, zero = zero, unit
    for n in postorder(f):
        if isinstance(n, Atom):
            memo[n] = frozenset([frozenset([Literal(n.name, True)])])
        elif isinstance(n, Not):
            memo[n] = frozenset([frozenset([Literal(n.arg.name, False)])])
        elif isinstance(n, Top):
            memo[n] = unit
        elif isinstance(n, Bottom):
            memo[n] = zero
        elif isinstance(n, And) == cnf:
            memo[n] = memo[n.left] | memo[n.right]
        else:
            memo[n] = _product(memo[n.left], memo[n.right], cap)
        if len(memo[n]) > cap:
            raise ResourceLimitError(f"normal form exceeds {cap} clauses")
    return memo[f]


def to_cnf(phi: Formula) -> frozenset[frozenset[Literal]]:
    """Equivalent clause set by distribution; tautologies and duplicate literals removed."""
    return _normal_form(phi, cnf=True)


def to_dnf(phi: Formula) -> frozenset[frozenset[Literal]]:
    """Equivalent set of conjunctive clauses; contradictory ones removed."""
    return _normal_form(phi, cnf=False)


def tseitin_cnf(phi: Formula, prefix: str = "t", used: Iterable[str] = ()):
    """Structural CNF with one fresh atom per distinct binary subformula.

    Each fresh atom ``x`` for ``a & b`` (``a | b``) gets the three clauses of
    ``x <-> a & b`` (``x <-> a | b``); negations need no atom.  The result is
    a conservative extension of ``phi``.  Returns ``(clauses, definitions)``,
    definitions ordered innermost first.
    """
    f = simplify_constants(phi)
    if isinstance(f, Top):
        return frozenset(), {}
    if isinstance(f, Bottom):
        return frozenset([frozenset()]), {}
    taken = set(sig(phi)) | set(used)
    lit: dict[Formula, Literal] = {}
    defs: dict[str, Formula] = {}
    out: list[frozenset[Literal]] = []
    k = 0
    for n in postorder(f):
        if isinstance(n, Atom):
            lit[n] = Literal(n.name, True)
        elif isinstance(n, Not):
            lit[n] = lit[n.arg].complement()
        else:
            k += 1
            name = f"{prefix}{k}"
            if name in taken:
                name = fresh_name(name, taken)
            taken.add(name)
            x = Literal(name, True)
            a, b = lit[n.left], lit[n.right]
            if isinstance(n, And):
                out += [frozenset([x.complement(), a]), frozenset([x.complement(), b]),
                        frozenset([x, a.complement(), b.complement()])]
            else:
                out += [frozenset([x.complement(), a, b]), frozenset([x, a.complement()]),
                        frozenset([x, b.complement()])]
            lit[n] = x
            defs[name] = n
    out.append(frozenset([lit[f]]))
    return frozenset(c for c in out if not is_tautological(c)), defs


def is_conservative_extension(psi: Formula, phi: Formula) -> bool:
    """psi |= phi, sig(phi) <= sig(psi), and psi has no new sig(phi)-consequences."""
    from .oracle import check_uniform_interpolant, entails
    if not sig(phi) <= sig(psi):
        return False
    return entails(psi, phi) and check_uniform_interpolant(psi, sig(phi), phi)


# --- DIMACS ----------------------------------------------------------------

def write_dimacs(cs, names: Iterable[str] | None = None) -> str:
    """DIMACS text; the atom-to-index map is kept in ``c var <n> <name>`` lines."""
    order = list(names) if names is not None else sorted(clauses_sig(cs))
    index = {a: i + 1 for i, a in enumerate(order)}
    lines = [f"c var {i} {a}" for a, i in index.items()]
    ordered = sorted_clauses(cs)
    lines.append(f"p cnf {len(order)} {len(ordered)}")
    for c in ordered:
        lits = [str(index[l.atom] if l.positive else -index[l.atom]) for l in sorted_literals(c)]
        lines.append(" ".join(lits + ["0"]))
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> frozenset[frozenset[Literal]]:
    """Parse DIMACS CNF; variables without a ``c var`` line are named ``x<n>``."""
    names: dict[int, str] = {}
    header = None
    clauses = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[1] == "var":
                try:
                    names[int(parts[2])] = Atom(parts[3]).name
                except ValueError:
                    raise ParseError(f"line {lineno}: bad var comment {line!r}") from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or not all(t.isdigit() for t in parts[2:]):
                raise ParseError(f"line {lineno}: bad header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: bad clause {line!r}") from None
        for v in nums:
            if v == 0:
                clauses.append(current)
                current = []
            else:
                current.append(v)
    if current:
        clauses.append(current)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    out = set()
    for c in clauses:
        lits = frozenset(Literal(names.get(abs(v), f"x{abs(v)}"), v > 0) for v in c)
        if not is_tautological(lits):
            out.add(lits)
    return frozenset(out)
