"""Hash-consed propositional formulas.

Every formula node is interned: building ``And(p, q)`` twice returns the same
object, so structural equality is identity and the number of distinct
subformulas (the dag-size) is just the number of reachable nodes.

Only the core connectives are represented.  Implication and equivalence are
abbreviations that expand on construction (:func:`implies`, :func:`iff`).
``Exists`` nodes exist for the QBF layer; most operations here reject them.
"""
from __future__ import annotations

import re
import threading
import weakref
from collections.abc import Iterable, Mapping

from .errors import EvaluationError, PreconditionError

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
RESERVED = frozenset({"true", "false", "exists", "forall"})

_table: "weakref.WeakValueDictionary[tuple, Formula]" = weakref.WeakValueDictionary()
_lock = threading.Lock()


class Formula:
    __slots__ = ("_key", "__weakref__")

    children: tuple = ()

    def __new__(cls, *args):
        key = (cls, *args)
        node = _table.get(key)
        if node is not None:
            return node
        with _lock:
            node = _table.get(key)
            if node is None:
                node = object.__new__(cls)
                node._key = key
                _table[key] = node
        return node

    def __reduce__(self):
        return (type(self), self._key[1:])

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"<{to_text(self)}>"


class Atom(Formula):
    __slots__ = ()

    def __new__(cls, name: str):
        if not isinstance(name, str) or not IDENT_RE.match(name) or name in RESERVED:
            raise PreconditionError(f"invalid atom name {name!r}")
        return super().__new__(cls, name)

    @property
    def name(self) -> str:
        return self._key[1]


class Top(Formula):
    __slots__ = ()

    def __new__(cls):
        return super().__new__(cls)


class Bottom(Formula):
    __slots__ = ()

    def __new__(cls):
        return super().__new__(cls)


class Not(Formula):
    __slots__ = ()

    def __new__(cls, arg: Formula):
        return super().__new__(cls, arg)

    @property
    def arg(self) -> Formula:
        return self._key[1]

    @property
    def children(self):
        return (self._key[1],)


class _Binary(Formula):
    __slots__ = ()

    def __new__(cls, left: Formula, right: Formula):
        return super().__new__(cls, left, right)

    @property
    def left(self) -> Formula:
        return self._key[1]

    @property
    def right(self) -> Formula:
        return self._key[2]

    @property
    def children(self):
        return self._key[1:]


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class Exists(Formula):
    """``exists var. body``; universal quantification is ``~exists var. ~body``."""

    __slots__ = ()

    def __new__(cls, var: str, body: Formula):
        if not IDENT_RE.match(var) or var in RESERVED:
            raise PreconditionError(f"invalid atom name {var!r}")
        return super().__new__(cls, var, body)

    @property
    def var(self) -> str:
        return self._key[1]

    @property
    def body(self) -> Formula:
        return self._key[2]

    @property
    def children(self):
        return (self._key[2],)


# Keep the two constants alive for the lifetime of the interpreter.
TOP = Top()
BOT = Bottom()


def atom(name: str) -> Atom:
    return Atom(name)


def atoms(names: str) -> tuple[Atom, ...]:
    """``atoms("p q r")`` -> ``(p, q, r)``."""
    return tuple(Atom(n) for n in names.replace(",", " ").split())


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def forall(var: str, body: Formula) -> Formula:
    return Not(Exists(var, Not(body)))


def conj(items: Iterable[Formula]) -> Formula:
    result = None
    for f in items:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


def disj(items: Iterable[Formula]) -> Formula:
    result = None
    for f in items:
        result = f if result is None else Or(result, f)
    return BOT if result is None else result


def literal(name: str, positive: bool = True) -> Formula:
    a = Atom(name)
    return a if positive else Not(a)


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))


def postorder(f: Formula, into_quantifiers: bool = True) -> list[Formula]:
    """Distinct subformulas of ``f``, children before parents.

    With ``into_quantifiers=False`` an ``Exists`` node is treated as a leaf.
    """
    seen = set()
    out = []
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        if not into_quantifiers and isinstance(node, Exists):
            continue
        for c in reversed(node.children):
            if c not in seen:
                stack.append((c, False))
    return out


def subformulas(f: Formula) -> frozenset[Formula]:
    return frozenset(postorder(f))


def has_quantifiers(f: Formula) -> bool:
    return any(isinstance(n, Exists) for n in postorder(f))


def _require_qf(f: Formula, op: str) -> list[Formula]:
    nodes = postorder(f)
    if any(isinstance(n, Exists) for n in nodes):
        raise PreconditionError(f"{op} needs a quantifier-free formula; eliminate quantifiers first")
    return nodes


# --- semantics -------------------------------------------------------------

def evaluate(f: Formula, valuation: Mapping) -> bool:
    """Truth value of ``f`` under ``valuation`` (atom names or Atoms -> bool/0/1)."""
    v = {(k.name if isinstance(k, Atom) else k): bool(val) for k, val in valuation.items()}
    return _eval(f, v)


def _eval(f: Formula, v: dict) -> bool:
    val: dict[Formula, bool] = {}
    for n in postorder(f, into_quantifiers=False):
        if isinstance(n, Atom):
            try:
                val[n] = v[n.name]
            except KeyError:
                raise EvaluationError(n.name) from None
        elif isinstance(n, Top):
            val[n] = True
        elif isinstance(n, Bottom):
            val[n] = False
        elif isinstance(n, Not):
            val[n] = not val[n.arg]
        elif isinstance(n, And):
            val[n] = val[n.left] and val[n.right]
        elif isinstance(n, Or):
            val[n] = val[n.left] or val[n.right]
        else:  # Exists
            inner = dict(v)
            inner[n.var] = False
            if _eval(n.body, inner):
                val[n] = True
            else:
                inner[n.var] = True
                val[n] = _eval(n.body, inner)
    return val[f]


def sig(f: Formula) -> frozenset[str]:
    """Atom names occurring free in ``f``."""
    nodes = postorder(f)
    if not any(isinstance(n, Exists) for n in nodes):
        return frozenset(n.name for n in nodes if isinstance(n, Atom))
    memo: dict[Formula, frozenset[str]] = {}
    for n in nodes:
        if isinstance(n, Atom):
            memo[n] = frozenset((n.name,))
        elif isinstance(n, Exists):
            memo[n] = memo[n.body] - {n.var}
        elif n.children:
            memo[n] = frozenset().union(*(memo[c] for c in n.children))
        else:
            memo[n] = frozenset()
    return memo[f]


def polarity_sig(f: Formula) -> frozenset[tuple[str, str]]:
    """Pairs ``(atom, '+')`` / ``(atom, '-')`` by parity of enclosing negations."""
    _require_qf(f, "polarity_sig")
    out = set()
    seen = set()
    stack = [(f, True)]
    while stack:
        node, pos = stack.pop()
        if (node, pos) in seen:
            continue
        seen.add((node, pos))
        if isinstance(node, Atom):
            out.add((node.name, "+" if pos else "-"))
        elif isinstance(node, Not):
            stack.append((node.arg, not pos))
        else:
            stack.extend((c, pos) for c in node.children)
    return frozenset(out)


def dag_size(f: Formula) -> int:
    return len(postorder(f))


def tree_size(f: Formula) -> int:
    s: dict[Formula, int] = {}
    for n in postorder(f):
        s[n] = 1 + sum(s[c] for c in n.children)
    return s[f]


def depth(f: Formula) -> int:
    d: dict[Formula, int] = {}
    for n in postorder(f):
        d[n] = 1 + max((d[c] for c in n.children), default=0)
    return d[f]


def is_nnf(f: Formula) -> bool:
    for n in postorder(f):
        if isinstance(n, Exists) or (isinstance(n, Not) and not isinstance(n.arg, Atom)):
            return False
    return True


def nnf(f: Formula) -> Formula:
    """Negation normal form; linear in the dag-size of ``f``."""
    nodes = _require_qf(f, "nnf")
    pos: dict[Formula, Formula] = {}
    neg: dict[Formula, Formula] = {}
    for n in nodes:
        if isinstance(n, Atom):
            pos[n], neg[n] = n, Not(n)
        elif isinstance(n, Top):
            pos[n], neg[n] = TOP, BOT
        elif isinstance(n, Bottom):
            pos[n], neg[n] = BOT, TOP
        elif isinstance(n, Not):
            pos[n], neg[n] = neg[n.arg], pos[n.arg]
        elif isinstance(n, And):
            pos[n] = And(pos[n.left], pos[n.right])
            neg[n] = Or(neg[n.left], neg[n.right])
        else:
            pos[n] = Or(pos[n.left], pos[n.right])
            neg[n] = And(neg[n.left], neg[n.right])
    return pos[f]


def substitute(f: Formula, mapping: Mapping) -> Formula:
    """Simultaneously replace atoms by formulas.  Keys may be names or Atoms."""
    m = {(k.name if isinstance(k, Atom) else k): v for k, v in mapping.items()}
    if not m:
        return f
    return _subst(f, m)


def _subst(f: Formula, m: dict) -> Formula:
    out: dict[Formula, Formula] = {}
    for n in postorder(f, into_quantifiers=False):
        if isinstance(n, Atom):
            out[n] = m.get(n.name, n)
        elif isinstance(n, Exists):
            inner = {k: v for k, v in m.items() if k != n.var}
            out[n] = Exists(n.var, _subst(n.body, inner)) if inner else n
        elif n.children:
            out[n] = type(n)(*(out[c] for c in n.children))
        else:
            out[n] = n
    return out[f]


def fresh_name(base: str, used) -> str:
    """``base'`` or, if taken, ``base'1``, ``base'2``, ..."""
    cand = base + "'"
    k = 0
    while cand in used:
        k += 1
        cand = f"{base}'{k}"
    return cand


def rename_fresh(f: Formula, keep: Iterable[str], also: Iterable[str] = (),
                 used: Iterable[str] = ()) -> tuple[Formula, dict[str, str]]:
    """Rename every atom of ``f`` (plus ``also``) outside ``keep`` to a fresh primed atom.

    Returns the renamed formula and the renaming ``{old: new}``.
    """
    keep = set(keep)
    names = sig(f) | set(also)
    taken = set(names) | keep | set(used)
    renaming: dict[str, str] = {}
    for name in sorted(names - keep):
        new = fresh_name(name, taken)
        taken.add(new)
        renaming[name] = new
    if set(renaming.values()) & names:
        raise PreconditionError("fresh-name collision while renaming")
    return substitute(f, {k: Atom(v) for k, v in renaming.items()}), renaming


def rename(f: Formula, renaming: Mapping[str, str]) -> Formula:
    return substitute(f, {k: Atom(v) for k, v in renaming.items()})


# --- printing --------------------------------------------------------------

_PREC = {Or: 1, And: 2}


def to_text(f: Formula) -> str:
    """Render in the parser's grammar, with the minimum parentheses to round-trip."""
    memo: dict[Formula, tuple[str, int]] = {}
    for n in postorder(f):
        if isinstance(n, Atom):
            memo[n] = (n.name, 4)
        elif isinstance(n, Top):
            memo[n] = ("true", 4)
        elif isinstance(n, Bottom):
            memo[n] = ("false", 4)
        elif isinstance(n, Not):
            s, p = memo[n.arg]
            memo[n] = ("~" + (s if p >= 3 else f"({s})"), 3)
        elif isinstance(n, Exists):
            memo[n] = (f"exists {n.var}. {memo[n.body][0]}", 0)
        else:
            prec = _PREC[type(n)]
            op = " & " if prec == 2 else " | "
            ls, lp = memo[n.left]
            rs, rp = memo[n.right]
            ls = ls if lp >= prec else f"({ls})"
            rs = rs if rp > prec else f"({rs})"
            memo[n] = (ls + op + rs, prec)
    return memo[f][0]


def sort_key(f: Formula) -> tuple:
    return (dag_size(f), to_text(f))
