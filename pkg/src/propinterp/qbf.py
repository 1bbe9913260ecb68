"""Quantified Boolean formulas and elimination by Boolean expansion.

``exists p. phi`` becomes ``phi[p/false] | phi[p/true]``; constants are
rewritten away after every single-atom expansion to curb growth.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping

from . import limits
from .errors import PreconditionError, ResourceLimitError
from .formula import (
    BOT, TOP, And, Bottom, Exists, Formula, Not, Or, Top, dag_size, evaluate,
    postorder, sig, substitute,
)


def qbf_eval(phi: Formula, valuation: Mapping) -> bool:
    return evaluate(phi, valuation)


def simplify_constants(phi: Formula) -> Formula:
    """Exhaustively rewrite with the unit/zero laws for true and false.

    The result is either a constant or contains no constant at all.
    """
    out: dict[Formula, Formula] = {}
    for n in postorder(phi, into_quantifiers=False):
        if isinstance(n, Not):
            a = out[n.arg]
            out[n] = BOT if a is TOP else TOP if a is BOT else Not(a)
        elif isinstance(n, And):
            a, b = out[n.left], out[n.right]
            if a is BOT or b is BOT:
                out[n] = BOT
            elif a is TOP:
                out[n] = b
            elif b is TOP:
                out[n] = a
            else:
                out[n] = And(a, b)
        elif isinstance(n, Or):
            a, b = out[n.left], out[n.right]
            if a is TOP or b is TOP:
                out[n] = TOP
            elif a is BOT:
                out[n] = b
            elif b is BOT:
                out[n] = a
            else:
                out[n] = Or(a, b)
        elif isinstance(n, Exists):
            body = simplify_constants(n.body)
            out[n] = body if isinstance(body, (Top, Bottom)) or n.var not in sig(body) else Exists(n.var, body)
        else:
            out[n] = n
    return out[phi]


def _guard(f: Formula) -> Formula:
    cap = limits.current().expansion_nodes
    if dag_size(f) > cap:
        raise ResourceLimitError(f"quantifier expansion exceeded {cap} nodes")
    return f


def expand_exists(phi: Formula, var: str) -> Formula:
    """Quantifier-free ``exists var. phi`` for quantifier-free ``phi``."""
    if var not in sig(phi):
        return phi
    lo = simplify_constants(substitute(phi, {var: BOT}))
    hi = simplify_constants(substitute(phi, {var: TOP}))
    return _guard(simplify_constants(Or(lo, hi)))


def expand_forall(phi: Formula, var: str) -> Formula:
    if var not in sig(phi):
        return phi
    lo = simplify_constants(substitute(phi, {var: BOT}))
    hi = simplify_constants(substitute(phi, {var: TOP}))
    return _guard(simplify_constants(And(lo, hi)))


def eliminate(phi: Formula) -> Formula:
    """Equivalent quantifier-free formula; innermost quantifiers go first."""
    out: dict[Formula, Formula] = {}
    for n in postorder(phi, into_quantifiers=False):
        if isinstance(n, Exists):
            out[n] = expand_exists(eliminate(n.body), n.var)
        elif n.children:
            out[n] = type(n)(*(out[c] for c in n.children))
        else:
            out[n] = n
    return simplify_constants(out[phi])


def exists_all(names: Iterable[str], phi: Formula) -> Formula:
    """``exists p1 ... pn. phi`` with ``p1`` outermost, names in ascending order."""
    for name in sorted(names, reverse=True):
        phi = Exists(name, phi)
    return phi


def uniform_keep_qe(phi: Formula, keep: Iterable[str]) -> Formula:
    """Uniform interpolant of ``phi`` over the kept signature ``keep``.

    Atoms of ``phi`` outside ``keep`` are eliminated in ascending name order.
    """
    keep = frozenset(keep)
    extra = keep - sig(phi)
    if extra:
        raise PreconditionError(f"kept atoms {sorted(extra)} do not occur in the formula")
    result = simplify_constants(phi)
    for name in sorted(sig(phi) - keep):
        result = expand_exists(result, name)
    return result


def uniform_forget_qe(phi: Formula, forget: Iterable[str]) -> Formula:
    return uniform_keep_qe(phi, sig(phi) - frozenset(forget))


def _require_entailment(phi, psi):
    from .decide import require_entailment
    require_entailment(phi, psi)


def strongest_interpolant(phi: Formula, psi: Formula, check: bool = True) -> Formula:
    """exists (sig(phi) - sig(psi)). phi, expanded."""
    if check:
        _require_entailment(phi, psi)
    return uniform_keep_qe(phi, sig(phi) & sig(psi))


def weakest_interpolant(phi: Formula, psi: Formula, check: bool = True) -> Formula:
    """forall (sig(psi) - sig(phi)). psi, expanded."""
    if check:
        _require_entailment(phi, psi)
    result = simplify_constants(psi)
    for name in sorted(sig(psi) - sig(phi)):
        result = expand_forall(result, name)
    return result


def interpolant_qe(phi: Formula, psi: Formula) -> Formula:
    return strongest_interpolant(phi, psi)


def _unit(f: Formula):
    if isinstance(f, Not) and not f.arg.children and f.arg not in (TOP, BOT):
        return f.arg, BOT
    if not f.children and f not in (TOP, BOT):
        return f, TOP
    return None


def _simplify_once(f: Formula) -> Formula:
    if isinstance(f, Not):
        return simplify_constants(Not(_simplify_once(f.arg)))
    if isinstance(f, (And, Or)):
        a, b = _simplify_once(f.left), _simplify_once(f.right)
        flip = isinstance(f, Or)
        for x, y, swap in ((a, b, False), (b, a, True)):
            u = _unit(x)
            if u is not None and u[0].name in sig(y):
                val = u[1] if not flip else (TOP if u[1] is BOT else BOT)
                y = simplify_constants(substitute(y, {u[0].name: val}))
                a, b = (y, x) if swap else (x, y)
        return simplify_constants(type(f)(a, b))
    return f


def simplify(phi: Formula) -> Formula:
    """Constant simplification plus literal propagation inside ``&``/``|``.

    In ``l & x`` the literal ``l`` is taken true inside ``x``; in ``l | x`` it
    is taken false.  Repeats until nothing changes.
    """
    f = simplify_constants(phi)
    while True:
        g = _simplify_once(f)
        if g is f:
            return f
        f = g
