"""Pure-Python resolution kernels.

Clauses are pairs ``(pos, neg)`` of int bitmasks over atom indices.  Atom
``i`` is bit ``i``; the ordering used by ordered resolution is the index
order, so a clause's maximal atom is the highest set bit of ``pos | neg``.
The compiled module ``_ckernels`` implements the same two functions.
"""
from collections import deque

from .errors import ResourceLimitError


def saturate(clauses, step_limit):
    """Ordered-resolution closure of ``clauses`` with a given-clause loop.

    ``clauses`` must be distinct and non-tautological.  Returns
    ``(unsat, all_clauses, derivations)`` where ``all_clauses`` extends the
    input list with every kept resolvent, and ``derivations[j]`` is
    ``(pos_parent, neg_parent, pivot)`` for ``all_clauses[len(clauses) + j]``.
    Stops as soon as the empty clause is derived.
    """
    all_clauses = list(clauses)
    seen = {c: i for i, c in enumerate(all_clauses)}
    derivations = []
    for pos, neg in all_clauses:
        if not pos and not neg:
            return True, all_clauses, derivations
    buckets = {}
    queue = deque(range(len(all_clauses)))
    while queue:
        g = queue.popleft()
        pos, neg = all_clauses[g]
        m = (pos | neg).bit_length() - 1
        bit = 1 << m
        positive = bool(pos & bit)
        for h in buckets.get((m, not positive), ()):
            hp, hn = all_clauses[h]
            if positive:
                rp, rn, pp, np_ = (pos ^ bit) | hp, neg | (hn ^ bit), g, h
            else:
                rp, rn, pp, np_ = pos | (hp ^ bit), (neg ^ bit) | hn, h, g
            if rp & rn:
                continue
            key = (rp, rn)
            if key in seen:
                continue
            if len(derivations) >= step_limit:
                raise ResourceLimitError(f"resolution step limit {step_limit} exceeded")
            seen[key] = len(all_clauses)
            all_clauses.append(key)
            derivations.append((pp, np_, m))
            if not rp and not rn:
                return True, all_clauses, derivations
            queue.append(len(all_clauses) - 1)
        buckets.setdefault((m, positive), []).append(g)
    return False, all_clauses, derivations


def resolve_pivot(pos_side, neg_side, clause_limit):
    """All non-tautological unions ``a | b`` for ``a`` in pos_side, ``b`` in neg_side.

    Inputs already have the pivot removed.  Output is deduplicated and in
    first-derivation order.
    """
    out = {}
    for ap, an in pos_side:
        for bp, bn in neg_side:
            rp, rn = ap | bp, an | bn
            if rp & rn:
                continue
            if (rp, rn) not in out:
                out[(rp, rn)] = None
                if len(out) > clause_limit:
                    raise ResourceLimitError(f"clause limit {clause_limit} exceeded")
    return list(out)
