"""Analytic tableaux on NNF with left/right provenance, and separator extraction.

A biased tableau for ``phi, psi`` starts from the two-node branch ``L(phi)``,
``R(psi)``.  Conjunctions stack both conjuncts at the end of the branch,
disjunctions split it.  When every branch is closed, a separator is read off
bottom-up: closed leaves give false, true or a literal depending on the sides
of the clashing labels, splits of a left disjunction join with ``|`` and
splits of a right disjunction with ``&``.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from . import limits
from .errors import (
    MalformedProofError, NotEntailedError, PreconditionError, ResourceLimitError,
    SatisfiableError,
)
from .formula import (
    BOT, TOP, And, Atom, Bottom, Formula, Not, Or, conj, disj, nnf, sig, to_text,
)
from .qbf import simplify_constants

L, R, U = "L", "R", "U"


@dataclass(frozen=True)
class BiasedFormula:
    side: str
    body: Formula

    def __str__(self):
        return f"{self.side}({to_text(self.body)})"


@dataclass(frozen=True)
class ClosureWitness:
    kind: str  # "LBot", "RBot", "LL", "RR", "LR" (or "UU"/"UBot" when unbiased)
    literal: Formula | None = None  # for LR: the literal on the left

    def value(self) -> Formula:
        if self.kind in ("LL", "LBot"):
            return BOT
        if self.kind in ("RR", "RBot"):
            return TOP
        if self.kind == "LR":
            return self.literal
        raise MalformedProofError(f"no separator value for witness {self.kind}")

    def __str__(self):
        return self.kind if self.literal is None else f"{self.kind}({to_text(self.literal)})"


@dataclass(eq=False)
class TableauNode:
    id: int
    label: BiasedFormula
    parent: "TableauNode | None" = None
    children: list["TableauNode"] = field(default_factory=list)
    rule: str | None = None  # rule that attached the children: alpha_L, beta_R, ..., or "stack"
    source: "TableauNode | None" = None  # node whose label that rule expanded
    witness: ClosureWitness | None = None

    def branch(self) -> list["TableauNode"]:
        out, n = [], self
        while n is not None:
            out.append(n)
            n = n.parent
        return out[::-1]


def _is_alpha(f: Formula) -> bool:
    return isinstance(f, And)


def _compound(f: Formula) -> bool:
    return isinstance(f, (And, Or))


def _literal_of(f: Formula):
    """(atom name, polarity) for a literal, else None."""
    if isinstance(f, Atom):
        return f.name, True
    if isinstance(f, Not) and isinstance(f.arg, Atom):
        return f.arg.name, False
    return None


_PRIORITY = {"LBot": 0, "RBot": 1, "LL": 2, "RR": 3, "LR": 4, "UBot": 0, "UU": 2}


def closure_witness(labels: Iterable[BiasedFormula]) -> ClosureWitness | None:
    """Best closure of a branch: LBot > RBot > LL > RR > LR, ties by atom name."""
    lits: dict[tuple[str, bool], set[str]] = {}
    best = None
    for lab in labels:
        if isinstance(lab.body, Bottom):
            cand = (_PRIORITY[lab.side + "Bot"], "", ClosureWitness(lab.side + "Bot"))
            best = min(best, cand, key=_wkey) if best else cand
            continue
        lit = _literal_of(lab.body)
        if lit is not None:
            lits.setdefault(lit, set()).add(lab.side)
    for (name, pos), sides in lits.items():
        if not pos:
            continue
        neg = lits.get((name, False))
        if not neg:
            continue
        for s1 in sides:
            for s2 in neg:
                if s1 == s2:
                    kind = s1 + s1
                    w = ClosureWitness(kind)
                elif s1 == L:
                    w = ClosureWitness("LR", Atom(name))
                else:
                    w = ClosureWitness("LR", Not(Atom(name)))
                cand = (_PRIORITY[w.kind], name, w)
                best = min(best, cand, key=_wkey) if best else cand
    return best[2] if best else None


def _wkey(c):
    return c[0], c[1]


@dataclass
class Tableau:
    root: TableauNode
    nodes: list[TableauNode]
    open_leaf: TableauNode | None = None

    @property
    def closed(self) -> bool:
        return self.open_leaf is None

    @property
    def size(self) -> int:
        return len(self.nodes)

    def leaves(self) -> list[TableauNode]:
        return [n for n in self.nodes if not n.children]

    def associated_formula(self) -> Formula:
        """Disjunction over branches of the conjunction of their labels."""
        return disj(conj(n.label.body for n in leaf.branch()) for leaf in self.leaves())

    def to_json(self, annotate: bool = True) -> dict:
        values = _extract_all(self) if annotate and self.closed else {}
        rows = []
        for n in self.nodes:
            row = {"id": n.id, "side": n.label.side, "formula": to_text(n.label.body),
                   "rule": n.rule, "children": [c.id for c in n.children]}
            if n.source is not None:
                row["expands"] = n.source.id
            if n.witness is not None:
                row["witness"] = str(n.witness)
            if n in values:
                row["annotation"] = to_text(values[n])
            rows.append(row)
        return {"version": 1, "root": self.root.id, "closed": self.closed, "nodes": rows}


@dataclass
class TableauWitness:
    """An open, fully expanded branch and the valuation it describes."""
    model: dict[str, bool]
    tableau: Tableau


class _Branch:
    __slots__ = ("leaf", "pending", "seen", "labels", "lits")

    def __init__(self, leaf, pending, seen, labels, lits):
        self.leaf = leaf
        self.pending = pending  # list of (seq, node)
        self.seen = seen  # labels already on the branch
        self.labels = labels
        self.lits = lits  # (atom, polarity) of literal labels, sides ignored

    def copy(self, leaf):
        return _Branch(leaf, list(self.pending), set(self.seen), list(self.labels), set(self.lits))

    def closes(self, f: Formula) -> bool:
        if isinstance(f, Bottom):
            return True
        lit = _literal_of(f)
        return lit is not None and (lit[0], not lit[1]) in self.lits


STRATEGIES = ("relevant", "closing", "fifo")


class _Relevance:
    """Minimal unsatisfiable label subsets of a branch, from cached truth tables."""

    def __init__(self, bodies):
        from .oracle import truth_table
        self.order = tuple(sorted(set().union(*(sig(b) for b in bodies))))
        self.enabled = len(self.order) <= limits.current().oracle_atoms
        self._truth_table = truth_table
        self.cache: dict[Formula, int] = {}

    def bits(self, f: Formula) -> int:
        b = self.cache.get(f)
        if b is None:
            b = self.cache[f] = self._truth_table(f, self.order).bits
        return b

    def core(self, labels) -> set | None:
        bodies = list(dict.fromkeys(lab.body for lab in labels))
        tabs = [self.bits(b) for b in bodies]
        full = (1 << (1 << len(self.order))) - 1
        acc = full
        for t in tabs:
            acc &= t
        if acc:
            return None
        keep = [True] * len(bodies)
        for i in range(len(bodies)):
            keep[i] = False
            acc = full
            for j, t in enumerate(tabs):
                if keep[j]:
                    acc &= t
                    if not acc:
                        break
            if acc:
                keep[i] = True
        return {b for b, k in zip(bodies, keep) if k}


def _build(initial: Sequence[BiasedFormula], schedule: Sequence[BiasedFormula] | None,
           on_step: Callable[[Tableau], None] | None, strategy: str = "relevant") -> Tableau:
    if strategy not in STRATEGIES:
        raise PreconditionError(f"unknown strategy {strategy!r}")
    lookahead = strategy in ("relevant", "closing")
    relevance = _Relevance([lab.body for lab in initial]) if strategy == "relevant" else None
    if relevance is not None and not relevance.enabled:
        relevance = None
    cap = limits.current().tableau_nodes
    rank = {b: i for i, b in enumerate(schedule or ())}
    default_rank = len(rank)
    counter = itertools.count()
    nodes: list[TableauNode] = []

    def new_node(label, parent):
        if len(nodes) >= cap:
            raise ResourceLimitError(f"tableau node limit {cap} exceeded")
        n = TableauNode(len(nodes) + 1, label, parent)
        nodes.append(n)
        if parent is not None:
            parent.children.append(n)
        return n

    def push(br: _Branch, node: TableauNode):
        lab = node.label
        br.labels.append(lab)
        lit = _literal_of(lab.body)
        if lit is not None:
            br.lits.add(lit)
        if lab in br.seen:
            return
        br.seen.add(lab)
        if _compound(lab.body):
            br.pending.append((next(counter), node))

    def pick(br: _Branch) -> int:
        best, key = 0, None
        core = relevance.core(br.labels) if relevance is not None else None
        if core is not None and not any(n.label.body in core for _, n in br.pending):
            core = None
        for i, (seq, n) in enumerate(br.pending):
            f = n.label.body
            if _is_alpha(f):
                cat = 0
            elif lookahead:
                cat = 3 - br.closes(f.left) - br.closes(f.right)
            else:
                cat = 3
            irrelevant = core is not None and f not in core
            k = (rank.get(n.label, default_rank), irrelevant, cat, seq)
            if key is None or k < key:
                best, key = i, k
        return best

    root = prev = None
    start = _Branch(None, [], set(), [], set())
    for lab in initial:
        n = new_node(lab, prev)
        if prev is not None:
            prev.rule = "stack"
        root = root or n
        push(start, n)
        prev = n
    start.leaf = prev
    tableau = Tableau(root, nodes)
    if on_step:
        on_step(tableau)

    stack = [start]
    while stack:
        br = stack.pop()
        w = closure_witness(br.labels)
        if w is not None:
            br.leaf.witness = w
            continue
        if not br.pending:
            tableau.open_leaf = br.leaf
            return tableau
        _, src = br.pending.pop(pick(br))
        f, side = src.label.body, src.label.side
        leaf = br.leaf
        suffix = "" if side == U else "_" + side
        if _is_alpha(f):
            leaf.rule, leaf.source = "alpha" + suffix, src
            a = new_node(BiasedFormula(side, f.left), leaf)
            a.rule = "stack"
            b = new_node(BiasedFormula(side, f.right), a)
            push(br, a)
            push(br, b)
            br.leaf = b
            stack.append(br)
        else:
            leaf.rule, leaf.source = "beta" + suffix, src
            left = new_node(BiasedFormula(side, f.left), leaf)
            right = new_node(BiasedFormula(side, f.right), leaf)
            br_right = br.copy(right)
            br.leaf = left
            push(br, left)
            push(br_right, right)
            stack.append(br_right)
            stack.append(br)  # left branch first
        if on_step:
            on_step(tableau)
    return tableau


def _model(tableau: Tableau, names: Iterable[str]) -> dict[str, bool]:
    model = {a: False for a in sorted(names)}
    for n in tableau.open_leaf.branch():
        lit = _literal_of(n.label.body)
        if lit is not None:
            model[lit[0]] = lit[1]
    return model


def build_biased_tableau(phi: Formula, psi: Formula,
                         schedule: Sequence[BiasedFormula] | None = None,
                         on_step: Callable[[Tableau], None] | None = None,
                         strategy: str = "relevant") -> Tableau | TableauWitness:
    """Closed biased tableau for ``phi, psi`` or a witness that ``phi & psi`` is satisfiable.

    Each branch expands its pending compound labels conjunctions first,
    otherwise first-in first-out.  The ``"closing"`` strategy moves a
    disjunction ahead when both (then one) of its disjuncts clash with a
    literal on the branch; ``"fifo"`` skips that look-ahead.  The default
    ``"relevant"`` strategy further prefers labels from a minimal
    unsatisfiable subset of the branch (found with truth tables when the
    signature is within the oracle limit).
    A ``schedule`` lists biased labels to prefer, in order; unlisted labels
    follow the strategy.  ``on_step`` is called with the tableau after every
    rule application.
    """
    t = _build([BiasedFormula(L, nnf(phi)), BiasedFormula(R, nnf(psi))], schedule, on_step, strategy)
    if t.closed:
        return t
    return TableauWitness(_model(t, sig(phi) | sig(psi)), t)


def build_tableau(phi: Formula, schedule: Sequence[Formula] | None = None,
                  strategy: str = "relevant") -> Tableau | TableauWitness:
    """Plain (unbiased) tableau for a single formula."""
    sched = [BiasedFormula(U, f) for f in schedule] if schedule else None
    t = _build([BiasedFormula(U, nnf(phi))], sched, None, strategy)
    if t.closed:
        return t
    return TableauWitness(_model(t, sig(phi)), t)


def bias(tableau: Tableau) -> Tableau:
    """Turn a closed plain tableau for ``phi & psi`` into a biased one for ``phi, psi``.

    The first conjunction step is dropped, its two conjuncts become ``L(phi)``
    and ``R(psi)``, and every later rule passes the side of the label it
    expands on to the labels it creates.
    """
    if not tableau.closed:
        raise PreconditionError("tableau is not closed")
    root = tableau.root
    if root.rule != "alpha" or root.source is not root:
        raise PreconditionError("tableau does not start by splitting the root conjunction")
    first = root.children[0]
    second = first.children[0]
    mapping: dict[TableauNode, TableauNode] = {}
    nodes: list[TableauNode] = []

    def copy(n, side, parent):
        m = TableauNode(len(nodes) + 1, BiasedFormula(side, n.label.body), parent)
        nodes.append(m)
        if parent is not None:
            parent.children.append(m)
        mapping[n] = m
        return m

    new_first = copy(first, L, None)
    copy(second, R, new_first)
    new_first.rule = "stack"
    todo = [second]
    while todo:
        n = todo.pop()
        m = mapping[n]
        if not n.children:
            m.witness = closure_witness(x.label for x in m.branch())
            continue
        if n.rule == "stack":
            m.rule = "stack"
            c = n.children[0]
            copy(c, m.label.side, m)
            todo.append(c)
            continue
        src = mapping[n.source]
        side = src.label.side
        m.rule = n.rule.split("_")[0] + "_" + side
        m.source = src
        for c in n.children:
            copy(c, side, m)
            todo.append(c)
    return Tableau(new_first, sorted(nodes, key=lambda x: x.id))


def _extract_all(t: Tableau) -> dict[TableauNode, Formula]:
    values: dict[TableauNode, Formula] = {}
    for n in reversed(t.nodes):  # children always have larger ids
        if not n.children:
            if n.witness is None:
                raise MalformedProofError(f"branch ending in node {n.id} is open")
            values[n] = n.witness.value()
        elif n.rule is not None and n.rule.startswith("beta"):
            a, b = (values[c] for c in n.children)
            if n.rule == "beta_L":
                values[n] = Or(a, b)
            elif n.rule == "beta_R":
                values[n] = And(a, b)
            else:
                raise MalformedProofError("cannot extract from an unbiased tableau")
        else:
            values[n] = values[n.children[0]]
    return values


def extract_separator(t: Tableau) -> Formula:
    """Separator read off a closed biased tableau, before any simplification."""
    if not t.closed:
        raise MalformedProofError("tableau has an open branch")
    return _extract_all(t)[t.root]


def separator_tableau(phi: Formula, psi: Formula,
                      schedule: Sequence[BiasedFormula] | None = None,
                      strategy: str = "relevant") -> Formula:
    t = build_biased_tableau(phi, psi, schedule, strategy=strategy)
    if isinstance(t, TableauWitness):
        raise SatisfiableError(t.model)
    return simplify_constants(extract_separator(t))


def interpolant_tableau(phi: Formula, psi: Formula) -> Formula:
    try:
        return separator_tableau(phi, nnf(Not(psi)))
    except SatisfiableError as e:
        raise NotEntailedError(e.model) from None


def Lb(f: Formula) -> BiasedFormula:
    return BiasedFormula(L, f)


def Rb(f: Formula) -> BiasedFormula:
    return BiasedFormula(R, f)
