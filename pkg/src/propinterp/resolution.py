"""Resolution: refutation, atom elimination, and separator annotation.

Proof search is ordered resolution (resolution only upon the maximal atom of
both parents; atoms ordered by name unless an explicit order is given) in a given-clause loop, with
tautology deletion and duplicate-clause deletion only.  The hot loop lives in
:mod:`propinterp.kernels`.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from . import kernels, limits
from .errors import (
    MalformedProofError, NotEntailedError, PreconditionError, ResourceLimitError, SatisfiableError,
)
from .formula import BOT, TOP, And, Formula, Not, Or, atom, disj, nnf, sig, to_text
from .normal_forms import (
    Literal, clause_str, clauses_sig, cnf_to_formula, is_tautological, sorted_literals,
    to_cnf, tseitin_cnf,
)
from .qbf import simplify

PHI, PSI = "phi", "psi"
HUANG, MCMILLAN = "huang", "mcmillan"


@dataclass(frozen=True)
class ProofStep:
    id: int
    clause: frozenset
    kind: str  # "input" or "resolvent"
    side: str | None = None
    parents: tuple[int, int] | None = None  # (parent with pivot, parent with ~pivot)
    pivot: str | None = None


@dataclass
class ResolutionProof:
    steps: list[ProofStep]

    def __post_init__(self):
        self.by_id = {s.id: s for s in self.steps}

    @property
    def root(self) -> ProofStep:
        return self.steps[-1]

    @property
    def resolvent_count(self) -> int:
        return sum(1 for s in self.steps if s.kind == "resolvent")

    def inputs(self, side: str | None = None) -> list[frozenset]:
        return [s.clause for s in self.steps if s.kind == "input" and (side is None or s.side == side)]

    def validate(self):
        seen = set()
        for s in self.steps:
            if s.kind == "resolvent":
                a, b = s.parents
                if a not in seen or b not in seen:
                    raise MalformedProofError(f"step {s.id}: parent used before it is derived")
                expected = resolve(self.by_id[a].clause, self.by_id[b].clause, s.pivot)
                if expected != s.clause:
                    raise MalformedProofError(f"step {s.id}: clause is not the resolvent of its parents")
            elif s.kind != "input":
                raise MalformedProofError(f"step {s.id}: unknown kind {s.kind!r}")
            if s.id in seen:
                raise MalformedProofError(f"duplicate step id {s.id}")
            seen.add(s.id)
        if not self.steps or self.root.clause:
            raise MalformedProofError("proof does not end in the empty clause")

    def to_json(self, annotation: Mapping[int, Formula] | None = None) -> dict:
        rows = []
        for s in self.steps:
            row = {"id": s.id, "clause": [str(l) for l in sorted_literals(s.clause)], "kind": s.kind}
            if s.kind == "input":
                row["side"] = s.side
            else:
                row["parents"] = list(s.parents)
                row["pivot"] = s.pivot
            if annotation is not None:
                row["annotation"] = to_text(annotation[s.id])
            rows.append(row)
        return {"version": 1, "steps": rows}

    @classmethod
    def from_json(cls, data) -> "ResolutionProof":
        """Load a proof; resolvent clauses may be omitted and are then recomputed."""
        if isinstance(data, str):
            data = json.loads(data)
        steps: list[ProofStep] = []
        by_id: dict[int, ProofStep] = {}
        for row in data["steps"]:
            sid = int(row["id"])
            if row["kind"] == "input":
                c = frozenset(Literal.parse(t) for t in row["clause"])
                step = ProofStep(sid, c, "input", side=row.get("side", PHI))
            else:
                a, b = (int(x) for x in row["parents"])
                p = row["pivot"]
                if a not in by_id or b not in by_id:
                    raise MalformedProofError(f"step {sid}: unknown parent")
                ca, cb = by_id[a].clause, by_id[b].clause
                if Literal(p, True) not in ca:
                    a, b, ca, cb = b, a, cb, ca
                c = resolve(ca, cb, p)
                if "clause" in row and frozenset(Literal.parse(t) for t in row["clause"]) != c:
                    raise MalformedProofError(f"step {sid}: clause is not the resolvent of its parents")
                step = ProofStep(sid, c, "resolvent", parents=(a, b), pivot=p)
            steps.append(step)
            by_id[sid] = step
        proof = cls(steps)
        proof.validate()
        return proof


@dataclass
class SatWitness:
    model: dict[str, bool]


@dataclass
class AnnotatedProof:
    proof: ResolutionProof
    annotation: dict[int, Formula]
    style: str
    phi_sig: frozenset = field(default_factory=frozenset)
    psi_sig: frozenset = field(default_factory=frozenset)

    @property
    def separator(self) -> Formula:
        return self.annotation[self.proof.root.id]

    def to_json(self) -> dict:
        data = self.proof.to_json(self.annotation)
        data["style"] = self.style
        return data


def resolve(c1, c2, pivot: str) -> frozenset:
    """Resolvent of ``c1`` (containing ``pivot``) and ``c2`` (containing ``~pivot``)."""
    pos, neg = Literal(pivot, True), Literal(pivot, False)
    if pos not in c1 or neg not in c2:
        raise MalformedProofError(f"cannot resolve {clause_str(c1)} and {clause_str(c2)} upon {pivot}")
    return (c1 - {pos}) | (c2 - {neg})


class _Codec:
    """Clause <-> (pos, neg) bitmask conversion over a fixed atom order."""

    def __init__(self, names: Iterable[str], order: Iterable[str] = ()):
        names = set(names)
        ranked = [a for a in dict.fromkeys(order) if a in names]
        self.names = sorted(names - set(ranked)) + ranked
        self.index = {a: i for i, a in enumerate(self.names)}

    def encode(self, c) -> tuple[int, int]:
        pos = neg = 0
        for l in c:
            if l.positive:
                pos |= 1 << self.index[l.atom]
            else:
                neg |= 1 << self.index[l.atom]
        return pos, neg

    def decode(self, pn) -> frozenset:
        pos, neg = pn
        out = []
        for mask, sign in ((pos, True), (neg, False)):
            while mask:
                low = mask & -mask
                out.append(Literal(self.names[low.bit_length() - 1], sign))
                mask ^= low
        return frozenset(out)


def _model_from_saturation(masks, names) -> dict[str, bool]:
    """Build a model of a set saturated under ordered resolution (no empty clause)."""
    by_max: dict[int, list] = {}
    for pos, neg in masks:
        m = (pos | neg).bit_length() - 1
        if pos >> m & 1:
            by_max.setdefault(m, []).append((pos, neg))
    true = 0
    for m in range(len(names)):
        for pos, neg in by_max.get(m, ()):
            if not (pos & true) and not (neg & ~true):
                true |= 1 << m
                break
    return {a: bool(true >> i & 1) for i, a in enumerate(names)}


def refute_sides(phi_clauses, psi_clauses=(), order: Iterable[str] = ()) -> ResolutionProof | SatWitness:
    """Refute the union of two labelled clause sets.

    Atoms listed in ``order`` rank above all others, lowest first; the rest
    are ordered by name.  Input steps keep their side; a clause present on both sides is labelled
    ``phi``.  Input ids start at 1 in the order given (sorted when sets are
    passed), followed by the resolvents used in the refutation.
    """
    labelled = []
    seen = set()
    for side, cs in ((PHI, phi_clauses), (PSI, psi_clauses)):
        if isinstance(cs, (set, frozenset)):
            from .normal_forms import sorted_clauses
            cs = sorted_clauses(cs)
        for c in cs:
            c = frozenset(c)
            if c in seen or is_tautological(c):
                continue
            seen.add(c)
            labelled.append((c, side))
    names = clauses_sig(c for c, _ in labelled)
    codec = _Codec(names, order)
    masks = [codec.encode(c) for c, _ in labelled]
    unsat, all_masks, derivations = kernels.saturate(masks, limits.current().resolvents)
    if not unsat:
        return SatWitness(_model_from_saturation(all_masks, codec.names))
    steps = [ProofStep(i + 1, c, "input", side=side) for i, (c, side) in enumerate(labelled)]
    nin = len(labelled)
    if not all_masks[-1][0] and not all_masks[-1][1] and len(all_masks) > nin:
        # keep only resolvents the empty clause depends on
        needed = set()
        stack = [len(all_masks) - 1]
        while stack:
            i = stack.pop()
            if i < nin or i in needed:
                continue
            needed.add(i)
            pp, np_, _ = derivations[i - nin]
            stack += [pp, np_]
        new_id = {i: i + 1 for i in range(nin)}
        for i in sorted(needed):
            pp, np_, m = derivations[i - nin]
            new_id[i] = len(steps) + 1
            steps.append(ProofStep(new_id[i], codec.decode(all_masks[i]), "resolvent",
                                   parents=(new_id[pp], new_id[np_]), pivot=codec.names[m]))
    else:
        # the empty clause was an input; move it to the end
        k = next(i for i, s in enumerate(steps) if not s.clause)
        steps.append(steps.pop(k))
    return ResolutionProof(steps)


def refute(clauses) -> ResolutionProof | SatWitness:
    """Resolution refutation of a clause set, or a satisfying valuation."""
    return refute_sides(clauses)


# --- uniform interpolation -------------------------------------------------

@dataclass(frozen=True)
class EliminationStep:
    atom: str
    resolvents: frozenset
    removed: frozenset


def eliminate_atom_traced(clauses, p: str) -> tuple[frozenset, EliminationStep]:
    clauses = [c for c in clauses if not is_tautological(c)]
    pos_l, neg_l = Literal(p, True), Literal(p, False)
    with_pos = [c - {pos_l} for c in clauses if pos_l in c]
    with_neg = [c - {neg_l} for c in clauses if neg_l in c]
    rest = frozenset(c for c in clauses if pos_l not in c and neg_l not in c)
    codec = _Codec(clauses_sig(with_pos) | clauses_sig(with_neg))
    new = kernels.resolve_pivot([codec.encode(c) for c in with_pos], [codec.encode(c) for c in with_neg],
                                limits.current().clauses)
    resolvents = frozenset(codec.decode(m) for m in new)
    result = rest | resolvents
    if len(result) > limits.current().clauses:
        raise ResourceLimitError(f"clause limit {limits.current().clauses} exceeded")
    removed = frozenset(c for c in clauses if pos_l in c or neg_l in c)
    return result, EliminationStep(p, resolvents - rest, removed)


def eliminate_atom(clauses, p: str) -> frozenset:
    """Resolve exhaustively upon ``p`` and drop every clause mentioning ``p``."""
    return eliminate_atom_traced(clauses, p)[0]


def eliminate_atoms(clauses, order: Iterable[str]) -> tuple[frozenset, list[EliminationStep]]:
    trace = []
    cs = frozenset(c for c in clauses if not is_tautological(c))
    for p in order:
        cs, step = eliminate_atom_traced(cs, p)
        trace.append(step)
    return cs, trace


def uniform_resolution_clauses(phi: Formula, keep: Iterable[str], encoding: str = "tseitin",
                               order: Iterable[str] | None = None):
    keep = frozenset(keep)
    extra = keep - sig(phi)
    if extra:
        raise PreconditionError(f"kept atoms {sorted(extra)} do not occur in the formula")
    if encoding == "tseitin":
        clauses, defs = tseitin_cnf(phi, used=sig(phi))
    elif encoding == "cnf":
        clauses, defs = to_cnf(phi), {}
    else:
        raise PreconditionError(f"unknown encoding {encoding!r}")
    if order is None:
        order = list(defs) + sorted(sig(phi) - keep)
    else:
        order = list(order)
        missing = (clauses_sig(clauses) - keep) - set(order)
        order += [a for a in defs if a in missing] + sorted(missing - set(defs))
    return eliminate_atoms(clauses, order)


def uniform_resolution(phi: Formula, keep: Iterable[str], encoding: str = "tseitin",
                       order: Iterable[str] | None = None) -> frozenset:
    """Clause set equivalent to the uniform interpolant of ``phi`` over ``keep``."""
    return uniform_resolution_clauses(phi, keep, encoding, order)[0]


# --- separator annotation --------------------------------------------------

def _sides_sig(proof, phi_clauses, psi_clauses):
    phi_sig = clauses_sig(phi_clauses if phi_clauses is not None else proof.inputs(PHI))
    psi_sig = clauses_sig(psi_clauses if psi_clauses is not None else proof.inputs(PSI))
    return phi_sig, psi_sig


def _annotate(proof: ResolutionProof, phi_clauses, psi_clauses, style: str,
              refine: bool = False) -> AnnotatedProof:
    phi_sig, psi_sig = _sides_sig(proof, phi_clauses, psi_clauses)
    shared = phi_sig & psi_sig

    def restricted(c):
        return disj(l.to_formula() for l in sorted_literals(c) if l.atom in shared)

    ann: dict[int, Formula] = {}
    pure = set()  # steps derived from phi inputs alone
    for s in proof.steps:
        if s.kind == "input":
            if s.side == PSI:
                ann[s.id] = TOP
            elif style == MCMILLAN:
                ann[s.id] = restricted(s.clause)
                pure.add(s.id)
            else:
                ann[s.id] = BOT
            continue
        a, b = s.parents
        p = s.pivot
        in_phi, in_psi = p in phi_sig, p in psi_sig
        if not in_phi and not in_psi:
            raise MalformedProofError(f"step {s.id}: pivot {p!r} occurs in neither input set")
        if refine and a in pure and b in pure:
            pure.add(s.id)
            ann[s.id] = restricted(s.clause)
        elif in_phi and in_psi:
            if style == HUANG:
                v = atom(p)
                ann[s.id] = And(Or(v, ann[a]), Or(Not(v), ann[b]))
            else:
                ann[s.id] = And(ann[a], ann[b])
        elif in_phi:
            ann[s.id] = Or(ann[a], ann[b])
        else:
            ann[s.id] = And(ann[a], ann[b])
    return AnnotatedProof(proof, ann, style, phi_sig, psi_sig)


def annotate_huang(proof: ResolutionProof, phi_clauses=None, psi_clauses=None) -> AnnotatedProof:
    """Annotate every clause with an intermediate separator.

    Inputs from phi get false, inputs from psi get true.  A resolvent upon
    ``p`` with parent annotations ``c1`` (parent holding ``p``) and ``c2``
    gets ``(p | c1) & (~p | c2)`` when ``p`` is shared, ``c1 | c2`` when
    ``p`` is local to phi and ``c1 & c2`` when local to psi.
    """
    return _annotate(proof, phi_clauses, psi_clauses, HUANG)


def annotate_mcmillan(proof: ResolutionProof, phi_clauses=None, psi_clauses=None,
                      refine: bool = True) -> AnnotatedProof:
    """Phi inputs keep their shared literals; shared and psi pivots conjoin, phi pivots disjoin.

    With ``refine`` a resolvent derived from phi inputs alone is annotated
    like an input, with its own shared literals.  That is sound because phi
    entails the clause, and it avoids conjoining ``c | p`` with ``c | ~p``
    when both parents come from phi.  Mixed shared pivots can still produce
    both signs of an atom.
    """
    return _annotate(proof, phi_clauses, psi_clauses, MCMILLAN, refine)


@dataclass
class ResolutionRun:
    phi_clauses: frozenset
    psi_clauses: frozenset
    proof: ResolutionProof
    annotated: AnnotatedProof

    @property
    def raw_separator(self) -> Formula:
        return self.annotated.separator

    @property
    def separator(self) -> Formula:
        return simplify(self.annotated.separator)


def encode_pair(phi: Formula, psi: Formula, encoding: str = "tseitin"):
    """Clause sets for both sides plus the atom order used to refute them.

    ``"tseitin"`` uses definitional atoms prefixed ``l`` and ``r``; they rank
    above the original atoms, innermost lowest, so the top-level definitions
    are resolved away first.  ``"cnf"`` distributes.  ``"auto"`` distributes
    when that stays within four times the Tseitin size.
    """
    if encoding not in ("tseitin", "cnf", "auto"):
        raise PreconditionError(f"unknown encoding {encoding!r}")
    if encoding != "tseitin":
        if encoding == "cnf":
            return to_cnf(phi), to_cnf(psi), ()
        ts = encode_pair(phi, psi, "tseitin")
        try:
            with limits.limits(clauses=max(64, 4 * (len(ts[0]) + len(ts[1])))):
                return to_cnf(phi), to_cnf(psi), ()
        except ResourceLimitError:
            return ts
    used = sig(phi) | sig(psi)
    a, da = tseitin_cnf(phi, prefix="l", used=used)
    b, db = tseitin_cnf(psi, prefix="r", used=used | set(da))
    order = [x for pair in zip(da, db) for x in pair]
    order += list(da)[len(db):] + list(db)[len(da):]
    return a, b, tuple(order)


def run_separator(phi: Formula, psi: Formula, style: str = HUANG, encoding: str | None = None,
                  proof: ResolutionProof | None = None) -> ResolutionRun:
    """Refute ``phi & psi`` and annotate the proof.

    The default encoding is Tseitin for Huang and ``"auto"`` for McMillan,
    whose polarity behaviour is better on clauses that mirror the input.
    """
    if style not in (HUANG, MCMILLAN):
        raise PreconditionError(f"unknown annotation style {style!r}")
    if encoding is None:
        encoding = "auto" if style == MCMILLAN else "tseitin"
    a, b, order = encode_pair(phi, psi, encoding)
    if proof is None:
        res = refute_sides(a, b, order)
        if isinstance(res, SatWitness):
            names = sig(phi) | sig(psi)
            raise SatisfiableError({k: res.model.get(k, False) for k in sorted(names)})
        proof = res
    annotated = _annotate(proof, a, b, style, refine=style == MCMILLAN)
    return ResolutionRun(a, b, proof, annotated)


def separator_resolution(phi: Formula, psi: Formula, style: str = HUANG, encoding: str | None = None,
                         proof: ResolutionProof | None = None) -> Formula:
    """Craig separator for unsatisfiable ``phi & psi`` from an annotated refutation."""
    return run_separator(phi, psi, style, encoding, proof).separator


def interpolant_resolution(phi: Formula, psi: Formula, style: str = HUANG) -> Formula:
    try:
        return separator_resolution(phi, nnf(Not(psi)), style)
    except SatisfiableError as e:
        raise NotEntailedError(e.model) from None


def clauses_formula(cs) -> Formula:
    return cnf_to_formula(cs)
