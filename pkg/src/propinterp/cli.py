"""Command-line front end.

Exit codes: 0 success, 1 a semantic "no" (not entailed, not definable, check
failed), 2 malformed input, 3 a resource guard was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import decide, limits, oracle
from .engines import INTERPOLANT_METHODS, UNIFORM_METHODS, interpolate, uniform
from .errors import (
    NotDefinableError, NotEntailedError, ParseError, PreconditionError, ResourceLimitError,
    SatisfiableError,
)
from .formula import Formula, Not, dag_size, is_nnf, nnf, polarity_sig, sig, to_text, tree_size
from .normal_forms import cnf_to_formula, read_dimacs, write_dimacs
from .parser import parse, parse_atoms
from .qbf import simplify

OK, NO, BAD_INPUT, RESOURCE = 0, 1, 2, 3


def _read(arg: str) -> str:
    if arg.startswith("@"):
        try:
            return Path(arg[1:]).read_text()
        except OSError as e:
            raise ParseError(f"cannot read {arg[1:]}: {e.strerror}") from None
    return arg


def _formula(arg: str, dimacs: bool = False) -> Formula:
    text = _read(arg)
    if dimacs:
        return cnf_to_formula(read_dimacs(text))
    return parse(text)


def _model_text(model: dict) -> str:
    return " ".join(f"{a}={int(v)}" for a, v in sorted(model.items()))


class _Out:
    def __init__(self, args):
        self.json = args.format == "json"
        self.trace_path = getattr(args, "trace", None)

    def emit(self, text_lines, payload):
        if self.json:
            print(json.dumps({"version": 1, **payload}, sort_keys=True))
        else:
            for line in text_lines:
                print(line)

    def trace(self, data):
        if self.trace_path and data is not None:
            data = {"version": 1, **data}
            Path(self.trace_path).write_text(json.dumps(data, indent=2) + "\n")


def _interpolate_traced(phi, psi, method):
    """Interpolant plus a JSON-ready account of how it was obtained."""
    if method in ("resolution", "resolution-mcmillan"):
        from .resolution import run_separator
        try:
            run = run_separator(phi, nnf(Not(psi)), "mcmillan" if method.endswith("mcmillan") else "huang")
        except SatisfiableError as e:
            raise NotEntailedError(e.model) from None
        trace = run.annotated.to_json()
        trace.pop("version")
        return run.separator, {"method": method, "proof": trace}, {
            "resolvents": run.proof.resolvent_count,
            "separator_dag_size": dag_size(run.raw_separator),
        }
    if method == "tableau":
        from .tableau import TableauWitness, build_biased_tableau, extract_separator
        from .qbf import simplify_constants
        t = build_biased_tableau(phi, nnf(Not(psi)))
        if isinstance(t, TableauWitness):
            raise NotEntailedError(t.model)
        raw = extract_separator(t)
        trace = t.to_json()
        trace.pop("version")
        return simplify_constants(raw), {"method": method, "tableau": trace}, {
            "tableau_nodes": t.size,
            "separator_dag_size": dag_size(raw),
            "separator_is_nnf": is_nnf(raw),
        }
    if method == "qe":
        from .qbf import expand_exists, simplify_constants
        decide.require_entailment(phi, psi)
        steps, cur = [], simplify_constants(phi)
        for a in sorted(sig(phi) - sig(psi)):
            cur = expand_exists(cur, a)
            steps.append({"eliminate": a, "result": to_text(cur)})
        return cur, {"method": method, "steps": steps}, {}
    if method == "dnf":
        from .dnf import choose_pairs, dnf_separator
        from .normal_forms import to_dnf
        left, right = to_dnf(phi), to_dnf(nnf(Not(psi)))
        try:
            lc, rc, pairs = choose_pairs(left, right)
        except SatisfiableError as e:
            raise NotEntailedError(e.model) from None
        pairs_json = [{"left": p.left, "right": p.right, "literal": str(p.literal)} for p in pairs]
        return dnf_separator(left, right), {
            "method": method,
            "left": [" & ".join(map(str, sorted(c))) or "true" for c in lc],
            "right": [" & ".join(map(str, sorted(c))) or "true" for c in rc],
            "pairs": pairs_json,
        }, {}
    return interpolate(phi, psi, method), None, {}


def cmd_interpolate(args, out: _Out) -> int:
    phi, psi = _formula(args.phi, args.dimacs), _formula(args.psi, args.dimacs)
    try:
        chi, trace, _ = _interpolate_traced(phi, psi, args.method)
    except NotEntailedError as e:
        out.emit([f"not entailed; countermodel: {_model_text(e.model)}"],
                 {"status": "not-entailed", "countermodel": e.model})
        return NO
    chi = simplify(chi)
    out.trace(trace)
    out.emit([to_text(chi)], {"status": "ok", "method": args.method, "interpolant": to_text(chi)})
    return OK


def cmd_uniform(args, out: _Out) -> int:
    phi = _formula(args.phi, args.dimacs)
    if args.keep is not None:
        keep = parse_atoms(args.keep)
    else:
        keep = sig(phi) - parse_atoms(args.forget)
    keep = frozenset(keep)
    if args.method == "resolution":
        from .normal_forms import clause_str
        from .resolution import uniform_resolution_clauses
        clauses, steps = uniform_resolution_clauses(phi, keep, encoding="cnf" if args.dimacs else "tseitin")
        out.trace({"method": "resolution", "steps": [
            {"eliminate": s.atom, "resolvents": [clause_str(c) for c in sorted(s.resolvents, key=sorted)],
             "removed": len(s.removed)} for s in steps]})
        if args.dimacs and not out.json:
            sys.stdout.write(write_dimacs(clauses))
            return OK
        chi = cnf_to_formula(clauses)
    else:
        chi = uniform(phi, keep, args.method)
    chi = simplify(chi)
    out.emit([to_text(chi)], {"status": "ok", "method": args.method, "keep": sorted(keep),
                              "uniform_interpolant": to_text(chi)})
    return OK


def cmd_define(args, out: _Out) -> int:
    from .definability import explicit_definition
    phi = _formula(args.phi)
    sigma = parse_atoms(args.sigma) if args.sigma else frozenset()
    try:
        d = explicit_definition(phi, sigma, args.atom, args.method)
    except NotDefinableError as e:
        out.emit([f"not definable; models: {_model_text(e.model1)} / {_model_text(e.model2)}"],
                 {"status": "not-definable", "model1": e.model1, "model2": e.model2})
        return NO
    d = simplify(d)
    out.trace({"method": args.method, "atom": args.atom, "sigma": sorted(sigma),
               "theory": to_text(phi), "definition": to_text(d)})
    out.emit([to_text(d)], {"status": "ok", "atom": args.atom, "sigma": sorted(sigma),
                            "definition": to_text(d)})
    return OK


def cmd_split(args, out: _Out) -> int:
    from .definability import finest_splitting
    theory = [_formula(a) for a in args.formulas]
    s = finest_splitting(theory)
    blocks = [(sorted(b), to_text(simplify(ax))) for b, ax in zip(s.partition, s.axioms)]
    out.trace({"theory": [to_text(f) for f in theory],
               "blocks": [{"atoms": b, "axiom": ax} for b, ax in blocks]})
    out.emit([f"{{{','.join(b)}}} : {ax}" for b, ax in blocks],
             {"status": "ok", "blocks": [{"atoms": b, "axiom": ax} for b, ax in blocks]})
    return OK


def _check_trace(phi, psi, chi, separator: bool) -> dict:
    """Which side conditions hold, with a countermodel for each failed entailment."""
    target = nnf(Not(psi)) if separator else psi
    left, right = oracle.countermodel(phi, chi), oracle.countermodel(chi, target)
    return {
        "signature_ok": sig(chi) <= sig(phi) & sig(psi),
        "left_entails": left is None,
        "left_countermodel": left,
        "right_entails": right is None,
        "right_countermodel": right,
        "polarities": {"chi": sorted(map(list, polarity_sig(chi))),
                       "phi": sorted(map(list, polarity_sig(phi))),
                       "psi": sorted(map(list, polarity_sig(psi)))},
    }


def cmd_check(args, out: _Out) -> int:
    phi, psi, chi = _formula(args.phi), _formula(args.psi), _formula(args.chi)
    if args.separator:
        ok = oracle.check_lyndon_separator(phi, psi, chi) if args.lyndon else oracle.check_separator(phi, psi, chi)
        kind = "separator"
    else:
        ok = oracle.check_lyndon(phi, psi, chi) if args.lyndon else oracle.check_interpolant(phi, psi, chi)
        kind = "interpolant"
    if args.lyndon:
        kind = "Lyndon " + kind
    out.trace(_check_trace(phi, psi, chi, args.separator))
    out.emit([f"valid {kind}" if ok else f"not a valid {kind}"], {"status": "ok" if ok else "invalid", "kind": kind})
    return OK if ok else NO


def cmd_stats(args, out: _Out) -> int:
    phi = _formula(args.phi)
    lines = [f"dag_size: {dag_size(phi)}", f"tree_size: {tree_size(phi)}", f"atoms: {len(sig(phi))}"]
    payload = {"status": "ok", "dag_size": dag_size(phi), "tree_size": tree_size(phi), "atoms": len(sig(phi))}
    if args.psi is not None:
        psi = _formula(args.psi)
        try:
            for method in ("resolution", "resolution-mcmillan", "tableau"):
                _, _, info = _interpolate_traced(phi, psi, method)
                payload[method] = info
                if "resolvents" in info:
                    bound = 5 * info["resolvents"]
                    lines.append(f"{method}: {info['resolvents']} resolvents, separator dag_size "
                                 f"{info['separator_dag_size']} (bound {bound})")
                else:
                    lines.append(f"{method}: {info['tableau_nodes']} nodes, separator dag_size "
                                 f"{info['separator_dag_size']} (bound {info['tableau_nodes']})")
        except NotEntailedError as e:
            out.emit(lines + [f"not entailed; countermodel: {_model_text(e.model)}"],
                     {**payload, "status": "not-entailed", "countermodel": e.model})
            return NO
    out.trace({k: v for k, v in payload.items() if k != "status"})
    out.emit(lines, payload)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="propinterp", description="Propositional interpolation toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trace", metavar="PATH", help="write a JSON proof/tableau/elimination trace")
    common.add_argument("--limit-oracle", type=int, metavar="N", help="truth-table atom cap")
    common.add_argument("--limit-resolvents", type=int, metavar="N")
    common.add_argument("--limit-nodes", type=int, metavar="N", help="tableau node cap")
    common.add_argument("--limit-clauses", type=int, metavar="N")
    common.add_argument("--limit-expansion", type=int, metavar="N", help="quantifier expansion node cap")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("interpolate", parents=[common], help="Craig interpolant for PHI |= PSI")
    s.add_argument("--method", choices=INTERPOLANT_METHODS, default="qe")
    s.add_argument("--dimacs", action="store_true", help="inputs are DIMACS CNF")
    s.add_argument("phi")
    s.add_argument("psi")
    s.set_defaults(func=cmd_interpolate)

    s = sub.add_parser("uniform", parents=[common], help="uniform interpolant (forgetting)")
    s.add_argument("--method", choices=UNIFORM_METHODS, default="qe")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--keep", help="comma-separated atoms to keep")
    g.add_argument("--forget", help="comma-separated atoms to forget")
    s.add_argument("--dimacs", action="store_true", help="input is DIMACS CNF; resolution output too")
    s.add_argument("phi")
    s.set_defaults(func=cmd_uniform)

    s = sub.add_parser("define", parents=[common], help="explicit definition of an atom")
    s.add_argument("--method", choices=[m for m in INTERPOLANT_METHODS if m != "definition"], default="qe")
    s.add_argument("--sigma", default="", help="comma-separated defining atoms")
    s.add_argument("--atom", required=True)
    s.add_argument("phi")
    s.set_defaults(func=cmd_define)

    s = sub.add_parser("split", parents=[common], help="finest splitting of a theory")
    s.add_argument("formulas", nargs="+")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("check", parents=[common], help="verify a candidate interpolant or separator")
    s.add_argument("--separator", action="store_true", help="check a separator instead")
    s.add_argument("--lyndon", action="store_true", help="also require polarity containment")
    s.add_argument("phi")
    s.add_argument("psi")
    s.add_argument("chi")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("stats", parents=[common], help="sizes, proof and tableau measurements")
    s.add_argument("phi")
    s.add_argument("psi", nargs="?")
    s.set_defaults(func=cmd_stats)
    return p


def _limit_overrides(args) -> dict:
    names = {"limit_oracle": "oracle_atoms", "limit_resolvents": "resolvents", "limit_nodes": "tableau_nodes",
             "limit_clauses": "clauses", "limit_expansion": "expansion_nodes"}
    return {field: getattr(args, flag) for flag, field in names.items() if getattr(args, flag, None) is not None}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args)
    try:
        with limits.limits(**_limit_overrides(args)):
            return args.func(args, out)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return RESOURCE


if __name__ == "__main__":
    sys.exit(main())
