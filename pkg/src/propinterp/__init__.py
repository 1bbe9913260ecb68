"""Craig, Lyndon and uniform interpolation for propositional logic.

Four independent constructions (quantifier elimination, DNF literal
dropping, annotated resolution refutations and biased tableaux) share one
formula representation and are checked against a truth-table oracle.
"""
from .errors import (
    EvaluationError, InterpError, MalformedProofError, NotDefinableError, NotEntailedError,
    ParseError, PreconditionError, ResourceLimitError, SatisfiableError,
)
from .formula import (
    BOT, TOP, And, Atom, Bottom, Exists, Formula, Not, Or, Top, atom, atoms, conj, dag_size,
    disj, evaluate, forall, iff, implies, nnf, polarity_sig, rename_fresh, sig, substitute,
    to_text, tree_size,
)
from .parser import parse, parse_atoms
from .engines import INTERPOLANT_METHODS, UNIFORM_METHODS, interpolate, separate, uniform
from .qbf import (
    eliminate, qbf_eval, simplify, simplify_constants, strongest_interpolant, uniform_keep_qe,
    weakest_interpolant,
)
from .normal_forms import Literal, to_cnf, to_dnf, tseitin_cnf
from .definability import (
    explicit_definition, finest_splitting, implicitly_definable, interpolant_via_definition,
    is_splitting, parallel_interpolants,
)

__version__ = "0.1.0"

__all__ = [
    "EvaluationError", "InterpError", "MalformedProofError", "NotDefinableError", "NotEntailedError",
    "ParseError", "PreconditionError", "ResourceLimitError", "SatisfiableError",
    "BOT", "TOP", "And", "Atom", "Bottom", "Exists", "Formula", "Not", "Or", "Top", "atom", "atoms",
    "conj", "dag_size", "disj", "evaluate", "forall", "iff", "implies", "nnf", "polarity_sig",
    "rename_fresh", "sig", "substitute", "to_text", "tree_size",
    "parse", "parse_atoms",
    "INTERPOLANT_METHODS", "UNIFORM_METHODS", "interpolate", "separate", "uniform",
    "eliminate", "qbf_eval", "simplify", "simplify_constants", "strongest_interpolant",
    "uniform_keep_qe", "weakest_interpolant",
    "Literal", "to_cnf", "to_dnf", "tseitin_cnf",
    "explicit_definition", "finest_splitting", "implicitly_definable", "interpolant_via_definition",
    "is_splitting", "parallel_interpolants",
]
