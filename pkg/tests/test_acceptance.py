"""Exit criteria.  Each test records one PASS/FAIL line for the terminal summary."""
import itertools
import random
import time

import pytest

from propinterp import (
    And, NotDefinableError, Not, Or, conj, dag_size, disj, eliminate, explicit_definition, iff,
    implicitly_definable, implies, interpolant_via_definition, interpolate, is_splitting, nnf,
    parse, sig, simplify, strongest_interpolant, tree_size, uniform_keep_qe, weakest_interpolant,
)
from propinterp import ResourceLimitError, limits
from propinterp.definability import finest_splitting
from propinterp.dnf import drop_atoms_dnf
from propinterp.formula import Exists, atom, is_nnf, polarity_sig
from propinterp.generators import (
    atom_names, entailment_pair, random_cnf, random_formula, random_theory, unsat_pair,
)
from propinterp.normal_forms import (
    clause_set, clauses_sig, cnf_to_formula, dnf_to_formula, is_conservative_extension, to_dnf,
    tseitin_cnf,
)
from propinterp.oracle import (
    check_interpolant, check_lyndon, check_separator, entails,
    enumerate_interpolants, equivalent, is_satisfiable, truth_table,
)
from propinterp.resolution import (
    ResolutionProof, SatWitness, annotate_huang, eliminate_atom, refute, run_separator,
    uniform_resolution, uniform_resolution_clauses,
)
from propinterp.tableau import (
    Lb, Rb, Tableau, TableauWitness, build_biased_tableau, extract_separator, separator_tableau,
)

pytestmark = pytest.mark.acceptance

SEED = 2024


def tt(f, names):
    return truth_table(f, sorted(names))


def summarize(failures, total):
    shown = "; ".join(failures[:3])
    return f"{total - len(failures)}/{total} ok" + (f"; e.g. {shown}" if failures else "")


# --- 1. goldens ---------------------------------------------------------------

WORKED_PROOF = {
    "version": 1,
    "steps": [
        {"id": 1, "kind": "input", "side": "phi", "clause": ["~d", "~e"]},
        {"id": 2, "kind": "input", "side": "phi", "clause": ["~a", "d"]},
        {"id": 3, "kind": "input", "side": "phi", "clause": ["a", "c"]},
        {"id": 4, "kind": "input", "side": "phi", "clause": ["e"]},
        {"id": 5, "kind": "input", "side": "psi", "clause": ["b", "d"]},
        {"id": 6, "kind": "input", "side": "psi", "clause": ["b", "~f"]},
        {"id": 7, "kind": "input", "side": "psi", "clause": ["~c", "d"]},
        {"id": 8, "kind": "input", "side": "psi", "clause": ["~c", "~f"]},
        {"id": 9, "kind": "resolvent", "parents": [3, 7], "pivot": "c"},
        {"id": 10, "kind": "resolvent", "parents": [9, 2], "pivot": "a"},
        {"id": 11, "kind": "resolvent", "parents": [10, 1], "pivot": "d"},
        {"id": 12, "kind": "resolvent", "parents": [4, 11], "pivot": "e"},
    ],
}


def _golden_interpolant_unique():
    phi, psi = parse("p & q1"), parse("q2 -> p")
    got = {tt(interpolate(phi, psi, m), {"p"}) for m in
           ("qe", "dnf", "resolution", "resolution-mcmillan", "tableau", "definition")}
    return got == {tt(parse("p"), {"p"})} and enumerate_interpolants(phi, psi) == got


def _golden_lattice():
    phi, psi = parse("p & q & r"), parse("s -> (p | q)")
    want = {tt(parse(t), "pq") for t in ("p & q", "p", "q", "p | q")}
    return (enumerate_interpolants(phi, psi) == want
            and equivalent(strongest_interpolant(phi, psi), parse("p & q"))
            and equivalent(weakest_interpolant(phi, psi), parse("p | q")))


def _golden_eliminate():
    return equivalent(eliminate(parse("exists q. (p -> q) & (q -> r)")), parse("p -> r"))


def _golden_uniform_resolution():
    phi = parse("~(d & e) & (a -> d) & (a | c) & e")
    ok = equivalent(cnf_to_formula(uniform_resolution(phi, {"c", "e"})), parse("e & c"))
    _, trace = uniform_resolution_clauses(phi, {"c", "e"}, encoding="cnf", order=["d", "a"])
    return (ok and trace[0].resolvents == clause_set(["~a", "~e"])
            and trace[1].resolvents == clause_set(["c", "~e"]))


def _golden_proof_replay():
    ann = annotate_huang(ResolutionProof.from_json(WORKED_PROOF))
    return simplify(ann.separator) is parse("c & ~d")


def _golden_tableaux():
    ok = extract_separator(build_biased_tableau(parse("(p & q) & r"), parse("(~p | ~q) & ~s"))) is parse("p & q")
    phi = parse("d & (~d | a & (b | c))")
    psi = parse("b & (~b | ~a & ~e) | ~b & ~c")
    schedule = [Lb(phi), Lb(parse("~d | a & (b | c)")), Lb(parse("a & (b | c)")), Rb(psi),
                Rb(parse("b & (~b | ~a & ~e)")), Rb(parse("~b | ~a & ~e")), Rb(parse("~a & ~e")),
                Rb(parse("~b & ~c")), Lb(parse("b | c"))]
    raw = extract_separator(build_biased_tableau(phi, psi, schedule))
    ok = ok and raw is parse("false | ((true & a) & (b | c))")
    ok = ok and separator_tableau(phi, psi, schedule) is parse("a & (b | c)")
    phi, psi = parse("a & (b & c)"), parse("(~a & ~d) & (~b & ~d)")
    ok = ok and separator_tableau(phi, psi, [Lb(phi), Rb(psi), Rb(parse("~a & ~d"))]) is parse("a")
    second = [Lb(phi), Rb(psi), Rb(parse("~b & ~d")), Lb(parse("b & c"))]
    return ok and separator_tableau(phi, psi, second) is parse("b")


def _golden_definitions():
    cases = [("p <-> q", {"q"}, "q"),
             ("(p -> (q & r)) & ((q & s) -> p) & (r -> s)", {"q", "r"}, "q & r"),
             ("p", set(), "true")]
    return all(equivalent(explicit_definition(parse(t), s, "p"), parse(w)) for t, s, w in cases)


GOLDENS = [
    ("unique interpolant p of p&q1, q2->p", _golden_interpolant_unique),
    ("interpolant lattice {p&q, p, q, p|q} with strongest and weakest", _golden_lattice),
    ("quantifier elimination of exists q.(p->q)&(q->r)", _golden_eliminate),
    ("uniform resolution keeps e&c, trace clauses ~a|~e then c|~e", _golden_uniform_resolution),
    ("replayed refutation annotates to c&~d", _golden_proof_replay),
    ("tableau extraction goldens (p&q, scripted a&(b|c), a and b)", _golden_tableaux),
    ("explicit definitions q, q&r, true", _golden_definitions),
]


@pytest.mark.parametrize("name, fn", GOLDENS, ids=[g[0] for g in GOLDENS])
def test_golden(acceptance, name, fn):
    t0 = time.perf_counter()
    ok = bool(fn())
    dt = time.perf_counter() - t0
    acceptance.record(f"1 golden: {name}", ok and dt < 1.0, f"{dt * 1000:.0f} ms")
    assert ok and dt < 1.0


# --- 2. cross-engine agreement -------------------------------------------------

METHODS = ("qe", "dnf", "resolution", "resolution-mcmillan", "tableau", "definition")
LYNDON = {"dnf", "resolution-mcmillan", "tableau"}


@pytest.fixture(scope="module")
def cross_engine_runs():
    rng = random.Random(SEED)
    pairs = [entailment_pair(rng, n_atoms=8, depth=5) for _ in range(500)]
    t0 = time.perf_counter()
    results = []
    for phi, psi in pairs:
        results.append({m: interpolate(phi, psi, m) for m in METHODS})
    return pairs, results, time.perf_counter() - t0


def test_cross_engine_interpolants(acceptance, cross_engine_runs):
    pairs, results, elapsed = cross_engine_runs
    failures = []
    for k, ((phi, psi), res) in enumerate(zip(pairs, results)):
        for m, chi in res.items():
            if not check_interpolant(phi, psi, chi):
                failures.append(f"#{k} {m} not an interpolant")
            elif m in LYNDON and not check_lyndon(phi, psi, chi):
                failures.append(f"#{k} {m} not Lyndon")
    ok = not failures and elapsed < 60
    acceptance.record("2 cross-engine interpolants, 500 pairs, Lyndon for dnf/mcmillan/tableau", ok,
                      summarize(failures, len(pairs)) + f", engines {elapsed:.1f} s")
    assert not failures, failures[:5]
    assert elapsed < 60


def test_uniform_agreement(acceptance):
    rng = random.Random(SEED + 1)
    failures = []
    for k in range(300):
        names = atom_names(rng.randint(3, 8))
        phi = random_formula(rng, names, rng.randint(2, 5))
        s = sorted(sig(phi))
        keep = set(rng.sample(s, rng.randint(0, len(s))))
        ref = uniform_keep_qe(phi, keep)
        want = tt(ref, keep)
        ds = to_dnf(phi)
        dropped = dnf_to_formula(drop_atoms_dnf(ds, keep & clauses_sig(ds)))
        resolved = cnf_to_formula(uniform_resolution(phi, keep))
        if tt(dropped, keep) != want:
            failures.append(f"#{k} dnf")
        if tt(resolved, keep) != want:
            failures.append(f"#{k} resolution")
        # partners share exactly the kept atoms with phi
        fresh = [f"z{i}" for i in range(3)]
        pad = [And(atom(a), Not(atom(a))) for a in sorted(keep)]
        for _ in range(50):
            beta = random_formula(rng, sorted(keep) + fresh, 3)
            psi = disj([ref, beta] + pad)
            if not entails(phi, psi):
                failures.append(f"#{k} partner not entailed")
                break
            if tt(strongest_interpolant(phi, psi), keep) != want:
                failures.append(f"#{k} strongest differs")
                break
    acceptance.record("2 uniform: qe = dnf dropping = resolution = strongest, 300 x 50",
                      not failures, summarize(failures, 300))
    assert not failures, failures[:5]


# --- 3. size bounds --------------------------------------------------------------

def test_resolution_separator_size(acceptance):
    rng = random.Random(SEED + 2)
    failures, worst = [], 0.0
    for k in range(300):
        phi, psi = unsat_pair(rng, n_atoms=8, depth=5)
        for style in ("huang", "mcmillan"):
            run = run_separator(phi, psi, style)
            steps = run.proof.resolvent_count
            size = dag_size(run.separator)
            worst = max(worst, size / max(1, steps))
            if size > 5 * max(1, steps):
                failures.append(f"#{k} {style} {size} > 5*{steps}")
            if style == "huang" and dag_size(run.raw_separator) > 5 * steps + 2:
                failures.append(f"#{k} raw huang {dag_size(run.raw_separator)} for {steps} steps")
    acceptance.record("3 resolution separators within 5 x resolvent steps", not failures,
                      summarize(failures, 300) + f", worst ratio {worst:.2f}")
    assert not failures, failures[:5]


def test_tableau_separator_size(acceptance):
    rng = random.Random(SEED + 3)
    failures = []
    for k in range(300):
        phi, psi = unsat_pair(rng, n_atoms=8, depth=5)
        t = build_biased_tableau(phi, psi)
        raw = extract_separator(t)
        if dag_size(raw) > t.size:
            failures.append(f"#{k} {dag_size(raw)} > {t.size} nodes")
        if not is_nnf(raw) or not is_nnf(separator_tableau(phi, psi)):
            failures.append(f"#{k} not NNF")
    acceptance.record("3 tableau separator within node count and in NNF", not failures,
                      summarize(failures, 300))
    assert not failures, failures[:5]


def test_formula_size_bounds(acceptance):
    rng = random.Random(SEED + 4)
    failures = []
    for k in range(1000):
        f = random_formula(rng, atom_names(rng.randint(1, 8)), rng.randint(1, 6), constants=k % 3 == 0)
        if tree_size(f) < dag_size(f):
            failures.append(f"#{k} tree < dag")
        clauses, _ = tseitin_cnf(f)
        if len(clauses) > 3 * dag_size(f) + 1:
            failures.append(f"#{k} tseitin {len(clauses)} clauses for dag {dag_size(f)}")
    acceptance.record("3 tree >= dag and Tseitin clauses <= 3 dag + 1 on 1000 formulas",
                      not failures, summarize(failures, 1000))
    assert not failures, failures[:5]


# --- 4. theorem-level properties ------------------------------------------------

def test_single_atom_elimination(acceptance):
    rng = random.Random(SEED + 5)
    failures = []
    for k in range(300):
        names = atom_names(rng.randint(2, 8))
        cs = random_cnf(rng, names, rng.randint(1, 12))
        p = rng.choice(sorted(clauses_sig(cs)))
        f = cnf_to_formula(cs)
        rest = sig(f) - {p}
        if tt(cnf_to_formula(eliminate_atom(cs, p)), rest) != tt(eliminate(Exists(p, f)), rest):
            failures.append(f"#{k} eliminating {p}")
    acceptance.record("4 resolving upon p equals exists p, 300 CNFs", not failures, summarize(failures, 300))
    assert not failures, failures[:5]


def test_intermediate_separators(acceptance):
    rng = random.Random(SEED + 6)
    failures, checked, runs = [], 0, {"cnf": 0, "tseitin": 0}
    for k in range(400):
        encoding = ("cnf", "tseitin")[k % 2]
        left, right = unsat_pair(rng, n_atoms=6, depth=3)
        run = run_separator(left, right, "huang", encoding=encoding)
        if len(clauses_sig(run.phi_clauses) | clauses_sig(run.psi_clauses)) > 16:
            continue  # Tseitin atoms would push the check past truth-table scale
        runs[encoding] += 1
        phi, psi = cnf_to_formula(run.phi_clauses), cnf_to_formula(run.psi_clauses)
        for s in run.proof.steps:
            theta = cnf_to_formula([s.clause])
            chi = run.annotated.annotation[s.id]
            checked += 1
            if not (entails(phi, Or(theta, chi)) and entails(psi, Or(theta, Not(chi)))):
                failures.append(f"#{k} {encoding} step {s.id}")
    ok = not failures and min(runs.values()) >= 50
    acceptance.record("4 every Huang annotation is an intermediate separator", ok,
                      summarize(failures, checked) + f" steps; runs {runs}")
    assert ok, (failures[:5], runs)


def test_dnf_dropping_is_projection(acceptance):
    rng = random.Random(SEED + 7)
    failures = []
    for k in range(300):
        phi = random_formula(rng, atom_names(rng.randint(2, 7)), rng.randint(1, 5))
        s = sorted(sig(phi))
        keep = set(rng.sample(s, rng.randint(0, len(s))))
        ds = to_dnf(phi)
        got = dnf_to_formula(drop_atoms_dnf(ds, keep & clauses_sig(ds)))
        if tt(got, keep) != tt(uniform_keep_qe(phi, keep), keep):
            failures.append(f"#{k}")
    acceptance.record("4 literal dropping on DNF equals projection, 300 formulas", not failures,
                      summarize(failures, 300))
    assert not failures, failures[:5]


def test_conservative_extensions(acceptance):
    rng = random.Random(SEED + 8)
    failures = []
    for k in range(150):
        phi, psi = unsat_pair(rng, n_atoms=6, depth=3)
        ext = cnf_to_formula(tseitin_cnf(phi, prefix="u")[0])
        if not is_conservative_extension(ext, phi):
            failures.append(f"#{k} not conservative")
            continue
        keep = set(sorted(sig(phi))[::2])
        if tt(uniform_keep_qe(ext, keep), keep) != tt(uniform_keep_qe(phi, keep), keep):
            failures.append(f"#{k} uniform interpolant changed")
        # a separator for the extension separates the original pair
        chi = separator_tableau(ext, psi)
        if not check_separator(phi, psi, chi):
            failures.append(f"#{k} separator lost")
    acceptance.record("4 conservative extensions keep uniform interpolants and separators", not failures,
                      summarize(failures, 150))
    assert not failures, failures[:5]


def _separates(left, right, chi):
    if not entails(conj(left), chi) or is_satisfiable(And(chi, conj(right))):
        return False
    pol_l = frozenset().union(*(polarity_sig(f) for f in left)) if left else frozenset()
    pol_r = frozenset().union(*(polarity_sig(nnf(Not(f))) for f in right)) if right else frozenset()
    return polarity_sig(chi) <= pol_l & pol_r


def test_tableau_node_separation(acceptance):
    # every annotated node separates the L and R labels on its branch
    rng = random.Random(SEED + 9)
    failures, checked = [], 0
    built = dict.fromkeys(("relevant", "closing", "fifo"), 0)
    skipped = dict(built)
    for k in range(150):
        strategy = ("relevant", "closing", "fifo")[k % 3]
        phi, psi = unsat_pair(rng, n_atoms=6, depth=4)
        try:
            with limits.limits(tableau_nodes=3000):
                t = build_biased_tableau(phi, psi, strategy=strategy)
        except ResourceLimitError:
            skipped[strategy] += 1
            continue
        built[strategy] += 1
        doc = t.to_json()
        rows = {r["id"]: r for r in doc["nodes"]}
        parent = {c: r["id"] for r in rows.values() for c in r["children"]}
        for nid, row in rows.items():
            if nid == doc["root"]:
                continue  # the initial branch is L(phi), R(psi); its second node covers it
            path, cur = [], nid
            while cur is not None:
                path.append(rows[cur])
                cur = parent.get(cur)
            left = [parse(r["formula"]) for r in path if r["side"] == "L"]
            right = [parse(r["formula"]) for r in path if r["side"] == "R"]
            checked += 1
            if not _separates(left, right, parse(row["annotation"])):
                failures.append(f"#{k} node {nid}")
    ok = not failures and min(built.values()) >= 30
    acceptance.record("4 tableau node annotations separate their branches", ok,
                      summarize(failures, checked) + f" nodes; built {built}, over node cap {skipped}")
    assert ok, (failures[:5], built)


def test_interpolants_closed_under_and_or(acceptance):
    rng = random.Random(SEED + 10)
    failures, checked = [], 0
    for k in range(200):
        phi, psi = entailment_pair(rng, n_atoms=6, depth=4)
        if len(sig(phi) & sig(psi)) > 3:
            continue
        fs = enumerate_interpolants(phi, psi)
        checked += 1
        if not fs or any(a & b not in fs or a | b not in fs for a in fs for b in fs):
            failures.append(f"#{k}")
    acceptance.record("4 interpolants closed under conjunction and disjunction", not failures,
                      summarize(failures, checked))
    assert not failures and checked >= 100


def _definability_instance(rng):
    names = atom_names(5)
    phi = random_formula(rng, names, 4)
    if rng.random() < 0.5:
        # force definability of p0 by adding a definition over other atoms
        body = random_formula(rng, names[1:], 2)
        phi = And(phi, iff(atom("p0"), body))
    sigma = {a for a in sorted(sig(phi) - {"p0"}) if rng.random() < 0.7}
    return phi, sigma


def test_beth_definability(acceptance):
    rng = random.Random(SEED + 11)
    failures, definable = [], 0
    for k in range(150):
        phi, sigma = _definability_instance(rng)
        if "p0" not in sig(phi):
            continue
        if not implicitly_definable(phi, sigma, "p0"):
            try:
                explicit_definition(phi, sigma, "p0")
                failures.append(f"#{k} undefinable yet defined")
            except NotDefinableError:
                pass
            continue
        definable += 1
        for engine in ("qe", "dnf", "resolution", "resolution-mcmillan", "tableau"):
            d = explicit_definition(phi, sigma, "p0", engine)
            if not sig(d) <= sigma or not entails(phi, iff(atom("p0"), d)):
                failures.append(f"#{k} {engine}")
    acceptance.record("4 implicit definability yields explicit definitions with every engine",
                      not failures and definable >= 30, summarize(failures, definable))
    assert not failures and definable >= 30


def test_interpolation_definability_correspondence(acceptance):
    rng = random.Random(SEED + 12)
    failures = []
    for k in range(150):
        phi, psi = entailment_pair(rng, n_atoms=6, depth=4)
        shared = sig(phi) & sig(psi)
        chi = interpolant_via_definition(phi, psi)
        if not check_interpolant(phi, psi, chi):
            failures.append(f"#{k} via definition")
        theory = implies(psi, phi)
        for m in ("qe", "dnf", "resolution", "tableau"):
            d = interpolate(phi, psi, m)
            # an interpolant defines psi under psi -> phi over the shared atoms
            if not sig(d) <= shared or not entails(theory, iff(psi, d)):
                failures.append(f"#{k} {m} is not a definition")
    acceptance.record("4 interpolants and definitions correspond in both directions", not failures,
                      summarize(failures, 150))
    assert not failures, failures[:5]


def _partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [part[i] | {first}] + part[i + 1:]
        yield part + [frozenset({first})]


def _meet(p1, p2):
    return [a & b for a in p1 for b in p2 if a & b]


def _key(partition):
    return tuple(sorted(tuple(sorted(b)) for b in partition))


CORPUS_SEED = SEED + 13


@pytest.fixture(scope="module")
def theory_corpus():
    rng = random.Random(CORPUS_SEED)
    corpus = []
    while len(corpus) < 50:
        T = random_theory(rng, n_atoms=rng.randint(2, 5))
        if sig(conj(T)):
            corpus.append(T)
    return corpus


@pytest.fixture(scope="module")
def splitting_table(theory_corpus):
    out = []
    for T in theory_corpus:
        names = sorted(sig(conj(T)))
        out.append([p for p in _partitions(names) if is_splitting(T, p)[0]])
    return out


def test_splitting_meet(acceptance, theory_corpus, splitting_table):
    failures, pairs = [], 0
    for k, (T, splits) in enumerate(zip(theory_corpus, splitting_table)):
        keys = {_key(p) for p in splits}
        for p1, p2 in itertools.combinations(splits, 2):
            pairs += 1
            if _key(_meet(p1, p2)) not in keys:
                failures.append(f"theory {k}")
                break
    acceptance.record("4 meet of two splittings is a splitting", not failures,
                      f"{pairs} pairs over {len(theory_corpus)} theories; " + summarize(failures, len(theory_corpus)))
    assert not failures


def test_finest_splitting_exhaustive(acceptance, theory_corpus, splitting_table):
    failures = []
    for k, (T, splits) in enumerate(zip(theory_corpus, splitting_table)):
        # the finest splitting refines every splitting
        finest = [p for p in splits if all(any(b <= c for c in q) for q in splits for b in p)]
        got = finest_splitting(T)
        if len(finest) != 1 or _key(finest[0]) != _key(got.partition):
            failures.append(f"theory {k}")
        elif not equivalent(conj(got.axioms), conj(T)):
            failures.append(f"theory {k} axioms")
    acceptance.record("4 finest splitting matches exhaustive enumeration, 50 theories", not failures,
                      summarize(failures, len(theory_corpus)))
    assert not failures, failures[:5]


# --- 5. refutation engines decide satisfiability ---------------------------------

def test_refutation_engines_decide(acceptance):
    rng = random.Random(SEED + 14)
    failures, n_sat = [], 0
    for k in range(500):
        names = atom_names(rng.randint(2, 8))
        cs = random_cnf(rng, names, rng.randint(1, 24))
        f = cnf_to_formula(cs)
        sat = is_satisfiable(f)
        n_sat += sat
        res = refute(cs)
        if isinstance(res, SatWitness):
            if not sat or not all(any(res.model.get(l.atom, False) == l.positive for l in c) for c in cs):
                failures.append(f"#{k} refute witness")
        else:
            res.validate()
            if sat:
                failures.append(f"#{k} refuted a satisfiable set")
        ordered = sorted(cs, key=sorted)
        half = len(ordered) // 2
        phi, psi = cnf_to_formula(ordered[:half]), cnf_to_formula(ordered[half:])
        t = build_biased_tableau(phi, psi)
        if isinstance(t, TableauWitness):
            m = t.model
            if not sat or not all(any(m.get(l.atom, False) == l.positive for l in c) for c in cs):
                failures.append(f"#{k} tableau witness")
        elif not isinstance(t, Tableau) or not t.closed or sat:
            failures.append(f"#{k} tableau closed on a satisfiable set")
    acceptance.record("5 refute and tableau agree with the oracle on 500 CNFs", not failures,
                      summarize(failures, 500) + f", {n_sat} satisfiable")
    assert not failures, failures[:5]
