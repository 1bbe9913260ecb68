"""Compare the compiled and pure-Python resolution kernels.

    python benchmarks/bench_kernels.py [--atoms 14] [--clauses 60] [--repeat 5]

Saturates random 3-CNF sets (ordered resolution until the empty clause or
closure) and times one pivot product on wide clause lists.  Both backends
must return identical results; the script exits non-zero otherwise.
"""
import argparse
import random
import sys
import time

from propinterp import kernels


def random_masks(rng, n_atoms, n_clauses, width=3):
    out = set()
    while len(out) < n_clauses:
        atoms = rng.sample(range(n_atoms), width)
        pos = neg = 0
        for a in atoms:
            if rng.random() < 0.5:
                pos |= 1 << a
            else:
                neg |= 1 << a
        out.add((pos, neg))
    return sorted(out)


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, default=14)
    ap.add_argument("--clauses", type=int, default=60)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the python backend is available")
    rng = random.Random(args.seed)
    sets = [random_masks(rng, args.atoms, args.clauses) for _ in range(args.instances)]
    side = random_masks(rng, 40, 300, width=4)

    rows, results = [], {}
    for name, mod in backends.items():
        t_sat, sat = best_of(lambda: [mod.saturate(s, 10**6) for s in sets], args.repeat)
        t_piv, piv = best_of(lambda: mod.resolve_pivot(side, side, 10**7), args.repeat)
        results[name] = (sat, piv)
        rows.append((name, t_sat, t_piv))

    base = dict((r[0], r) for r in rows)["python"]
    print(f"{'backend':<8} {'saturate s':>11} {'speedup':>8} {'pivot s':>9} {'speedup':>8}")
    for name, t_sat, t_piv in rows:
        print(f"{name:<8} {t_sat:>11.4f} {base[1] / t_sat:>8.1f} {t_piv:>9.4f} {base[2] / t_piv:>8.1f}")

    if len(results) == 2 and results["python"] != results["cython"]:
        print("backends disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
