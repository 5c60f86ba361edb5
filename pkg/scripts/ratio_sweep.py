"""Recursive solver size against opt and the strong Wilber bound on random semi-permutations."""

import argparse
import random
import statistics

from minsat.geometry import normalize
from minsat.instances import random_semiperm
from minsat.partition import balanced_tree, wb_strong_exact
from minsat.solvers import RecursionTrace, opt_size, recursive_bst


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--max-c", type=int, default=7, help="opt is computed by the DP, so keep c <= 7")
    ap.add_argument("--max-m", type=int, default=24)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    by_mode = {}
    for _ in range(a.trials):
        X = normalize(random_semiperm(rng, rng.randint(2, a.max_c), rng.randint(2, a.max_m)))
        T = balanced_tree(X)
        cost = len(X) + opt_size(X)
        lb = wb_strong_exact(X)
        for rho, leaf in ((1, "static"), (2, "static"), (1, "dp"), (2, "dp")):
            tr = RecursionTrace()
            size = len(X) + len(recursive_bst(X, T, rho, leaf, trace=tr))
            by_mode.setdefault((rho, leaf), []).append((size / cost, size / max(lb, 1), tr.depth))
    print("rho leaf    mean(alg/opt) max(alg/opt) mean(alg/wb) max depth")
    for (rho, leaf), vals in sorted(by_mode.items()):
        r1 = [v[0] for v in vals]
        r2 = [v[1] for v in vals]
        print(f"{rho:3d} {leaf:7s} {statistics.fmean(r1):13.3f} {max(r1):12.3f} "
              f"{statistics.fmean(r2):12.3f} {max(v[2] for v in vals):9d}")
    print("sizes count accessed keys, i.e. m plus added points")


if __name__ == "__main__":
    main()
