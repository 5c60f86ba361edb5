import random

import pytest
from hypothesis import given, settings

from conftest import semiperms
from minsat.geometry import (
    PointSet,
    is_canonical,
    is_feasible,
    is_special,
    normalize,
    reduce,
    to_special,
)
from minsat.instances import all_semiperms, brs, gen_monotone, random_semiperm
from minsat.limits import SizeGuardError
from minsat.partition import balanced_tree, middle_layer, split_at, tree_from_order
from minsat.solvers import (
    RecursionTrace,
    candidate_grid,
    depth_bound,
    opt_bruteforce,
    opt_exact_dp,
    opt_size,
    recursive_bst,
    static_bound,
    static_solution,
)


def nz(X):
    return reduce(normalize(X))


class TestBruteForce:
    def test_two_points(self):
        X = PointSet([(2, 1), (4, 2)])
        for method in ("search", "enumerate"):
            assert opt_bruteforce(X, method).points in (((4, 1),), ((2, 2),))
        assert opt_bruteforce(X, "enumerate").points == ((4, 1),)

    def test_grid_excludes_input(self):
        X = PointSet([(2, 1), (4, 2), (2, 3)])
        grid = candidate_grid(X)
        assert len(grid) == 3 and not set(grid) & X.as_set()

    def test_guards(self):
        with pytest.raises(SizeGuardError):
            opt_bruteforce(normalize(brs(8)))
        with pytest.raises(ValueError):
            opt_bruteforce(PointSet([(2, 1)]), "magic")

    def test_methods_agree(self):
        rng = random.Random(3)
        for _ in range(60):
            X = normalize(random_semiperm(rng, rng.randint(1, 4), rng.randint(1, 6)))
            a = opt_bruteforce(X, "search")
            b = opt_bruteforce(X, "enumerate")
            assert len(a) == len(b)
            assert is_feasible(X, a) and is_canonical(X, a)


class TestDP:
    def test_examples(self):
        assert opt_size(normalize(gen_monotone(3))) == 2
        assert opt_size(normalize(brs(4))) == 4

    def test_single_column(self):
        assert len(opt_exact_dp(PointSet([(2, 1), (2, 5)]))) == 0

    def test_rejects_unreduced(self):
        with pytest.raises(ValueError):
            opt_exact_dp(PointSet([(2, 1), (2, 2), (2, 3)]))
        with pytest.raises(ValueError):
            opt_exact_dp(PointSet([(2, 1), (4, 1)], kind="union"))

    def test_column_guard(self):
        X = nz(brs(8))
        with pytest.raises(SizeGuardError):
            opt_exact_dp(X)
        with pytest.raises(SizeGuardError):
            opt_exact_dp(nz(gen_monotone(5)), mode="full")
        with pytest.raises(ValueError):
            opt_exact_dp(nz(gen_monotone(3)), mode="other")

    def test_modes_agree_exhaustive(self):
        for c in range(1, 4):
            for r in range(c, 5):
                for X in all_semiperms(c, r):
                    X = nz(X)
                    want = len(opt_exact_dp(X, mode="reference"))
                    assert len(opt_exact_dp(X)) == want
                    assert len(opt_exact_dp(X, mode="full")) == want

    @given(semiperms(max_c=4, max_m=6))
    @settings(max_examples=80)
    def test_dp_matches_bruteforce(self, X):
        X = nz(X)
        Y = opt_exact_dp(X)
        assert is_feasible(X, Y) and is_canonical(X, Y)
        assert len(Y) == len(opt_bruteforce(X))

    def test_deterministic(self):
        X = nz(random_semiperm(random.Random(7), 6, 14))
        assert opt_exact_dp(X) == opt_exact_dp(X)


class TestStatic:
    def test_brs4(self):
        X = normalize(brs(4))
        Y = static_solution(X)
        assert len(Y) == 16
        assert is_feasible(X, Y) and is_special(X, Y, balanced_tree(X))
        assert len(Y) <= static_bound(4, 2)

    @given(semiperms(max_c=12, max_m=20))
    def test_feasible_and_bounded(self, X):
        X = normalize(X)
        T = balanced_tree(X)
        Y = static_solution(X, T)
        assert is_feasible(X, Y)
        assert is_special(X, Y, T)
        assert len(Y) <= static_bound(len(X), T.height)


class TestRecursive:
    def test_trivial(self):
        X = PointSet([(2, 1), (2, 4)])
        assert len(recursive_bst(X)) == 0
        assert len(recursive_bst(PointSet([]))) == 0

    def test_bad_args(self):
        X = normalize(brs(4))
        with pytest.raises(ValueError):
            recursive_bst(X, rho=0)
        with pytest.raises(ValueError):
            recursive_bst(X, leaf_mode="greedy")

    def test_brs16(self):
        X = normalize(brs(16))
        Y = recursive_bst(X)
        assert len(Y) == 80
        assert is_feasible(X, Y)

    def test_depth_bound_values(self):
        assert [depth_bound(c) for c in (1, 2, 3, 4, 16, 17, 256, 257)] == [2, 2, 3, 3, 4, 5, 5, 6]

    @given(semiperms(max_c=32, max_m=40))
    def test_feasible_special_and_shallow(self, X):
        X = normalize(X)
        T = balanced_tree(X)
        for rho, mode in ((1, "static"), (2, "static"), (1, "dp"), (2, "dp")):
            tr = RecursionTrace()
            Y = recursive_bst(X, T, rho=rho, leaf_mode=mode, trace=tr)
            assert is_feasible(X, Y)
            assert is_special(X, Y, T)
            if rho == 1:
                assert tr.depth <= depth_bound(T.c)

    @given(semiperms(max_c=16, max_m=24))
    def test_random_tree(self, X):
        X = normalize(X)
        c = max(p.x for p in X) // 2
        T = tree_from_order(X, random.Random(len(X)).sample(range(1, c), c - 1))
        Y = recursive_bst(X, T, shortcut=False)
        assert is_feasible(X, Y) and is_special(X, Y, T)

    def test_shortcut_off_still_feasible(self):
        X = normalize(brs(8))
        assert is_feasible(X, recursive_bst(X, shortcut=False))

    def test_ratio_small(self):
        rng = random.Random(11)
        for _ in range(40):
            X = normalize(random_semiperm(rng, rng.randint(2, 7), rng.randint(2, 14)))
            tr = RecursionTrace()
            Y = recursive_bst(X, trace=tr)
            opt = opt_size(X)
            assert len(Y) <= 8 * (tr.depth + 1) * (len(X) + opt)

    def test_level_opt_sums(self):
        rng = random.Random(5)
        for _ in range(25):
            X = normalize(random_semiperm(rng, rng.randint(2, 7), rng.randint(2, 12)))
            tr = RecursionTrace(keep_instances=True)
            recursive_bst(X, trace=tr)
            opt = opt_size(X)
            for level, inst in tr.instances.items():
                assert sum(opt_size(normalize(P)) for P in inst) <= opt

    def test_decomposition(self):
        rng = random.Random(9)
        for _ in range(40):
            X = reduce(normalize(random_semiperm(rng, rng.randint(3, 7), rng.randint(3, 12))))
            T = balanced_tree(X)
            if T.height < 2:
                continue
            sp = split_at(X, T, middle_layer(T))
            total = sum(opt_size(P) for _, P in sp.strips if len(P))
            total += opt_size(sp.compressed)
            assert total <= opt_size(X)

    def test_dp_leaf_special(self):
        rng = random.Random(2)
        for _ in range(30):
            X = reduce(normalize(random_semiperm(rng, rng.randint(2, 6), rng.randint(2, 10))))
            T = balanced_tree(X)
            Y = opt_exact_dp(X)
            S = to_special(X, Y, tree=T)
            assert is_feasible(X, S) and is_special(X, S, T)
            assert len(S) <= 2 * len(X) + 2 * len(Y)
