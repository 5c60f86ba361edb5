import itertools
import random

import pytest
from hypothesis import given, strategies as st

from minsat.bounds import (
    BoundReport,
    cgb_exact,
    cgb_order,
    cgb_sampled,
    funnel_naive,
    funnels,
    gb_enumerate,
    gb_exact,
    mixed_lines,
    wb2_funnel,
)
from minsat.geometry import PointSet, normalize
from minsat.instances import all_perms, brs, gen_monotone
from minsat.partition import tree_from_order, wb_strong_exact, wb_weak
from minsat.solvers import opt_size

from conftest import perms, semiperms

BRS4 = normalize(brs(4))


class TestFunnel:
    def test_examples(self):
        assert wb2_funnel(PointSet([(2, 1)])) == 1
        assert wb2_funnel(normalize(gen_monotone(2))) == 2
        assert wb2_funnel(BRS4) == 5
        alts = [r.alt for r in funnels(BRS4)]
        assert alts == [0, 0, 1, 0]

    @given(semiperms(max_c=6, max_m=12))
    def test_sweep_matches_definition(self, X):
        for rec in funnels(X):
            assert rec.funnel == funnel_naive(X, rec.point)
            assert rec.alt <= max(0, len(rec.funnel) - 1)

    @given(semiperms(max_c=4, max_m=7))
    def test_below_accessed_keys_plus_opt(self, X):
        # the funnel bound counts touched keys, i.e. |X| + |Y|
        assert wb2_funnel(X) <= len(X) + opt_size(X)

    @given(semiperms(max_c=6, max_m=10), st.data())
    def test_subsequence_monotone(self, X, data):
        keep = data.draw(st.lists(st.booleans(), min_size=len(X), max_size=len(X)))
        Z = PointSet([p for p, k in zip(X, keep) if k])
        if len(Z):
            assert wb2_funnel(Z) <= wb2_funnel(X)

    def test_rejects_non_semipermutation(self):
        with pytest.raises(ValueError):
            wb2_funnel(PointSet([(2, 1), (4, 1)], kind="union"))


class TestGuillotine:
    def test_examples(self):
        assert gb_exact(PointSet([(2, 1)])) == 0
        assert gb_exact(BRS4) == gb_enumerate(BRS4) == 5

    def test_permutations_only(self):
        with pytest.raises(ValueError):
            gb_exact(PointSet([(2, 1), (2, 2)]))

    def test_cell_limit(self):
        with pytest.raises(ValueError):
            gb_exact(normalize(brs(16)), max_cells=100)

    def test_exhaustive_small(self):
        for m in range(1, 6):
            for X in all_perms(m):
                X = normalize(X)
                assert gb_exact(X) == gb_enumerate(X)

    @given(perms(max_m=7))
    def test_dominates_strong_wilber(self, X):
        assert wb_strong_exact(X) <= gb_exact(X)


class TestConsistentGuillotine:
    def test_antidiagonal_order(self):
        X = normalize(PointSet([(2, 1), (1, 2)]))
        assert cgb_order(X, [("V", 1), ("H", 1)]) == 1
        assert cgb_exact(normalize(gen_monotone(2))) == 1

    def test_single_point(self):
        X = PointSet([(2, 1)])
        assert cgb_exact(X) == 0 and cgb_sampled(X) == 0

    def test_malformed_order(self):
        with pytest.raises(ValueError):
            cgb_order(BRS4, [("V", 1), ("V", 2), ("V", 3)])

    def test_enumeration_limit(self):
        with pytest.raises(ValueError):
            cgb_exact(normalize(brs(8)))

    def test_vertical_first_equals_weak_plus_transposed(self):
        # with all vertical lines first, the horizontal lines cut single columns
        r = random.Random(3)
        for _ in range(20):
            X = normalize(PointSet([(x, y) for y, x in enumerate(r.sample(range(1, 7), 6), 1)]))
            sv = list(range(1, 6))
            r.shuffle(sv)
            sigma = [("V", g) for g in sv] + [("H", g) for g in range(1, 6)]
            assert cgb_order(X, sigma) == wb_weak(X, tree_from_order(X, sv))

    @given(perms(max_m=4))
    def test_ordering_chain(self, X):
        ws, cg, gb = wb_strong_exact(X), cgb_exact(X), gb_exact(X)
        assert ws <= cg <= gb <= 2 * opt_size(X)

    @given(perms(max_m=7), st.integers(0, 10))
    def test_cross_bound(self, X, seed):
        lines = mixed_lines(X)
        r = random.Random(seed)
        r.shuffle(lines)
        assert cgb_order(X, lines) <= wb_strong_exact(X) + wb_strong_exact(normalize(X.transpose()))

    def test_sampled_is_below_exact(self):
        for X in itertools.islice(all_perms(4), 10):
            X = normalize(X)
            assert cgb_sampled(X, samples=8, seed=1) <= cgb_exact(X)


class TestReport:
    def test_json_and_methods(self):
        rep = BoundReport(wb_weak=5, wb_strong=5, opt=4, m=4, methods={"wb_weak": "balanced", "wb_strong": "interval-dp"})
        d = rep.to_json()
        assert d["gb"] is None and d["method"] == {"wb_weak": "balanced", "wb_strong": "interval-dp", "opt": None}
        assert rep.violations() == []

    def test_violations_named(self):
        rep = BoundReport(wb_weak=9, wb_strong=5, opt=2, m=3, wb2=6)
        assert set(rep.violations()) == {"wb_weak <= wb_strong", "wb_weak <= 2*opt", "wb_strong <= 2*opt", "wb2 <= m + opt"}
