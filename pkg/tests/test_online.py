import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minsat.geometry import PointSet, is_feasible
from minsat.partition import balanced_tree
from minsat.solvers import (
    OnlineSolver,
    box_solution,
    boxes,
    check_doubled,
    double_instance,
    family_trees,
    modify_solution,
    offline_modified,
    online_solver,
    recursive_bst,
    unfold_families,
)


@st.composite
def streams(draw, max_c=16, max_m=30):
    c = draw(st.integers(1, max_c))
    keys = draw(st.lists(st.integers(1, c), min_size=1, max_size=max_m))
    return c, keys


class TestFamilies:
    def test_height_four(self):
        T = balanced_tree(16)
        fams = unfold_families(T)
        assert fams[0][0] is T
        assert len(fams[1]) == 5 and all(t.height == 2 for t in fams[1])
        assert all(t.height <= 1 for t in fams[-1])

    def test_low_trees(self):
        assert len(unfold_families(balanced_tree(2))) == 1
        assert len(unfold_families(balanced_tree(1))) == 1

    @pytest.mark.parametrize("c", [2, 3, 5, 8, 13, 32])
    def test_each_family_covers_every_node(self, c):
        T = balanced_tree(c)
        want = T.strips()
        for fam in unfold_families(T):
            got = set()
            for t in fam:
                got |= t.strips()
            assert got == want

    def test_dedup(self):
        keys = [(t.root.strip, t.height) for t in family_trees(balanced_tree(16))]
        assert len(keys) == len(set(keys))


class TestBoxes:
    def test_monotone(self):
        Xd = double_instance([1, 2])
        assert Xd == PointSet([(2, 1), (2, 2), (4, 3), (4, 4)])
        bx = boxes(Xd, balanced_tree(2))
        assert [(b.leaf, b.first, b.last) for b in bx] == [((1, 1), 1, 2), ((2, 2), 3, 4)]

    def test_check_doubled(self):
        check_doubled(double_instance([3, 1, 2]))
        with pytest.raises(ValueError):
            check_doubled(PointSet([(2, 1), (4, 2)]))
        with pytest.raises(ValueError):
            check_doubled(PointSet([(2, 1)]))

    def test_key_range(self):
        with pytest.raises(ValueError):
            double_instance([0, 1], 3)


@given(streams())
@settings(max_examples=80)
def test_box_equals_recursion(stream):
    c, keys = stream
    Xd = double_instance(keys, c)
    T = balanced_tree(c)
    for sc in (True, False):
        assert box_solution(Xd, T, shortcut=sc) == recursive_bst(Xd, T, 1, "static", shortcut=sc)


@given(streams())
@settings(max_examples=80)
def test_modified_solution(stream):
    c, keys = stream
    Xd = double_instance(keys, c)
    Y = box_solution(Xd, balanced_tree(c))
    Yp = modify_solution(Xd, Y)
    assert is_feasible(Xd, Yp)
    assert len(Yp) <= 2 * len(Y) + len(keys)


@given(streams())
@settings(max_examples=80)
def test_online_equals_offline(stream):
    c, keys = stream
    for sc in (True, False):
        steps = online_solver(c, keys, shortcut=sc)
        assert len(steps) == len(keys) + 1
        got = [p for s in steps for p in s]
        assert len(got) == len(set(got))
        assert set(got) == offline_modified(keys, c, shortcut=sc).as_set()
        for t, s in enumerate(steps[:-1], start=1):
            assert all(p.y <= 2 * t - 1 for p in s)


def test_driver_state():
    drv = OnlineSolver(8)
    with pytest.raises(ValueError):
        drv.step(9)
    for k in (3, 5, 1):
        drv.step(k)
    res = drv.finish()
    assert res["m"] == 3 and res["total"] == len(drv.solution())
    assert drv.finish()["points"] == []
    with pytest.raises(RuntimeError):
        drv.step(1)
    with pytest.raises(ValueError):
        OnlineSolver(0)


def test_deterministic():
    rng = random.Random(4)
    keys = [rng.randint(1, 32) for _ in range(60)]
    assert online_solver(32, keys) == online_solver(32, keys)


def test_single_key_universe():
    assert all(s == [] for s in online_solver(1, [1, 1, 1]))
    assert len(offline_modified([1, 2, 3, 4], 4)) > 0
