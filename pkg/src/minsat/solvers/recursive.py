"""The static projection solution and the recursive approximation algorithm."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..geometry import Point, PointSet, as_pointset, reduce, to_special
from ..partition import PartitionTree, balanced_tree, middle_layer, split_at
from .exact import opt_exact_dp


def static_solution(X, T: PartitionTree | None = None, include_root: bool = True) -> PointSet:
    """Copies of every point on both boundaries of each strip on its root-leaf path.

    With ``include_root=False`` the root strip is skipped; the recursion uses
    that form for its leaf calls because the parent's projections (or the outer
    frame at the top) already cover the root boundaries.
    """
    X = as_pointset(X, "instance")
    T = balanced_tree(X) if T is None else T
    out = set()
    for p in X:
        path = T.path(p.x)
        for v in path if include_root else path[1:]:
            lo, hi = v.bounds()
            out.add(Point(lo, p.y))
            out.add(Point(hi, p.y))
    return PointSet(out - X.as_set(), kind="solution")


def static_bound(m: int, height: int) -> int:
    return 2 * m * (height + 1)


@dataclass
class RecursionTrace:
    """Per-level totals of the recursion tree (level 0 is the top call)."""

    levels: dict = field(default_factory=dict)
    keep_instances: bool = False
    instances: dict = field(default_factory=dict)

    def record(self, level: int, X: PointSet, added: int, leaf: bool) -> None:
        row = self.levels.setdefault(level, {"level": level, "instances": 0, "points": 0, "added": 0, "leaves": 0})
        row["instances"] += 1
        row["points"] += len(X)
        row["added"] += added
        row["leaves"] += int(leaf)
        if self.keep_instances:
            self.instances.setdefault(level, []).append(X)

    @property
    def depth(self) -> int:
        return max(self.levels, default=0)

    def to_json(self) -> list[dict]:
        return [dict(self.levels[k]) for k in sorted(self.levels)]


def depth_bound(c: int) -> int:
    """Explicit recursion-depth bound for rho = 1: ceil(log2 log2 c) + 2."""
    if c <= 2:
        return 2
    return math.ceil(math.log2(math.log2(c))) + 2


def _leaf(X: PointSet, T: PartitionTree, mode: str, max_columns) -> PointSet:
    if mode == "static":
        return static_solution(X, T, include_root=False)
    Y = opt_exact_dp(X, max_columns=max_columns)
    return to_special(X, Y, tree=T)


def recursive_bst(
    X,
    T: PartitionTree | None = None,
    rho: int = 1,
    leaf_mode: str = "static",
    trace: RecursionTrace | None = None,
    shortcut: bool = True,
    max_dp_columns: int | None = None,
) -> PointSet:
    """Split at the middle layer, solve strips and the compressed instance, add Z.

    The output is special for T and feasible for the original X.  With
    ``shortcut`` an instance on a single column returns the empty set at once.
    """
    if rho < 1:
        raise ValueError("rho must be >= 1")
    if leaf_mode not in ("static", "dp"):
        raise ValueError(f"unknown leaf mode {leaf_mode!r}")
    X = as_pointset(X, "instance")
    T = balanced_tree(X) if T is None else T
    out: set = set()

    def rec(X: PointSet, T: PartitionTree, level: int) -> None:
        X = reduce(X)
        if not len(X) or (shortcut and X.c <= 1):
            if trace is not None and len(X):
                trace.record(level, X, 0, True)
            return
        if T.height <= rho:
            Y = _leaf(X, T, leaf_mode, max_dp_columns)
            out.update(Y.points)
            if trace is not None:
                trace.record(level, X, len(Y), True)
            return
        U = middle_layer(T)
        split = split_at(X, T, U)
        Z = set()
        for u in U:
            lo, hi = u.bounds()
            for p in X:
                if u.holds(p.x):
                    Z.add(Point(lo, p.y))
                    Z.add(Point(hi, p.y))
        out.update(Z)
        if trace is not None:
            trace.record(level, X, len(Z), False)
        for (strip, Xv), Tv in zip(split.strips, split.strip_trees):
            if len(Xv):
                rec(Xv, Tv, level + 1)
        rec(split.compressed, split.compressed_tree, level + 1)

    rec(X, T, 0)
    return PointSet(set(out) - X.as_set(), kind="solution")
