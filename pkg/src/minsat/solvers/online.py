"""Unfolded view of the recursion: tree families, boxes, and the online driver."""

from __future__ import annotations

from dataclasses import dataclass

from ..geometry import Point, PointSet, as_pointset
from ..partition import Node, PartitionTree, balanced_tree, middle_layer


def _tree_key(T: PartitionTree) -> tuple:
    return T.root.strip, tuple(v.strip for v in T.leaves())


def _split_tree(T: PartitionTree) -> list[PartitionTree]:
    U = middle_layer(T)
    return [T.subtree(u) for u in U] + [T.truncate(U)]


def unfold_families(T: PartitionTree) -> list[list[PartitionTree]]:
    """Families F_0 = [T], F_1, ..., F_D of subtrees met by the recursion with rho = 1.

    Each tree of height above 1 is replaced by its middle-layer subtrees and the
    truncated tree on top; lower trees are carried over, so every family covers
    all nodes of T.  The process stops once all trees have height at most 1.
    """
    fams = [[T]]
    while any(t.height > 1 for t in fams[-1]):
        nxt = []
        for t in fams[-1]:
            nxt.extend(_split_tree(t) if t.height > 1 else [t])
        fams.append(nxt)
    return fams


def family_trees(T: PartitionTree) -> list[PartitionTree]:
    """Distinct trees over all families, in order of first appearance."""
    seen, out = set(), []
    for fam in unfold_families(T):
        for t in fam:
            k = _tree_key(t)
            if k not in seen:
                seen.add(k)
                out.append(t)
    return out


@dataclass
class Box:
    leaf: tuple[int, int]
    points: list[Point]

    @property
    def first(self) -> int:
        return self.points[0].y

    @property
    def last(self) -> int:
        return self.points[-1].y


def boxes(X, T: PartitionTree) -> list[Box]:
    """Maximal y-consecutive runs of X inside S(root T) that stay in one leaf strip."""
    X = as_pointset(X, "instance")
    out: list[Box] = []
    for p in X:
        if not T.root.holds(p.x):
            continue
        leaf = T.leaf_of(p.x).strip
        if out and out[-1].leaf == leaf:
            out[-1].points.append(p)
        else:
            out.append(Box(leaf, [p]))
    return out


def _middle_of(T: PartitionTree) -> list[Node]:
    return middle_layer(T) if T.height >= 1 else []


def _proj(p: Point, v: Node) -> tuple[Point, Point]:
    lo, hi = v.bounds()
    return Point(lo, p.y), Point(hi, p.y)


def check_doubled(X) -> PointSet:
    """Rows must be 1..2m with rows 2i-1 and 2i on the same even column."""
    X = as_pointset(X, "instance")
    pts = X.points
    if len(pts) % 2 or [p.y for p in pts] != list(range(1, len(pts) + 1)):
        raise ValueError("doubled instance needs rows 1..2m, one point each")
    for a, b in zip(pts[0::2], pts[1::2]):
        if a.x != b.x or a.x % 2:
            raise ValueError(f"rows {a.y} and {b.y} must share one even column")
    return X


def _box_points(X: PointSet, T: PartitionTree, shortcut: bool) -> set:
    out = set()
    for t in family_trees(T):
        if t.height < 1:
            continue
        bx = boxes(X, t)
        if not bx or (shortcut and len({b.leaf for b in bx}) < 2):
            continue
        mid = _middle_of(t)
        for b in bx:
            for p in {b.points[0], b.points[-1]}:
                for v in mid:
                    if v.holds(p.x):
                        out.update(_proj(p, v))
    return out


def box_solution(X, T: PartitionTree | None = None, shortcut: bool = True) -> PointSet:
    """proj(p, v) for every box endpoint p of a family tree and middle-layer v holding p.

    A family tree whose root strip holds points of a single leaf strip adds
    nothing when ``shortcut`` is set, matching the recursion's single-column rule.
    """
    X = check_doubled(X)
    T = balanced_tree(X) if T is None else T
    return PointSet(_box_points(X, T, shortcut) - X.as_set(), kind="solution")


def double_instance(keys, c: int | None = None) -> PointSet:
    """Keys k_1..k_m in 1..c to the doubled instance with p'_i, p''_i on rows 2i-1, 2i."""
    keys = list(keys)
    if c is not None and any(not 1 <= k <= c for k in keys):
        raise ValueError(f"keys must lie in 1..{c}")
    pts = []
    for i, k in enumerate(keys, start=1):
        pts += [(2 * k, 2 * i - 1), (2 * k, 2 * i)]
    return PointSet(pts, kind="instance")


def modify_solution(Xd, Y) -> PointSet:
    """Move points on rows 2i up to 2i+1 and add the copy (x_i, 2i+1) of p_i."""
    Xd = check_doubled(Xd)
    Y = as_pointset(Y, "solution")
    x_of = {p.y: p.x for p in Xd}
    out = set()
    for q in Y:
        if q.y % 2 == 0:
            out.add(Point(q.x, q.y + 1))
            out.add(Point(x_of[q.y], q.y + 1))
        else:
            out.add(q)
    return PointSet(out - Xd.as_set(), kind="solution")


def offline_modified(keys, c: int, shortcut: bool = True) -> PointSet:
    Xd = double_instance(keys, c)
    return modify_solution(Xd, box_solution(Xd, balanced_tree(c), shortcut=shortcut))


class _TreeState:
    __slots__ = ("tree", "mid", "leaves_seen", "prev", "buffer")

    def __init__(self, tree: PartitionTree):
        self.tree = tree
        self.mid = _middle_of(tree)
        self.leaves_seen: set = set()
        self.prev = None  # (leaf, point p''_j) of the latest point in the root strip
        self.buffer: list[Point] = []


class OnlineSolver:
    """Stateful driver that emits the modified box solution as keys arrive.

    One ``step(key)`` handles both copies p'_i and p''_i.  Projections of p'_i
    are decided on arrival.  Whether p''_i closes its box is known only when the
    next key inside the same root strip arrives (or at ``finish``), so those
    projections, moved to row 2i+1, may be emitted in a later step.  Under the
    single-column shortcut a tree's output is also held back until its root
    strip has touched two leaf strips.
    """

    def __init__(self, c: int, shortcut: bool = True):
        if c < 1:
            raise ValueError("universe must hold at least one key")
        self.c = c
        self.tree = balanced_tree(c)
        self.shortcut = shortcut
        self.states = [_TreeState(t) for t in family_trees(self.tree) if t.height >= 1]
        self.t = 0
        self.emitted: set = set()
        self.keys: list[int] = []
        self.done = False

    def _input(self, p: Point) -> bool:
        i = (p.y + 1) // 2
        return 1 <= i <= self.t and Point(2 * self.keys[i - 1], p.y) == p

    def _project(self, st: _TreeState, p: Point, row: int) -> list[Point]:
        pts = []
        for v in st.mid:
            if v.holds(p.x):
                pts += [Point(q.x, row) for q in _proj(p, v)]
        return pts

    def _offer(self, st: _TreeState, pts: list[Point], out: list) -> None:
        if self.shortcut and len(st.leaves_seen) < 2:
            st.buffer.extend(pts)
            return
        if st.buffer:
            pts = st.buffer + pts
            st.buffer = []
        for q in pts:
            if q not in self.emitted and not self._input(q):
                self.emitted.add(q)
                out.append(q)

    def _close(self, st: _TreeState, out: list) -> None:
        leaf, p2 = st.prev
        row = p2.y + 1
        self._offer(st, self._project(st, p2, row) + [Point(p2.x, row)], out)

    def step(self, key: int) -> list[Point]:
        if self.done:
            raise RuntimeError("driver already finished")
        if not 1 <= key <= self.c:
            raise ValueError(f"key {key} outside 1..{self.c}")
        self.t += 1
        self.keys.append(key)
        i, x = self.t, 2 * key
        p1, p2 = Point(x, 2 * i - 1), Point(x, 2 * i)
        out: list[Point] = []
        for st in self.states:
            if not st.tree.root.holds(x):
                continue
            leaf = st.tree.leaf_of(x).strip
            st.leaves_seen.add(leaf)
            if st.prev is None or st.prev[0] != leaf:
                if st.prev is not None:
                    self._close(st, out)
                self._offer(st, self._project(st, p1, p1.y), out)
            else:
                self._offer(st, [], out)
            st.prev = (leaf, p2)
        return out

    def finish(self) -> dict:
        out: list[Point] = []
        if not self.done:
            for st in self.states:
                if st.prev is not None:
                    self._close(st, out)
            self.done = True
        return {"points": out, "total": len(self.emitted), "m": self.t}

    def solution(self) -> PointSet:
        return PointSet(self.emitted, kind="solution")


def online_solver(c: int, keys, shortcut: bool = True) -> list[list[Point]]:
    """Per-step emissions, with the emissions of ``finish`` as the final entry."""
    drv = OnlineSolver(c, shortcut=shortcut)
    steps = [drv.step(k) for k in keys]
    steps.append(drv.finish()["points"])
    return steps
