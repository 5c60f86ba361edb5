"""Partitioning trees, crossing costs, Wilber bounds, and the split operation.

A tree is built over a universe of ``c`` column ranks; rank k sits at x = 2k and
the gap line g (between ranks g and g+1) at x = 2g + 1.  Subtrees and truncated
trees keep the global ranks, so strip boundaries always land on real lines of
the top-level instance.  A node is identified by its strip (lo, hi).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import Point, PointSet, as_pointset, normalize
from .limits import SizeGuardError, limit


@dataclass(eq=False)
class Node:
    lo: int
    hi: int
    gap: int | None = None
    left: "Node | None" = None
    right: "Node | None" = None

    @property
    def strip(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    @property
    def is_leaf(self) -> bool:
        return self.gap is None

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def bounds(self) -> tuple[int, int]:
        """Doubled-space x of the left and right boundary lines."""
        return (2 * self.lo - 1, 2 * self.hi + 1)

    def holds(self, x: int) -> bool:
        return 2 * self.lo <= x <= 2 * self.hi

    def copy(self) -> "Node":
        if self.is_leaf:
            return Node(self.lo, self.hi)
        return Node(self.lo, self.hi, self.gap, self.left.copy(), self.right.copy())


class PartitionTree:
    __slots__ = ("root", "c", "_nodes", "_depth")

    def __init__(self, root: Node, c: int):
        self.root = root
        self.c = c
        self._nodes = None
        self._depth = None

    # traversal
    def nodes(self) -> list[Node]:
        if self._nodes is None:
            out, depth, stack = [], {}, [(self.root, 0)]
            while stack:
                v, d = stack.pop()
                out.append(v)
                depth[v.strip] = d
                if not v.is_leaf:
                    stack.append((v.right, d + 1))
                    stack.append((v.left, d + 1))
            self._nodes, self._depth = out, depth
        return self._nodes

    def depth(self, v: Node) -> int:
        self.nodes()
        return self._depth[v.strip]

    def inner_nodes(self) -> list[Node]:
        return [v for v in self.nodes() if not v.is_leaf]

    def leaves(self) -> list[Node]:
        return [v for v in self.nodes() if v.is_leaf]

    def layer(self, i: int) -> list[Node]:
        return [v for v in self.nodes() if self.depth(v) == i]

    @property
    def height(self) -> int:
        return max(self.depth(v) for v in self.nodes())

    def find(self, strip: tuple[int, int]) -> Node:
        for v in self.nodes():
            if v.strip == tuple(strip):
                return v
        raise KeyError(strip)

    def strips(self) -> set[tuple[int, int]]:
        return {v.strip for v in self.nodes()}

    def leaf_of(self, x: int) -> Node:
        v = self.root
        if not (2 * v.lo - 1 <= x <= 2 * v.hi + 1):
            raise ValueError(f"x={x} outside the tree's strip {v.bounds()}")
        while not v.is_leaf:
            v = v.left if x <= 2 * v.gap else v.right
        return v

    def leaf_bounds(self, x: int) -> tuple[int, int]:
        return self.leaf_of(x).bounds()

    def path(self, x: int) -> list[Node]:
        """Root-to-leaf path of nodes whose strip holds column x."""
        v, out = self.root, [self.root]
        while not v.is_leaf:
            v = v.left if x <= 2 * v.gap else v.right
            out.append(v)
        return out

    def boundary_lines(self) -> set[int]:
        lines = set()
        for v in self.nodes():
            lines.update(v.bounds())
        return lines

    def cut_order(self) -> list[int]:
        """A cut order (breadth-first) that rebuilds this tree."""
        out, queue = [], [self.root]
        while queue:
            v = queue.pop(0)
            if not v.is_leaf:
                out.append(v.gap)
                queue += [v.left, v.right]
        return out

    # derived trees
    def subtree(self, v: Node) -> "PartitionTree":
        return PartitionTree(self.find(v.strip).copy(), self.c)

    def truncate(self, U: Iterable[Node]) -> "PartitionTree":
        cut = {u.strip for u in U}

        def rec(v: Node) -> Node:
            if v.strip in cut or v.is_leaf:
                return Node(v.lo, v.hi)
            return Node(v.lo, v.hi, v.gap, rec(v.left), rec(v.right))

        return PartitionTree(rec(self.root), self.c)

    # serialization
    def to_json(self) -> dict:
        def rec(v: Node) -> dict:
            d = {"strip": [v.lo, v.hi]}
            if not v.is_leaf:
                d.update(gap=v.gap, left=rec(v.left), right=rec(v.right))
            return d

        return rec(self.root)

    @classmethod
    def from_json(cls, d: dict, c: int | None = None) -> "PartitionTree":
        def rec(e: dict) -> Node:
            lo, hi = e["strip"]
            if "gap" not in e or e["gap"] is None:
                return Node(lo, hi)
            return Node(lo, hi, e["gap"], rec(e["left"]), rec(e["right"]))

        root = rec(d)
        return cls(root, c if c is not None else root.hi)

    def __eq__(self, other) -> bool:
        return isinstance(other, PartitionTree) and self.to_json() == other.to_json()

    def __repr__(self) -> str:
        return f"PartitionTree(c={self.c}, height={self.height}, order={self.cut_order()})"


def _universe(X) -> int:
    if isinstance(X, int):
        return X
    X = as_pointset(X, "instance")
    return max((p.x for p in X), default=2) // 2


def tree_from_order(X, sigma: Sequence[int]) -> PartitionTree:
    """Tree where each gap of sigma splits the current strip that holds it."""
    c = _universe(X)
    sigma = [int(g) for g in sigma]
    if sorted(sigma) != list(range(1, c)):
        raise ValueError(f"cut order must be a permutation of 1..{c - 1}")
    pos = {g: i for i, g in enumerate(sigma)}

    def rec(lo: int, hi: int) -> Node:
        if lo == hi:
            return Node(lo, hi)
        g = min(range(lo, hi), key=pos.__getitem__)
        return Node(lo, hi, g, rec(lo, g), rec(g + 1, hi))

    return PartitionTree(rec(1, c), c)


def balanced_tree(X) -> PartitionTree:
    """Each strip of k columns gives ceil(k/2) to its left child."""
    c = _universe(X)
    if c < 1:
        raise ValueError("need at least one column")

    def rec(lo: int, hi: int) -> Node:
        if lo == hi:
            return Node(lo, hi)
        g = lo + (hi - lo + 1 + 1) // 2 - 1
        return Node(lo, hi, g, rec(lo, g), rec(g + 1, hi))

    return PartitionTree(rec(1, c), c)


def random_tree(X, rng: random.Random) -> PartitionTree:
    c = _universe(X)
    sigma = list(range(1, c))
    rng.shuffle(sigma)
    return tree_from_order(c, sigma)


def _require_in_universe(X: PointSet, T: PartitionTree) -> None:
    for p in X:
        if p.x % 2 or not T.root.holds(p.x):
            raise ValueError(f"point {tuple(p)} is not on a column of the tree's universe")


# ---------------------------------------------------------------------------
# crossings


def _crossings(pts: Sequence[Point], gap: int) -> list[tuple[Point, Point]]:
    line = 2 * gap
    return [(a, b) for a, b in zip(pts, pts[1:]) if (a.x <= line) != (b.x <= line)]


def node_cost(X, strip: tuple[int, int], gap: int, pairs: bool = False):
    """Number of y-consecutive pairs of X inside the strip on opposite sides of the gap."""
    lo, hi = strip
    if not lo <= gap < hi:
        raise ValueError(f"gap {gap} is not strictly inside strip {strip}")
    X = as_pointset(X, "instance")
    pts = [p for p in X if 2 * lo <= p.x <= 2 * hi]
    cro = _crossings(pts, gap)
    return (len(cro), cro) if pairs else len(cro)


def crossing_record(X, T: PartitionTree) -> dict[tuple[int, int], list[tuple[Point, Point]]]:
    """Crossing pairs per inner node, keyed by strip."""
    X = as_pointset(X, "instance")
    _require_in_universe(X, T)
    out = {}

    def rec(v: Node, pts: list[Point]) -> None:
        if v.is_leaf:
            return
        out[v.strip] = _crossings(pts, v.gap)
        line = 2 * v.gap
        rec(v.left, [p for p in pts if p.x <= line])
        rec(v.right, [p for p in pts if p.x > line])

    rec(T.root, [p for p in X if T.root.holds(p.x)])
    return out


def node_costs(X, T: PartitionTree) -> dict[tuple[int, int], int]:
    return {k: len(v) for k, v in crossing_record(X, T).items()}


def wb_weak(X, T: PartitionTree | Sequence[int]) -> int:
    """Sum of crossing costs over the inner nodes of a fixed tree (or cut order)."""
    X = as_pointset(X, "instance")
    if not isinstance(T, PartitionTree):
        T = tree_from_order(X, T)
    return sum(len(v) for v in crossing_record(X, T).values())


def wb_forbidden(X, T: PartitionTree | Sequence[int], F) -> int:
    """Weak bound with every crossing that touches a forbidden point dropped."""
    X = as_pointset(X, "instance")
    F = {Point(p[0], p[1]) for p in F}
    if not F <= X.as_set():
        raise ValueError("forbidden set must be a subset of the instance")
    if not isinstance(T, PartitionTree):
        T = tree_from_order(X, T)
    return sum(
        1
        for cro in crossing_record(X, T).values()
        for a, b in cro
        if a not in F and b not in F
    )


# ---------------------------------------------------------------------------
# strong bound


def _rank_columns(X: PointSet) -> tuple[np.ndarray, int]:
    cols = {x: i + 1 for i, x in enumerate(X.columns())}
    return np.array([cols[p.x] for p in X], dtype=np.int64), len(cols)


def wb_strong_exact(X, return_tree: bool = False, max_columns: int | None = None):
    """Max of the weak bound over all trees, by interval DP over column ranks.

    W[i, j] = max_g cost(i..j, g) + W[i, g] + W[g+1, j]; ties go to the smallest
    gap.  Only gaps between consecutive active columns are used.
    """
    X = as_pointset(X, "instance")
    if not X.is_semipermutation():
        raise ValueError("wb_strong_exact needs a semi-permutation")
    cap = limit("wb_strong_columns", 512) if max_columns is None else max_columns
    xs, c = _rank_columns(X)
    if c > cap:
        raise SizeGuardError(
            f"{c} active columns exceed the interval-DP limit {cap}; "
            "use wb_weak on sampled trees instead"
        )
    c = max(c, 1)
    W = np.zeros((c + 2, c + 2), dtype=np.int64)
    G = np.zeros((c + 2, c + 2), dtype=np.int64)
    for i in range(c, 0, -1):
        seq = xs[xs >= i]  # y-order is preserved by the PointSet ordering
        for j in range(i + 1, c + 1):
            sub = seq[seq <= j]
            cost = np.zeros(c + 2, dtype=np.int64)
            if len(sub) > 1:
                a, b = sub[:-1], sub[1:]
                lo, hi = np.minimum(a, b), np.maximum(a, b)
                m = lo < hi
                diff = np.bincount(lo[m], minlength=c + 2) - np.bincount(hi[m], minlength=c + 2)
                cost = np.cumsum(diff)
            vals = cost[i:j] + W[i, i:j] + W[i + 1:j + 1, j]
            k = int(np.argmax(vals))
            W[i, j] = vals[k]
            G[i, j] = i + k
    value = int(W[1, c])
    if not return_tree:
        return value

    def rec(lo: int, hi: int) -> Node:
        if lo == hi:
            return Node(lo, hi)
        g = int(G[lo, hi])
        return Node(lo, hi, g, rec(lo, g), rec(g + 1, hi))

    return value, PartitionTree(rec(1, c), c)


def wb_strong_enumerate(X, max_columns: int = 7) -> int:
    """Factorial oracle: max of wb_weak over every cut order of the active gaps."""
    X = normalize(as_pointset(X, "instance"))
    c = X.c
    if c > max_columns:
        raise SizeGuardError(f"enumeration over {c - 1}! cut orders refused (limit c <= {max_columns})")
    if c <= 1:
        return 0
    return max(wb_weak(X, tree_from_order(X, s)) for s in itertools.permutations(range(1, c)))


# ---------------------------------------------------------------------------
# forbidden sets


@dataclass
class ForbiddenSet:
    points: frozenset
    bits: tuple[int, ...] = ()
    lines: tuple[int | None, ...] = ()

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def check_blocks(blocks: Sequence[tuple[int, int]], c: int) -> list[tuple[int, int]]:
    blocks = [tuple(b) for b in blocks]
    nxt = 1
    for lo, hi in blocks:
        if lo != nxt or hi < lo:
            raise ValueError("blocks must partition 1..c into consecutive runs")
        nxt = hi + 1
    if nxt != c + 1:
        raise ValueError("blocks must partition 1..c into consecutive runs")
    return blocks


def sample_forbidden(X, blocks, sigma: Sequence[int], seed: int = 0, bits: Sequence[int] | None = None) -> ForbiddenSet:
    """Per block, forbid the points left (bit 0) or right (bit 1) of its first line in sigma.

    A block of one column owns no line and contributes no forbidden points.
    """
    X = as_pointset(X, "instance")
    c = _universe(X)
    blocks = check_blocks(blocks, c)
    pos = {g: i for i, g in enumerate(sigma)}
    if sorted(pos) != list(range(1, c)):
        raise ValueError(f"cut order must be a permutation of 1..{c - 1}")
    rng = random.Random(seed)
    drawn = [rng.randrange(2) for _ in blocks] if bits is None else list(bits)
    F, lines = set(), []
    for (lo, hi), b in zip(blocks, drawn):
        inside = [g for g in range(lo, hi)]
        if not inside:
            lines.append(None)
            continue
        L = min(inside, key=pos.__getitem__)
        lines.append(L)
        for p in X:
            if 2 * lo <= p.x <= 2 * hi:
                if (b == 0 and p.x <= 2 * L) or (b == 1 and p.x > 2 * L):
                    F.add(p)
    return ForbiddenSet(frozenset(F), tuple(drawn), tuple(lines))


def block_instances(X, blocks) -> list[PointSet]:
    X = as_pointset(X, "instance")
    return [PointSet([p for p in X if 2 * lo <= p.x <= 2 * hi]) for lo, hi in blocks]


# ---------------------------------------------------------------------------
# splits


@dataclass
class SplitResult:
    compressed: PointSet
    strips: list[tuple[tuple[int, int], PointSet]]
    compressed_tree: PartitionTree | None = None
    strip_trees: list[PartitionTree] = field(default_factory=list)

    @property
    def cover(self) -> list[tuple[int, int]]:
        return [s for s, _ in self.strips]


def is_antichain_cover(T: PartitionTree, U: Iterable[Node]) -> bool:
    cut = {u.strip for u in U}
    if not cut <= T.strips():
        return False

    def rec(v: Node) -> int:
        if v.strip in cut:
            if not v.is_leaf and (_hits(v.left, cut) or _hits(v.right, cut)):
                return -1
            return 1
        if v.is_leaf:
            return 0
        a, b = rec(v.left), rec(v.right)
        return 1 if a == 1 and b == 1 else (-1 if -1 in (a, b) else 0)

    return rec(T.root) == 1


def _hits(v: Node, cut: set) -> bool:
    if v.strip in cut:
        return True
    return not v.is_leaf and (_hits(v.left, cut) or _hits(v.right, cut))


def _compress(X: PointSet, strips: Sequence[tuple[int, int]]) -> PointSet:
    out = []
    for p in X:
        for lo, hi in strips:
            if 2 * lo <= p.x <= 2 * hi:
                out.append((2 * lo, p.y))
                break
        else:
            raise ValueError(f"point {tuple(p)} falls outside every strip")
    return PointSet(out, kind=X.kind)


def split_at(X, T: PartitionTree, U: Iterable[Node]) -> SplitResult:
    """Strip instances inside each S(v), v in U, plus the compressed instance.

    The compressed instance moves every point of S(v) to the strip's smallest
    column 2*lo; its tree is T truncated at U.
    """
    X = as_pointset(X, "instance")
    U = sorted({u.strip: u for u in U}.values(), key=lambda u: u.lo)
    if not is_antichain_cover(T, U):
        raise ValueError("U must be an antichain that meets every root-leaf path once")
    _require_in_universe(X, T)
    strips = [(u.strip, PointSet([p for p in X if u.holds(p.x)], kind=X.kind)) for u in U]
    return SplitResult(
        compressed=_compress(X, [u.strip for u in U]),
        strips=strips,
        compressed_tree=T.truncate(U),
        strip_trees=[T.subtree(u) for u in U],
    )


def split_by_lines(X, gaps: Iterable[int], c: int | None = None) -> SplitResult:
    """Split along a chosen subset of gap lines; strips are the maximal runs between them."""
    X = as_pointset(X, "instance")
    c = _universe(X) if c is None else c
    cuts = sorted(set(int(g) for g in gaps))
    if any(not 1 <= g < c for g in cuts):
        raise ValueError(f"gaps must lie in 1..{c - 1}")
    bounds = [0] + cuts + [c]
    strips = [(a + 1, b) for a, b in zip(bounds, bounds[1:])]
    return SplitResult(
        compressed=_compress(X, strips),
        strips=[(s, PointSet([p for p in X if 2 * s[0] <= p.x <= 2 * s[1]], kind=X.kind)) for s in strips],
    )


def middle_layer(T: PartitionTree) -> list[Node]:
    """Depth ceil(h/2) nodes plus every leaf that sits above that depth."""
    h = T.height
    if h < 1:
        raise ValueError("middle layer needs height >= 1")
    d = math.ceil(h / 2)
    U = [v for v in T.nodes() if T.depth(v) == d or (v.is_leaf and T.depth(v) < d)]
    return sorted(U, key=lambda v: v.lo)


def path_cost(X, T: PartitionTree, v: Node, u: Node) -> int:
    """Sum of node costs on the tree path from v down to its descendant u (inclusive)."""
    costs = node_costs(X, T)
    total, w = 0, T.find(v.strip)
    while True:
        total += costs.get(w.strip, 0)
        if w.strip == u.strip or w.is_leaf:
            break
        w = w.left if u.hi <= w.gap else w.right
    if w.strip != u.strip:
        raise ValueError("u is not a descendant of v")
    return total


def strip_size(X, v: Node) -> int:
    return sum(1 for p in as_pointset(X) if v.holds(p.x))
