"""Point sets, satisfaction, and the elementary transforms on them.

Coordinates live in a doubled x-space once an instance is normalized: active
columns sit at even x = 2, 4, ..., 2c and the gap line between columns of rank
g and g+1 is x = 2g + 1.  Generators emit raw coordinates; call ``normalize``
before handing an instance to a solver or bound.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

KINDS = ("instance", "solution", "union")


class Point(NamedTuple):
    x: int
    y: int


def _key(p: tuple[int, int]) -> tuple[int, int]:
    return (p[1], p[0])


class PointSet:
    """Immutable, deduplicated point collection ordered by (y, x)."""

    __slots__ = ("points", "kind", "meta", "_xs", "_set")

    def __init__(self, points: Iterable[Sequence[int]] = (), kind: str = "instance", meta=None):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        pts = set()
        for p in points:
            x, y = int(p[0]), int(p[1])
            if x < 0 or y < 1:
                raise ValueError(f"point {(x, y)} outside x >= 0, y >= 1")
            pts.add(Point(x, y))
        self.points: tuple[Point, ...] = tuple(sorted(pts, key=_key))
        self.kind = kind
        self.meta = dict(meta) if meta else {}
        self._xs = None
        self._set = None

    # container protocol
    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return Point(p[0], p[1]) in self.as_set()

    def __eq__(self, other) -> bool:
        if isinstance(other, PointSet):
            return self.points == other.points
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        body = ", ".join(f"({p.x},{p.y})" for p in self.points[:8])
        more = ", ..." if len(self.points) > 8 else ""
        return f"PointSet[{self.kind}]({{{body}{more}}})"

    def as_set(self) -> frozenset:
        if self._set is None:
            self._set = frozenset(self.points)
        return self._set

    def with_kind(self, kind: str) -> "PointSet":
        return PointSet(self.points, kind=kind, meta=self.meta)

    def union(self, other: Iterable[Sequence[int]], kind: str = "union") -> "PointSet":
        return PointSet(list(self.points) + [tuple(p) for p in other], kind=kind)

    def difference(self, other: Iterable[Sequence[int]], kind: str | None = None) -> "PointSet":
        drop = {Point(p[0], p[1]) for p in other}
        return PointSet([p for p in self.points if p not in drop], kind=kind or self.kind)

    # structure
    def columns(self) -> list[int]:
        if self._xs is None:
            self._xs = sorted({p.x for p in self.points})
        return list(self._xs)

    def rows(self) -> list[int]:
        return sorted({p.y for p in self.points})

    @property
    def c(self) -> int:
        return len(self.columns())

    @property
    def r(self) -> int:
        return len(self.rows())

    def is_semipermutation(self) -> bool:
        return len({p.y for p in self.points}) == len(self.points)

    def is_permutation(self) -> bool:
        return self.is_semipermutation() and len({p.x for p in self.points}) == len(self.points)

    def transpose(self) -> "PointSet":
        return PointSet([(p.y, p.x) for p in self.points], kind="union")


@dataclass(frozen=True)
class Rect:
    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError("empty rectangle")

    @classmethod
    def of(cls, p, q) -> "Rect":
        return cls(min(p[0], q[0]), max(p[0], q[0]), min(p[1], q[1]), max(p[1], q[1]))

    def contains(self, p) -> bool:
        return self.x_lo <= p[0] <= self.x_hi and self.y_lo <= p[1] <= self.y_hi


def as_pointset(P, kind: str = "union") -> PointSet:
    return P if isinstance(P, PointSet) else PointSet(P, kind=kind)


# ---------------------------------------------------------------------------
# satisfaction


def _rows_index(points: Sequence[Point]):
    by_row: dict[int, list[int]] = defaultdict(list)
    for p in points:
        by_row[p.y].append(p.x)
    ys = sorted(by_row)
    rows = [sorted(by_row[y]) for y in ys]
    return ys, rows


def unsatisfied_pairs_naive(P) -> list[tuple[Point, Point]]:
    """Quadratic pair scan; each pair's rectangle is queried over the y-sorted set."""
    pts = sorted({Point(p[0], p[1]) for p in P}, key=_key)
    ys = [p.y for p in pts]
    out = []
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            if p.x == q.x or p.y == q.y:
                continue
            lo = bisect_left(ys, p.y)
            hi = bisect_right(ys, q.y)
            xl, xh = min(p.x, q.x), max(p.x, q.x)
            if not any(xl <= r.x <= xh and r != p and r != q for r in pts[lo:hi]):
                out.append((p, q))
    return out


def unsatisfied_pairs(P) -> list[tuple[Point, Point]]:
    """All non-collinear pairs whose closed rectangle holds no third point.

    Sweep per point p upward through the rows, keeping the nearest x seen so far
    on each side; a candidate q is unsatisfied exactly when it is the nearest
    point of its row on that side and nothing seen so far lies between.  Pairs
    come out as (lower, upper) in (y, x) order, sorted.
    """
    pts = sorted({Point(p[0], p[1]) for p in P}, key=_key)
    if len(pts) < 2:
        return []
    ys, rows = _rows_index(pts)
    row_of = {y: i for i, y in enumerate(ys)}
    out = []
    inf = float("inf")
    allx = sorted({p.x for p in pts})
    for p in pts:
        i = row_of[p.y]
        row = rows[i]
        j = bisect_left(row, p.x)
        # points on p's own row bound the sweep from the start
        right = row[j + 1] if j + 1 < len(row) else inf
        left = row[j - 1] if j > 0 else -inf
        g = bisect_left(allx, p.x)
        nxt = allx[g + 1] if g + 1 < len(allx) else inf
        prv = allx[g - 1] if g > 0 else -inf
        for k in range(i + 1, len(ys)):
            if right <= nxt and left >= prv:
                break  # both sides already hemmed in by the adjacent columns
            cur = rows[k]
            t = bisect_left(cur, p.x)
            if t < len(cur) and cur[t] == p.x:
                break  # a point straight above satisfies every later pair
            if right > p.x and t < len(cur):
                qx = cur[t]
                if qx < right:
                    out.append((p, Point(qx, ys[k])))
                    right = qx
            if left < p.x and t > 0:
                qx = cur[t - 1]
                if qx > left:
                    out.append((p, Point(qx, ys[k])))
                    left = qx
    out.sort(key=lambda pq: (_key(pq[0]), _key(pq[1])))
    return out


def is_satisfied(P) -> bool:
    return not unsatisfied_pairs(P)


def is_satisfied_naive(P) -> bool:
    return not unsatisfied_pairs_naive(P)


def is_feasible(X, Y) -> bool:
    """True iff X ∪ Y is satisfied; X and Y must be disjoint."""
    xs = {Point(p[0], p[1]) for p in X}
    ys = {Point(p[0], p[1]) for p in Y}
    both = xs & ys
    if both:
        raise ValueError(f"solution repeats input points: {sorted(both, key=_key)[:4]}")
    return not unsatisfied_pairs(xs | ys)


# ---------------------------------------------------------------------------
# collapsing


def _collapse(P, lo: int, hi: int, axis: int, target: int | None = None) -> PointSet:
    pts = list(as_pointset(P))
    inside = [p[axis] for p in pts if lo <= p[axis] <= hi]
    if not inside:
        raise ValueError("collapse range holds no active line")
    to = min(inside) if target is None else target
    out = []
    for p in pts:
        if lo <= p[axis] <= hi:
            p = Point(to, p.y) if axis == 0 else Point(p.x, to)
        out.append(p)
    kind = P.kind if isinstance(P, PointSet) else "union"
    if kind == "instance" and axis == 0:
        # merging columns keeps rows distinct only if the input had distinct rows
        kind = "instance" if len({p.y for p in out}) == len(set(out)) else "union"
    elif kind == "instance":
        kind = "union"
    return PointSet(out, kind=kind)


def collapse_columns(P, x_range: tuple[int, int]) -> PointSet:
    """Map every point with x in the closed range to the range's smallest active x."""
    lo, hi = x_range
    return _collapse(P, lo, hi, 0)


def collapse_rows(P, y_range: tuple[int, int]) -> PointSet:
    lo, hi = y_range
    return _collapse(P, lo, hi, 1)


# ---------------------------------------------------------------------------
# canonical and special solutions


def _runs_to_collapse(active: list[int], used: list[int]):
    """Yield (lo, hi, target) ranges whose points should fold onto one active line."""
    a = active
    stray = sorted(set(used) - set(a))
    if not stray or not a:
        return
    below = [v for v in stray if v < a[0]]
    if below:
        yield below[0], a[0], a[0]
    for left, right in zip(a, a[1:]):
        mid = [v for v in stray if left < v < right]
        if mid:
            yield left, mid[-1], left
    above = [v for v in stray if v > a[-1]]
    if above:
        yield a[-1], above[-1], a[-1]


def to_canonical(X, Y) -> PointSet:
    """Fold a feasible solution onto the active rows and columns of X."""
    X = as_pointset(X, "instance")
    Y = as_pointset(Y, "solution")
    if not is_feasible(X, Y):
        raise ValueError("to_canonical needs a feasible solution")
    xset = X.as_set()
    pts = set(X.points) | set(Y.points)
    for axis, active in ((0, X.columns()), (1, X.rows())):
        used = sorted({p[axis] for p in pts})
        for lo, hi, target in list(_runs_to_collapse(active, used)):
            moved = set()
            for p in pts:
                v = p[axis]
                if lo <= v <= hi:
                    p = Point(target, p.y) if axis == 0 else Point(p.x, target)
                moved.add(p)
            pts = moved
    return PointSet(pts - xset, kind="solution")


def is_canonical(X, Y) -> bool:
    X = as_pointset(X, "instance")
    cols, rows = set(X.columns()), set(X.rows())
    return all(p[0] in cols and p[1] in rows for p in Y)


def to_special(X, Y, tree=None) -> PointSet:
    """Replace X ∪ Y by flanking copies on the nearest lines left and right.

    Without a tree the flanking lines are x - 1 and x + 1 (the gap lines of a
    normalized instance).  With a partition tree they are the boundaries of the
    leaf strip holding each point, so the output is special for that tree.
    """
    X = as_pointset(X, "instance")
    Y = as_pointset(Y, "solution")
    if not is_canonical(X, Y):
        raise ValueError("to_special needs a canonical solution")
    out = set()
    for p in list(X) + list(Y):
        if tree is None:
            lo, hi = p.x - 1, p.x + 1
        else:
            lo, hi = tree.leaf_bounds(p.x)
        out.add(Point(lo, p.y))
        out.add(Point(hi, p.y))
    return PointSet(out - X.as_set(), kind="solution")


def is_special(X, Y, tree=None) -> bool:
    """Non-input points lie on active rows of X and on odd (gap or boundary) x.

    With a tree, the x must additionally be a strip boundary of that tree.
    """
    X = as_pointset(X, "instance")
    rows = set(X.rows())
    lines = tree.boundary_lines() if tree is not None else None
    for p in Y:
        if p[1] not in rows or p[0] % 2 == 0:
            return False
        if lines is not None and p[0] not in lines:
            return False
    return True


# ---------------------------------------------------------------------------
# reduced form, shifts, normalization


def reduce(X) -> PointSet:
    """Drop the interior of every run of y-consecutive points sharing a column."""
    X = as_pointset(X, "instance")
    pts = X.points
    keep = []
    for i, p in enumerate(pts):
        if 0 < i < len(pts) - 1 and pts[i - 1].x == p.x == pts[i + 1].x:
            continue
        keep.append(p)
    return PointSet(keep, kind=X.kind, meta=X.meta)


def is_reduced(X) -> bool:
    pts = as_pointset(X).points
    return all(not (pts[i - 1].x == pts[i].x == pts[i + 1].x) for i in range(1, len(pts) - 1))


def cyclic_shift(X, s: int, N: int) -> PointSet:
    """Raw-space cyclic shift of columns: x -> ((x - 1 + s) mod N) + 1."""
    if not 0 <= s < N:
        raise ValueError(f"shift {s} outside [0, {N})")
    X = as_pointset(X, "instance")
    if any(not 1 <= p.x <= N for p in X):
        raise ValueError("column outside the universe [1, N]")
    return PointSet([((p.x - 1 + s) % N + 1, p.y) for p in X], kind=X.kind, meta=X.meta)


def cyclic_shift_rows(X, s: int, N: int) -> PointSet:
    if not 0 <= s < N:
        raise ValueError(f"shift {s} outside [0, {N})")
    X = as_pointset(X, "instance")
    if any(not 1 <= p.y <= N for p in X):
        raise ValueError("row outside the universe [1, N]")
    return PointSet([(p.x, (p.y - 1 + s) % N + 1) for p in X], kind="union", meta=X.meta)


def normalize(P) -> PointSet:
    """Rank-compress: columns to 2, 4, ..., 2c and rows to 1..r."""
    P = as_pointset(P, "instance")
    xr = {x: 2 * (i + 1) for i, x in enumerate(P.columns())}
    yr = {y: i + 1 for i, y in enumerate(P.rows())}
    return PointSet([(xr[p.x], yr[p.y]) for p in P], kind=P.kind, meta=P.meta)


def is_normalized(X) -> bool:
    X = as_pointset(X)
    return X.columns() == list(range(2, 2 * X.c + 1, 2)) and X.rows() == list(range(1, X.r + 1))


def check_instance(X, *, doubled: bool = True, permutation: bool = False) -> PointSet:
    """Validate the instance invariants and return X as a PointSet."""
    X = as_pointset(X, "instance")
    if not X.is_semipermutation():
        raise ValueError("instance must be a semi-permutation (one point per active row)")
    if permutation and not X.is_permutation():
        raise ValueError("instance must be a permutation")
    if doubled and any(p.x % 2 for p in X):
        raise ValueError("instance columns must be even in doubled space; call normalize")
    return X


def raw_points(points: Iterable[Sequence[int]]) -> list[tuple[int, int]]:
    return [(int(p[0]), int(p[1])) for p in points]
