"""The funnel bound (WB-2), the Guillotine bound, and the consistent Guillotine bound."""

from __future__ import annotations

import itertools
import random
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .geometry import Point, PointSet, as_pointset, normalize
from .limits import SizeGuardError, limit


# ---------------------------------------------------------------------------
# funnel bound


@dataclass
class FunnelRecord:
    point: Point
    funnel: list[Point]
    alt: int


def _funnel(pts: Sequence[Point], i: int) -> list[Point]:
    """Points below pts[i] whose rectangle with it is otherwise empty, y-sorted."""
    p = pts[i]
    left, right = -float("inf"), float("inf")
    out = []
    for k in range(i - 1, -1, -1):
        q = pts[k]
        if q.x == p.x:
            out.append(q)
            break
        if q.x < p.x:
            if q.x > left:
                out.append(q)
                left = q.x
        elif q.x < right:
            out.append(q)
            right = q.x
    out.reverse()
    return out


def _alternations(funnel: Sequence[Point], x: int) -> int:
    side = [(-1 if q.x < x else 1 if q.x > x else 0) for q in funnel]
    return sum(1 for a, b in zip(side, side[1:]) if a * b == -1)


def funnels(X) -> list[FunnelRecord]:
    X = as_pointset(X, "instance")
    if not X.is_semipermutation():
        raise ValueError("funnel bound needs a semi-permutation")
    pts = X.points
    out = []
    for i, p in enumerate(pts):
        f = _funnel(pts, i)
        out.append(FunnelRecord(p, f, _alternations(f, p.x)))
    return out


def wb2_funnel(X) -> int:
    """m plus the side alternations inside every point's funnel."""
    recs = funnels(X)
    return len(recs) + sum(r.alt for r in recs)


def funnel_naive(X, p) -> list[Point]:
    """Definition-level funnel: q below p with Rect(p, q) free of other points."""
    X = as_pointset(X, "instance")
    out = []
    for q in X:
        if q.y >= p[1]:
            continue
        xl, xh = min(p[0], q.x), max(p[0], q.x)
        if not any(xl <= r.x <= xh and q.y <= r.y <= p[1] and r != q and tuple(r) != tuple(p) for r in X):
            out.append(q)
    return sorted(out, key=lambda q: q.y)


# ---------------------------------------------------------------------------
# Guillotine bound


def _ranked_perm(X: PointSet) -> tuple[tuple[int, int], ...]:
    Xn = normalize(X)
    return tuple(sorted(((p.x // 2, p.y) for p in Xn), key=lambda t: t[1]))


def _cut_costs(pts: tuple[tuple[int, int], ...]):
    """Yield (cost, left, right) for every vertical then horizontal cut that splits pts."""
    by_y = sorted(pts, key=lambda t: t[1])
    xs = sorted({p[0] for p in pts})
    for a, b in zip(xs, xs[1:]):
        cost = sum(1 for u, w in zip(by_y, by_y[1:]) if (u[0] <= a) != (w[0] <= a))
        yield cost, tuple(p for p in pts if p[0] <= a), tuple(p for p in pts if p[0] >= b)
    by_x = sorted(pts)
    ys = sorted({p[1] for p in pts})
    for a, b in zip(ys, ys[1:]):
        cost = sum(1 for u, w in zip(by_x, by_x[1:]) if (u[1] <= a) != (w[1] <= a))
        yield cost, tuple(p for p in pts if p[1] <= a), tuple(p for p in pts if p[1] >= b)


def gb_exact(X, max_cells: int | None = None) -> int:
    """Guillotine bound by DP over the point sets reachable by axis-parallel cuts.

    A region is keyed by the points it holds (equivalently their bounding box),
    and only cuts that separate two of its points are tried.
    """
    X = as_pointset(X, "instance")
    if not X.is_permutation():
        raise ValueError("the Guillotine bound is defined for permutations only")
    cap = limit("gb_cells", 64 * 64) if max_cells is None else max_cells
    if X.c * X.r > cap:
        raise SizeGuardError(f"gb_exact grid {X.c}x{X.r} exceeds limit {cap} cells")
    memo: dict = {}

    def rec(key) -> int:
        if len(key) <= 1:
            return 0
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = 0
        for cost, a, b in _cut_costs(key):
            best = max(best, cost + rec(a) + rec(b))
        memo[key] = best
        return best

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        return rec(_ranked_perm(X))
    finally:
        sys.setrecursionlimit(old)


def gb_enumerate(X) -> int:
    """Oracle for tiny permutations over rank rectangles.

    Every vertical and horizontal grid line through the rectangle is tried,
    including lines that separate nothing, and crossings are recounted from the
    raw point list each time.
    """
    X = as_pointset(X, "instance")
    if not X.is_permutation():
        raise ValueError("the Guillotine bound is defined for permutations only")
    pts = _ranked_perm(X)
    n = len(pts)
    if n > 8:
        raise SizeGuardError("gb_enumerate is meant for permutations with m <= 8")

    def crossings(inside, key, g) -> int:
        other = 1 - key
        seq = sorted(inside, key=lambda t: t[other])
        return sum(1 for u, w in zip(seq, seq[1:]) if (u[key] <= g) != (w[key] <= g))

    @lru_cache(maxsize=None)
    def best(x0: int, x1: int, y0: int, y1: int) -> int:
        inside = [p for p in pts if x0 <= p[0] <= x1 and y0 <= p[1] <= y1]
        if len(inside) <= 1:
            return 0
        val = 0
        for g in range(x0, x1):
            val = max(val, crossings(inside, 0, g) + best(x0, g, y0, y1) + best(g + 1, x1, y0, y1))
        for g in range(y0, y1):
            val = max(val, crossings(inside, 1, g) + best(x0, x1, y0, g) + best(x0, x1, g + 1, y1))
        return val

    return best(1, n, 1, n)


# ---------------------------------------------------------------------------
# consistent Guillotine bound


def mixed_lines(X) -> list[tuple[str, int]]:
    X = as_pointset(X, "instance")
    return [("V", g) for g in range(1, X.c)] + [("H", g) for g in range(1, X.r)]


def _check_mixed(sigma, c: int, r: int) -> list[tuple[str, int]]:
    sigma = [(str(t).upper(), int(g)) for t, g in sigma]
    want = sorted([("V", g) for g in range(1, c)] + [("H", g) for g in range(1, r)])
    if sorted(sigma) != want:
        raise ValueError("mixed cut order must list every V(g) and H(g) exactly once")
    return sigma


def cgb_order(X, sigma: Sequence[tuple[str, int]]) -> int:
    """Process tagged lines in order; each one splits every region it passes through.

    Regions are rank rectangles (x_lo, x_hi, y_lo, y_hi); a vertical line V(g)
    sits between column ranks g and g+1, a horizontal line H(g) between rows.
    """
    X = as_pointset(X, "instance")
    if not X.is_permutation():
        raise ValueError("the consistent Guillotine bound is defined for permutations only")
    pts = _ranked_perm(X)
    c = r = len(pts)
    sigma = _check_mixed(sigma, c, r)
    regions = {(1, c, 1, r): pts}
    total = 0
    for tag, g in sigma:
        nxt = {}
        for (x0, x1, y0, y1), inside in regions.items():
            if tag == "V" and x0 <= g < x1:
                seq = sorted(inside, key=lambda t: t[1])
                total += sum(1 for u, w in zip(seq, seq[1:]) if (u[0] <= g) != (w[0] <= g))
                nxt[(x0, g, y0, y1)] = tuple(p for p in inside if p[0] <= g)
                nxt[(g + 1, x1, y0, y1)] = tuple(p for p in inside if p[0] > g)
            elif tag == "H" and y0 <= g < y1:
                seq = sorted(inside)
                total += sum(1 for u, w in zip(seq, seq[1:]) if (u[1] <= g) != (w[1] <= g))
                nxt[(x0, x1, y0, g)] = tuple(p for p in inside if p[1] <= g)
                nxt[(x0, x1, g + 1, y1)] = tuple(p for p in inside if p[1] > g)
            else:
                nxt[(x0, x1, y0, y1)] = inside
        regions = nxt
    return total


def cgb_exact(X, max_lines: int = 7) -> int:
    X = as_pointset(X, "instance")
    lines = mixed_lines(X)
    if len(lines) > max_lines:
        raise SizeGuardError(
            f"{len(lines)} lines give {len(lines)}! orders; use cgb_sampled instead"
        )
    if not lines:
        return 0
    return max(cgb_order(X, s) for s in itertools.permutations(lines))


def cgb_sampled(X, samples: int = 64, seed: int = 0) -> int:
    """Max of cgb_order over seeded random mixed orders (a lower estimate of cGB)."""
    X = as_pointset(X, "instance")
    lines = mixed_lines(X)
    if not lines:
        return 0
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        s = lines[:]
        rng.shuffle(s)
        best = max(best, cgb_order(X, s))
    return best


# ---------------------------------------------------------------------------
# report


@dataclass
class BoundReport:
    wb_weak: int | None = None
    wb_strong: int | None = None
    wb2: int | None = None
    gb: int | None = None
    cgb: int | None = None
    opt: int | None = None
    wb_forbidden: float | None = None
    methods: dict = field(default_factory=dict)
    m: int | None = None  # instance size, used by the funnel check only

    def to_json(self) -> dict:
        keys = ("wb_weak", "wb_strong", "wb2", "gb", "cgb", "opt")
        d = {k: getattr(self, k) for k in keys}
        if self.wb_forbidden is not None:
            d["wb_forbidden"] = self.wb_forbidden
        d["method"] = {k: self.methods.get(k) for k in d if getattr(self, k, None) is not None}
        return d

    def violations(self) -> list[str]:
        """Orderings that must hold among the fields that are present."""
        out = []

        def chk(name, ok):
            if not ok:
                out.append(name)

        if self.wb_strong is not None and self.wb_weak is not None:
            chk("wb_weak <= wb_strong", self.wb_weak <= self.wb_strong)
        if self.opt is not None:
            for k in ("wb_weak", "wb_strong", "gb", "cgb"):
                v = getattr(self, k)
                if v is not None:
                    chk(f"{k} <= 2*opt", v <= 2 * self.opt)
            if self.wb2 is not None and self.m is not None:
                # the funnel bound counts accessed keys, i.e. |X| + |Y|
                chk("wb2 <= m + opt", self.wb2 <= self.m + self.opt)
        if self.gb is not None and self.wb_strong is not None:
            chk("wb_strong <= gb", self.wb_strong <= self.gb)
        if self.gb is not None and self.cgb is not None and self.methods.get("cgb") == "exact":
            chk("cgb <= gb", self.cgb <= self.gb)
        if self.cgb is not None and self.wb_strong is not None and self.methods.get("cgb") == "exact":
            chk("wb_strong <= cgb", self.wb_strong <= self.cgb)
        return out
