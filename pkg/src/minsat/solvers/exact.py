"""Exact MinSat solvers: the brute-force oracle and the height-profile DP."""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from ..geometry import Point, PointSet, as_pointset, is_reduced, unsatisfied_pairs
from ..limits import SizeGuardError, limit


def candidate_grid(X: PointSet) -> list[Point]:
    """Active rows x active columns minus X, in (y, x) order."""
    xs = X.as_set()
    return [Point(x, y) for y in X.rows() for x in X.columns() if Point(x, y) not in xs]


def _enumerate(X: PointSet, grid: list[Point]) -> PointSet:
    base = set(X.points)
    for k in range(len(grid) + 1):
        for combo in itertools.combinations(grid, k):
            if not unsatisfied_pairs(base | set(combo)):
                return PointSet(combo, kind="solution")
    raise AssertionError("the full grid is always feasible")


def _search(X: PointSet, grid: list[Point]) -> PointSet:
    """Iterative deepening over hitting choices for the first unsatisfied pair.

    A feasible superset of the partial solution must put a grid point inside
    every unsatisfied rectangle, so branching on those points is complete.
    Siblings tried earlier are excluded from later branches, and a greedy count
    of pairwise disjoint candidate sets gives a lower bound for pruning.
    """
    base = frozenset(X.points)
    rows = {}
    for g in grid:
        rows.setdefault(g.y, []).append(g)

    def inside(p, q, chosen, banned):
        xl, xh = min(p.x, q.x), max(p.x, q.x)
        out = []
        for y in range(min(p.y, q.y), max(p.y, q.y) + 1):
            for g in rows.get(y, ()):
                if xl <= g.x <= xh and g not in chosen and g not in banned:
                    out.append(g)
        return out

    def dfs(chosen: frozenset, banned: frozenset, budget: int):
        pairs = unsatisfied_pairs(base | chosen)
        if not pairs:
            return chosen
        if budget == 0:
            return None
        cands = [inside(p, q, chosen, banned) for p, q in pairs]
        if any(not c for c in cands):
            return None
        order = sorted(range(len(cands)), key=lambda i: len(cands[i]))
        used, lb = set(), 0
        for i in order:
            s = set(cands[i])
            if not s & used:
                used |= s
                lb += 1
        if lb > budget:
            return None
        pick = cands[order[0]]
        banned_now = set(banned)
        for g in pick:
            res = dfs(chosen | {g}, frozenset(banned_now), budget - 1)
            if res is not None:
                return res
            banned_now.add(g)
        return None

    for k in range(len(grid) + 1):
        res = dfs(frozenset(), frozenset(), k)
        if res is not None:
            return PointSet(res, kind="solution")
    raise AssertionError("the full grid is always feasible")


def opt_bruteforce(X, method: str = "search", max_candidates: int | None = None) -> PointSet:
    """Minimum feasible solution over the canonical candidate grid.

    ``enumerate`` tries subsets in increasing size and lexicographic order and
    is capped at 24 candidates; ``search`` is the pruned branching search and
    allows up to 40.
    """
    X = as_pointset(X, "instance")
    grid = candidate_grid(X)
    if method not in ("search", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    default = 24 if method == "enumerate" else 40
    cap = limit("bruteforce_grid", default) if max_candidates is None else max_candidates
    if len(grid) > cap:
        raise SizeGuardError(f"candidate grid of {len(grid)} points exceeds {cap}")
    if not grid:
        return PointSet(kind="solution")
    return _enumerate(X, grid) if method == "enumerate" else _search(X, grid)


# ---------------------------------------------------------------------------
# height-profile DP
#
# A profile assigns each column the dense rank of its topmost point so far
# (0 when the column is still empty).  Exact ranks, ties included, decide every
# conflict between a new row and the top points, which is what the DP needs.


def _densify(vals) -> tuple[int, ...]:
    order = {v: i + 1 for i, v in enumerate(sorted({v for v in vals if v}))}
    return tuple(order.get(v, 0) for v in vals)


def _advance(prof: tuple[int, ...], mask: int) -> tuple[int, ...]:
    top = max(prof) + 1
    return _densify([top if mask >> i & 1 else v for i, v in enumerate(prof)])


def _conflict_free(prof: tuple[int, ...], mask: int) -> bool:
    """Row the columns in ``mask`` above tops given by ``prof``; True if satisfied."""
    n = len(prof)
    new = [i for i in range(n) if mask >> i & 1]
    for c in new:
        for d in range(n):
            if mask >> d & 1 or prof[d] == 0:
                continue
            lo, hi = (c, d) if c < d else (d, c)
            h = prof[d]
            ok = False
            for e in range(lo, hi + 1):
                if e == d:
                    continue
                if prof[e] >= h or (e != c and mask >> e & 1):
                    ok = True
                    break
            if not ok:
                return False
    return True


def _masks(n: int, a: int) -> list[int]:
    return [m for m in range(1 << n) if m >> a & 1]


def opt_exact_dp(X, max_columns: int | None = None, mode: str = "reachable") -> PointSet:
    """Optimal canonical solution of a reduced semi-permutation.

    ``reachable`` pushes every stored profile through every admissible row
    pattern (vectorized over profiles); ``reference`` is the same search in
    plain Python; ``full`` (n <= 4) pulls each entry from all profiles of the
    previous row that pass the four candidate conditions, as a self-check.
    """
    X = as_pointset(X, "instance")
    if not X.is_semipermutation():
        raise ValueError("opt_exact_dp needs a semi-permutation")
    if not is_reduced(X):
        raise ValueError("opt_exact_dp needs reduced input; call reduce() first")
    cols = X.columns()
    n = len(cols)
    cap = limit("dp_columns", 7) if max_columns is None else max_columns
    if n > cap:
        raise SizeGuardError(f"{n} columns exceed the DP limit {cap}")
    if n <= 1:
        return PointSet(kind="solution")
    rank = {x: i for i, x in enumerate(cols)}
    pts = X.points
    if mode == "full":
        if n > 4:
            raise SizeGuardError("full-enumeration mode supports at most 4 columns")
        layers = _dp_full(n, [rank[p.x] for p in pts])
    elif mode == "reachable":
        return _dp_numpy(n, [rank[p.x] for p in pts], cols, [p.y for p in pts])
    elif mode == "reference":
        layers = _dp_push(n, [rank[p.x] for p in pts])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    last = layers[-1]
    best = min(last, key=lambda s: (last[s][0], s))
    out = []
    state = best
    for t in range(len(pts) - 1, -1, -1):
        cost, prev, mask = layers[t + 1][state]
        y = pts[t].y
        for i in range(n):
            if mask >> i & 1 and i != rank[pts[t].x]:
                out.append((cols[i], y))
        state = prev
    return PointSet(out, kind="solution")


def _dp_push(n: int, seq: list[int]):
    start = (0,) * n
    layers = [{start: (0, None, 0)}]
    for a in seq:
        cur = layers[-1]
        nxt: dict = {}
        masks = _masks(n, a)
        for prof in sorted(cur):
            base = cur[prof][0]
            for m in masks:
                if not _conflict_free(prof, m):
                    continue
                new = _advance(prof, m)
                cost = base + bin(m).count("1") - 1
                old = nxt.get(new)
                if old is None or cost < old[0]:
                    nxt[new] = (cost, prof, m)
        layers.append(nxt)
    return layers


def _dp_numpy(n: int, seq: list[int], cols: list[int], ys: list[int]) -> PointSet:
    """Push DP with all profiles of a row held in one integer array.

    Profiles are encoded base n + 2, most significant column first, so integer
    order is lexicographic order of the tuples; ties go to the smallest
    (cost, profile) just like the reference search.
    """
    base = n + 2
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    pairs = [(c, d) for c in range(n) for d in range(n) if c != d]
    between = [sum(1 << e for e in range(min(c, d) + 1, max(c, d))) for c, d in pairs]
    prof = np.zeros((1, n), dtype=np.int64)
    cost = np.zeros(1, dtype=np.int64)
    back = []  # per row: (prev index, mask) for each new state
    all_masks = np.arange(1 << n)
    for a in seq:
        tops = prof.max(axis=1)
        # static[k]: pair (c, d) is satisfied by tops alone, or d has no top
        static = np.empty((len(pairs), len(prof)), dtype=bool)
        for k, (c, d) in enumerate(pairs):
            lo, hi = min(c, d), max(c, d)
            rng_cols = [e for e in range(lo, hi + 1) if e != d]
            static[k] = (prof[:, d] == 0) | (prof[:, rng_cols] >= prof[:, [d]]).any(axis=1)
        new_codes, new_cost, new_prev, new_mask = [], [], [], []
        for m in all_masks[(all_masks >> a) & 1 == 1]:
            m = int(m)
            ok = np.ones(len(prof), dtype=bool)
            for k, (c, d) in enumerate(pairs):
                if m >> c & 1 and not m >> d & 1 and not m & between[k]:
                    ok &= static[k]
            idx = np.nonzero(ok)[0]
            if not len(idx):
                continue
            P = prof[idx].copy()
            sel = np.array([(m >> i) & 1 for i in range(n)], dtype=bool)
            P[:, sel] = (tops[idx] + 1)[:, None]
            # densify: rank each nonzero value among the row's distinct values
            present = np.zeros((len(P), n + 2), dtype=np.int64)
            np.put_along_axis(present, P, 1, axis=1)
            present[:, 0] = 0
            ranks = np.cumsum(present, axis=1)
            P = np.where(P > 0, np.take_along_axis(ranks, P, axis=1), 0)
            new_codes.append(P @ weights)
            new_cost.append(cost[idx] + bin(m).count("1") - 1)
            new_prev.append(idx)
            new_mask.append(np.full(len(idx), m, dtype=np.int64))
        codes = np.concatenate(new_codes)
        cst = np.concatenate(new_cost)
        prev = np.concatenate(new_prev)
        msk = np.concatenate(new_mask)
        prev_codes = (prof @ weights)[prev]
        order = np.lexsort((msk, prev_codes, cst, codes))
        codes, cst, prev, msk = codes[order], cst[order], prev[order], msk[order]
        first = np.ones(len(codes), dtype=bool)
        first[1:] = codes[1:] != codes[:-1]
        codes, cost, prev, msk = codes[first], cst[first], prev[first], msk[first]
        prof = (codes[:, None] // weights) % base
        back.append((prev, msk))
    best = int(np.lexsort(((prof @ weights), cost))[0])
    out = []
    for t in range(len(seq) - 1, -1, -1):
        prev, msk = back[t]
        m = int(msk[best])
        for i in range(n):
            if m >> i & 1 and i != seq[t]:
                out.append((cols[i], ys[t]))
        best = int(prev[best])
    return PointSet(out, kind="solution")


def _all_profiles(n: int) -> Iterable[tuple[int, ...]]:
    for vals in itertools.product(range(n + 1), repeat=n):
        if _densify(vals) == vals:
            yield vals


def _dp_full(n: int, seq: list[int]):
    profiles = list(_all_profiles(n))
    start = (0,) * n
    layers = [{start: (0, None, 0)}]
    for t, a in enumerate(seq, start=1):
        prev_layer = layers[-1]
        nxt = {}
        for pi in profiles:
            M = max(pi)
            if M == 0 or M > t or pi[a] != M:
                continue  # not legal for t
            C1 = [i for i in range(n) if pi[i] == M]
            mask = sum(1 << i for i in C1)
            best = None
            for pp in sorted(prev_layer):
                # (i) legality of pp for t-1 holds for every stored entry
                # (ii) no conflict between the new row and the top points
                if not _conflict_free(pp, mask):
                    continue
                # (iii) columns with a finite value before stay finite or join C1
                if any(pp[i] and not pi[i] and i not in C1 for i in range(n)):
                    continue
                # (iv) outside C1 the relative order (ties included) is unchanged
                rest = [i for i in range(n) if i not in C1]
                if _densify([pp[i] for i in rest]) != _densify([pi[i] for i in rest]):
                    continue
                if any(pi[i] == 0 and pp[i] != 0 for i in rest):
                    continue
                cost = prev_layer[pp][0] + len(C1) - 1
                if best is None or cost < best[0]:
                    best = (cost, pp, mask)
            if best is not None:
                nxt[pi] = best
        layers.append(nxt)
    return layers


def opt_size(X) -> int:
    """opt(X) via the DP on the reduced instance (reduction keeps opt unchanged)."""
    from ..geometry import reduce

    return len(opt_exact_dp(reduce(as_pointset(X, "instance"))))
