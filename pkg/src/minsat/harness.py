"""Experiment rows, the ordering validator, the gap experiment and the self-test suite."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Callable

from . import partition
from .bounds import cgb_exact, cgb_sampled, gb_enumerate, gb_exact, wb2_funnel
from .geometry import PointSet, is_feasible, normalize, reduce
from .instances import (
    all_perms,
    all_semiperms,
    brs,
    gen_hard_parts,
    gen_hard_perm,
    gen_hard_semiperm,
    random_perm,
    random_semiperm,
)
from .limits import check_generated
from .partition import balanced_tree, random_tree, wb_strong_exact, wb_weak
from .solvers import (
    modify_solution,
    double_instance,
    box_solution,
    online_solver,
    opt_bruteforce,
    opt_exact_dp,
    recursive_bst,
    static_solution,
)

CSV_COLUMNS = (
    "family", "ell", "m", "c", "wb_weak_bal", "wb_strong", "wb2", "gb", "cgb_max",
    "opt", "lb_opt", "ub_opt", "alg", "alg_size", "seconds",
)


@dataclass
class ExperimentRow:
    family: str
    ell: int | None = None
    m: int | None = None
    c: int | None = None
    wb_weak_bal: int | None = None
    wb_strong: int | None = None
    wb2: int | None = None
    gb: int | None = None
    cgb_max: int | None = None
    opt: int | None = None
    lb_opt: Fraction | None = None
    ub_opt: int | None = None
    alg: str | None = None
    alg_size: int | None = None
    seconds: float | None = None

    @property
    def gap_interval(self) -> tuple[float, float] | None:
        if not self.wb_strong or self.lb_opt is None or self.ub_opt is None:
            return None
        return float(self.lb_opt) / self.wb_strong, self.ub_opt / self.wb_strong

    def cells(self, timing: bool = False) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "seconds":
                v = f"{v:.3f}" if timing and v is not None else None
            elif isinstance(v, Fraction):
                v = str(v.numerator) if v.denominator == 1 else f"{float(v):.1f}"
            out.append("" if v is None else str(v))
        return out


def validate_row(row: ExperimentRow) -> list[str]:
    """Names of the proven orderings that fail among the row's non-null fields."""
    bad = []

    def need(name: str, *vals, ok: Callable[..., bool]):
        if all(v is not None for v in vals) and not ok(*vals):
            bad.append(name)

    need("wb_weak_bal <= wb_strong", row.wb_weak_bal, row.wb_strong, ok=lambda a, b: a <= b)
    need("wb_strong <= 2*opt", row.wb_strong, row.opt, ok=lambda a, o: a <= 2 * o)
    # the funnel bound counts accessed keys, so it is compared with m + |Y|
    need("wb2 <= m+opt", row.wb2, row.m, row.opt, ok=lambda a, m, o: a <= m + o)
    need("gb <= 2*opt", row.gb, row.opt, ok=lambda a, o: a <= 2 * o)
    need("cgb_max <= 2*opt", row.cgb_max, row.opt, ok=lambda a, o: a <= 2 * o)
    need("cgb_max <= gb", row.cgb_max, row.gb, ok=lambda a, b: a <= b)
    need("wb_strong <= gb", row.wb_strong, row.gb, ok=lambda a, b: a <= b)
    need("lb_opt <= opt", row.lb_opt, row.opt, ok=lambda a, o: a <= o)
    need("opt <= ub_opt", row.opt, row.ub_opt, ok=lambda o, u: o <= u)
    need("lb_opt <= ub_opt", row.lb_opt, row.ub_opt, ok=lambda a, u: a <= u)
    need("wb_strong <= 2*ub_opt", row.wb_strong, row.ub_opt, ok=lambda a, u: a <= 2 * u)
    need("wb2 <= m+ub_opt", row.wb2, row.m, row.ub_opt, ok=lambda a, m, u: a <= m + u)
    need("alg_size == ub_opt", row.alg_size, row.ub_opt, ok=lambda a, u: a == u)
    return bad


def rows_to_csv(rows, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.cells(timing))
    return buf.getvalue()


# ---------------------------------------------------------------------------
# gap experiment


def _row_blocks(X: PointSet, n: int) -> list[PointSet]:
    pts = X.points
    return [PointSet(pts[i : i + n]) for i in range(0, len(pts), n)]


def gap_row(family: str, ell: int, override: bool = False, cgb_samples: int = 16, seed: int = 0) -> ExperimentRow:
    """One row of the separation experiment for X-hat (or its permutation form)."""
    t0 = time.perf_counter()
    n = 2 ** ell
    if family == "hard1d":
        X, parts = gen_hard_semiperm(ell, override, with_parts=True)
    elif family == "hard1d-perm":
        # the interval DP is cubic in the column count, 2048 columns at ell = 3
        check_generated(2 ** n * n, ell <= 2, f"hard1d-perm gap row (ell={ell})", override)
        X = gen_hard_perm(ell, override)
        parts = _row_blocks(X, n)
    else:
        raise ValueError(f"unknown gap family {family!r}")
    X = normalize(X)
    T = balanced_tree(X)
    row = ExperimentRow(family, ell, len(X), X.c)
    row.wb_weak_bal = wb_weak(X, T)
    row.wb_strong = wb_strong_exact(X)
    row.wb2 = wb2_funnel(X)
    if X.is_permutation():
        if len(X) <= 16:
            row.gb = gb_exact(X)
        row.cgb_max = cgb_sampled(X, samples=cgb_samples, seed=seed)
    if X.c <= 7:
        row.opt = len(opt_exact_dp(reduce(X)))
    row.lb_opt = Fraction(sum(wb_strong_exact(normalize(P)) for P in parts), 2)
    Y = recursive_bst(X, T, rho=1, leaf_mode="static")
    if not is_feasible(X, Y):
        raise AssertionError(f"recursive solution infeasible on {family} ell={ell}")
    row.alg = "recursive-static-rho1"
    row.alg_size = row.ub_opt = len(Y)
    row.seconds = time.perf_counter() - t0
    return row


def cmd_gap(families=("hard1d",), ells=(2, 3), override: bool = False, seed: int = 0) -> list[ExperimentRow]:
    return [gap_row(f, ell, override, seed=seed) for f in families for ell in ells]


# ---------------------------------------------------------------------------
# self-test


def _check_node_cost() -> str | None:
    X = normalize(brs(4))
    if partition.node_cost(X, (1, 4), 2) != 3:
        return "node_cost(BRS(4), root) != 3"
    rng = random.Random(7)
    for _ in range(50):
        X = normalize(random_semiperm(rng, rng.randint(2, 8), rng.randint(1, 12)))
        T = balanced_tree(X)
        rec = partition.crossing_record(X, T)
        for v in T.inner_nodes():
            if partition.node_cost(X, v.strip, v.gap) != len(rec[v.strip]):
                return f"node_cost disagrees with the crossing record at {v.strip}"
    return None


def _check_brs() -> str | None:
    W = {1: 1}
    for i in range(2, 7):
        W[i] = (2 ** i - 1) + 2 * W[i - 1]
    for i in range(1, 7):
        X = normalize(brs(2 ** i))
        if wb_weak(X, balanced_tree(X)) != W[i]:
            return f"wb_weak(BRS(2^{i})) != {W[i]}"
    for n in (4, 8, 16, 32, 64):
        if wb_strong_exact(normalize(brs(n))) < n * (n.bit_length() - 1 - 2) + 1:
            return f"wb_strong(BRS({n})) below n(log n - 2) + 1"
    return None


def _oracle_corpus(quick: bool):
    cmax, rmax = (3, 4) if quick else (4, 5)
    for c in range(1, cmax + 1):
        for r in range(1, rmax + 1):
            yield from all_semiperms(c, r)


def _check_oracle(quick: bool) -> str | None:
    for X in _oracle_corpus(quick):
        X = normalize(X)
        a = len(opt_exact_dp(reduce(X)))
        b = len(opt_bruteforce(X))
        if a != b:
            return f"dp {a} != brute force {b} on {list(X.points)}"
    return None


def _check_soundness(quick: bool) -> str | None:
    rng = random.Random(3)
    for X in _oracle_corpus(quick):
        X = normalize(X)
        o = len(opt_exact_dp(reduce(X)))
        if wb_strong_exact(X) > 2 * o or wb_weak(X, random_tree(X, rng)) > 2 * o:
            return f"Wilber bound above 2*opt on {list(X.points)}"
    return None


def _check_orderings(quick: bool) -> str | None:
    for m in range(1, 4 if quick else 5):
        for X in all_perms(m):
            X = normalize(X)
            o = len(opt_exact_dp(reduce(X))) if X.c <= 7 else len(opt_bruteforce(X))
            ws, cg, gb = wb_strong_exact(X), cgb_exact(X), gb_exact(X)
            if not (ws <= cg <= gb <= 2 * o) or wb2_funnel(X) > m + o or gb != gb_enumerate(X):
                return f"bound ordering fails on {list(X.points)}"
    return None


def _check_feasibility(quick: bool) -> str | None:
    rng = random.Random(5)
    for _ in range(20 if quick else 60):
        X = normalize(random_semiperm(rng, rng.randint(1, 16), rng.randint(1, 30)))
        T = balanced_tree(X)
        sols = {"static": static_solution(X, T)}
        for rho in (1, 2):
            for mode in ("static", "dp"):
                sols[f"recursive-{mode}-{rho}"] = recursive_bst(X, T, rho, mode)
        for name, Y in sols.items():
            if not is_feasible(X, Y):
                return f"{name} infeasible on {list(X.points)}"
    return None


def _check_online(quick: bool) -> str | None:
    rng = random.Random(11)
    for _ in range(10 if quick else 40):
        c = rng.randint(1, 16)
        keys = [rng.randint(1, c) for _ in range(rng.randint(1, 40))]
        Xd = double_instance(keys, c)
        T = balanced_tree(c)
        Y = box_solution(Xd, T)
        if Y != recursive_bst(Xd, T, 1, "static"):
            return f"box solution differs from the recursion on keys {keys}"
        Yp = modify_solution(Xd, Y)
        got = {p for step in online_solver(c, keys) for p in step}
        if got != Yp.as_set() or not is_feasible(Xd, Yp):
            return f"online output differs from the modified solution on keys {keys}"
    return None


def selftest_checks(quick: bool = False) -> list[tuple[str, Callable[[], str | None]]]:
    return [
        ("node_cost-consistency", _check_node_cost),
        ("brs-values", _check_brs),
        ("dp-equals-bruteforce", lambda: _check_oracle(quick)),
        ("wilber-soundness", lambda: _check_soundness(quick)),
        ("bound-ordering", lambda: _check_orderings(quick)),
        ("solver-feasibility", lambda: _check_feasibility(quick)),
        ("online-equals-offline", lambda: _check_online(quick)),
    ]


def run_selftest(quick: bool = False, out=None) -> int:
    """Run every check, print one line each, return the number of failures."""
    failures = 0
    for name, fn in selftest_checks(quick):
        t0 = time.perf_counter()
        try:
            msg = fn()
        except Exception as exc:  # a crash counts as a failure of that check
            msg = f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        status = "PASS" if msg is None else "FAIL"
        failures += msg is not None
        line = f"{status} {name} ({dt:.1f}s)" + ("" if msg is None else f": {msg}")
        print(line, file=out)
    return failures
