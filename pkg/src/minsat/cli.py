"""Command-line driver: gen | verify | bound | solve | gap | selftest.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 size-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import instances as gen
from . import io
from .bounds import BoundReport, cgb_exact, cgb_order, cgb_sampled, gb_exact, wb2_funnel
from .geometry import PointSet, check_instance, is_feasible, normalize, reduce, unsatisfied_pairs
from .harness import cmd_gap, rows_to_csv, run_selftest, validate_row
from .limits import SizeGuardError
from .partition import balanced_tree, random_tree, tree_from_order, wb_strong_exact, wb_weak
from .solvers import double_instance, online_solver, opt_bruteforce, opt_exact_dp, recursive_bst, static_solution
from .solvers.recursive import RecursionTrace

FAMILIES = (
    "monotone", "brs", "esbrs", "hard1d", "hard1d-perm",
    "esbrs2d", "shift2d", "hard2d", "hard2d-perm", "iacono", "random", "random-perm",
)


class UsageError(Exception):
    pass


def _generate(a) -> PointSet:
    f = a.family
    need = lambda name: getattr(a, name) if getattr(a, name) is not None else _missing(f, name)
    if f == "monotone":
        return gen.gen_monotone(need("m"))
    if f == "brs":
        return gen.brs(need("n"))
    if f == "esbrs":
        return gen.gen_esbrs(need("ell"))
    if f == "hard1d":
        return gen.gen_hard_semiperm(need("ell"), a.override)
    if f == "hard1d-perm":
        return gen.gen_hard_perm(need("ell"), a.override)
    if f == "esbrs2d":
        return gen.gen_esbrs2d(need("ell"))
    if f == "shift2d":
        return gen.gen_shift2d(need("ell"), a.s or 0, a.s2 or 0)
    if f == "hard2d":
        return gen.gen_hard2d_semiperm(need("ell"), a.override)
    if f == "hard2d-perm":
        return gen.gen_hard2d_perm(need("ell"), a.override)
    if f == "iacono":
        return gen.gen_iacono(need("k"))
    rng = random.Random(a.seed)
    if f == "random":
        return gen.random_semiperm(rng, need("c"), need("m"))
    if f == "random-perm":
        return gen.random_perm(rng, need("m"))
    raise UsageError(f"unknown family {f!r}")


def _missing(family: str, name: str):
    raise UsageError(f"family {family} needs --{name}")


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_gen(a) -> int:
    X = _generate(a)
    if a.normalize:
        X = PointSet(normalize(X).points, kind=X.kind, meta=X.meta)
    fmt = a.format or (io.guess_format(a.out) if a.out not in (None, "-") else "json")
    _emit(io.dumps(X, fmt, header=a.header), a.out)
    return 0


def _load_instance(path: str, normalize_input: bool) -> PointSet:
    X = io.read_pointset(path, kind="instance")
    if normalize_input:
        return PointSet(normalize(X).points, kind="instance", meta=X.meta)
    if any(p.x % 2 for p in X):
        raise UsageError("instance has odd columns; pass --normalize (or generate with --normalize)")
    return X


def cmd_verify(a) -> int:
    X = io.read_pointset(a.instance, kind="instance")
    Y = io.read_pointset(a.solution, kind="solution")
    if X.as_set() & Y.as_set():
        print("solution overlaps the instance", file=sys.stderr)
        return 1
    pairs = unsatisfied_pairs(X.union(Y))
    if not pairs:
        print(f"feasible: |X|={len(X)} |Y|={len(Y)}")
        return 0
    print(f"infeasible: {len(pairs)} unsatisfied pair(s)")
    for p, q in pairs[: a.limit]:
        print(f"  ({p.x},{p.y}) ({q.x},{q.y})")
    return 1


def _parse_order(text: str | None):
    if text is None:
        return None
    return json.loads(text)


def cmd_bound(a) -> int:
    # every bound is invariant under the rank map
    X = _load_instance(a.instance, True)
    check_instance(X)
    which = {w.strip() for w in a.which.split(",")}
    known = {"wb-weak", "wb-strong", "wb2", "gb", "cgb", "opt", "all"}
    if which - known:
        raise UsageError(f"unknown bound(s): {sorted(which - known)}")
    if "all" in which:
        which = known - {"all"}
    rep = BoundReport(m=len(X))
    if "wb-weak" in which:
        order = _parse_order(a.order)
        if order is not None:
            T, how = tree_from_order(X, order), "order"
        elif a.tree == "random":
            T, how = random_tree(X, random.Random(a.seed)), f"random-tree(seed={a.seed})"
        else:
            T, how = balanced_tree(X), "balanced"
        rep.wb_weak, rep.methods["wb_weak"] = wb_weak(X, T), how
    if "wb-strong" in which:
        rep.wb_strong, rep.methods["wb_strong"] = wb_strong_exact(X), "interval-dp"
    if "wb2" in which:
        rep.wb2, rep.methods["wb2"] = wb2_funnel(X), "funnel-sweep"
    perm = X.is_permutation()
    if "gb" in which and perm:
        rep.gb, rep.methods["gb"] = gb_exact(X), "region-dp"
    if "cgb" in which and perm:
        order = _parse_order(a.mixed_order)
        if order is not None:
            rep.cgb, rep.methods["cgb"] = cgb_order(X, order), "order"
        elif (X.c - 1) + (X.r - 1) <= 7:
            rep.cgb, rep.methods["cgb"] = cgb_exact(X), "exact"
        else:
            rep.cgb = cgb_sampled(X, samples=a.samples, seed=a.seed)
            rep.methods["cgb"] = f"sampled(n={a.samples},seed={a.seed})"
    if "opt" in which:
        R = reduce(X)
        if R.c <= 8:
            rep.opt, rep.methods["opt"] = len(opt_exact_dp(R, max_columns=8)), "dp"
        else:
            rep.opt, rep.methods["opt"] = len(opt_bruteforce(X)), "bruteforce"
    _emit(json.dumps(rep.to_json(), sort_keys=True) + "\n", a.out)
    bad = rep.violations()
    if bad:
        print("ordering violations: " + "; ".join(bad), file=sys.stderr)
        return 1
    return 0


def cmd_solve(a) -> int:
    X = _load_instance(a.instance, a.normalize)
    check_instance(X)
    T = random_tree(X, random.Random(a.seed)) if a.tree == "random" else balanced_tree(X)
    stats = {"algo": a.algo, "m": len(X), "c": X.c}
    t0 = time.perf_counter()
    if a.algo == "brute":
        Y = opt_bruteforce(X)
    elif a.algo == "dp":
        Y = opt_exact_dp(reduce(X), max_columns=a.max_columns)
    elif a.algo == "static":
        Y = static_solution(X, T)
    elif a.algo == "recursive":
        tr = RecursionTrace()
        Y = recursive_bst(X, T, a.rho, a.leaf, trace=tr)
        stats.update(rho=a.rho, leaf=a.leaf, depth=tr.depth, trace=tr.to_json())
    elif a.algo == "online":
        pts = X.points
        if any(p.x % 2 for p in pts):
            raise UsageError("online solver needs even columns")
        keys = [p.x // 2 for p in pts]
        c = max(keys)
        steps = online_solver(c, keys)
        Y = PointSet([q for s in steps for q in s], kind="solution")
        X = double_instance(keys, c)
        stats["note"] = "solution is for the doubled instance"
    else:
        raise UsageError(f"unknown algorithm {a.algo!r}")
    stats["seconds"] = round(time.perf_counter() - t0, 6) if a.timing else None
    stats["size"] = len(Y)
    stats["feasible"] = is_feasible(X, Y)
    if a.instance_out:
        io.write_pointset(X, a.instance_out)
    if a.out:
        io.write_pointset(Y, a.out)
    else:
        sys.stdout.write(io.dumps(Y))
    print(json.dumps(stats, sort_keys=True), file=sys.stderr if not a.out else sys.stdout)
    return 0 if stats["feasible"] else 1


def cmd_gap_cli(a) -> int:
    try:
        ells = [int(v) for v in a.ell.split(",")] if "," in a.ell else _range(a.ell)
    except ValueError as exc:
        raise UsageError(f"bad --ell {a.ell!r}") from exc
    fams = tuple(a.family.split(","))
    rows = cmd_gap(fams, ells, override=a.override, seed=a.seed)
    _emit(rows_to_csv(rows, timing=a.timing), a.out)
    status = 0
    for r in rows:
        bad = validate_row(r)
        gi = r.gap_interval
        span = f"[{gi[0]:.3f}, {gi[1]:.3f}]" if gi else "n/a"
        print(f"{r.family} ell={r.ell}: gap interval {span}" + (f"; violations {bad}" if bad else ""), file=sys.stderr)
        status |= bool(bad)
    return status


def _range(text: str) -> list[int]:
    if "-" in text:
        lo, hi = text.split("-")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def cmd_selftest(a) -> int:
    return 1 if run_selftest(quick=a.quick) else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minsat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write an instance")
    g.add_argument("family", choices=FAMILIES)
    for name in ("m", "n", "ell", "k", "c", "s", "s2"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--override", action="store_true", help="lift the generator size guard")
    g.add_argument("--normalize", action="store_true", help="rank-map into doubled coordinates")
    g.add_argument("--format", choices=("json", "tsv"))
    g.add_argument("--header", action="store_true", help="TSV: include a comment header")
    g.add_argument("--out", "-o")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check that instance plus solution is satisfied")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--limit", type=int, default=20, help="pairs to list")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bound", help="compute lower bounds as BoundReport JSON")
    b.add_argument("instance")
    b.add_argument("--which", default="wb-weak,wb-strong,wb2")
    b.add_argument("--order", help="cut order for wb-weak as a JSON list of gaps")
    b.add_argument("--mixed-order", help='cgb order as JSON, e.g. [["V",1],["H",1]]')
    b.add_argument("--tree", choices=("balanced", "random"), default="balanced")
    b.add_argument("--samples", type=int, default=64)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", "-o")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("solve", help="run a solver and write the solution")
    s.add_argument("instance")
    s.add_argument("--algo", choices=("brute", "dp", "static", "recursive", "online"), default="recursive")
    s.add_argument("--rho", type=int, default=1)
    s.add_argument("--leaf", choices=("static", "dp"), default="static")
    s.add_argument("--tree", choices=("balanced", "random"), default="balanced")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-columns", type=int, help="raise the DP column limit (default 7)")
    s.add_argument("--timing", action="store_true")
    s.add_argument("--normalize", action="store_true", help="rank-map the instance first")
    s.add_argument("--instance-out", help="write the (normalized) instance the solution refers to")
    s.add_argument("--out", "-o")
    s.set_defaults(func=cmd_solve)

    q = sub.add_parser("gap", help="desk-scale separation experiment as CSV")
    q.add_argument("--family", default="hard1d", help="hard1d, hard1d-perm, or both comma-separated")
    q.add_argument("--ell", default="2-3", help="range a-b or list a,b")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--override", action="store_true")
    q.add_argument("--timing", action="store_true", help="fill the seconds column")
    q.add_argument("--out", "-o")
    q.set_defaults(func=cmd_gap_cli)

    t = sub.add_parser("selftest", help="oracle sweep and property checks")
    t.add_argument("--quick", action="store_true")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return a.func(a)
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
