"""Instance generators.  All outputs use raw coordinates (columns and rows from 1)."""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .geometry import PointSet, cyclic_shift, cyclic_shift_rows
from .limits import check_generated


@dataclass(frozen=True)
class GenSpec:
    family: str
    ell: int | None = None
    n: int | None = None
    N: int | None = None
    Nstar: int | None = None
    s: int | None = None
    s2: int | None = None
    extra: dict = field(default_factory=dict)

    def header(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None and k != "extra"}
        d.update(self.extra)
        return d


def _tag(points, spec: GenSpec, kind: str = "instance") -> PointSet:
    return PointSet(points, kind=kind, meta={"gen": spec.header()})


def _is_pow2(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def gen_monotone(m: int) -> PointSet:
    if m < 1:
        raise ValueError("m >= 1")
    return _tag([(i, i) for i in range(1, m + 1)], GenSpec("monotone", extra={"m": m}))


def _brs(i: int, rows: Sequence[int], cols: Sequence[int]) -> list[tuple[int, int]]:
    if i == 0:
        return [(cols[0], rows[0])]
    half = len(cols) // 2
    return _brs(i - 1, rows[0::2], cols[:half]) + _brs(i - 1, rows[1::2], cols[half:])


def gen_brs(i: int, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> PointSet:
    """Bit-reversal sequence on 2^i rows and 2^i columns (defaults 1..2^i)."""
    if i < 0:
        raise ValueError("i >= 0")
    n = 2 ** i
    rows = sorted(rows) if rows is not None else list(range(1, n + 1))
    cols = sorted(cols) if cols is not None else list(range(1, n + 1))
    if len(rows) != n or len(cols) != n:
        raise ValueError(f"BRS({i}) needs exactly {n} rows and {n} columns")
    return _tag(_brs(i, rows, cols), GenSpec("brs", ell=i, n=n))


def brs(n: int) -> PointSet:
    """BRS with n points on the unit grid; n must be a power of two."""
    if not _is_pow2(n):
        raise ValueError("n must be a power of two")
    return gen_brs(n.bit_length() - 1)


def gen_esbrs(ell: int, rows: Sequence[int] | None = None) -> PointSet:
    """BRS on the exponentially spaced columns {1, 2, 4, ..., N/2}, N = 2^n, n = 2^ell."""
    n = 2 ** ell
    N = 2 ** n
    rows = list(rows) if rows is not None else list(range(1, n + 1))
    cols = [2 ** j for j in range(n)]
    X = gen_brs(ell, rows, cols)
    return _tag(X.points, GenSpec("esbrs", ell=ell, n=n, N=N))


def _hard_params(ell: int) -> tuple[int, int, int]:
    n = 2 ** ell
    N = 2 ** n
    return n, N, N * n


def gen_hard_parts(ell: int, override: bool = False) -> list[PointSet]:
    """The shifted blocks X^s, s = 0..N-1, stacked bottom to top."""
    n, N, Nstar = _hard_params(ell)
    check_generated(Nstar, ell <= 3, f"hard1d(ell={ell})", override)
    parts = []
    for s in range(N):
        rows = range(s * n + 1, (s + 1) * n + 1)
        Xs = cyclic_shift(gen_esbrs(ell, rows), s, N)
        parts.append(_tag(Xs.points, GenSpec("hard1d-part", ell=ell, n=n, N=N, s=s)))
    return parts


def gen_hard_semiperm(ell: int, override: bool = False, with_parts: bool = False):
    """Union of the N cyclically shifted ES-BRS blocks; N log N points on N columns."""
    n, N, Nstar = _hard_params(ell)
    parts = gen_hard_parts(ell, override)
    X = _tag([p for P in parts for p in P], GenSpec("hard1d", ell=ell, n=n, N=N, Nstar=Nstar))
    return (X, parts) if with_parts else X


def expand_columns(X: PointSet) -> PointSet:
    """Spread each column's points over fresh consecutive columns as an increasing run."""
    by_col: dict[int, list] = {}
    for p in X:
        by_col.setdefault(p.x, []).append(p)
    width = max(len(v) for v in by_col.values())
    out = []
    for x, pts in by_col.items():
        pts.sort(key=lambda p: p.y)
        for i, p in enumerate(pts):
            out.append(((x - 1) * width + i + 1, p.y))
    return PointSet(out, kind=X.kind)


def expand_rows(X: PointSet) -> PointSet:
    return PointSet([(p.y, p.x) for p in expand_columns(PointSet([(p.y, p.x) for p in X], kind="union"))], kind=X.kind)


def gen_hard_perm(ell: int, override: bool = False) -> PointSet:
    """Permutation form of the hard instance: every column becomes a block of log N columns."""
    n, N, Nstar = _hard_params(ell)
    X = expand_columns(gen_hard_semiperm(ell, override))
    return _tag(X.points, GenSpec("hard1d-perm", ell=ell, n=n, N=N, Nstar=Nstar))


def column_blocks(ell: int) -> list[tuple[int, int]]:
    """Raw column ranges of the blocks in gen_hard_perm, one per original column."""
    n, N, _ = _hard_params(ell)
    return [((x - 1) * n + 1, x * n) for x in range(1, N + 1)]


# two-dimensional family


def gen_esbrs2d(ell: int) -> PointSet:
    """BRS with both columns and rows on {2^j : 1 <= j <= n}."""
    n = 2 ** ell
    N = 2 ** n
    grid = [2 ** j for j in range(1, n + 1)]
    X = gen_brs(ell, grid, grid)
    return _tag(X.points, GenSpec("esbrs2d", ell=ell, n=n, N=N))


def gen_shift2d(ell: int, s: int, s2: int) -> PointSet:
    """Horizontal cyclic shift by s, then vertical cyclic shift by s2."""
    n = 2 ** ell
    N = 2 ** n
    X = cyclic_shift_rows(cyclic_shift(gen_esbrs2d(ell), s, N), s2, N)
    return _tag(X.points, GenSpec("shift2d", ell=ell, n=n, N=N, s=s, s2=s2))


def _hard2d_params(ell: int) -> tuple[int, int, int]:
    n = 2 ** ell
    N = 2 ** n
    return n, N, N * N * n


def gen_hard2d_semiperm(ell: int, override: bool = False) -> PointSet:
    """Plant X^{b-1, a-1} in the box at super-column a and super-row b.

    Rows and columns each carry log N points, so the result is a general point
    set (kind "union") rather than a semi-permutation.
    """
    n, N, Nstar = _hard2d_params(ell)
    check_generated(Nstar, ell <= 2, f"hard2d(ell={ell})", override)
    out = []
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            for p in gen_shift2d(ell, b - 1, a - 1):
                out.append(((a - 1) * N + p.x, (b - 1) * N + p.y))
    return _tag(out, GenSpec("hard2d", ell=ell, n=n, N=N, Nstar=Nstar), kind="union")


def gen_hard2d_perm(ell: int, override: bool = False) -> PointSet:
    n, N, Nstar = _hard2d_params(ell)
    X = expand_rows(expand_columns(gen_hard2d_semiperm(ell, override)))
    return _tag(X.points, GenSpec("hard2d-perm", ell=ell, n=n, N=N, Nstar=Nstar))


# Iacono's construction


def iacono_columns(k: int) -> list[int]:
    """Leftmost column of each sibling strip along the leftmost root-leaf path.

    The balanced tree on n = 2^k columns has k + 1 nodes on that path and so k
    sibling strips; the sibling at depth j spans columns n/2^j + 1 .. n/2^(j-1).
    """
    n = 2 ** k
    return sorted(n // 2 ** j + 1 for j in range(1, k + 1))


def gen_iacono(k: int) -> PointSet:
    """BRS on k points planted on one column per sibling strip of the leftmost path."""
    if not _is_pow2(k):
        raise ValueError("k must be a power of two")
    cols = iacono_columns(k)
    ell = k.bit_length() - 1
    X = gen_brs(ell, list(range(1, k + 1)), cols)
    return _tag(X.points, GenSpec("iacono", ell=ell, n=2 ** k, extra={"k": k, "active_columns": len(cols)}))


# random plumbing


def random_semiperm(rng: random.Random, c: int, m: int) -> PointSet:
    return PointSet([(rng.randint(1, c), y) for y in range(1, m + 1)])


def random_perm(rng: random.Random, m: int) -> PointSet:
    xs = list(range(1, m + 1))
    rng.shuffle(xs)
    return PointSet([(x, y) for y, x in enumerate(xs, start=1)])


def all_semiperms(c: int, r: int):
    """Every semi-permutation on r rows using exactly columns 1..c."""
    import itertools

    for xs in itertools.product(range(1, c + 1), repeat=r):
        if len(set(xs)) == c:
            yield PointSet([(x, y) for y, x in enumerate(xs, start=1)])


def all_perms(m: int):
    import itertools

    for xs in itertools.permutations(range(1, m + 1)):
        yield PointSet([(x, y) for y, x in enumerate(xs, start=1)])


def as_doubled(X: PointSet) -> PointSet:
    """Raw columns k -> doubled x = 2k, rows unchanged (keeps inactive columns)."""
    return PointSet([(2 * p.x, p.y) for p in X], kind=X.kind, meta=X.meta)


def log2_int(n: int) -> int:
    return int(round(math.log2(n)))
