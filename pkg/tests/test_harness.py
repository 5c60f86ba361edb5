from fractions import Fraction

import pytest

from minsat.harness import CSV_COLUMNS, ExperimentRow, cmd_gap, gap_row, rows_to_csv, validate_row
from minsat.limits import SizeGuardError


def test_columns_match_row_fields():
    row = ExperimentRow("x")
    assert len(row.cells()) == len(CSV_COLUMNS)


def test_csv_seconds_blank_without_timing():
    row = ExperimentRow("x", ell=1, seconds=1.25, lb_opt=Fraction(7, 2))
    assert rows_to_csv([row]).splitlines()[1].split(",")[-1] == ""
    assert rows_to_csv([row], timing=True).splitlines()[1].endswith("1.250")
    assert "3.5" in rows_to_csv([row])


def test_validator():
    good = ExperimentRow("x", m=4, wb_weak_bal=3, wb_strong=5, wb2=7, opt=4, lb_opt=Fraction(2), ub_opt=16, alg_size=16)
    assert validate_row(good) == []
    bad = ExperimentRow("x", m=4, wb_weak_bal=6, wb_strong=5, wb2=9, opt=2)
    assert set(validate_row(bad)) == {"wb_weak_bal <= wb_strong", "wb_strong <= 2*opt", "wb2 <= m+opt"}
    assert validate_row(ExperimentRow("x", opt=3, ub_opt=2)) == ["opt <= ub_opt"]


def test_gap_row_ell2():
    r = gap_row("hard1d", 2)
    assert (r.m, r.c) == (64, 16)
    assert (r.wb_weak_bal, r.wb_strong, r.wb2) == (131, 136, 139)
    assert r.lb_opt == 40 and r.ub_opt == 316 == r.alg_size
    assert r.gb is None and validate_row(r) == []


def test_gap_perm_row():
    r = gap_row("hard1d-perm", 2)
    assert r.m == 64 and r.cgb_max is not None
    assert validate_row(r) == []


def test_gap_is_deterministic():
    a = rows_to_csv(cmd_gap(("hard1d",), (2,)))
    assert a == rows_to_csv(cmd_gap(("hard1d",), (2,)))


def test_gap_guard_and_family():
    with pytest.raises(SizeGuardError):
        gap_row("hard1d", 4)
    with pytest.raises(ValueError):
        gap_row("nope", 2)
